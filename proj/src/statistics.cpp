#include "losstomo/statistics.hpp"

#include <cmath>
#include <limits>
#include <ranges>
#include <string_view>
#include <utility>

namespace losstomo {

namespace {

void check_bits(std::string_view bits, std::size_t width, int tree_id) {
  if (bits.size() != width)
    throw DataError("tree " + std::to_string(tree_id) + ": pattern '" + std::string(bits) +
                    "' has length " + std::to_string(bits.size()) + ", expected " +
                    std::to_string(width));
  for (char c : bits)
    if (c != '0' && c != '1')
      throw DataError("tree " + std::to_string(tree_id) + ": pattern '" + std::string(bits) +
                      "' contains a character other than 0/1");
}

std::vector<LinkId> receiver_ids(const MulticastTree& tree, const GeneralNetwork& net) {
  std::vector<LinkId> ids;
  for (LinkIndex i : tree.receivers()) ids.push_back(net.link_id(i));
  return ids;
}

// n_{k,i}(1) for every link of one tree: Y_i = max over receivers below i,
// computed leaf-to-root per distinct pattern and weighted by its count.
std::vector<std::uint64_t> confirmed_counts(const TreePatterns& tp, const MulticastTree& tree,
                                            const GeneralNetwork& net) {
  const std::size_t m = net.size();
  std::vector<std::pair<const std::string*, std::uint64_t>> entries;
  entries.reserve(tp.counts.size());
  for (const auto& [bits, count] : tp.counts) entries.emplace_back(&bits, count);

  std::vector<std::uint64_t> n1(m, 0);
  const auto order = tree.order();
  const long n_entries = static_cast<long>(entries.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(m, 0);
    std::vector<unsigned char> y(m, 0);
#pragma omp for schedule(static) nowait
    for (long e = 0; e < n_entries; ++e) {
      const std::string& bits = *entries[static_cast<std::size_t>(e)].first;
      const std::uint64_t count = entries[static_cast<std::size_t>(e)].second;
      for (LinkIndex i : order | std::views::reverse) {
        if (net.is_leaf(i)) {
          y[i] = bits[static_cast<std::size_t>(tree.receiver_bit(i))] == '1';
        } else {
          unsigned char any = 0;
          for (LinkIndex c : net.children(i)) any |= y[c];
          y[i] = any;
        }
        if (y[i]) local[i] += count;
      }
    }
    // Integer sums are exact, so the merge order does not matter.
#pragma omp critical
    for (std::size_t i = 0; i < m; ++i) n1[i] += local[i];
  }
  return n1;
}

}  // namespace

PatternTable collapse_patterns(const std::vector<std::vector<std::string>>& records,
                               const GeneralNetwork& net) {
  if (records.size() != net.trees().size())
    throw DataError("expected records for " + std::to_string(net.trees().size()) + " trees");
  PatternTable table;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& tree = net.trees()[k];
    TreePatterns tp;
    tp.tree_id = tree.id();
    tp.receivers = receiver_ids(tree, net);
    for (const auto& bits : records[k]) {
      check_bits(bits, tp.receivers.size(), tree.id());
      ++tp.counts[bits];
      ++tp.probes;
    }
    table.trees.push_back(std::move(tp));
  }
  return table;
}

void validate_patterns(const PatternTable& patterns, const GeneralNetwork& net) {
  if (patterns.trees.size() != net.trees().size())
    throw DataError("data covers " + std::to_string(patterns.trees.size()) +
                    " trees, topology has " + std::to_string(net.trees().size()));
  for (std::size_t k = 0; k < patterns.trees.size(); ++k) {
    const auto& tp = patterns.trees[k];
    const auto& tree = net.trees()[k];
    if (tp.tree_id != tree.id())
      throw DataError("data tree " + std::to_string(tp.tree_id) + " does not match topology tree " +
                      std::to_string(tree.id()));
    if (tp.receivers != receiver_ids(tree, net))
      throw DataError("tree " + std::to_string(tp.tree_id) +
                      ": receiver list differs from the topology's leaf links");
    std::uint64_t sum = 0;
    for (const auto& [bits, count] : tp.counts) {
      check_bits(bits, tp.receivers.size(), tp.tree_id);
      sum += count;
    }
    if (sum != tp.probes)
      throw DataError("tree " + std::to_string(tp.tree_id) + ": pattern counts sum to " +
                      std::to_string(sum) + ", expected " + std::to_string(tp.probes));
  }
}

double InternalView::ratio(LinkIndex i) const {
  if (undefined(i)) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(n1[i]) / static_cast<double>(total(i));
}

std::vector<double> InternalView::ratios() const {
  std::vector<double> r(n1.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = ratio(i);
  return r;
}

RegularityReport regularity_report(const InternalView& view, const GeneralNetwork& net) {
  RegularityReport report;
  report.links.resize(net.size());
  for (LinkIndex i = 0; i < net.size(); ++i) {
    auto& f = report.links[i];
    f.no_information = view.undefined(i);
    f.n1_zero = view.n1[i] == 0;
    f.n0_zero = view.n0[i] == 0;
    if (!net.is_source(i)) {
      std::uint64_t from_parents = 0, from_brothers = 0;
      for (LinkIndex j : net.parents(i)) from_parents += view.n1[j];
      for (LinkIndex j : net.brothers(i)) from_brothers += view.n1[j];
      f.brother_sum_violation = !(from_parents < from_brothers);
    }
    if (!f.ok()) report.all_ok = false;
  }
  return report;
}

SufficientStats internal_views(const PatternTable& patterns, const GeneralNetwork& net) {
  validate_patterns(patterns, net);
  const std::size_t m = net.size();
  const std::size_t K = net.trees().size();
  SufficientStats out;
  InternalView& v = out.view;
  v.tree_probes.resize(K);
  v.tree_n1.assign(K, std::vector<std::uint64_t>(m, 0));
  v.tree_n0.assign(K, std::vector<std::uint64_t>(m, 0));
  v.n1.assign(m, 0);
  v.n0.assign(m, 0);

  for (std::size_t k = 0; k < K; ++k) {
    const auto& tree = net.trees()[k];
    const auto& tp = patterns.trees[k];
    v.tree_probes[k] = tp.probes;
    v.tree_n1[k] = confirmed_counts(tp, tree, net);
    for (LinkIndex i : tree.links()) {
      auto parent = tree.parent(i);
      std::uint64_t above = parent ? v.tree_n1[k][*parent] : tp.probes;
      v.tree_n0[k][i] = above - v.tree_n1[k][i];
      v.n1[i] += v.tree_n1[k][i];
      v.n0[i] += v.tree_n0[k][i];
    }
  }
  out.regularity = regularity_report(v, net);
  return out;
}

PatternTable tree_patterns(const PatternTable& patterns, std::size_t k) {
  PatternTable out;
  out.name = patterns.name;
  out.trees.push_back(patterns.trees.at(k));
  return out;
}

}  // namespace losstomo
