#include "losstomo/simulator.hpp"

#include <algorithm>
#include <map>
#include <omp.h>
#include <stdexcept>
#include <unordered_map>

#include "losstomo/constants.hpp"
#include "losstomo/rng.hpp"

namespace losstomo {

std::vector<std::uint64_t> split_probes(std::uint64_t total, const GeneralNetwork& net) {
  const std::size_t K = net.trees().size();
  if (total < K) throw std::invalid_argument("need at least one probe per tree");
  std::vector<std::uint64_t> out(K, total / K);
  out.front() += total % K;  // trees are stored by ascending id
  return out;
}

LossRates sample_theta(double a, double b, const GeneralNetwork& net, std::mt19937_64& rng) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("Beta parameters must be positive");
  std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
  LossRates theta(net.size());
  for (auto& v : theta.values) {
    double x = ga(rng);
    double y = gb(rng);
    v = std::clamp(x / (x + y), tol::kSampleClamp, 1.0 - tol::kSampleClamp);
  }
  return theta;
}

namespace {

// Per-tree lookup tables so the probe loop touches flat arrays only.
struct TreePlan {
  std::vector<LinkIndex> order;
  std::vector<int> parent_pos;  // position in order, -1 for the root
  std::vector<int> bit;         // receiver bit, -1 for internal links
};

TreePlan plan_for(const MulticastTree& tree) {
  TreePlan plan;
  auto order = tree.order();
  plan.order.assign(order.begin(), order.end());
  plan.parent_pos.assign(order.size(), -1);
  plan.bit.assign(order.size(), -1);
  for (std::size_t a = 0; a < order.size(); ++a) {
    if (auto p = tree.parent(order[a]))
      plan.parent_pos[a] = static_cast<int>(std::find(order.begin(), order.end(), *p) - order.begin());
    plan.bit[a] = tree.receiver_bit(order[a]);
  }
  if (tree.receivers().size() > 64)
    throw std::invalid_argument("simulator supports at most 64 receivers per tree");
  return plan;
}

std::uint64_t probe_mask(const TreePlan& plan, const LossRates& theta, ProbeStream& stream,
                         std::vector<unsigned char>& reached) {
  std::uint64_t mask = 0;
  for (std::size_t a = 0; a < plan.order.size(); ++a) {
    bool above = plan.parent_pos[a] < 0 || reached[static_cast<std::size_t>(plan.parent_pos[a])];
    // Draw for every link so the stream position depends only on the link.
    double u = stream.uniform();
    bool here = above && u >= theta[plan.order[a]];
    reached[a] = here;
    if (here && plan.bit[a] >= 0) mask |= std::uint64_t{1} << plan.bit[a];
  }
  return mask;
}

std::string mask_to_bits(std::uint64_t mask, std::size_t width) {
  std::string bits(width, '0');
  for (std::size_t b = 0; b < width; ++b)
    if ((mask >> b) & 1u) bits[b] = '1';
  return bits;
}

TreePatterns empty_tree_patterns(const MulticastTree& tree, const GeneralNetwork& net,
                                 std::uint64_t probes) {
  TreePatterns tp;
  tp.tree_id = tree.id();
  tp.probes = probes;
  for (LinkIndex i : tree.receivers()) tp.receivers.push_back(net.link_id(i));
  return tp;
}

template <bool Parallel>
PatternTable run(const SimConfig& config, const LossRates& theta, const GeneralNetwork& net) {
  if (theta.size() != net.size()) throw std::invalid_argument("theta size does not match network");
  const auto probes = split_probes(config.total_probes, net);
  PatternTable table;
  for (std::size_t k = 0; k < net.trees().size(); ++k) {
    const auto& tree = net.trees()[k];
    const TreePlan plan = plan_for(tree);
    const auto tree_key = static_cast<std::uint64_t>(tree.id());
    std::map<std::uint64_t, std::uint64_t> counts;
    const long n = static_cast<long>(probes[k]);
    if constexpr (Parallel) {
      const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
      {
        std::unordered_map<std::uint64_t, std::uint64_t> local;
        std::vector<unsigned char> reached(plan.order.size());
#pragma omp for schedule(static) nowait
        for (long t = 0; t < n; ++t) {
          ProbeStream stream(config.seed, config.replicate, tree_key, static_cast<std::uint64_t>(t));
          ++local[probe_mask(plan, theta, stream, reached)];
        }
#pragma omp critical
        for (const auto& [mask, c] : local) counts[mask] += c;
      }
    } else {
      std::vector<unsigned char> reached(plan.order.size());
      for (long t = 0; t < n; ++t) {
        ProbeStream stream(config.seed, config.replicate, tree_key, static_cast<std::uint64_t>(t));
        ++counts[probe_mask(plan, theta, stream, reached)];
      }
    }
    TreePatterns tp = empty_tree_patterns(tree, net, probes[k]);
    for (const auto& [mask, c] : counts) tp.counts[mask_to_bits(mask, tp.receivers.size())] = c;
    table.trees.push_back(std::move(tp));
  }
  return table;
}

}  // namespace

PatternTable simulate(const SimConfig& config, const LossRates& theta, const GeneralNetwork& net) {
  return run<true>(config, theta, net);
}

namespace serial {

PatternTable simulate(const SimConfig& config, const LossRates& theta, const GeneralNetwork& net) {
  return run<false>(config, theta, net);
}

}  // namespace serial

}  // namespace losstomo
