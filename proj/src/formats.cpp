#include "losstomo/formats.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "text_util.hpp"

namespace losstomo {

namespace {

std::string at_line(std::size_t n) { return "line " + std::to_string(n) + ": "; }

}  // namespace

PatternTable parse_data(std::string_view text, const GeneralNetwork& net) {
  PatternTable table;
  bool named = false;
  std::map<int, TreePatterns> by_tree;
  std::map<int, bool> has_probes;
  for (const auto& line : detail::tokenize(text)) {
    const auto& t = line.tokens;
    const std::string where = at_line(line.number);
    if (t[0] == "data") {
      if (t.size() != 2 || named) throw DataError(where + "expected a single 'data <name>'");
      table.name = std::string(t[1]);
      named = true;
      continue;
    }
    int tree_id = 0;
    if (t.size() < 2 || !detail::parse_number(t[1], tree_id))
      throw DataError(where + "expected a tree id after '" + std::string(t[0]) + "'");
    TreePatterns& tp = by_tree[tree_id];
    tp.tree_id = tree_id;
    if (t[0] == "probes") {
      if (t.size() != 3 || !detail::parse_number(t[2], tp.probes))
        throw DataError(where + "expected 'probes <tree_id> <n_k>'");
      if (has_probes[tree_id]) throw DataError(where + "duplicate probes line");
      has_probes[tree_id] = true;
    } else if (t[0] == "receivers") {
      if (t.size() < 4 || t[2] != ":")
        throw DataError(where + "expected 'receivers <tree_id> : <link_id> ...'");
      if (!tp.receivers.empty()) throw DataError(where + "duplicate receivers line");
      for (std::size_t j = 3; j < t.size(); ++j) {
        LinkId id = 0;
        if (!detail::parse_number(t[j], id))
          throw DataError(where + "bad link id '" + std::string(t[j]) + "'");
        tp.receivers.push_back(id);
      }
    } else if (t[0] == "pattern") {
      std::uint64_t count = 0;
      if (t.size() != 4 || !detail::parse_number(t[3], count))
        throw DataError(where + "expected 'pattern <tree_id> <bits> <count>'");
      std::string bits(t[2]);
      if (tp.counts.contains(bits)) throw DataError(where + "duplicate pattern " + bits);
      if (count > 0) tp.counts.emplace(std::move(bits), count);
    } else {
      throw DataError(where + "unknown keyword '" + std::string(t[0]) + "'");
    }
  }
  for (const auto& tree : net.trees()) {
    auto it = by_tree.find(tree.id());
    if (it == by_tree.end() || !has_probes[tree.id()])
      throw DataError("no probes line for tree " + std::to_string(tree.id()));
    table.trees.push_back(std::move(it->second));
    by_tree.erase(it);
  }
  if (!by_tree.empty())
    throw DataError("data references unknown tree " + std::to_string(by_tree.begin()->first));
  validate_patterns(table, net);
  return table;
}

std::string serialize_data(const PatternTable& table) {
  std::ostringstream out;
  out << "data " << table.name << '\n';
  for (const auto& tp : table.trees) {
    out << "probes " << tp.tree_id << ' ' << tp.probes << '\n';
    out << "receivers " << tp.tree_id << " :";
    for (LinkId id : tp.receivers) out << ' ' << id;
    out << '\n';
    for (const auto& [bits, count] : tp.counts)
      out << "pattern " << tp.tree_id << ' ' << bits << ' ' << count << '\n';
  }
  return out.str();
}

namespace {

std::vector<double> parse_rates(std::string_view text, const GeneralNetwork& net,
                                std::string_view keyword) {
  std::vector<double> values(net.size(), 0.0);
  std::vector<bool> seen(net.size(), false);
  for (const auto& line : detail::tokenize(text)) {
    const auto& t = line.tokens;
    const std::string where = at_line(line.number);
    LinkId id = 0;
    double v = 0.0;
    if (t.size() != 3 || t[0] != keyword || !detail::parse_number(t[1], id) ||
        !detail::parse_number(t[2], v))
      throw DataError(where + "expected '" + std::string(keyword) + " <link_id> <value>'");
    auto idx = net.find(id);
    if (!idx) throw DataError(where + "unknown link " + std::to_string(id));
    if (seen[*idx]) throw DataError(where + "duplicate link " + std::to_string(id));
    if (!(v >= 0.0 && v <= 1.0)) throw DataError(where + "value outside [0,1]");
    seen[*idx] = true;
    values[*idx] = v;
  }
  for (LinkIndex i = 0; i < net.size(); ++i)
    if (!seen[i]) throw DataError("missing value for link " + std::to_string(net.link_id(i)));
  return values;
}

std::string serialize_rates(const std::vector<double>& values, const GeneralNetwork& net,
                            std::string_view keyword) {
  std::string out;
  for (LinkIndex i = 0; i < net.size(); ++i) {
    out += keyword;
    out += ' ' + std::to_string(net.link_id(i)) + ' ' + detail::format_double(values[i]) + '\n';
  }
  return out;
}

}  // namespace

LossRates parse_theta(std::string_view text, const GeneralNetwork& net) {
  return LossRates(parse_rates(text, net, "theta"));
}

SubtreeLossRates parse_xi(std::string_view text, const GeneralNetwork& net) {
  return SubtreeLossRates(parse_rates(text, net, "xi"));
}

std::string serialize_theta(const LossRates& theta, const GeneralNetwork& net) {
  return serialize_rates(theta.values, net, "theta");
}

std::string serialize_xi(const SubtreeLossRates& xi, const GeneralNetwork& net) {
  return serialize_rates(xi.values, net, "xi");
}

std::string estimate_csv(const EstimateResult& result, const GeneralNetwork& net) {
  auto field = [](double v) { return std::isnan(v) ? std::string{} : detail::format_double(v); };
  std::string out = "link_id,theta_hat,xi_hat,flag,estimable\n";
  for (LinkIndex i = 0; i < net.size(); ++i) {
    out += std::to_string(net.link_id(i)) + ',' + field(result.theta_hat[i]) + ',' +
           field(result.xi_hat[i]) + ',' + result.status[i].label() + ',' +
           (result.estimable(i) ? "1" : "0") + '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace losstomo
