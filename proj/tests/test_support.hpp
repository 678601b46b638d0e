#pragma once

#include <string>
#include <vector>

#include "losstomo/formats.hpp"
#include "losstomo/topology.hpp"

namespace losstomo::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(LOSSTOMO_DATA_DIR) + "/" + name;
}

inline GeneralNetwork load_net(const std::string& name) {
  return parse_topology(read_file(fixture_path(name)));
}

inline GeneralNetwork star(int leaves) {
  std::vector<LinkRecord> links{{1, 0, 1}};
  TreeSpec tree{1, 1, {1}};
  for (int j = 0; j < leaves; ++j) {
    LinkId id = 2 + j;
    links.push_back({id, 1, id});
    tree.links.push_back(id);
  }
  return GeneralNetwork::build("star", links, {tree});
}

/// Chain 1 -> 2 -> ... -> m.
inline GeneralNetwork chain(int m) {
  std::vector<LinkRecord> links;
  TreeSpec tree{1, 1, {}};
  for (int i = 1; i <= m; ++i) {
    links.push_back({i, i - 1, i});
    tree.links.push_back(i);
  }
  return GeneralNetwork::build("chain", links, {tree});
}

/// Single-tree pattern table from {bits, count} pairs.
inline PatternTable single_tree_table(const GeneralNetwork& net,
                                      std::vector<std::pair<std::string, std::uint64_t>> counts) {
  TreePatterns tp;
  const auto& tree = net.trees()[0];
  tp.tree_id = tree.id();
  for (LinkIndex i : tree.receivers()) tp.receivers.push_back(net.link_id(i));
  for (auto& [bits, c] : counts) {
    if (c == 0) continue;
    tp.counts[bits] += c;
    tp.probes += c;
  }
  PatternTable table;
  table.trees.push_back(tp);
  return table;
}

}  // namespace losstomo::testing
