#include "losstomo/topology.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace losstomo {

std::optional<LinkIndex> MulticastTree::parent(LinkIndex i) const {
  if (i >= parent_.size() || parent_[i] < 0) return std::nullopt;
  return static_cast<LinkIndex>(parent_[i]);
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw TopologyError(what); }

std::string tree_label(int id) { return "tree " + std::to_string(id); }

}  // namespace

GeneralNetwork GeneralNetwork::build(std::string name, std::vector<LinkRecord> links,
                                     std::vector<TreeSpec> trees) {
  if (links.empty()) fail("network has no links");
  if (trees.empty()) fail("network has no trees");

  std::sort(links.begin(), links.end(),
            [](const LinkRecord& a, const LinkRecord& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (links[i].id <= 0) fail("link id must be positive: " + std::to_string(links[i].id));
    if (i > 0 && links[i].id == links[i - 1].id)
      fail("duplicate link id " + std::to_string(links[i].id));
    if (links[i].parent_node == links[i].child_node)
      fail("link " + std::to_string(links[i].id) + " connects a node to itself");
  }
  std::sort(trees.begin(), trees.end(),
            [](const TreeSpec& a, const TreeSpec& b) { return a.id < b.id; });
  for (std::size_t k = 1; k < trees.size(); ++k)
    if (trees[k].id == trees[k - 1].id) fail("duplicate tree id " + std::to_string(trees[k].id));

  GeneralNetwork net;
  net.name_ = std::move(name);
  net.links_ = std::move(links);
  const std::size_t m = net.links_.size();

  net.children_.assign(m, {});
  net.parents_.assign(m, {});
  net.brothers_.assign(m, {});
  net.trees_of_.assign(m, {});
  net.is_source_.assign(m, false);

  // Per-tree child sets, used to check that a link has the same children in
  // every tree that contains it.
  std::vector<std::optional<std::vector<LinkIndex>>> child_sets(m);

  for (std::size_t k = 0; k < trees.size(); ++k) {
    TreeSpec& spec = trees[k];
    const std::string label = tree_label(spec.id);
    if (spec.links.empty()) fail(label + " is empty");
    std::sort(spec.links.begin(), spec.links.end());
    if (std::adjacent_find(spec.links.begin(), spec.links.end()) != spec.links.end())
      fail(label + " lists a link twice");

    MulticastTree tree;
    tree.id_ = spec.id;
    tree.member_.assign(m, false);
    tree.parent_.assign(m, -1);
    tree.receiver_bit_.assign(m, -1);
    tree.subtree_receivers_.assign(m, {});

    for (LinkId id : spec.links) {
      auto idx = net.find(id);
      if (!idx) fail(label + " references unknown link " + std::to_string(id));
      tree.links_.push_back(*idx);
      tree.member_[*idx] = true;
    }
    auto root = net.find(spec.root);
    if (!root || !tree.member_[*root]) fail(label + " root link is not in its link list");
    tree.root_ = *root;

    std::map<NodeId, LinkIndex> incoming;
    for (LinkIndex i : tree.links_) {
      auto [it, fresh] = incoming.emplace(net.links_[i].child_node, i);
      if (!fresh) fail(label + " is not a tree: node " +
                       std::to_string(net.links_[i].child_node) + " has two parent links");
    }
    std::vector<std::vector<LinkIndex>> kids(m);
    for (LinkIndex i : tree.links_) {
      auto it = incoming.find(net.links_[i].parent_node);
      if (i == tree.root_) {
        if (it != incoming.end()) fail(label + " is not a tree: root link has a parent");
        continue;
      }
      if (it == incoming.end())
        fail(label + " is not a tree: link " + std::to_string(net.links_[i].id) +
             " is disconnected from the root");
      tree.parent_[i] = static_cast<std::ptrdiff_t>(it->second);
      kids[it->second].push_back(i);
    }

    // Everything must hang off the root; a cycle would never be reached.
    std::size_t reached = 0;
    std::vector<LinkIndex> stack{tree.root_};
    std::vector<bool> seen(m, false);
    while (!stack.empty()) {
      LinkIndex i = stack.back();
      stack.pop_back();
      if (seen[i]) fail(label + " is not a tree: cycle detected");
      seen[i] = true;
      ++reached;
      for (LinkIndex c : kids[i]) stack.push_back(c);
    }
    if (reached != tree.links_.size()) fail(label + " is not a tree: contains a cycle");

    for (LinkIndex i : tree.links_) {
      std::sort(kids[i].begin(), kids[i].end());
      if (child_sets[i] && *child_sets[i] != kids[i])
        fail("link " + std::to_string(net.links_[i].id) +
             " has different child links in different trees");
      child_sets[i] = kids[i];
      net.trees_of_[i].push_back(k);
      if (tree.parent_[i] >= 0) {
        auto& ps = net.parents_[i];
        LinkIndex p = static_cast<LinkIndex>(tree.parent_[i]);
        if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
      }
    }
    net.is_source_[tree.root_] = true;
    net.trees_.push_back(std::move(tree));
  }

  for (LinkIndex i = 0; i < m; ++i) {
    if (net.trees_of_[i].empty())
      fail("link " + std::to_string(net.links_[i].id) + " is not covered by any tree");
    net.children_[i] = *child_sets[i];
    std::sort(net.parents_[i].begin(), net.parents_[i].end());
    if (net.is_source_[i] && !net.parents_[i].empty())
      fail("source link " + std::to_string(net.links_[i].id) +
           " appears below the root of another tree");
    if (net.trees_of_[i].size() > 1) net.shared_.push_back(i);
  }
  for (LinkIndex i = 0; i < m; ++i) {
    if (net.is_source_[i]) {
      net.brothers_[i] = {i};
      continue;
    }
    const auto& first = net.children_[net.parents_[i].front()];
    for (LinkIndex p : net.parents_[i])
      if (net.children_[p] != first)
        fail("parents of link " + std::to_string(net.links_[i].id) +
             " have different child sets");
    net.brothers_[i] = first;
  }

  // Kahn's algorithm over F_i -> i edges with a min-heap on link id (dense
  // index order equals id order).
  std::vector<std::size_t> pending(m);
  for (LinkIndex i = 0; i < m; ++i) pending[i] = net.parents_[i].size();
  std::priority_queue<LinkIndex, std::vector<LinkIndex>, std::greater<>> ready;
  for (LinkIndex i = 0; i < m; ++i)
    if (pending[i] == 0) ready.push(i);
  while (!ready.empty()) {
    LinkIndex i = ready.top();
    ready.pop();
    net.order_.push_back(i);
    for (LinkIndex c : net.children_[i])
      if (--pending[c] == 0) ready.push(c);
  }
  if (net.order_.size() != m) fail("network contains a cycle");

  for (auto& tree : net.trees_) {
    for (LinkIndex i : net.order_)
      if (tree.member_[i]) tree.order_.push_back(i);
    for (LinkIndex i : tree.links_)
      if (net.children_[i].empty()) tree.receivers_.push_back(i);
    for (std::size_t b = 0; b < tree.receivers_.size(); ++b)
      tree.receiver_bit_[tree.receivers_[b]] = static_cast<int>(b);
    for (auto it = tree.order_.rbegin(); it != tree.order_.rend(); ++it) {
      LinkIndex i = *it;
      auto& rs = tree.subtree_receivers_[i];
      if (net.children_[i].empty()) rs.push_back(i);
      for (LinkIndex c : net.children_[i])
        rs.insert(rs.end(), tree.subtree_receivers_[c].begin(), tree.subtree_receivers_[c].end());
      std::sort(rs.begin(), rs.end());
    }
  }
  net.specs_ = std::move(trees);
  return net;
}

std::optional<LinkIndex> GeneralNetwork::find(LinkId id) const {
  auto it = std::lower_bound(links_.begin(), links_.end(), id,
                             [](const LinkRecord& r, LinkId v) { return r.id < v; });
  if (it == links_.end() || it->id != id) return std::nullopt;
  return static_cast<LinkIndex>(it - links_.begin());
}

LinkIndex GeneralNetwork::index_of(LinkId id) const {
  auto idx = find(id);
  if (!idx) throw TopologyError("unknown link id " + std::to_string(id));
  return *idx;
}

GeneralNetwork GeneralNetwork::subnetwork(std::size_t k) const {
  const TreeSpec& spec = specs_.at(k);
  std::vector<LinkRecord> links;
  for (LinkId id : spec.links) links.push_back(links_[index_of(id)]);
  return build(name_ + "/tree" + std::to_string(spec.id), std::move(links), {spec});
}

GeneralNetwork parse_topology(std::string_view text) {
  std::string name;
  std::vector<LinkRecord> links;
  std::vector<TreeSpec> trees;
  for (const auto& line : detail::tokenize(text)) {
    const auto& t = line.tokens;
    auto where = [&] { return "line " + std::to_string(line.number) + ": "; };
    if (t[0] == "network") {
      if (t.size() != 2) throw TopologyError(where() + "expected 'network <name>'");
      if (!name.empty()) throw TopologyError(where() + "duplicate network line");
      name = std::string(t[1]);
    } else if (t[0] == "link") {
      LinkRecord r;
      if (t.size() != 4 || !detail::parse_number(t[1], r.id) ||
          !detail::parse_number(t[2], r.parent_node) || !detail::parse_number(t[3], r.child_node))
        throw TopologyError(where() + "expected 'link <id> <parent_node> <child_node>'");
      links.push_back(r);
    } else if (t[0] == "tree") {
      TreeSpec spec;
      if (t.size() < 5 || t[3] != ":" || !detail::parse_number(t[1], spec.id) ||
          !detail::parse_number(t[2], spec.root))
        throw TopologyError(where() + "expected 'tree <id> <root_link> : <link> ...'");
      for (std::size_t j = 4; j < t.size(); ++j) {
        LinkId id = 0;
        if (!detail::parse_number(t[j], id))
          throw TopologyError(where() + "bad link id '" + std::string(t[j]) + "'");
        spec.links.push_back(id);
      }
      trees.push_back(std::move(spec));
    } else {
      throw TopologyError(where() + "unknown keyword '" + std::string(t[0]) + "'");
    }
  }
  if (name.empty()) throw TopologyError("missing 'network' line");
  return GeneralNetwork::build(std::move(name), std::move(links), std::move(trees));
}

std::string serialize_topology(const GeneralNetwork& net) {
  std::ostringstream out;
  out << "network " << net.name() << '\n';
  for (const auto& r : net.links())
    out << "link " << r.id << ' ' << r.parent_node << ' ' << r.child_node << '\n';
  for (const auto& spec : net.tree_specs()) {
    out << "tree " << spec.id << ' ' << spec.root << " :";
    for (LinkId id : spec.links) out << ' ' << id;
    out << '\n';
  }
  return out.str();
}

std::vector<LinkId> topological_order(const GeneralNetwork& net) {
  std::vector<LinkId> ids;
  for (LinkIndex i : net.topological_order()) ids.push_back(net.link_id(i));
  return ids;
}

}  // namespace losstomo
