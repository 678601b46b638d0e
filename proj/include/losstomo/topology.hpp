#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace losstomo {

using LinkId = std::int64_t;
using NodeId = std::int64_t;

// Dense position of a link inside a GeneralNetwork (ascending link id order).
using LinkIndex = std::size_t;

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LinkRecord {
  LinkId id = 0;
  NodeId parent_node = 0;
  NodeId child_node = 0;

  bool operator==(const LinkRecord&) const = default;
};

// Declaration of one multicast tree as it appears in a topology file.
struct TreeSpec {
  int id = 0;
  LinkId root = 0;
  std::vector<LinkId> links;  // includes the root link

  bool operator==(const TreeSpec&) const = default;
};

/// One multicast tree of a network. All link references are dense indices
/// into the owning GeneralNetwork.
class MulticastTree {
 public:
  int id() const { return id_; }
  LinkIndex root() const { return root_; }

  /// Links of the tree in ascending link id order.
  std::span<const LinkIndex> links() const { return links_; }

  /// Links in root-first order; every link follows its parent.
  std::span<const LinkIndex> order() const { return order_; }

  /// Leaf links in ascending link id order. This is the receiver bit order.
  std::span<const LinkIndex> receivers() const { return receivers_; }

  bool contains(LinkIndex i) const { return member_[i]; }

  /// Within-tree parent link f_i; empty for the root link or non-members.
  std::optional<LinkIndex> parent(LinkIndex i) const;

  /// Position of leaf link i in the receiver bit-vector, or -1.
  int receiver_bit(LinkIndex i) const { return receiver_bit_[i]; }

  /// Leaf links below (and including) link i, ascending id.
  std::span<const LinkIndex> subtree_receivers(LinkIndex i) const {
    return subtree_receivers_[i];
  }

 private:
  friend class GeneralNetwork;

  int id_ = 0;
  LinkIndex root_ = 0;
  std::vector<LinkIndex> links_;
  std::vector<LinkIndex> order_;
  std::vector<LinkIndex> receivers_;
  std::vector<bool> member_;
  std::vector<std::ptrdiff_t> parent_;
  std::vector<int> receiver_bit_;
  std::vector<std::vector<LinkIndex>> subtree_receivers_;
};

/// A network covered by one or more multicast trees that may share links.
/// Immutable after construction.
///
/// Validation rejects anything the loss model cannot express: a link whose
/// child set differs between trees, parents of a shared link with different
/// child sets, or a tree root that appears in another tree.
class GeneralNetwork {
 public:
  static GeneralNetwork build(std::string name, std::vector<LinkRecord> links,
                              std::vector<TreeSpec> trees);

  const std::string& name() const { return name_; }
  std::size_t size() const { return links_.size(); }

  const LinkRecord& link(LinkIndex i) const { return links_[i]; }
  LinkId link_id(LinkIndex i) const { return links_[i].id; }
  std::span<const LinkRecord> links() const { return links_; }

  /// Dense index of a link id; throws TopologyError if unknown.
  LinkIndex index_of(LinkId id) const;
  std::optional<LinkIndex> find(LinkId id) const;

  std::span<const MulticastTree> trees() const { return trees_; }
  std::span<const TreeSpec> tree_specs() const { return specs_; }

  /// C_i, ascending id. Empty for leaf links.
  std::span<const LinkIndex> children(LinkIndex i) const { return children_[i]; }
  /// B_i, includes i. {i} for source links.
  std::span<const LinkIndex> brothers(LinkIndex i) const { return brothers_[i]; }
  /// F_i, the parent links of i across all trees. Empty for source links.
  std::span<const LinkIndex> parents(LinkIndex i) const { return parents_[i]; }

  bool is_source(LinkIndex i) const { return is_source_[i]; }
  bool is_leaf(LinkIndex i) const { return children_[i].empty(); }

  /// Links that belong to two or more trees, ascending id.
  std::span<const LinkIndex> shared_links() const { return shared_; }

  /// Trees (by position) that contain link i.
  std::span<const std::size_t> trees_of(LinkIndex i) const { return trees_of_[i]; }

  /// Parents before children, ties broken by ascending link id.
  std::span<const LinkIndex> topological_order() const { return order_; }

  /// The single-tree network formed by tree at position k.
  GeneralNetwork subnetwork(std::size_t k) const;

  bool operator==(const GeneralNetwork& other) const {
    return name_ == other.name_ && links_ == other.links_ && specs_ == other.specs_;
  }

 private:
  std::string name_;
  std::vector<LinkRecord> links_;
  std::vector<TreeSpec> specs_;
  std::vector<MulticastTree> trees_;
  std::vector<std::vector<LinkIndex>> children_;
  std::vector<std::vector<LinkIndex>> brothers_;
  std::vector<std::vector<LinkIndex>> parents_;
  std::vector<std::vector<std::size_t>> trees_of_;
  std::vector<bool> is_source_;
  std::vector<LinkIndex> shared_;
  std::vector<LinkIndex> order_;
};

/// Parses the line-oriented topology format:
///   network <name>
///   link <link_id> <parent_node_id> <child_node_id>
///   tree <tree_id> <root_link_id> : <link_id> ...
GeneralNetwork parse_topology(std::string_view text);

std::string serialize_topology(const GeneralNetwork& net);

/// Free-function form of GeneralNetwork::topological_order, returned as ids.
std::vector<LinkId> topological_order(const GeneralNetwork& net);

}  // namespace losstomo
