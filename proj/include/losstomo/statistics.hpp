#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "losstomo/topology.hpp"

namespace losstomo {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collapsed receiver observations of one tree. Bit b of a pattern key is
/// the receiver at position b of MulticastTree::receivers() ('1' = received).
struct TreePatterns {
  int tree_id = 0;
  std::uint64_t probes = 0;
  std::vector<LinkId> receivers;
  std::map<std::string, std::uint64_t> counts;  // only counts >= 1 are stored

  bool operator==(const TreePatterns&) const = default;
};

/// One TreePatterns per tree, in the network's tree order.
struct PatternTable {
  std::string name = "data";
  std::vector<TreePatterns> trees;

  bool operator==(const PatternTable& other) const { return trees == other.trees; }
};

/// Counts raw receiver bit-vectors per tree (records[k] belongs to the tree
/// at position k). Throws DataError on a wrong vector length or bad character.
PatternTable collapse_patterns(const std::vector<std::vector<std::string>>& records,
                               const GeneralNetwork& net);

/// Checks lengths, characters, receiver lists and count sums against net.
void validate_patterns(const PatternTable& patterns, const GeneralNetwork& net);

/// Internal views {n_i(1), n_i(0)} per tree and aggregated over trees.
struct InternalView {
  std::vector<std::uint64_t> tree_probes;               // n_k
  std::vector<std::vector<std::uint64_t>> tree_n1;      // [k][i], 0 if i not in tree k
  std::vector<std::vector<std::uint64_t>> tree_n0;
  std::vector<std::uint64_t> n1;                        // aggregated
  std::vector<std::uint64_t> n0;

  std::uint64_t total(LinkIndex i) const { return n1[i] + n0[i]; }
  /// No probe was confirmed at the link's parent node.
  bool undefined(LinkIndex i) const { return total(i) == 0; }
  /// r_i = n_i(1) / (n_i(1) + n_i(0)); NaN when undefined.
  double ratio(LinkIndex i) const;
  std::vector<double> ratios() const;
};

struct LinkRegularity {
  bool n1_zero = false;
  bool n0_zero = false;
  bool no_information = false;
  bool brother_sum_violation = false;

  bool ok() const { return !(n1_zero || n0_zero || no_information || brother_sum_violation); }
};

struct RegularityReport {
  std::vector<LinkRegularity> links;
  bool all_ok = true;
};

struct SufficientStats {
  InternalView view;
  RegularityReport regularity;
};

/// Aggregated-view regularity check: n_i(1) > 0, n_i(0) > 0 and
/// sum_{F_i} n_j(1) < sum_{B_i} n_j(1) for non-source links.
RegularityReport regularity_report(const InternalView& view, const GeneralNetwork& net);

/// Builds internal views from a pattern table (cost: distinct patterns x m).
SufficientStats internal_views(const PatternTable& patterns, const GeneralNetwork& net);

/// Pattern table of tree k alone, reindexed for net.subnetwork(k).
PatternTable tree_patterns(const PatternTable& patterns, std::size_t k);

}  // namespace losstomo
