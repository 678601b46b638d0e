#pragma once

#include <string>
#include <string_view>

#include "losstomo/estimators.hpp"
#include "losstomo/param_systems.hpp"
#include "losstomo/statistics.hpp"

namespace losstomo {

/// Data file:
///   data <name>
///   probes <tree_id> <n_k>
///   receivers <tree_id> : <leaf_link_id> ...
///   pattern <tree_id> <bitstring> <count>
PatternTable parse_data(std::string_view text, const GeneralNetwork& net);
std::string serialize_data(const PatternTable& table);

/// Rate files: one `theta <link_id> <value>` (or `xi ...`) line per link.
LossRates parse_theta(std::string_view text, const GeneralNetwork& net);
SubtreeLossRates parse_xi(std::string_view text, const GeneralNetwork& net);
std::string serialize_theta(const LossRates& theta, const GeneralNetwork& net);
std::string serialize_xi(const SubtreeLossRates& xi, const GeneralNetwork& net);

/// CSV with header `link_id,theta_hat,xi_hat,flag,estimable`; missing values
/// are empty fields.
std::string estimate_csv(const EstimateResult& result, const GeneralNetwork& net);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace losstomo
