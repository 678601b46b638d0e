#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "losstomo/param_systems.hpp"
#include "losstomo/statistics.hpp"

namespace losstomo {

struct SimConfig {
  std::uint64_t total_probes = 0;  // split across trees, see split_probes
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  int threads = 0;  // 0: OpenMP default
};

/// n / K probes per tree; the remainder goes to the tree with the lowest id.
std::vector<std::uint64_t> split_probes(std::uint64_t total, const GeneralNetwork& net);

/// Independent Beta(a, b) loss rate per link, clamped into
/// [tol::kSampleClamp, 1 - tol::kSampleClamp].
LossRates sample_theta(double a, double b, const GeneralNetwork& net, std::mt19937_64& rng);

/// Ideal Bernoulli loss model: each probe travels root to leaves, dropped on
/// link i with probability theta_i once it reached the link's parent node.
/// Probe t of tree k draws from ProbeStream(seed, replicate, tree id, t), so
/// the table is identical for any thread count.
PatternTable simulate(const SimConfig& config, const LossRates& theta, const GeneralNetwork& net);

namespace serial {

PatternTable simulate(const SimConfig& config, const LossRates& theta, const GeneralNetwork& net);

}  // namespace serial

}  // namespace losstomo
