#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "losstomo/estimators.hpp"
#include "losstomo/topology.hpp"

namespace losstomo {

/// One line of a grid file: `cell <beta_a> <beta_b> <n> <replicates> <methods>`.
struct GridCell {
  double beta_a = 1.0;
  double beta_b = 1.0;
  std::uint64_t probes = 0;
  int replicates = 1;
  std::vector<Method> methods;

  /// "Beta(a,b)"
  std::string setting() const;
};

struct ExperimentGrid {
  std::vector<GridCell> cells;
  std::uint64_t seed = 1;
  int threads = 0;  // workers for the replicate pool; 0: OpenMP default
  EmOptions em;
  bool keep_estimates = false;
};

ExperimentGrid parse_grid(std::string_view text);

struct ExperimentRow {
  std::string setting;
  double beta_a = 0.0;
  double beta_b = 0.0;
  std::uint64_t probes = 0;
  int replicate = 0;
  Method method = Method::le_xi;
  double mse = 0.0;          // NaN when the method failed
  double runtime_ms = 0.0;
  int iterations = 0;
  int violations = 0;        // links failing the regularity conditions
  int excluded = 0;          // non-estimable links left out of the MSE
  std::string error;
  LossRates theta_hat;       // only with ExperimentGrid::keep_estimates
  LossRates theta_true;      // only with ExperimentGrid::keep_estimates
};

struct SummaryRow {
  std::string setting;
  std::uint64_t probes = 0;
  Method method = Method::le_xi;
  int replicates = 0;
  int failures = 0;
  double mean_mse = 0.0;
  double mean_runtime_ms = 0.0;
  int violation_replicates = 0;  // replicates with at least one violation
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;

  std::vector<SummaryRow> summary() const;
  /// `setting,beta_a,beta_b,n,replicate,method,mse,runtime_ms,iterations,violations`
  std::string csv() const;
  std::string summary_csv() const;
};

/// Mean squared error over links where theta_hat is not NaN.
double mse(const LossRates& theta_hat, const LossRates& theta_true);

/// Loss rates for one Beta setting; shared by every n and replicate of it.
LossRates setting_theta(const GridCell& cell, std::uint64_t seed, const GeneralNetwork& net);

/// Runs every (cell, replicate) on a worker pool. Rows come back in grid
/// order, then replicate, then method, whatever the worker count.
ExperimentReport run_grid(const ExperimentGrid& grid, const GeneralNetwork& net);

}  // namespace losstomo
