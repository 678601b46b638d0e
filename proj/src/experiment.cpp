#include "losstomo/experiment.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <omp.h>
#include <random>
#include <stdexcept>

#include "losstomo/rng.hpp"
#include "losstomo/simulator.hpp"
#include "text_util.hpp"

namespace losstomo {

std::string GridCell::setting() const {
  return "Beta(" + detail::format_double(beta_a) + "," + detail::format_double(beta_b) + ")";
}

ExperimentGrid parse_grid(std::string_view text) {
  ExperimentGrid grid;
  for (const auto& line : detail::tokenize(text)) {
    const auto& t = line.tokens;
    const std::string where = "line " + std::to_string(line.number) + ": ";
    GridCell cell;
    if (t.size() != 6 || t[0] != "cell" || !detail::parse_number(t[1], cell.beta_a) ||
        !detail::parse_number(t[2], cell.beta_b) || !detail::parse_number(t[3], cell.probes) ||
        !detail::parse_number(t[4], cell.replicates))
      throw std::invalid_argument(where +
                                  "expected 'cell <beta_a> <beta_b> <n> <replicates> <methods>'");
    if (!(cell.beta_a > 0.0) || !(cell.beta_b > 0.0))
      throw std::invalid_argument(where + "Beta parameters must be positive");
    if (cell.replicates < 1) throw std::invalid_argument(where + "replicates must be >= 1");
    std::string_view list = t[5];
    while (!list.empty()) {
      auto comma = list.find(',');
      auto name = list.substr(0, comma);
      auto m = parse_method(name);
      if (!m) throw std::invalid_argument(where + "unknown method '" + std::string(name) + "'");
      cell.methods.push_back(*m);
      list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
    }
    if (cell.methods.empty()) throw std::invalid_argument(where + "no methods");
    grid.cells.push_back(std::move(cell));
  }
  if (grid.cells.empty()) throw std::invalid_argument("grid has no cells");
  return grid;
}

double mse(const LossRates& theta_hat, const LossRates& theta_true) {
  if (theta_hat.size() != theta_true.size())
    throw std::invalid_argument("estimate and truth cover different links");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < theta_hat.size(); ++i) {
    if (std::isnan(theta_hat[i])) continue;
    double d = theta_hat[i] - theta_true[i];
    sum += d * d;
    ++count;
  }
  return count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
}

LossRates setting_theta(const GridCell& cell, std::uint64_t seed, const GeneralNetwork& net) {
  std::mt19937_64 rng(mix_keys({seed, std::bit_cast<std::uint64_t>(cell.beta_a),
                                std::bit_cast<std::uint64_t>(cell.beta_b)}));
  return sample_theta(cell.beta_a, cell.beta_b, net, rng);
}

ExperimentReport run_grid(const ExperimentGrid& grid, const GeneralNetwork& net) {
  struct Task {
    std::size_t cell;
    int replicate;
    std::size_t first_row;
  };
  std::vector<Task> tasks;
  std::vector<LossRates> truths;
  std::size_t rows = 0;
  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    truths.push_back(setting_theta(grid.cells[c], grid.seed, net));
    for (int r = 0; r < grid.cells[c].replicates; ++r) {
      tasks.push_back({c, r, rows});
      rows += grid.cells[c].methods.size();
    }
  }

  ExperimentReport report;
  report.rows.resize(rows);
  const int threads = grid.threads > 0 ? grid.threads : omp_get_max_threads();
  const long n_tasks = static_cast<long>(tasks.size());
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (long t = 0; t < n_tasks; ++t) {
    const Task& task = tasks[static_cast<std::size_t>(t)];
    const GridCell& cell = grid.cells[task.cell];
    const LossRates& truth = truths[task.cell];
    SimConfig sim;
    sim.total_probes = cell.probes;
    sim.seed = mix_keys({grid.seed, std::bit_cast<std::uint64_t>(cell.beta_a),
                         std::bit_cast<std::uint64_t>(cell.beta_b), cell.probes});
    sim.replicate = static_cast<std::uint64_t>(task.replicate);
    sim.threads = 1;
    PatternTable data = simulate(sim, truth, net);
    auto stats = internal_views(data, net);
    int violations = 0;
    for (const auto& f : stats.regularity.links) violations += f.ok() ? 0 : 1;

    for (std::size_t a = 0; a < cell.methods.size(); ++a) {
      ExperimentRow& row = report.rows[task.first_row + a];
      row.setting = cell.setting();
      row.beta_a = cell.beta_a;
      row.beta_b = cell.beta_b;
      row.probes = cell.probes;
      row.replicate = task.replicate;
      row.method = cell.methods[a];
      row.violations = violations;
      try {
        EstimateResult est;
        switch (row.method) {
          case Method::le_xi: est = le_xi(stats, net, {1}); break;
          case Method::pcem: est = pcem(stats, net, grid.em); break;
          case Method::nem: est = nem(data, net, grid.em); break;
          case Method::mvwa: est = mvwa(data, net, {1}); break;
        }
        row.mse = mse(est.theta_hat, truth);
        row.runtime_ms = est.wall_ms;
        row.iterations = est.iterations;
        for (LinkIndex i = 0; i < net.size(); ++i) row.excluded += est.estimable(i) ? 0 : 1;
        if (grid.keep_estimates) {
          row.theta_hat = est.theta_hat;
          row.theta_true = truth;
        }
      } catch (const std::exception& e) {
        row.mse = std::numeric_limits<double>::quiet_NaN();
        row.error = e.what();
      }
    }
  }
  return report;
}

std::vector<SummaryRow> ExperimentReport::summary() const {
  std::vector<SummaryRow> out;
  std::map<std::tuple<std::string, std::uint64_t, int>, std::size_t> index;
  for (const auto& row : rows) {
    auto key = std::make_tuple(row.setting, row.probes, static_cast<int>(row.method));
    auto [it, fresh] = index.emplace(key, out.size());
    if (fresh) out.push_back({row.setting, row.probes, row.method});
    SummaryRow& s = out[it->second];
    if (!row.error.empty()) {
      ++s.failures;
      continue;
    }
    ++s.replicates;
    s.mean_mse += row.mse;
    s.mean_runtime_ms += row.runtime_ms;
    if (row.violations > 0) ++s.violation_replicates;
  }
  for (auto& s : out) {
    if (s.replicates == 0) {
      s.mean_mse = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    s.mean_mse /= s.replicates;
    s.mean_runtime_ms /= s.replicates;
  }
  return out;
}

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string number_or_empty(double v) {
  return std::isnan(v) ? std::string{} : detail::format_double(v);
}

}  // namespace

std::string ExperimentReport::csv() const {
  std::string out = "setting,beta_a,beta_b,n,replicate,method,mse,runtime_ms,iterations,violations\n";
  for (const auto& r : rows) {
    out += '"' + r.setting + '"';
    out += "," + detail::format_double(r.beta_a) + "," + detail::format_double(r.beta_b) + "," +
           std::to_string(r.probes) + "," + std::to_string(r.replicate) + "," +
           std::string(method_name(r.method)) + "," + number_or_empty(r.mse) + "," +
           fixed3(r.runtime_ms) + "," + std::to_string(r.iterations) + "," +
           std::to_string(r.violations) + "\n";
  }
  return out;
}

std::string ExperimentReport::summary_csv() const {
  std::string out = "setting,n,method,replicates,failures,mean_mse,mean_runtime_ms,violation_replicates\n";
  for (const auto& s : summary()) {
    out += '"' + s.setting + "\"," + std::to_string(s.probes) + "," + std::string(method_name(s.method)) +
           "," + std::to_string(s.replicates) + "," + std::to_string(s.failures) + "," +
           number_or_empty(s.mean_mse) + "," + fixed3(s.mean_runtime_ms) + "," +
           std::to_string(s.violation_replicates) + "\n";
  }
  return out;
}

}  // namespace losstomo
