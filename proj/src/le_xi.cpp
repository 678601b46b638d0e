#include <chrono>
#include <cmath>
#include <limits>
#include <omp.h>

#include "losstomo/estimators.hpp"
#include "losstomo/likelihood.hpp"

namespace losstomo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One unit of work: a brother set B (child links of one node) and the parent
// links F that feed it, or a single source link.
struct SolveUnit {
  std::vector<LinkIndex> brothers;
  std::vector<LinkIndex> parents;
  bool source = false;
};

struct UnitOutcome {
  bool parents_lossless = false;
};

std::vector<SolveUnit> solve_units(const GeneralNetwork& net) {
  std::vector<SolveUnit> units;
  for (LinkIndex i = 0; i < net.size(); ++i) {
    if (net.is_source(i)) {
      units.push_back({{i}, {}, true});
    } else if (net.brothers(i).front() == i) {
      auto b = net.brothers(i);
      auto f = net.parents(i);
      units.push_back({{b.begin(), b.end()}, {f.begin(), f.end()}, false});
    }
  }
  return units;
}

// Writes xi_hat and case flags for the links of one unit. Touches only the
// unit's own links, so units can run concurrently.
UnitOutcome solve_unit(const SolveUnit& unit, const InternalView& view, SubtreeLossRates& xi,
                       std::vector<LinkStatus>& status) {
  UnitOutcome outcome;
  const std::uint64_t arrivals = view.total(unit.brothers.front());
  if (arrivals == 0) {
    for (LinkIndex j : unit.brothers) {
      xi[j] = kNaN;
      status[j].non_estimable = true;
    }
    return outcome;
  }

  // Case analysis on integer counts; r_j = n_j(1) / arrivals for every j.
  std::uint64_t confirmed_sum = 0;
  bool any_full = false;
  BrotherSetProblem problem;
  std::vector<LinkIndex> active;
  for (LinkIndex j : unit.brothers) {
    confirmed_sum += view.n1[j];
    if (view.n1[j] == 0) {
      xi[j] = 1.0;
      status[j].xi_one = true;
    } else if (view.n1[j] == arrivals) {
      any_full = true;
      xi[j] = 0.0;
      status[j].xi_zero = true;
    } else {
      active.push_back(j);
      problem.r.push_back(view.ratio(j));
    }
  }
  if (unit.source) {
    LinkIndex j = unit.brothers.front();
    if (!active.empty()) xi[j] = 1.0 - view.ratio(j);
    return outcome;
  }

  double pi = 0.0;
  if (any_full) {
    // Some brother passed every arriving probe: the product has a root at 0.
    pi = 0.0;
  } else if (confirmed_sum == arrivals) {
    // No probe was confirmed on two brothers; the only root is the spurious 1.
    outcome.parents_lossless = true;
    pi = 0.0;
  } else {
    pi = solve_brother_fixed_point(problem);
  }
  for (std::size_t a = 0; a < active.size(); ++a)
    xi[active[a]] = (1.0 - problem.r[a]) + problem.r[a] * pi;
  return outcome;
}

EstimateResult finish(const SufficientStats& stats, const GeneralNetwork& net,
                      const std::vector<SolveUnit>& units, const std::vector<UnitOutcome>& outcomes,
                      SubtreeLossRates xi, std::vector<LinkStatus> status) {
  const std::size_t m = net.size();
  for (std::size_t u = 0; u < units.size(); ++u)
    if (outcomes[u].parents_lossless)
      for (LinkIndex f : units[u].parents) status[f].parent_lossless = true;

  EstimateResult result;
  result.method = Method::le_xi;
  result.theta_hat = LossRates(m);
  for (LinkIndex i = 0; i < m; ++i) {
    auto& s = status[i];
    s.regularity_violated = !stats.regularity.links[i].ok();
    double& theta = result.theta_hat[i];
    if (s.non_estimable) {
      theta = kNaN;
    } else if (s.parent_lossless || s.xi_zero) {
      theta = 0.0;
    } else if (s.xi_one) {
      theta = 1.0;
    } else if (net.is_leaf(i)) {
      theta = xi[i];
    } else {
      double below = children_product(xi, net, i);
      theta = (xi[i] - below) / (1.0 - below);
      if (xi[i] - below <= tol::kMembership) {
        s.outside_xi = true;
        s.boundary_projected = true;
        theta = 0.0;
      }
    }
  }
  result.xi_hat = std::move(xi);
  result.status = std::move(status);
  result = project_to_theta_star(std::move(result));
  result.loglik = loglik_theta(stats.view, evaluation_point(result.theta_hat), net).value;
  return result;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

EstimateResult le_xi(const SufficientStats& stats, const GeneralNetwork& net,
                     const LeXiOptions& options) {
  auto start = std::chrono::steady_clock::now();
  const auto units = solve_units(net);
  std::vector<UnitOutcome> outcomes(units.size());
  SubtreeLossRates xi(net.size(), kNaN);
  std::vector<LinkStatus> status(net.size());

  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
  const long n_units = static_cast<long>(units.size());
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (long u = 0; u < n_units; ++u) {
    auto idx = static_cast<std::size_t>(u);
    outcomes[idx] = solve_unit(units[idx], stats.view, xi, status);
  }

  auto result = finish(stats, net, units, outcomes, std::move(xi), std::move(status));
  result.wall_ms = elapsed_ms(start);
  return result;
}

namespace serial {

EstimateResult le_xi(const SufficientStats& stats, const GeneralNetwork& net) {
  auto start = std::chrono::steady_clock::now();
  const auto units = solve_units(net);
  std::vector<UnitOutcome> outcomes(units.size());
  SubtreeLossRates xi(net.size(), kNaN);
  std::vector<LinkStatus> status(net.size());
  for (std::size_t u = 0; u < units.size(); ++u)
    outcomes[u] = solve_unit(units[u], stats.view, xi, status);
  auto result = finish(stats, net, units, outcomes, std::move(xi), std::move(status));
  result.wall_ms = elapsed_ms(start);
  return result;
}

}  // namespace serial

}  // namespace losstomo
