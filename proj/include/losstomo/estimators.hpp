#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "losstomo/constants.hpp"
#include "losstomo/param_systems.hpp"
#include "losstomo/statistics.hpp"

namespace losstomo {

enum class Method { le_xi, pcem, nem, mvwa };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

/// Per-link outcome of an estimator. The four degenerate-data cases each have
/// their own flag:
///   xi_one          n_i(1) = 0, n_i(0) > 0      -> xi_hat_i = 1
///   xi_zero         n_i(0) = 0, n_i(1) > 0      -> xi_hat_i = 0
///   parent_lossless sum_{F} n(1) = sum_{B} n(1) -> theta_hat = 0 on the parents
///   outside_xi      xi_hat_i <= prod_{C_i} xi_hat -> theta_hat_i <= 0, projected
struct LinkStatus {
  bool boundary_projected = false;
  bool non_estimable = false;
  bool regularity_violated = false;
  bool xi_one = false;
  bool xi_zero = false;
  bool parent_lossless = false;
  bool outside_xi = false;

  bool ok() const {
    return !(boundary_projected || non_estimable || regularity_violated || xi_one || xi_zero ||
             parent_lossless || outside_xi);
  }
  /// "ok", or the set flags joined by '|'.
  std::string label() const;

  LinkStatus& operator|=(const LinkStatus& o);
  bool operator==(const LinkStatus&) const = default;
};

struct EstimateResult {
  Method method = Method::le_xi;
  LossRates theta_hat;        // NaN for non-estimable links
  SubtreeLossRates xi_hat;    // NaN for non-estimable links
  std::vector<LinkStatus> status;
  int iterations = 0;
  bool converged = true;
  double loglik = 0.0;
  double wall_ms = 0.0;

  // Filled by the EM routines when EmOptions::record_trace is set:
  // theta_trace[r] is the iterate after sweep r + 1, loglik_trace[r] the
  // observed log-likelihood at iterate r (index 0 is the initial point).
  std::vector<LossRates> theta_trace;
  std::vector<double> loglik_trace;

  bool estimable(LinkIndex i) const { return !status[i].non_estimable; }
  bool all_ok() const;
};

// ---------------------------------------------------------------------------
// Brother-set fixed point

class UniqueRootUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// pi = prod_{j in B} [(1 - r_j) + r_j * pi] for one brother set B.
struct BrotherSetProblem {
  std::vector<double> r;

  /// 0 < r_j < 1 for all j and sum_j r_j > 1.
  bool uniquely_solvable() const;
};

/// The root in (0,1). Closed form for two brothers, safeguarded Newton
/// otherwise. Throws UniqueRootUnavailable when uniquely_solvable() is false.
double solve_brother_fixed_point(const BrotherSetProblem& problem,
                                 double tol = tol::kBrotherSolve);

// ---------------------------------------------------------------------------
// Estimators

struct LeXiOptions {
  int threads = 0;  // 0: OpenMP default
};

/// Likelihood-equation estimator in the xi parametrization. Every brother set
/// is solved independently from its own ratios r_j; the solves run as an
/// OpenMP parallel loop and the result does not depend on the schedule.
EstimateResult le_xi(const SufficientStats& stats, const GeneralNetwork& net,
                     const LeXiOptions& options = {});

struct EmOptions {
  double init = tol::kEmInit;
  double tol = tol::kEmTol;
  int max_iter = tol::kEmMaxIter;
  bool record_trace = false;
};

/// E-step state of the pattern-collapsed EM.
struct EmWorkspace {
  std::vector<double> xi;  // xi_i(theta^(r))
  std::vector<double> p;   // P(pass i | loss event in T_i)
  std::vector<double> u;   // expected probes at node f_i with Y_i = 0
  std::vector<double> w1;  // expected passes of link i
  std::vector<double> w0;  // expected losses on link i

  explicit EmWorkspace(std::size_t m = 0) { resize(m); }
  void resize(std::size_t m);
};

/// One pattern-collapsed E-step followed by the M-step; O(m).
void pcem_step(const InternalView& view, const GeneralNetwork& net, const LossRates& theta,
               LossRates& next, EmWorkspace& ws);

/// Pattern-collapsed EM over internal views.
EstimateResult pcem(const SufficientStats& stats, const GeneralNetwork& net,
                    const EmOptions& options = {});

/// One naive E-step (enumerating every internal configuration per distinct
/// pattern) followed by the M-step.
void nem_step(const PatternTable& patterns, const GeneralNetwork& net, const LossRates& theta,
              LossRates& next);

/// Naive EM oracle. Refuses networks with more than tol::kNemMaxLinks links.
EstimateResult nem(const PatternTable& patterns, const GeneralNetwork& net,
                   const EmOptions& options = {});

/// Per-tree le_xi estimates combined by inverse observed-information
/// weights; probe-count weights when a variance is not finite.
EstimateResult mvwa(const PatternTable& patterns, const GeneralNetwork& net,
                    const LeXiOptions& options = {});

/// Coordinate-wise clamp of theta_hat into [0,1], flagging clamped links.
/// Non-estimable links come back as NaN.
EstimateResult project_to_theta_star(EstimateResult raw);

/// Runs the named method. MVWA and NEM work from the pattern table, the
/// others from its internal views.
EstimateResult estimate(Method method, const PatternTable& patterns, const GeneralNetwork& net,
                        const EmOptions& em = {}, const LeXiOptions& le = {});

namespace serial {

/// Reference single-threaded le_xi kept for cross-checking the parallel one.
EstimateResult le_xi(const SufficientStats& stats, const GeneralNetwork& net);

}  // namespace serial

/// Copy of theta with NaN entries replaced by a finite placeholder, for
/// evaluating likelihoods where those links carry no data.
LossRates evaluation_point(const LossRates& theta);

}  // namespace losstomo
