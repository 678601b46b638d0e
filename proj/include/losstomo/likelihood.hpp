#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "losstomo/constants.hpp"
#include "losstomo/param_systems.hpp"
#include "losstomo/statistics.hpp"

namespace losstomo {

enum class Parametrization { theta, xi, psi };

/// Natural-log likelihood value. Boundary points with a positive coefficient
/// on a log(0) term evaluate to -infinity rather than throwing.
struct LogLikValue {
  double value = 0.0;
  Parametrization param = Parametrization::theta;
};

/// sum_i n_i(1) log(1 - theta_i) + n_i(0) log xi_i(theta)
LogLikValue loglik_theta(const InternalView& view, const LossRates& theta,
                         const GeneralNetwork& net);

/// sum_i n_i(1) log((1 - xi_i) / (1 - prod_{C_i} xi)) + n_i(0) log xi_i
LogLikValue loglik_xi(const InternalView& view, const SubtreeLossRates& xi,
                      const GeneralNetwork& net);

/// sum_k n_k log xi_{S_k}(psi) + sum_i n_i(1) psi_i
LogLikValue loglik_psi(const InternalView& view, const NaturalParams& psi,
                       const GeneralNetwork& net);

/// log P(x | theta) for one receiver pattern of the tree at position k.
double per_probe_loglik(std::string_view pattern, std::size_t k, const LossRates& theta,
                        const GeneralNetwork& net);

/// sum_x n(x) per_probe_loglik(x) over every tree; the pattern-level route to
/// the same value loglik_theta gets from internal views.
double pattern_loglik(const PatternTable& patterns, const LossRates& theta,
                      const GeneralNetwork& net);

using ScalarFn = std::function<double(std::span<const double>)>;

/// Central-difference gradient. A coordinate whose probe points evaluate to a
/// non-finite value has its step halved until both sides are finite.
std::vector<double> grad_fd(const ScalarFn& f, std::span<const double> point,
                            double step = tol::kGradStep);

struct InformationEstimate {
  std::vector<double> information;  // -d2L/dtheta_i^2
  std::vector<double> variance;     // 1 / information, +inf when not positive
  std::vector<bool> step_reduced;   // step halved to stay inside (0,1)
};

/// Diagonal observed information of L(theta) by central second differences.
InformationEstimate observed_information(const LossRates& theta, const InternalView& view,
                                         const GeneralNetwork& net,
                                         double step = tol::kHessStep);

/// True if the two tables give the same log-likelihood function up to an
/// additive constant, judged at `trials` random interior theta.
bool sufficiency_check(const PatternTable& a, const PatternTable& b, const GeneralNetwork& net,
                       int trials = 100, std::uint64_t seed = 1);

}  // namespace losstomo
