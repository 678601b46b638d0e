#include "losstomo/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <ranges>

namespace losstomo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// coef * log(x) with 0 * log(0) = 0.
double xlogy(double coef, double x) {
  if (coef == 0.0) return 0.0;
  if (!(x > 0.0)) return kNegInf;
  return coef * std::log(x);
}

double as_double(std::uint64_t v) { return static_cast<double>(v); }

}  // namespace

LogLikValue loglik_theta(const InternalView& view, const LossRates& theta,
                         const GeneralNetwork& net) {
  SubtreeLossRates xi = theta_to_xi(theta, net);
  double sum = 0.0;
  for (LinkIndex i = 0; i < net.size(); ++i)
    sum += xlogy(as_double(view.n1[i]), 1.0 - theta[i]) + xlogy(as_double(view.n0[i]), xi[i]);
  return {sum, Parametrization::theta};
}

LogLikValue loglik_xi(const InternalView& view, const SubtreeLossRates& xi,
                      const GeneralNetwork& net) {
  double sum = 0.0;
  for (LinkIndex i = 0; i < net.size(); ++i) {
    double below = children_product(xi, net, i);
    sum += xlogy(as_double(view.n1[i]), (1.0 - xi[i]) / (1.0 - below)) +
           xlogy(as_double(view.n0[i]), xi[i]);
  }
  return {sum, Parametrization::xi};
}

LogLikValue loglik_psi(const InternalView& view, const NaturalParams& psi,
                       const GeneralNetwork& net) {
  SubtreeLossRates xi = psi_to_xi(psi, net);
  double sum = 0.0;
  for (std::size_t k = 0; k < net.trees().size(); ++k)
    sum += xlogy(as_double(view.tree_probes[k]), xi[net.trees()[k].root()]);
  for (LinkIndex i = 0; i < net.size(); ++i)
    if (view.n1[i] != 0) sum += as_double(view.n1[i]) * psi[i];
  return {sum, Parametrization::psi};
}

namespace {

double probe_loglik(std::string_view pattern, const MulticastTree& tree, const LossRates& theta,
                    const SubtreeLossRates& xi, const GeneralNetwork& net,
                    std::vector<unsigned char>& y) {
  for (LinkIndex i : tree.order() | std::views::reverse) {
    if (net.is_leaf(i)) {
      y[i] = pattern[static_cast<std::size_t>(tree.receiver_bit(i))] == '1';
    } else {
      unsigned char any = 0;
      for (LinkIndex c : net.children(i)) any |= y[c];
      y[i] = any;
    }
  }
  double sum = 0.0;
  for (LinkIndex i : tree.links()) {
    auto parent = tree.parent(i);
    bool parent_confirmed = !parent || y[*parent];
    if (y[i])
      sum += xlogy(1.0, 1.0 - theta[i]);
    else if (parent_confirmed)
      sum += xlogy(1.0, xi[i]);
  }
  return sum;
}

}  // namespace

double per_probe_loglik(std::string_view pattern, std::size_t k, const LossRates& theta,
                        const GeneralNetwork& net) {
  const auto& tree = net.trees()[k];
  if (pattern.size() != tree.receivers().size())
    throw DataError("pattern length does not match the tree's receivers");
  std::vector<unsigned char> y(net.size(), 0);
  return probe_loglik(pattern, tree, theta, theta_to_xi(theta, net), net, y);
}

double pattern_loglik(const PatternTable& patterns, const LossRates& theta,
                      const GeneralNetwork& net) {
  validate_patterns(patterns, net);
  SubtreeLossRates xi = theta_to_xi(theta, net);
  std::vector<unsigned char> y(net.size(), 0);
  double sum = 0.0;
  for (std::size_t k = 0; k < patterns.trees.size(); ++k)
    for (const auto& [bits, count] : patterns.trees[k].counts)
      sum += as_double(count) * probe_loglik(bits, net.trees()[k], theta, xi, net, y);
  return sum;
}

std::vector<double> grad_fd(const ScalarFn& f, std::span<const double> point, double step) {
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double h = step;
    const double x0 = x[i];
    for (int attempt = 0; attempt <= tol::kStepHalvings; ++attempt, h *= 0.5) {
      x[i] = x0 + h;
      double up = f(x);
      x[i] = x0 - h;
      double down = f(x);
      x[i] = x0;
      if (std::isfinite(up) && std::isfinite(down)) {
        grad[i] = (up - down) / (2.0 * h);
        break;
      }
      grad[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return grad;
}

InformationEstimate observed_information(const LossRates& theta, const InternalView& view,
                                         const GeneralNetwork& net, double step) {
  const std::size_t m = net.size();
  InformationEstimate out;
  out.information.assign(m, std::numeric_limits<double>::quiet_NaN());
  out.variance.assign(m, std::numeric_limits<double>::infinity());
  out.step_reduced.assign(m, false);
  const double center = loglik_theta(view, theta, net).value;
  LossRates probe = theta;
  for (LinkIndex i = 0; i < m; ++i) {
    const double t0 = theta[i];
    double h = step;
    int halvings = 0;
    while ((t0 - h <= 0.0 || t0 + h >= 1.0) && halvings < tol::kStepHalvings) {
      h *= 0.5;
      ++halvings;
    }
    out.step_reduced[i] = halvings > 0;
    if (t0 - h <= 0.0 || t0 + h >= 1.0 || !std::isfinite(center)) continue;
    probe[i] = t0 + h;
    double up = loglik_theta(view, probe, net).value;
    probe[i] = t0 - h;
    double down = loglik_theta(view, probe, net).value;
    probe[i] = t0;
    double info = -(up - 2.0 * center + down) / (h * h);
    out.information[i] = info;
    if (std::isfinite(info) && info > 0.0) out.variance[i] = 1.0 / info;
  }
  return out;
}

bool sufficiency_check(const PatternTable& a, const PatternTable& b, const GeneralNetwork& net,
                       int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.01, 0.5);
  double reference = 0.0;
  for (int t = 0; t < trials; ++t) {
    LossRates theta(net.size());
    for (auto& v : theta.values) v = unif(rng);
    double la = pattern_loglik(a, theta, net);
    double lb = pattern_loglik(b, theta, net);
    double diff = la - lb;
    if (t == 0) {
      reference = diff;
      continue;
    }
    double scale = 1.0 + std::max(std::abs(la), std::abs(lb));
    if (std::abs(diff - reference) > 1e-9 * scale) return false;
  }
  return true;
}

}  // namespace losstomo
