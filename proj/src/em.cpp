#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "losstomo/estimators.hpp"
#include "losstomo/likelihood.hpp"

namespace losstomo {

void EmWorkspace::resize(std::size_t m) {
  xi.assign(m, 0.0);
  p.assign(m, 0.0);
  u.assign(m, 0.0);
  w1.assign(m, 0.0);
  w0.assign(m, 0.0);
}

void pcem_step(const InternalView& view, const GeneralNetwork& net, const LossRates& theta,
               LossRates& next, EmWorkspace& ws) {
  const auto order = net.topological_order();
  // xi(theta), leaf to root.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    LinkIndex i = *it;
    auto kids = net.children(i);
    double below = 0.0;
    if (!kids.empty()) {
      below = 1.0;
      for (LinkIndex c : kids) below *= ws.xi[c];
    }
    ws.xi[i] = theta[i] + (1.0 - theta[i]) * below;
  }
  // Expected pass/loss counts, root to leaf. Probes reaching the node below
  // F_i either confirm link i (n_i(1)) or fall into the loss event of T_i
  // (u_i), which passes link i with probability p_i.
  for (LinkIndex i : order) {
    const double n1 = static_cast<double>(view.n1[i]);
    double u;
    if (net.is_source(i)) {
      u = static_cast<double>(view.n0[i]);
    } else {
      double arrived = 0.0;
      for (LinkIndex f : net.parents(i)) arrived += ws.w1[f];
      u = arrived - n1;
    }
    double p = 0.0;
    if (!net.is_leaf(i) && ws.xi[i] > 0.0) p = (ws.xi[i] - theta[i]) / ws.xi[i];
    ws.u[i] = u;
    ws.p[i] = p;
    ws.w1[i] = n1 + u * p;
    ws.w0[i] = u * (1.0 - p);
  }
  for (LinkIndex i = 0; i < net.size(); ++i) {
    double total = ws.w0[i] + ws.w1[i];
    next[i] = total > 0.0 ? ws.w0[i] / total : theta[i];
  }
}

namespace {

// Expected pass/loss counts accumulated over every tree by brute-force
// enumeration of link states consistent with each distinct pattern.
void naive_expectations(const PatternTable& patterns, const GeneralNetwork& net,
                        const LossRates& theta, std::vector<double>& pass,
                        std::vector<double>& loss) {
  pass.assign(net.size(), 0.0);
  loss.assign(net.size(), 0.0);
  for (std::size_t k = 0; k < net.trees().size(); ++k) {
    const auto& tree = net.trees()[k];
    const auto order = tree.order();
    const std::size_t L = order.size();
    // Local position of each link's parent in `order`, -1 for the root.
    std::vector<int> parent_pos(L, -1);
    std::vector<int> bit_of(L, -1);
    for (std::size_t a = 0; a < L; ++a) {
      if (auto p = tree.parent(order[a]))
        for (std::size_t b = 0; b < a; ++b)
          if (order[b] == *p) parent_pos[a] = static_cast<int>(b);
      bit_of[a] = tree.receiver_bit(order[a]);
    }
    std::vector<double> cfg_pass(L), cfg_loss(L);
    for (const auto& [bits, count] : patterns.trees[k].counts) {
      std::fill(cfg_pass.begin(), cfg_pass.end(), 0.0);
      std::fill(cfg_loss.begin(), cfg_loss.end(), 0.0);
      double evidence = 0.0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << L); ++mask) {
        auto state = [&](int a) { return a < 0 ? true : ((mask >> a) & 1u) != 0; };
        bool valid = true;
        double weight = 1.0;
        for (std::size_t a = 0; a < L && valid; ++a) {
          bool here = state(static_cast<int>(a));
          bool above = state(parent_pos[a]);
          if (here && !above) valid = false;
          if (bit_of[a] >= 0 && here != (bits[static_cast<std::size_t>(bit_of[a])] == '1'))
            valid = false;
          if (above) weight *= here ? 1.0 - theta[order[a]] : theta[order[a]];
        }
        if (!valid) continue;
        evidence += weight;
        for (std::size_t a = 0; a < L; ++a) {
          if (!state(parent_pos[a])) continue;
          if (state(static_cast<int>(a)))
            cfg_pass[a] += weight;
          else
            cfg_loss[a] += weight;
        }
      }
      if (!(evidence > 0.0)) continue;
      const double scale = static_cast<double>(count) / evidence;
      for (std::size_t a = 0; a < L; ++a) {
        pass[order[a]] += scale * cfg_pass[a];
        loss[order[a]] += scale * cfg_loss[a];
      }
    }
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// Shared driver: iterate `step` from the constant initial point until the
// largest coordinate change is within tolerance.
template <typename Step>
EstimateResult run_em(Method method, const SufficientStats& stats, const GeneralNetwork& net,
                      const EmOptions& options, Step&& step) {
  auto start = std::chrono::steady_clock::now();
  const std::size_t m = net.size();
  EstimateResult result;
  result.method = method;
  LossRates theta(m, options.init);
  LossRates next(m);
  if (options.record_trace)
    result.loglik_trace.push_back(loglik_theta(stats.view, theta, net).value);
  result.converged = false;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    step(theta, next);
    double change = 0.0;
    for (LinkIndex i = 0; i < m; ++i) change = std::max(change, std::abs(next[i] - theta[i]));
    std::swap(theta, next);
    result.iterations = iter + 1;
    if (options.record_trace) {
      result.theta_trace.push_back(theta);
      result.loglik_trace.push_back(loglik_theta(stats.view, theta, net).value);
    }
    if (change <= options.tol) {
      result.converged = true;
      break;
    }
  }

  result.status.assign(m, {});
  for (LinkIndex i = 0; i < m; ++i) {
    result.status[i].regularity_violated = !stats.regularity.links[i].ok();
    if (stats.view.undefined(i)) result.status[i].non_estimable = true;
  }
  result.theta_hat = theta;
  result.xi_hat = theta_to_xi(theta, net);
  result = project_to_theta_star(std::move(result));
  result.loglik = loglik_theta(stats.view, evaluation_point(result.theta_hat), net).value;
  result.wall_ms = elapsed_ms(start);
  return result;
}

}  // namespace

EstimateResult pcem(const SufficientStats& stats, const GeneralNetwork& net,
                    const EmOptions& options) {
  EmWorkspace ws(net.size());
  return run_em(Method::pcem, stats, net, options, [&](const LossRates& theta, LossRates& next) {
    pcem_step(stats.view, net, theta, next, ws);
  });
}

void nem_step(const PatternTable& patterns, const GeneralNetwork& net, const LossRates& theta,
              LossRates& next) {
  std::vector<double> pass, loss;
  naive_expectations(patterns, net, theta, pass, loss);
  for (LinkIndex i = 0; i < net.size(); ++i) {
    double total = pass[i] + loss[i];
    next[i] = total > 0.0 ? loss[i] / total : theta[i];
  }
}

EstimateResult nem(const PatternTable& patterns, const GeneralNetwork& net,
                   const EmOptions& options) {
  if (net.size() > static_cast<std::size_t>(tol::kNemMaxLinks))
    throw std::invalid_argument("naive EM refuses networks with more than " +
                                std::to_string(tol::kNemMaxLinks) + " links");
  auto stats = internal_views(patterns, net);
  return run_em(Method::nem, stats, net, options, [&](const LossRates& theta, LossRates& next) {
    nem_step(patterns, net, theta, next);
  });
}

}  // namespace losstomo
