#include <chrono>
#include <cmath>
#include <limits>

#include "losstomo/estimators.hpp"
#include "losstomo/likelihood.hpp"

namespace losstomo {

namespace {

struct TreeEstimate {
  GeneralNetwork net;
  EstimateResult result;
  std::vector<double> variance;
  double probes = 0.0;
};

}  // namespace

EstimateResult mvwa(const PatternTable& patterns, const GeneralNetwork& net,
                    const LeXiOptions& options) {
  auto start = std::chrono::steady_clock::now();
  validate_patterns(patterns, net);
  const std::size_t m = net.size();
  const std::size_t K = net.trees().size();

  std::vector<TreeEstimate> per_tree;
  per_tree.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    GeneralNetwork sub = net.subnetwork(k);
    auto stats = internal_views(tree_patterns(patterns, k), sub);
    EstimateResult est = le_xi(stats, sub, options);
    auto info = observed_information(evaluation_point(est.theta_hat), stats.view, sub);
    double probes = static_cast<double>(patterns.trees[k].probes);
    per_tree.push_back({std::move(sub), std::move(est), std::move(info.variance), probes});
  }

  EstimateResult result;
  result.method = Method::mvwa;
  result.theta_hat = LossRates(m, std::numeric_limits<double>::quiet_NaN());
  result.status.assign(m, {});
  for (LinkIndex i = 0; i < m; ++i) {
    std::vector<double> values, variances, probes;
    LinkStatus merged;
    for (std::size_t k : net.trees_of(i)) {
      const auto& te = per_tree[k];
      LinkIndex local = te.net.index_of(net.link_id(i));
      LinkStatus s = te.result.status[local];
      if (s.non_estimable) continue;
      merged |= s;
      values.push_back(te.result.theta_hat[local]);
      variances.push_back(te.variance[local]);
      probes.push_back(te.probes);
    }
    if (values.empty()) {
      result.status[i].non_estimable = true;
      continue;
    }
    bool finite = true;
    for (double v : variances) finite = finite && std::isfinite(v) && v > 0.0;
    double num = 0.0, den = 0.0;
    for (std::size_t a = 0; a < values.size(); ++a) {
      double w = finite ? 1.0 / variances[a] : probes[a];
      num += w * values[a];
      den += w;
    }
    result.theta_hat[i] = values.size() == 1 ? values[0] : num / den;
    result.status[i] = merged;
  }

  result.xi_hat = theta_to_xi(evaluation_point(result.theta_hat), net);
  result = project_to_theta_star(std::move(result));
  auto stats = internal_views(patterns, net);
  result.loglik = loglik_theta(stats.view, evaluation_point(result.theta_hat), net).value;
  result.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace losstomo
