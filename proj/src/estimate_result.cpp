#include <algorithm>
#include <cmath>
#include <limits>

#include "losstomo/estimators.hpp"

namespace losstomo {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::le_xi: return "le-xi";
    case Method::pcem: return "pcem";
    case Method::nem: return "nem";
    case Method::mvwa: return "mvwa";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::le_xi, Method::pcem, Method::nem, Method::mvwa})
    if (method_name(m) == name) return m;
  return std::nullopt;
}

std::string LinkStatus::label() const {
  std::string out;
  auto add = [&](bool set, const char* name) {
    if (!set) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(non_estimable, "non_estimable");
  add(boundary_projected, "boundary_projected");
  add(regularity_violated, "regularity_violated");
  add(xi_one, "xi_one");
  add(xi_zero, "xi_zero");
  add(parent_lossless, "parent_lossless");
  add(outside_xi, "outside_xi");
  return out.empty() ? "ok" : out;
}

LinkStatus& LinkStatus::operator|=(const LinkStatus& o) {
  boundary_projected |= o.boundary_projected;
  non_estimable |= o.non_estimable;
  regularity_violated |= o.regularity_violated;
  xi_one |= o.xi_one;
  xi_zero |= o.xi_zero;
  parent_lossless |= o.parent_lossless;
  outside_xi |= o.outside_xi;
  return *this;
}

bool EstimateResult::all_ok() const {
  return std::all_of(status.begin(), status.end(), [](const LinkStatus& s) { return s.ok(); });
}

EstimateResult project_to_theta_star(EstimateResult raw) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (LinkIndex i = 0; i < raw.theta_hat.size(); ++i) {
    if (raw.status[i].non_estimable) {
      raw.theta_hat[i] = nan;
      raw.xi_hat[i] = nan;
      continue;
    }
    double clamped = std::clamp(raw.theta_hat[i], 0.0, 1.0);
    if (clamped != raw.theta_hat[i]) {
      raw.theta_hat[i] = clamped;
      raw.status[i].boundary_projected = true;
    }
  }
  return raw;
}

LossRates evaluation_point(const LossRates& theta) {
  LossRates out = theta;
  for (double& v : out.values)
    if (std::isnan(v)) v = 0.5;
  return out;
}

EstimateResult estimate(Method method, const PatternTable& patterns, const GeneralNetwork& net,
                        const EmOptions& em, const LeXiOptions& le) {
  switch (method) {
    case Method::le_xi: return le_xi(internal_views(patterns, net), net, le);
    case Method::pcem: return pcem(internal_views(patterns, net), net, em);
    case Method::nem: return nem(patterns, net, em);
    case Method::mvwa: return mvwa(patterns, net, le);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace losstomo
