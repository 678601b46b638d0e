#include "losstomo/param_systems.hpp"

#include <cmath>
#include <ranges>
#include <string>

#include "losstomo/constants.hpp"

namespace losstomo {

double children_product(const SubtreeLossRates& xi, const GeneralNetwork& net, LinkIndex i) {
  auto kids = net.children(i);
  if (kids.empty()) return 0.0;
  double p = 1.0;
  for (LinkIndex j : kids) p *= xi[j];
  return p;
}

SubtreeLossRates theta_to_xi(const LossRates& theta, const GeneralNetwork& net) {
  SubtreeLossRates xi(net.size());
  for (LinkIndex i : net.topological_order() | std::views::reverse) {
    double below = children_product(xi, net, i);
    xi[i] = theta[i] + (1.0 - theta[i]) * below;
  }
  return xi;
}

LossRates xi_to_theta(const SubtreeLossRates& xi, const GeneralNetwork& net) {
  LossRates theta(net.size());
  for (LinkIndex i = 0; i < net.size(); ++i) {
    double below = children_product(xi, net, i);
    if (below >= 1.0)
      throw DomainError("child product is 1 below link " + std::to_string(net.link_id(i)));
    theta[i] = (xi[i] - below) / (1.0 - below);
  }
  return theta;
}

NaturalParams xi_to_psi(const SubtreeLossRates& xi, const GeneralNetwork& net) {
  NaturalParams psi(net.size());
  for (LinkIndex i = 0; i < net.size(); ++i) {
    double below = children_product(xi, net, i);
    double theta = (xi[i] - below) / (1.0 - below);
    // (xi - theta) / xi rewritten to avoid cancellation when theta is small
    double arg = net.is_leaf(i) ? (1.0 - theta) / xi[i]
                                : below * (1.0 - xi[i]) / (xi[i] * (1.0 - below));
    if (!(xi[i] > 0.0) || !(arg > 0.0) || !(theta > 0.0 || net.is_leaf(i)) || below >= 1.0)
      throw DomainError("xi outside its domain at link " + std::to_string(net.link_id(i)));
    psi[i] = std::log(arg);
  }
  return psi;
}

SubtreeLossRates psi_to_xi(const NaturalParams& psi, const GeneralNetwork& net) {
  SubtreeLossRates xi(net.size());
  for (LinkIndex i : net.topological_order() | std::views::reverse) {
    if (net.is_leaf(i)) {
      xi[i] = 1.0 / (1.0 + std::exp(psi[i]));
    } else {
      double below = children_product(xi, net, i);
      xi[i] = below / (below + std::exp(psi[i]) * (1.0 - below));
    }
  }
  return xi;
}

std::vector<Membership> xi_membership(const SubtreeLossRates& xi, const GeneralNetwork& net) {
  std::vector<Membership> out(net.size(), Membership::interior);
  for (LinkIndex i = 0; i < net.size(); ++i) {
    if (net.is_leaf(i)) {
      if (xi[i] <= 0.0 || xi[i] >= 1.0)
        out[i] = (xi[i] < 0.0 || xi[i] > 1.0) ? Membership::outside : Membership::boundary;
      continue;
    }
    double gap = xi[i] - children_product(xi, net, i);
    if (gap > tol::kMembership && xi[i] < 1.0)
      out[i] = Membership::interior;
    else if (std::abs(gap) <= tol::kMembership || xi[i] == 1.0)
      out[i] = Membership::boundary;
    else
      out[i] = Membership::outside;
  }
  return out;
}

}  // namespace losstomo
