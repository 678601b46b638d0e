#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "losstomo/topology.hpp"

namespace losstomo {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Per-link real vector indexed by LinkIndex. The tag keeps the three
/// parameter systems from being mixed up at compile time.
template <typename Tag>
struct LinkVector {
  std::vector<double> values;

  LinkVector() = default;
  explicit LinkVector(std::size_t m, double fill = 0.0) : values(m, fill) {}
  explicit LinkVector(std::vector<double> v) : values(std::move(v)) {}
  LinkVector(std::initializer_list<double> v) : values(v) {}

  std::size_t size() const { return values.size(); }
  double& operator[](LinkIndex i) { return values[i]; }
  double operator[](LinkIndex i) const { return values[i]; }

  bool operator==(const LinkVector&) const = default;
};

/// theta_i: probability a probe is lost on link i given it reached the
/// link's parent node.
using LossRates = LinkVector<struct ThetaTag>;
/// xi_i: probability a probe entering link i reaches no receiver of T_i.
using SubtreeLossRates = LinkVector<struct XiTag>;
/// psi_i: natural parameter of the exponential-family likelihood.
using NaturalParams = LinkVector<struct PsiTag>;

enum class Membership { interior, boundary, outside };

/// prod_{j in C_i} xi_j; defined as 0 for leaf links so that
/// xi_i = theta_i + (1 - theta_i) * children_product reduces to xi_i = theta_i.
double children_product(const SubtreeLossRates& xi, const GeneralNetwork& net, LinkIndex i);

SubtreeLossRates theta_to_xi(const LossRates& theta, const GeneralNetwork& net);

/// Inverse of theta_to_xi. Outside the image the violating links come back
/// with theta <= 0; use xi_membership to find them. Throws DomainError when a
/// child product equals 1.
LossRates xi_to_theta(const SubtreeLossRates& xi, const GeneralNetwork& net);

/// Throws DomainError if xi is not in the image of theta_to_xi.
NaturalParams xi_to_psi(const SubtreeLossRates& xi, const GeneralNetwork& net);

SubtreeLossRates psi_to_xi(const NaturalParams& psi, const GeneralNetwork& net);

/// Sign of xi_i - prod_{j in C_i} xi_j for non-leaf links (tolerance
/// tol::kMembership). Leaf links are interior when 0 < xi_i < 1.
std::vector<Membership> xi_membership(const SubtreeLossRates& xi, const GeneralNetwork& net);

}  // namespace losstomo
