#include <doctest.h>

#include <cmath>
#include <random>

#include "losstomo/param_systems.hpp"
#include "test_support.hpp"

using namespace losstomo;
using losstomo::testing::load_net;

TEST_CASE("toy tree with theta = 0.1 everywhere") {
  auto net = load_net("toy7_tree.topo");
  LossRates theta(7, 0.1);
  auto xi = theta_to_xi(theta, net);
  for (LinkId leaf : {4, 5, 6, 7}) CHECK(xi[net.index_of(leaf)] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(xi[net.index_of(2)] == doctest::Approx(0.109).epsilon(1e-14));
  CHECK(xi[net.index_of(3)] == doctest::Approx(0.109).epsilon(1e-14));
  CHECK(std::abs(xi[net.index_of(1)] - (0.1 + 0.9 * 0.109 * 0.109)) < 1e-15);
  CHECK(std::abs(xi[net.index_of(1)] - 0.1107) < 1e-4);

  auto psi = xi_to_psi(xi, net);
  CHECK(std::abs(psi[net.index_of(4)] - 2.1972) < 1e-4);
  CHECK(std::abs(psi[net.index_of(2)] - (-2.4941)) < 1e-4);
  CHECK(std::abs(psi[net.index_of(1)] - (-2.337)) < 1e-3);

  // Reported table values, rounded to four places, map back to xi.
  NaturalParams table_psi{-2.3366, -2.4941, -2.4941, 2.1972, 2.1972, 2.1972, 2.1972};
  auto back = psi_to_xi(table_psi, net);
  CHECK(std::abs(back[net.index_of(2)] - 0.109) < 1e-3);
  CHECK(std::abs(back[net.index_of(4)] - 0.1) < 1e-3);
  CHECK(std::abs(back[net.index_of(1)] - 0.1107) < 1e-3);

  for (auto m : xi_membership(xi, net)) CHECK(m == Membership::interior);
}

TEST_CASE("small closed-form transforms") {
  auto chain = losstomo::testing::chain(2);
  auto xi = theta_to_xi(LossRates{0.5, 0.5}, chain);
  CHECK(xi[1] == 0.5);
  CHECK(xi[0] == 0.75);

  auto star = losstomo::testing::star(2);
  auto sxi = theta_to_xi(LossRates{0.1, 1.0 / 3, 1.0 / 3}, star);
  CHECK(sxi[0] == doctest::Approx(0.2).epsilon(1e-14));
  auto theta = xi_to_theta(SubtreeLossRates{0.2, 1.0 / 3, 1.0 / 3}, star);
  CHECK(theta[0] == doctest::Approx((0.2 - 1.0 / 9) / (1 - 1.0 / 9)).epsilon(1e-14));
  CHECK(theta[0] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(theta[1] == 1.0 / 3);  // leaves pass through

  // Leaf logit symmetry point and inverse.
  auto psi = xi_to_psi(SubtreeLossRates{0.3, 0.5, 0.5}, star);
  CHECK(psi[1] == 0.0);
  auto leaf = psi_to_xi(NaturalParams{-1.0, std::log(9.0), 0.0}, star);
  CHECK(leaf[1] == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("boundary and outside classification") {
  auto star = losstomo::testing::star(2);
  SubtreeLossRates on_edge{0.25, 0.5, 0.5};
  CHECK(xi_membership(on_edge, star)[0] == Membership::boundary);
  CHECK(std::abs(xi_to_theta(on_edge, star)[0]) < 1e-15);

  SubtreeLossRates outside{0.05, 0.3, 0.3};
  CHECK(xi_membership(outside, star)[0] == Membership::outside);
  CHECK(xi_to_theta(outside, star)[0] < 0.0);
  CHECK_THROWS_AS(xi_to_psi(outside, star), DomainError);
}

TEST_CASE("non-leaf psi equals the simplified log-odds form") {
  auto net = load_net("toy7_tree.topo");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.01, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    LossRates theta(net.size());
    for (auto& v : theta.values) v = unif(rng);
    auto xi = theta_to_xi(theta, net);
    auto psi = xi_to_psi(xi, net);
    for (LinkIndex i = 0; i < net.size(); ++i) {
      if (net.is_leaf(i)) continue;
      double pc = children_product(xi, net, i);
      double alt = std::log(pc * (1 - xi[i]) / (xi[i] * (1 - pc)));
      CHECK(std::abs(psi[i] - alt) < 1e-12);
    }
  }
}

TEST_CASE("round trips on random interior points") {
  for (const char* name : {"toy7_tree.topo", "l5_two_tree.topo", "two_tree_12.topo"}) {
    auto net = load_net(name);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.01, 0.5);
    double worst_theta = 0.0, worst_xi = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      LossRates theta(net.size());
      for (auto& v : theta.values) v = unif(rng);
      auto xi = theta_to_xi(theta, net);
      auto back = xi_to_theta(xi, net);
      auto xi2 = psi_to_xi(xi_to_psi(xi, net), net);
      for (LinkIndex i = 0; i < net.size(); ++i) {
        worst_theta = std::max(worst_theta, std::abs(back[i] - theta[i]));
        worst_xi = std::max(worst_xi, std::abs(xi2[i] - xi[i]));
        if (net.is_leaf(i)) CHECK(xi[i] == theta[i]);
      }
    }
    CAPTURE(name);
    CHECK(worst_theta <= 1e-12);
    CHECK(worst_xi <= 1e-12);
  }
}

TEST_CASE("raising one loss rate raises xi of every ancestor") {
  auto net = load_net("toy7_tree.topo");
  LossRates theta(7, 0.1);
  auto base = theta_to_xi(theta, net);
  const auto& tree = net.trees()[0];
  for (LinkIndex i = 0; i < net.size(); ++i) {
    LossRates bumped = theta;
    bumped[i] += 0.05;
    auto xi = theta_to_xi(bumped, net);
    for (auto a = tree.parent(i); a; a = tree.parent(*a)) CHECK(xi[*a] > base[*a]);
  }
}
