#include <doctest.h>

#include <cmath>
#include <random>

#include "losstomo/estimators.hpp"
#include "losstomo/likelihood.hpp"
#include "losstomo/simulator.hpp"
#include "test_support.hpp"

using namespace losstomo;
using losstomo::testing::load_net;
using losstomo::testing::single_tree_table;

namespace {

EstimateResult run(const GeneralNetwork& net,
                   std::vector<std::pair<std::string, std::uint64_t>> counts) {
  return le_xi(internal_views(single_tree_table(net, std::move(counts)), net), net);
}

}  // namespace

TEST_CASE("three-link star closed form") {
  auto net = load_net("star3.topo");
  auto est = run(net, {{"11", 2}, {"10", 1}, {"01", 1}, {"00", 1}});
  CHECK(std::abs(est.xi_hat[0] - 0.2) < 1e-12);
  CHECK(std::abs(est.xi_hat[1] - 1.0 / 3) < 1e-12);
  CHECK(std::abs(est.theta_hat[0] - 0.1) < 1e-12);
  CHECK(std::abs(est.theta_hat[1] - 1.0 / 3) < 1e-12);
  CHECK(std::abs(est.theta_hat[2] - 1.0 / 3) < 1e-12);
  CHECK(est.all_ok());
  CHECK(std::abs(est.loglik - (2 * std::log(0.4) + 3 * std::log(0.2))) < 1e-12);

  // The fitted model reproduces the empirical pattern frequencies.
  for (auto [x, f] : std::vector<std::pair<const char*, double>>{
           {"11", 0.4}, {"10", 0.2}, {"01", 0.2}, {"00", 0.2}})
    CHECK(std::abs(std::exp(per_probe_loglik(x, 0, est.theta_hat, net)) - f) < 1e-12);
}

TEST_CASE("degenerate case: a brother never receives") {
  auto net = losstomo::testing::star(3);
  auto est = run(net, {{"110", 2}, {"100", 1}, {"010", 1}, {"000", 1}});
  CHECK(est.status[3].xi_one);
  CHECK(est.xi_hat[3] == 1.0);
  CHECK(est.theta_hat[3] == 1.0);
  CHECK(std::abs(est.theta_hat[0] - 0.1) < 1e-12);
  CHECK(std::abs(est.xi_hat[1] - 1.0 / 3) < 1e-12);
  CHECK(est.status[0].ok());
}

TEST_CASE("degenerate case: a link passes every arrival") {
  auto net = load_net("star3.topo");
  auto est = run(net, {{"11", 3}, {"10", 1}, {"00", 1}});
  CHECK(est.status[1].xi_zero);
  CHECK(est.xi_hat[1] == 0.0);
  CHECK(std::abs(est.theta_hat[0] - 0.2) < 1e-12);
  CHECK(est.theta_hat[1] == 0.0);
  CHECK(std::abs(est.theta_hat[2] - 0.25) < 1e-12);
  CHECK_FALSE(est.status[0].outside_xi);
}

TEST_CASE("degenerate case: brother counts add up to the parent's") {
  auto net = load_net("star3.topo");
  auto est = run(net, {{"10", 1}, {"01", 1}, {"00", 1}});
  CHECK(est.status[0].parent_lossless);
  CHECK(est.theta_hat[0] == 0.0);
  CHECK(std::abs(est.xi_hat[1] - 0.5) < 1e-12);
  CHECK(std::abs(est.xi_hat[2] - 0.5) < 1e-12);
  CHECK(est.status[1].regularity_violated);
}

TEST_CASE("degenerate case: estimate outside the xi domain") {
  auto net = load_net("star3.topo");
  auto est = run(net, {{"11", 1}, {"10", 1}, {"01", 1}, {"00", 1}});
  CHECK(std::abs(est.xi_hat[0] - 0.25) < 1e-12);
  CHECK(std::abs(est.xi_hat[1] * est.xi_hat[2] - 0.25) < 1e-12);
  CHECK(est.status[0].outside_xi);
  CHECK(est.status[0].boundary_projected);
  CHECK(est.theta_hat[0] == 0.0);
  CHECK(est.status[0].label() == "boundary_projected|outside_xi");
  CHECK(est.status[1].label() == "ok");
}

TEST_CASE("links below a dead link are not estimable") {
  auto net = load_net("toy7_tree.topo");
  // Nothing ever reaches 4 or 5: link 2 has n(1) = 0.
  auto est = run(net, {{"0011", 3}, {"0010", 1}, {"0000", 2}});
  CHECK(est.status[net.index_of(2)].xi_one);
  CHECK(est.status[net.index_of(4)].non_estimable);
  CHECK(std::isnan(est.theta_hat[net.index_of(4)]));
  CHECK(std::isnan(est.xi_hat[net.index_of(5)]));
  CHECK_FALSE(est.estimable(net.index_of(5)));
}

TEST_CASE("projection clamps and flags") {
  EstimateResult raw;
  raw.theta_hat = LossRates{-0.05, 0.3, 1.2};
  raw.xi_hat = SubtreeLossRates{0.1, 0.3, 1.0};
  raw.status.assign(3, {});
  auto p = project_to_theta_star(raw);
  CHECK(p.theta_hat[0] == 0.0);
  CHECK(p.status[0].boundary_projected);
  CHECK(p.theta_hat[1] == 0.3);
  CHECK(p.status[1].ok());
  CHECK(p.theta_hat[2] == 1.0);
  CHECK(p.status[2].boundary_projected);
}

TEST_CASE("shared brother set is solved from aggregated ratios") {
  auto net = load_net("shared4.topo");
  auto truth = LossRates{0.05, 0.1, 0.2, 0.15};
  auto data = simulate({200000, 9, 0, 0}, truth, net);
  auto stats = internal_views(data, net);
  REQUIRE(stats.regularity.all_ok);
  auto est = le_xi(stats, net);
  const auto& v = stats.view;
  // Roots pass straight through.
  for (LinkId root : {1, 4}) {
    LinkIndex i = net.index_of(root);
    CHECK(std::abs(est.xi_hat[i] - (1 - v.ratio(i))) < 1e-15);
  }
  double pi = solve_brother_fixed_point({{v.ratio(net.index_of(2)), v.ratio(net.index_of(3))}});
  CHECK(std::abs(est.xi_hat[net.index_of(2)] -
                 ((1 - v.ratio(net.index_of(2))) + v.ratio(net.index_of(2)) * pi)) < 1e-15);
  for (LinkIndex i = 0; i < net.size(); ++i) CHECK(std::abs(est.theta_hat[i] - truth[i]) < 0.01);
}

TEST_CASE("gradient vanishes at an interior solution") {
  auto net = load_net("l5_two_tree.topo");
  std::mt19937_64 rng(2);
  auto truth = sample_theta(1, 20, net, rng);
  auto stats = internal_views(simulate({20000, 4, 0, 0}, truth, net), net);
  auto est = le_xi(stats, net);
  bool interior = true;
  for (const auto& s : est.status) interior = interior && s.ok();
  if (!interior) return;
  ScalarFn f = [&](std::span<const double> xi) {
    return loglik_xi(stats.view, SubtreeLossRates{std::vector<double>(xi.begin(), xi.end())}, net)
        .value;
  };
  double scale = 1.0 + std::abs(est.loglik);
  for (double gi : grad_fd(f, est.xi_hat.values)) CHECK(std::abs(gi) <= 1e-6 * scale);
}

TEST_CASE("parallel and serial solves are bit-identical") {
  auto net = load_net("l5_two_tree.topo");
  std::mt19937_64 rng(8);
  auto truth = sample_theta(1, 50, net, rng);
  auto stats = internal_views(simulate({5000, 1, 0, 0}, truth, net), net);
  auto ref = serial::le_xi(stats, net);
  for (int threads : {1, 2, 3, 8}) {
    auto est = le_xi(stats, net, {threads});
    for (LinkIndex i = 0; i < net.size(); ++i) {
      bool same = std::isnan(ref.theta_hat[i]) ? std::isnan(est.theta_hat[i])
                                                : est.theta_hat[i] == ref.theta_hat[i];
      CHECK(same);
      CHECK(est.status[i] == ref.status[i]);
    }
  }
}
