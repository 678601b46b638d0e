#include <doctest.h>

#include <cmath>
#include <random>

#include "losstomo/estimators.hpp"

using namespace losstomo;

namespace {

double g(const std::vector<double>& r, double pi) {
  double prod = 1.0;
  for (double rj : r) prod *= (1 - rj) + rj * pi;
  return prod - pi;
}

// Plain bisection on [0, 1 - 1e-9]: g > 0 at 0 and g < 0 just below 1.
double bisect(const std::vector<double>& r) {
  double lo = 0.0, hi = 1.0 - 1e-9;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(r, mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("two brothers use the closed form") {
  double pi = solve_brother_fixed_point({{0.75, 0.75}});
  CHECK(std::abs(pi - 1.0 / 9) < 1e-15);
  CHECK(std::abs(g({0.75, 0.75}, pi)) < 1e-12);
}

TEST_CASE("three brothers match a bisection oracle") {
  std::vector<double> r{2.0 / 3, 2.0 / 3, 2.0 / 3};
  double pi = solve_brother_fixed_point({r});
  CHECK(std::abs(g(r, pi)) < 1e-12);
  CHECK(std::abs(pi - bisect(r)) < 1e-10);
  CHECK(pi > 0.0);
  CHECK(pi < 1.0);
}

TEST_CASE("random solvable sets") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(0.05, 0.99);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t size = 2 + rng() % 6;
    std::vector<double> r(size);
    do {
      for (auto& v : r) v = unif(rng);
    } while (r[0] + r[1] <= 1.0);
    BrotherSetProblem p{r};
    REQUIRE(p.uniquely_solvable());
    double pi = solve_brother_fixed_point(p);
    CHECK(std::abs(g(r, pi)) <= 1e-12);
    CHECK(pi > 0.0);
    CHECK(pi < 1.0);
    CHECK(std::abs(pi - bisect(r)) < 1e-8);
  }
}

TEST_CASE("unsolvable sets are refused") {
  CHECK_FALSE(BrotherSetProblem{{0.4, 0.5}}.uniquely_solvable());
  CHECK_THROWS_AS(solve_brother_fixed_point({{0.4, 0.5}}), UniqueRootUnavailable);
  CHECK_THROWS_AS(solve_brother_fixed_point({{1.0, 0.5}}), UniqueRootUnavailable);
  CHECK_THROWS_AS(solve_brother_fixed_point({{0.0, 0.5, 0.9}}), UniqueRootUnavailable);
  CHECK_THROWS_AS(solve_brother_fixed_point({{0.3, 0.3, 0.4}}), UniqueRootUnavailable);
}
