#include <cmath>
#include <numeric>

#include "losstomo/estimators.hpp"

namespace losstomo {

bool BrotherSetProblem::uniquely_solvable() const {
  double sum = 0.0;
  for (double v : r) {
    if (!(v > 0.0 && v < 1.0)) return false;
    sum += v;
  }
  return sum > 1.0;
}

namespace {

struct Eval {
  double h;      // prod - x
  double slope;  // dh/dx
};

Eval evaluate(const std::vector<double>& r, double x) {
  double prod = 1.0;
  double log_slope = 0.0;
  for (double c : r) {
    double term = (1.0 - c) + c * x;
    prod *= term;
    log_slope += c / term;
  }
  return {prod - x, prod * log_slope - 1.0};
}

}  // namespace

double solve_brother_fixed_point(const BrotherSetProblem& problem, double tol) {
  if (!problem.uniquely_solvable())
    throw UniqueRootUnavailable("brother set needs 0 < r_j < 1 and sum r_j > 1");
  const auto& r = problem.r;
  if (r.size() == 2) {
    // (x - 1)(r1 r2 x - (1 - r1)(1 - r2)) = 0
    return (1.0 - r[0]) * (1.0 - r[1]) / (r[0] * r[1]);
  }

  // h is convex on [0,1], positive at 0, zero at 1 and decreasing through the
  // interior root, so h > 0 left of the root and h < 0 between it and 1.
  double lo = 1.0;
  for (double c : r) lo *= 1.0 - c;
  double delta = tol::kBrotherDelta;
  double hi = 1.0 - delta;
  while (evaluate(r, hi).h >= 0.0) {
    delta *= 0.5;
    if (delta < 1e-15) throw UniqueRootUnavailable("root too close to 1 to separate");
    hi = 1.0 - delta;
  }

  double x = lo;
  for (int iter = 0; iter < tol::kBrotherMaxIter; ++iter) {
    Eval e = evaluate(r, x);
    if (std::abs(e.h) <= tol) return x;
    if (e.h > 0.0)
      lo = x;
    else
      hi = x;
    double next = e.slope != 0.0 ? x - e.h / e.slope : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) return x;
    x = next;
  }
  return x;
}

}  // namespace losstomo
