#pragma once

// Numeric tolerances and defaults shared across the library. Every threshold
// used by estimators, transforms and tests lives here.

namespace losstomo::tol {

// Membership test for xi in the image of the theta -> xi map: sign of
// xi_i - prod_{j in C_i} xi_j compared against this margin.
inline constexpr double kMembership = 1e-12;

// Residual accepted by the brother-set fixed-point solver.
inline constexpr double kBrotherSolve = 1e-12;

// Upper bracket offset that keeps the solver away from the spurious root 1.
inline constexpr double kBrotherDelta = 1e-9;

// Iteration cap for the safeguarded Newton solver.
inline constexpr int kBrotherMaxIter = 200;

// EM defaults: initial loss rate, stopping rule on max|dtheta|, sweep cap.
inline constexpr double kEmInit = 0.03;
inline constexpr double kEmTol = 1e-6;
inline constexpr int kEmMaxIter = 10000;

// Largest network the naive EM oracle will enumerate.
inline constexpr int kNemMaxLinks = 20;

// Finite-difference steps.
inline constexpr double kGradStep = 1e-6;
inline constexpr double kHessStep = 1e-5;
inline constexpr int kStepHalvings = 40;

// Clamp for loss rates drawn from a Beta distribution.
inline constexpr double kSampleClamp = 1e-6;

}  // namespace losstomo::tol
