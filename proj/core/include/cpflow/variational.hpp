#pragma once

#include <cstddef>

#include "cpflow/complex.hpp"
#include "cpflow/flow.hpp"
#include "cpflow/geometry.hpp"

namespace cpflow {

/// Line integral of the closed edge form T_(e,v_i) du_i + T_(e,v_j) du_j from
/// (ui0, uj0) to (ui, uj): first along u_i with u_j = uj0, then along u_j.
double edge_potential(double theta, double ui, double uj, double ui0, double uj0);

/// Potential value normalized so that the potential vanishes at `base`.
struct PotentialValue {
  double value = 0.0;
  PatternState base;
};

/// sum_e E_e(u_i, u_j) - sum_v T_hat_v u_v on a finite complex, relative to `base`.
/// The gradient is T - T_hat and the Hessian is the curvature Jacobian.
PotentialValue total_potential(const PatternState& state, const ComplexTopology& complex,
                               const TargetCurvature& targets, const PatternState& base);

struct NewtonConfig {
  double tol = 1e-10;  ///< infinity norm of T - T_hat
  std::size_t max_iter = 100;
  double backtrack = 0.5;
  double sufficient_decrease = 1e-4;
  std::size_t max_backtracks = 60;
};

struct NewtonResult {
  PatternState state;
  SolveReport report;
  /// One sample per iterate; the sample time is the iteration count.
  FlowTrace trace;
  std::size_t gradient_fallbacks = 0;
};

/// Damped Newton descent on the potential with Armijo backtracking. When the
/// Jacobian factorization fails or does not give a descent direction, the
/// iteration falls back to a gradient step.
NewtonResult newton_solve(const ComplexTopology& complex, const TargetCurvature& targets, const PatternState& init,
                          const NewtonConfig& config = {});

}  // namespace cpflow
