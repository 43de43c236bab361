#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpflow/complex.hpp"
#include "cpflow/flow.hpp"
#include "cpflow/geometry.hpp"
#include "cpflow/variational.hpp"

namespace cpflow {

// ---------------------------------------------------------------------------
// Solvability conditions

enum class CheckMode { brute, sampled };

std::string to_string(CheckMode mode);

/// Largest complex the exhaustive subset check accepts.
inline constexpr std::size_t kBruteForceMaxVertices = 22;

/// A vertex subset U with slack 2 * sum_{e in E(U)} theta(e) - sum_{v in U} T_hat_v,
/// where E(U) holds the edges with at least one endpoint in U.
struct SubsetSlack {
  std::vector<std::size_t> vertices;
  double slack = 0.0;
};

double subset_slack(const ComplexTopology& complex, const TargetCurvature& targets,
                    std::span<const std::size_t> subset);

struct ConditionReport {
  CheckMode mode = CheckMode::brute;
  bool exhaustive = true;
  std::size_t subsets_checked = 0;

  bool s1_ok = true;
  std::optional<std::size_t> s1_violation;  ///< first vertex with T_hat <= 0

  bool s2_ok = true;
  /// On failure: the first violating subset (by size, then lexicographically).
  /// On success: the subset with the smallest slack among those checked.
  std::optional<SubsetSlack> s2_subset;

  bool s3_checked = false;
  bool s3_ok = true;
  std::optional<std::size_t> s3_violation;  ///< first vertex with T(r0) < T_hat

  bool all_ok() const { return s1_ok && s2_ok && (!s3_checked || s3_ok); }
};

struct SampledCheckOptions {
  std::size_t random_subsets = 4096;
  std::uint64_t seed = 0x5eed;
};

/// Brute mode enumerates all 2^|V| - 1 nonempty subsets and throws for
/// |V| > kBruteForceMaxVertices. Sampled mode checks all singletons, the full
/// set and random subsets; it is not exhaustive. S3 is evaluated only when a
/// state is supplied.
ConditionReport check_conditions(const ComplexTopology& complex, const TargetCurvature& targets,
                                 const PatternState* state0, CheckMode mode, SampledCheckOptions sampled = {});

// ---------------------------------------------------------------------------
// Trace diagnostics

struct CheckOutcome {
  bool applicable = true;
  bool ok = true;
  std::optional<std::size_t> sample;  ///< first offending trace sample
  std::optional<std::size_t> vertex;  ///< first offending vertex at that sample
  double worst = 0.0;                 ///< largest violation amount (0 when ok)
};

struct TraceDiagnostics {
  bool initial_dominance = false;  ///< T(0) >= T_hat everywhere
  CheckOutcome curvature_dominance;  ///< (a) T(t) >= T_hat - eps while initial_dominance
  CheckOutcome monotone_u;           ///< (b) u_i nonincreasing up to eps while initial_dominance
  CheckOutcome curvature_bound;      ///< (c) 0 < T_i < 2 sum theta for vertices of degree >= 1
  CheckOutcome field_bound;          ///< |du_i/dt| <= 2 sum theta + |T_hat_i|
  CheckOutcome linear_bound;         ///< |u_i(t)| <= |u_i(0)| + t (2 sum theta + |T_hat_i|)
  /// (d) residual infinity norm per sample and the fitted exponential decay rate.
  std::vector<double> residual_curve;
  std::optional<double> decay_rate;

  bool all_ok() const {
    return curvature_dominance.ok && monotone_u.ok && curvature_bound.ok && field_bound.ok && linear_bound.ok;
  }
};

/// Checks a flow trace against the a priori estimates and, when T(0) >= T_hat,
/// the monotonicity statements. `eps` absorbs integrator error.
TraceDiagnostics verify_trace(const FlowTrace& trace, const TargetCurvature& targets,
                              const ComplexTopology& complex, double eps);

// ---------------------------------------------------------------------------
// Finite-difference validation of the Jacobian

struct FdValidation {
  bool pass = false;
  double max_deviation = 0.0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  double step = 0.0;
  double tol = 0.0;
};

/// Compares assemble_jacobian with central differences of the residual.
/// Throws Error("step out of range") unless step lies in (0, 1e-3].
FdValidation fd_validate(const ComplexTopology& complex, const PatternState& state, double step, double tol);

// ---------------------------------------------------------------------------
// Maximum principle harness for df/dt = Delta_w f + g f

/// Finite truncation of a graph with time-dependent edge weights. Vertices in
/// `held` (the buffer ring) stay at zero.
struct MaxPrincipleSystem {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::function<double(std::size_t edge, double t)> weight;
  std::function<double(std::size_t vertex, double t)> zeroth_order;
  double weight_sum_bound = 0.0;  ///< C: sum_j w_ij(t) < C for every i, t
  double zeroth_order_bound = 0.0;  ///< C0: g <= C0
  std::vector<double> initial;  ///< f(0) <= 0
  std::vector<std::size_t> held;
  double horizon = 1.0;
};

struct MaxPrincipleReport {
  double max_value = 0.0;  ///< max over vertices and time steps of f
  bool sign_preserved = true;  ///< max_value <= sign_tolerance
  double sign_tolerance = 1e-8;
  std::size_t steps = 0;
  double max_weight_sum = 0.0;
  std::vector<double> final_values;
  /// max_i f_i after each step (index 0 is t = 0)
  std::vector<double> max_history;
};

/// Explicit Euler evolution. Throws Error naming the step and vertex if the
/// weight-sum bound or the bound on g is violated, or if the data break the
/// preconditions (f(0) > 0, negative weights).
MaxPrincipleReport max_principle_sim(const MaxPrincipleSystem& system, double dt);

// ---------------------------------------------------------------------------
// Cross-solver agreement

struct AgreementReport {
  bool comparable = false;
  SolveReport flow;
  SolveReport newton;
  double u_difference = 0.0;     ///< ||u_flow - u_newton||_inf
  double flow_residual = 0.0;    ///< ||T(u_flow) - T_hat||_inf
  double newton_residual = 0.0;  ///< ||T(u_newton) - T_hat||_inf
  PatternState flow_state;
  PatternState newton_state;
};

AgreementReport flow_vs_newton(const ComplexTopology& complex, const TargetCurvature& targets,
                               const PatternState& init, const FlowConfig& flow_config = {},
                               const NewtonConfig& newton_config = {});

}  // namespace cpflow
