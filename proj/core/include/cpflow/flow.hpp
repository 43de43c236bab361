#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cpflow/complex.hpp"
#include "cpflow/geometry.hpp"

namespace cpflow {

/// Prescribed total geodesic curvature per vertex, index-aligned with a complex.
struct TargetCurvature {
  std::vector<double> values;

  TargetCurvature() = default;
  explicit TargetCurvature(std::vector<double> v) : values(std::move(v)) {}
  static TargetCurvature constant(std::size_t n, double value) {
    return TargetCurvature(std::vector<double>(n, value));
  }

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  /// Throws Error if any value is non-finite.
  void validate() const;
};

enum class Integrator { euler, rk4, adaptive };

Integrator parse_integrator(const std::string& name);
std::string to_string(Integrator method);

struct FlowConfig {
  Integrator integrator = Integrator::adaptive;
  double dt = 0.05;  ///< fixed step, or the upper bound on the step in adaptive mode
  double t_end = 1e4;
  double residual_tol = 1e-10;  ///< infinity-norm over non-frozen vertices
  double u_guard = 50.0;
  std::size_t record_every = 1;  ///< trace stride in steps
  /// Extra times at which the trace must hold a sample; steps are shortened to land on them.
  std::vector<double> sample_times;
  bool stop_on_converge = true;

  void validate() const;
};

struct TraceSample {
  double time = 0.0;
  PatternState state;
  std::vector<double> residual;  ///< T - T_hat at every vertex
  double residual_norm = 0.0;    ///< infinity norm over non-frozen vertices
};

struct FlowTrace {
  std::vector<TraceSample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  const TraceSample& front() const { return samples.front(); }
  const TraceSample& back() const { return samples.back(); }
};

enum class SolveStatus { converged, horizon_reached, guard_tripped };

std::string to_string(SolveStatus status);

struct SolveReport {
  std::string solver;
  SolveStatus status = SolveStatus::horizon_reached;
  std::size_t steps = 0;
  double final_time = 0.0;
  double final_residual = 0.0;
  double residual_tol = 0.0;
  double wall_time_s = 0.0;
  std::string note;

  bool converged() const { return status == SolveStatus::converged; }
};

struct FlowResult {
  FlowTrace trace;
  SolveReport report;
  PatternState final_state;
};

/// T_i - T_hat_i at every vertex.
std::vector<double> residual(const PatternState& state, const ComplexTopology& complex,
                             const TargetCurvature& targets);

/// One explicit step of du/dt = -(T - T_hat). Frozen vertices are copied through.
/// Adaptive mode takes an Euler step of the given size.
PatternState step(const PatternState& state, const ComplexTopology& complex, const TargetCurvature& targets,
                  double dt, Integrator method, std::span<const std::size_t> frozen = {});

/// Largest step satisfying dt * max_i sum_j |L_ij| <= 0.5 at `state`.
double stable_step(const PatternState& state, const ComplexTopology& complex);

/// Integrates the flow on a finite complex. Frozen vertices keep their initial
/// u bit-for-bit; convergence is measured on the others. Guard trips and
/// exhausted horizons are reported through SolveReport::status.
FlowResult integrate_finite(const ComplexTopology& complex, const TargetCurvature& targets,
                            const PatternState& init, std::span<const std::size_t> frozen,
                            const FlowConfig& config);

// ---------------------------------------------------------------------------
// Exhaustion by nested balls

using VertexRule = std::function<double(const VertexId&)>;

struct ExhaustionSettings {
  double tau = 5.0;
  std::vector<int> levels;  ///< ball radii n, ascending after normalization
  int window_radius = 0;
  std::size_t time_samples = 64;
  /// Integrator settings; t_end, sample_times and stop_on_converge are overridden.
  FlowConfig config;
  bool parallel = true;
};

struct LevelRun {
  int n = 0;
  ExtractedBall ball;
  FlowResult result;
  /// States at the uniform comparison times k tau / time_samples, k = 1..time_samples.
  std::vector<PatternState> samples;
};

struct LevelComparison {
  int n = 0;
  int n_next = 0;
  double sup_difference = 0.0;  ///< sup over window vertices and sample times of |u^[n] - u^[n+1]|
};

struct ExhaustionReport {
  std::vector<LevelRun> levels;
  std::vector<LevelComparison> comparisons;
  std::vector<double> sample_times;
  std::vector<VertexId> window;
  /// Window state at tau, geometrically extrapolated from the last levels when
  /// the differences contract, otherwise the finest level's values.
  std::vector<double> window_state;
  bool extrapolated = false;
};

ExhaustionReport solve_exhaustion(const InfiniteComplexGenerator& gen, const VertexRule& targets_rule,
                                  const VertexRule& init_rule, const ExhaustionSettings& settings);

}  // namespace cpflow
