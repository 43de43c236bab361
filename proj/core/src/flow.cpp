#include "cpflow/flow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace cpflow {

void TargetCurvature::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i])) throw Error("non-finite target curvature at vertex index " + std::to_string(i));
}

Integrator parse_integrator(const std::string& name) {
  if (name == "euler") return Integrator::euler;
  if (name == "rk4") return Integrator::rk4;
  if (name == "adaptive") return Integrator::adaptive;
  throw Error("unknown integrator '" + name + "' (expected euler, rk4 or adaptive)");
}

std::string to_string(Integrator method) {
  switch (method) {
    case Integrator::euler: return "euler";
    case Integrator::rk4: return "rk4";
    case Integrator::adaptive: return "adaptive";
  }
  return "unknown";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::horizon_reached: return "horizon_reached";
    case SolveStatus::guard_tripped: return "guard_tripped";
  }
  return "unknown";
}

void FlowConfig::validate() const {
  if (!(dt > 0.0)) throw Error("flow config: dt must be > 0");
  if (!(t_end > 0.0)) throw Error("flow config: t_end must be > 0");
  if (!(residual_tol > 0.0)) throw Error("flow config: residual_tol must be > 0");
  if (!(u_guard > 0.0)) throw Error("flow config: u_guard must be > 0");
  if (record_every == 0) throw Error("flow config: record_every must be >= 1");
}

namespace {

void check_coverage(const PatternState& state, const ComplexTopology& complex, const TargetCurvature& targets) {
  if (state.size() != complex.vertex_count())
    throw Error("state covers " + std::to_string(state.size()) + " vertices, complex has " +
                std::to_string(complex.vertex_count()));
  if (targets.size() != complex.vertex_count())
    throw Error("targets cover " + std::to_string(targets.size()) + " vertices, complex has " +
                std::to_string(complex.vertex_count()));
}

std::vector<bool> frozen_mask(std::size_t n, std::span<const std::size_t> frozen) {
  std::vector<bool> mask(n, false);
  for (std::size_t v : frozen) {
    if (v >= n) throw Error("frozen vertex index " + std::to_string(v) + " out of range");
    mask[v] = true;
  }
  return mask;
}

// du/dt with frozen entries zeroed.
std::vector<double> field(const PatternState& state, const ComplexTopology& complex, const TargetCurvature& targets,
                          const std::vector<bool>& frozen) {
  std::vector<double> f = residual(state, complex, targets);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) throw Error("non-finite flow field at vertex '" + complex.id(i).name + "'");
    f[i] = frozen[i] ? 0.0 : -f[i];
  }
  return f;
}

PatternState advance(const PatternState& s, const std::vector<double>& k, double h) {
  PatternState out = s;
  for (std::size_t i = 0; i < out.u.size(); ++i) out.u[i] += h * k[i];
  return out;
}

PatternState step_masked(const PatternState& state, const ComplexTopology& complex, const TargetCurvature& targets,
                         double dt, Integrator method, const std::vector<bool>& frozen) {
  if (!(dt > 0.0)) throw Error("step: dt must be > 0");
  if (method != Integrator::rk4) return advance(state, field(state, complex, targets, frozen), dt);

  const auto k1 = field(state, complex, targets, frozen);
  const auto k2 = field(advance(state, k1, dt / 2), complex, targets, frozen);
  const auto k3 = field(advance(state, k2, dt / 2), complex, targets, frozen);
  const auto k4 = field(advance(state, k3, dt), complex, targets, frozen);
  PatternState out = state;
  for (std::size_t i = 0; i < out.u.size(); ++i) {
    if (frozen[i]) continue;
    out.u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

double masked_norm(const std::vector<double>& r, const std::vector<bool>& frozen) {
  double m = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!frozen[i]) m = std::max(m, std::abs(r[i]));
  return m;
}

}  // namespace

std::vector<double> residual(const PatternState& state, const ComplexTopology& complex,
                             const TargetCurvature& targets) {
  check_coverage(state, complex, targets);
  std::vector<double> T = curvatures(state, complex);
  for (std::size_t i = 0; i < T.size(); ++i) T[i] -= targets[i];
  return T;
}

PatternState step(const PatternState& state, const ComplexTopology& complex, const TargetCurvature& targets,
                  double dt, Integrator method, std::span<const std::size_t> frozen) {
  check_coverage(state, complex, targets);
  return step_masked(state, complex, targets, dt, method, frozen_mask(state.size(), frozen));
}

double stable_step(const PatternState& state, const ComplexTopology& complex) {
  const double bound = assemble_jacobian(state, complex).max_row_abs_sum();
  return bound > 0.0 ? 0.5 / bound : std::numeric_limits<double>::infinity();
}

FlowResult integrate_finite(const ComplexTopology& complex, const TargetCurvature& targets,
                            const PatternState& init, std::span<const std::size_t> frozen,
                            const FlowConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  config.validate();
  check_coverage(init, complex, targets);
  init.validate();
  targets.validate();
  const std::vector<bool> mask = frozen_mask(init.size(), frozen);

  std::vector<double> stops = config.sample_times;
  std::sort(stops.begin(), stops.end());
  stops.erase(std::remove_if(stops.begin(), stops.end(), [&](double t) { return !(t > 0.0) || t > config.t_end; }),
              stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  std::size_t next_stop = 0;

  FlowResult out;
  out.report.solver = "flow/" + to_string(config.integrator);
  out.report.residual_tol = config.residual_tol;

  PatternState state = init;
  double t = 0.0;
  std::size_t steps = 0;
  std::vector<double> res = residual(state, complex, targets);
  double norm = masked_norm(res, mask);

  auto record = [&] {
    if (!out.trace.empty() && out.trace.back().time == t) return;
    out.trace.samples.push_back(TraceSample{t, state, res, norm});
  };
  auto guard_tripped = [&] {
    return std::any_of(state.u.begin(), state.u.end(), [&](double x) { return !(std::abs(x) <= config.u_guard); });
  };

  record();
  SolveStatus status = SolveStatus::horizon_reached;
  if (guard_tripped()) {
    status = SolveStatus::guard_tripped;
  } else if (config.stop_on_converge && norm <= config.residual_tol) {
    status = SolveStatus::converged;
  } else {
    // Relative slack so that accumulated round-off in t does not add a sliver step.
    const double t_eps = 1e-12 * config.t_end;
    while (t < config.t_end - t_eps) {
      double h = config.dt;
      if (config.integrator == Integrator::adaptive) h = std::min(h, stable_step(state, complex));
      bool at_stop = false;
      if (next_stop < stops.size() && t + h >= stops[next_stop] - t_eps) {
        h = stops[next_stop] - t;
        at_stop = true;
      }
      if (t + h >= config.t_end - t_eps) h = config.t_end - t;

      state = step_masked(state, complex, targets, h, config.integrator, mask);
      ++steps;
      if (at_stop) {
        t = stops[next_stop];
        while (next_stop < stops.size() && stops[next_stop] <= t + t_eps) ++next_stop;
      } else {
        t += h;
      }
      if (t >= config.t_end - t_eps) t = config.t_end;

      res = residual(state, complex, targets);
      norm = masked_norm(res, mask);

      if (guard_tripped()) {
        status = SolveStatus::guard_tripped;
        break;
      }
      if (config.stop_on_converge && norm <= config.residual_tol) {
        status = SolveStatus::converged;
        break;
      }
      if (at_stop || steps % config.record_every == 0) record();
    }
    if (status == SolveStatus::horizon_reached && norm <= config.residual_tol) status = SolveStatus::converged;
  }
  record();

  out.report.status = status;
  out.report.steps = steps;
  out.report.final_time = t;
  out.report.final_residual = norm;
  if (status == SolveStatus::guard_tripped) out.report.note = "|u| exceeded guard " + std::to_string(config.u_guard);
  out.final_state = std::move(state);
  out.report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace cpflow
