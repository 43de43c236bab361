#include <algorithm>
#include <cmath>

#include "cpflow/analysis.hpp"

namespace cpflow {

namespace {

void flag(CheckOutcome& out, std::size_t sample, std::size_t vertex, double amount) {
  if (out.ok) {
    out.ok = false;
    out.sample = sample;
    out.vertex = vertex;
  }
  out.worst = std::max(out.worst, amount);
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TraceDiagnostics verify_trace(const FlowTrace& trace, const TargetCurvature& targets,
                              const ComplexTopology& complex, double eps) {
  if (trace.empty()) throw Error("verify_trace: empty trace");
  const std::size_t n = complex.vertex_count();
  if (targets.size() != n) throw Error("verify_trace: targets do not cover the complex");

  std::vector<double> cap(n);  // 2 * sum of theta over incident edges
  for (std::size_t v = 0; v < n; ++v) cap[v] = 2.0 * complex.theta_sum(v);

  TraceDiagnostics d;
  const TraceSample& first = trace.front();
  if (first.state.size() != n || first.residual.size() != n)
    throw Error("verify_trace: trace does not match the complex");

  d.initial_dominance = std::all_of(first.residual.begin(), first.residual.end(), [&](double r) { return r >= -eps; });
  d.curvature_dominance.applicable = d.initial_dominance;
  d.monotone_u.applicable = d.initial_dominance;

  for (std::size_t s = 0; s < trace.size(); ++s) {
    const TraceSample& smp = trace.samples[s];
    if (smp.state.size() != n || smp.residual.size() != n)
      throw Error("verify_trace: sample " + std::to_string(s) + " does not match the complex");
    for (std::size_t i = 0; i < n; ++i) {
      const double T = smp.residual[i] + targets[i];
      const double field_cap = cap[i] + std::abs(targets[i]);

      if (d.initial_dominance && smp.residual[i] < -eps) flag(d.curvature_dominance, s, i, -smp.residual[i]);
      if (d.initial_dominance && s > 0) {
        const double rise = smp.state.u[i] - trace.samples[s - 1].state.u[i];
        if (rise > eps) flag(d.monotone_u, s, i, rise);
      }
      if (complex.degree(i) > 0) {
        if (!(T < cap[i])) flag(d.curvature_bound, s, i, T - cap[i]);
        if (!(T > 0.0)) flag(d.curvature_bound, s, i, -T);
      }
      if (std::abs(smp.residual[i]) > field_cap) flag(d.field_bound, s, i, std::abs(smp.residual[i]) - field_cap);
      const double u0 = first.state.u[i];
      const double lin = std::abs(u0) + (smp.time - first.time) * field_cap;
      const double excess = std::abs(smp.state.u[i]) - lin;
      if (excess > 1e-12 * (1.0 + lin)) flag(d.linear_bound, s, i, excess);
    }
    d.residual_curve.push_back(inf_norm(smp.residual));
  }

  // Least-squares fit of ln ||residual|| against time over the samples above round-off.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t s = 0; s < trace.size(); ++s) {
    const double r = d.residual_curve[s];
    if (!(r > 1e-14)) continue;
    const double x = trace.samples[s].time;
    const double y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom > 0.0) d.decay_rate = -(static_cast<double>(m) * sxy - sx * sy) / denom;
  }
  return d;
}

FdValidation fd_validate(const ComplexTopology& complex, const PatternState& state, double step, double tol) {
  if (!(step > 0.0) || step > 1e-3) throw Error("step out of range (0, 1e-3]");
  const std::size_t n = complex.vertex_count();
  const CurvatureJacobian jac = assemble_jacobian(state, complex);

  FdValidation out;
  out.step = step;
  out.tol = tol;
  PatternState probe = state;
  for (std::size_t j = 0; j < n; ++j) {
    probe.u[j] = state.u[j] + step;
    const std::vector<double> plus = curvatures(probe, complex);
    probe.u[j] = state.u[j] - step;
    const std::vector<double> minus = curvatures(probe, complex);
    probe.u[j] = state.u[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double fd = (plus[i] - minus[i]) / (2.0 * step);
      const double dev = std::abs(fd - jac(i, j));
      if (dev > out.max_deviation) {
        out.max_deviation = dev;
        out.worst_row = i;
        out.worst_col = j;
      }
    }
  }
  out.pass = out.max_deviation < tol;
  return out;
}

AgreementReport flow_vs_newton(const ComplexTopology& complex, const TargetCurvature& targets,
                               const PatternState& init, const FlowConfig& flow_config,
                               const NewtonConfig& newton_config) {
  AgreementReport out;
  const FlowResult flow = integrate_finite(complex, targets, init, {}, flow_config);
  const NewtonResult newton = newton_solve(complex, targets, init, newton_config);
  out.flow = flow.report;
  out.newton = newton.report;
  out.flow_state = flow.final_state;
  out.newton_state = newton.state;
  out.flow_residual = inf_norm(residual(flow.final_state, complex, targets));
  out.newton_residual = inf_norm(residual(newton.state, complex, targets));
  out.comparable = flow.report.converged() && newton.report.converged();
  if (out.comparable) {
    for (std::size_t i = 0; i < init.size(); ++i)
      out.u_difference = std::max(out.u_difference, std::abs(flow.final_state.u[i] - newton.state.u[i]));
  }
  return out;
}

}  // namespace cpflow
