#include "cpflow/variational.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>

namespace cpflow {

namespace {

constexpr double kQuadratureTol = 1e-12;
constexpr unsigned kQuadratureDepth = 15;

constexpr double kAbsoluteTol = 1e-13;

template <class F>
double integrate(F f, double a, double b) {
  if (a == b) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  const double lo = std::min(a, b), hi = std::max(a, b), sign = b < a ? -1.0 : 1.0;
  double err = 0.0;
  const double single = gauss_kronrod<double, 15>::integrate(f, lo, hi, 0, 0.0, &err);
  if (err <= kAbsoluteTol) return sign * single;
  return sign * gauss_kronrod<double, 15>::integrate(f, lo, hi, kQuadratureDepth, kQuadratureTol);
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double edge_potential(double theta, double ui, double uj, double ui0, double uj0) {
  const CircleTrig cj0 = CircleTrig::from_u(uj0);
  const double first = integrate(
      [&](double s) { return edge_geometry(theta, CircleTrig::from_u(s), cj0).t_i; }, ui0, ui);
  const CircleTrig ci = CircleTrig::from_u(ui);
  const double second = integrate(
      [&](double s) { return edge_geometry(theta, ci, CircleTrig::from_u(s)).t_j; }, uj0, uj);
  return first + second;
}

PotentialValue total_potential(const PatternState& state, const ComplexTopology& complex,
                               const TargetCurvature& targets, const PatternState& base) {
  const std::size_t n = complex.vertex_count();
  if (state.size() != n || base.size() != n || targets.size() != n)
    throw Error("total_potential: state, base and targets must cover all " + std::to_string(n) + " vertices");
  double value = 0.0;
  for (const Edge& e : complex.edges())
    value += edge_potential(e.theta, state.u[e.a], state.u[e.b], base.u[e.a], base.u[e.b]);
  for (std::size_t v = 0; v < n; ++v) value -= targets[v] * (state.u[v] - base.u[v]);
  return PotentialValue{value, base};
}

NewtonResult newton_solve(const ComplexTopology& complex, const TargetCurvature& targets, const PatternState& init,
                          const NewtonConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  if (!(config.tol > 0.0)) throw Error("newton: tol must be > 0");
  init.validate();
  targets.validate();
  const std::size_t n = complex.vertex_count();

  NewtonResult out;
  out.report.solver = "newton";
  out.report.residual_tol = config.tol;
  out.state = init;

  std::vector<double> g = residual(out.state, complex, targets);
  double norm = inf_norm(g);
  std::size_t iter = 0;
  SolveStatus status = SolveStatus::horizon_reached;

  auto record = [&] {
    out.trace.samples.push_back(TraceSample{static_cast<double>(iter), out.state, g, norm});
  };

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  while (true) {
    record();
    if (norm <= config.tol) {
      status = SolveStatus::converged;
      break;
    }
    if (iter >= config.max_iter) break;

    // Newton direction from L p = -g.
    std::vector<double> p(n);
    bool newton_ok = false;
    {
      const CurvatureJacobian jac = assemble_jacobian(out.state, complex);
      std::vector<Eigen::Triplet<double>> triplets;
      triplets.reserve(jac.nonzeros());
      for (std::size_t i = 0; i < n; ++i)
        for (const auto& e : jac.row(i))
          triplets.emplace_back(static_cast<int>(i), static_cast<int>(e.col), e.value);
      Eigen::SparseMatrix<double> hess(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      hess.setFromTriplets(triplets.begin(), triplets.end());
      ldlt.compute(hess);
      if (ldlt.info() == Eigen::Success) {
        const Eigen::VectorXd d = ldlt.vectorD();
        const double dmax = d.cwiseAbs().maxCoeff();
        const bool definite = dmax > 0.0 && (d.array() > 1e-14 * dmax).all();
        if (definite) {
          Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(n));
          Eigen::VectorXd sol = ldlt.solve(rhs);
          if (ldlt.info() == Eigen::Success && sol.allFinite()) {
            std::copy(sol.data(), sol.data() + n, p.begin());
            double slope = 0.0;
            for (std::size_t i = 0; i < n; ++i) slope += g[i] * p[i];
            newton_ok = slope < 0.0;
          }
        }
      }
    }
    if (!newton_ok) {
      for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
      ++out.gradient_fallbacks;
    }

    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += g[i] * p[i];

    // Armijo backtracking on the potential, measured from the current iterate.
    // Below the quadrature noise floor the decrease cannot be resolved; take the full step.
    double s = 1.0;
    PatternState trial = out.state;
    bool accepted = false;
    for (std::size_t k = 0; k <= config.max_backtracks; ++k) {
      for (std::size_t i = 0; i < n; ++i) trial.u[i] = out.state.u[i] + s * p[i];
      if (std::abs(slope) < 1e-13) {
        accepted = true;
        break;
      }
      const double drop = total_potential(trial, complex, targets, out.state).value;
      if (std::isfinite(drop) && drop <= config.sufficient_decrease * s * slope) {
        accepted = true;
        break;
      }
      s *= config.backtrack;
    }
    if (!accepted) {
      out.report.note = "line search failed";
      break;
    }

    out.state = std::move(trial);
    ++iter;
    g = residual(out.state, complex, targets);
    norm = inf_norm(g);
  }

  out.report.status = status;
  out.report.steps = iter;
  out.report.final_time = static_cast<double>(iter);
  out.report.final_residual = norm;
  if (out.gradient_fallbacks > 0) {
    if (!out.report.note.empty()) out.report.note += "; ";
    out.report.note += "singular or indefinite Hessian, " + std::to_string(out.gradient_fallbacks) +
                       " gradient fallback step(s)";
  }
  out.report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace cpflow
