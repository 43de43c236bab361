#include "cpflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cpflow {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

void check_theta(double theta) {
  if (!std::isfinite(theta) || !(theta > 0.0) || theta > kHalfPi)
    throw Error("domain violation: theta " + std::to_string(theta) + " outside (0, pi/2]");
}

void check_radius(double r, const char* name) {
  if (!std::isfinite(r) || !(r > 0.0) || !(r < kHalfPi))
    throw Error(std::string("domain violation: ") + name + " = " + std::to_string(r) + " outside (0, pi/2)");
}

}  // namespace

double radius_from_u(double u) { return std::atan2(1.0, std::exp(u)); }

double u_from_radius(double r) {
  check_radius(r, "r");
  return std::log(std::cos(r) / std::sin(r));
}

CircleTrig CircleTrig::from_u(double u) {
  // cot r = e^u; pick the branch whose exponential cannot overflow.
  if (u >= 0.0) {
    const double t = std::exp(-u);
    const double h = std::hypot(1.0, t);
    return {t / h, 1.0 / h};
  }
  const double t = std::exp(u);
  const double h = std::hypot(1.0, t);
  return {1.0 / h, t / h};
}

CircleTrig CircleTrig::from_radius(double r) {
  check_radius(r, "r");
  return {std::sin(r), std::cos(r)};
}

PatternState PatternState::uniform_radius(std::size_t n, double r) {
  return PatternState(std::vector<double>(n, u_from_radius(r)));
}

PatternState PatternState::from_radii(std::span<const double> radii) {
  std::vector<double> u;
  u.reserve(radii.size());
  for (double r : radii) u.push_back(u_from_radius(r));
  return PatternState(std::move(u));
}

std::vector<double> PatternState::radii() const {
  std::vector<double> r;
  r.reserve(u.size());
  for (double x : u) r.push_back(radius_from_u(x));
  return r;
}

void PatternState::validate() const {
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!std::isfinite(u[i])) throw Error("non-finite u at vertex index " + std::to_string(i));
}

EdgeGeometry edge_geometry(double theta, CircleTrig ci, CircleTrig cj) {
  check_theta(theta);
  const double st = std::sin(theta);
  const double ct = std::cos(theta);

  // cot(Theta_i / 2) = N_i / D_i with both terms scaled by sin r_j.
  const double ni = cj.cos * ci.sin + cj.sin * ci.cos * ct;
  const double di = st * cj.sin;
  const double nj = ci.cos * cj.sin + ci.sin * cj.cos * ct;
  const double dj = st * ci.sin;
  const double qi = ni * ni + di * di;
  const double qj = nj * nj + dj * dj;

  EdgeGeometry g;
  g.half_angle_i = 2.0 * std::atan2(di, ni);
  g.half_angle_j = 2.0 * std::atan2(dj, nj);
  g.t_i = g.half_angle_i * ci.cos;
  g.t_j = g.half_angle_j * cj.cos;
  g.area = std::max(0.0, 2.0 * theta - g.t_i - g.t_j);

  // d Theta_i / d r_i from d cot(s)/ds = -1/sin^2(s); dr/du = -sin r cos r.
  const double dhi_dri = -2.0 * di * (cj.cos * ci.cos - cj.sin * ci.sin * ct) / qi;
  const double dhj_drj = -2.0 * dj * (ci.cos * cj.cos - ci.sin * cj.sin * ct) / qj;
  const double dri_dui = -ci.sin * ci.cos;
  const double drj_duj = -cj.sin * cj.cos;

  g.partials.dti_dui = (dhi_dri * ci.cos - g.half_angle_i * ci.sin) * dri_dui;
  g.partials.dtj_duj = (dhj_drj * cj.cos - g.half_angle_j * cj.sin) * drj_duj;

  // d Theta_i / d r_j = 2 sin(theta) sin r_i / q_i.
  const double cross = -2.0 * st * ci.sin * cj.sin * ci.cos * cj.cos;
  g.partials.dti_duj = cross / qi;
  g.partials.dtj_dui = cross / qj;
  return g;
}

double half_angle(double theta, double r_i, double r_j) {
  check_theta(theta);
  check_radius(r_i, "r_i");
  check_radius(r_j, "r_j");
  return edge_geometry(theta, CircleTrig::from_radius(r_i), CircleTrig::from_radius(r_j)).half_angle_i;
}

EdgeCurvatures edge_curvatures(double theta, double r_i, double r_j) {
  check_theta(theta);
  check_radius(r_i, "r_i");
  check_radius(r_j, "r_j");
  auto g = edge_geometry(theta, CircleTrig::from_radius(r_i), CircleTrig::from_radius(r_j));
  return {g.t_i, g.t_j};
}

double lens_area(double theta, double r_i, double r_j) {
  check_theta(theta);
  check_radius(r_i, "r_i");
  check_radius(r_j, "r_j");
  return edge_geometry(theta, CircleTrig::from_radius(r_i), CircleTrig::from_radius(r_j)).area;
}

EdgePartials edge_jacobian(double theta, double r_i, double r_j) {
  check_theta(theta);
  check_radius(r_i, "r_i");
  check_radius(r_j, "r_j");
  return edge_geometry(theta, CircleTrig::from_radius(r_i), CircleTrig::from_radius(r_j)).partials;
}

VertexGeometry vertex_geometry(const PatternState& state, const ComplexTopology& complex, std::size_t v) {
  if (state.size() != complex.vertex_count())
    throw Error("state has " + std::to_string(state.size()) + " entries, complex has " +
                std::to_string(complex.vertex_count()) + " vertices");
  if (v >= complex.vertex_count()) throw Error("unknown vertex index " + std::to_string(v));

  const CircleTrig cv = state.trig(v);
  VertexGeometry out;
  for (std::size_t e : complex.incident(v)) {
    const Edge& edge = complex.edge(e);
    const std::size_t w = edge.other(v);
    out.alpha += edge_geometry(edge.theta, cv, state.trig(w)).half_angle_i;
  }
  out.k = cv.cos / cv.sin;
  out.l = out.alpha * cv.sin;
  out.T = out.alpha * cv.cos;
  return out;
}

VertexGeometry vertex_geometry(const PatternState& state, const ComplexTopology& complex, const VertexId& v) {
  return vertex_geometry(state, complex, complex.index_of(v));
}

std::vector<double> curvatures(const PatternState& state, const ComplexTopology& complex) {
  if (state.size() != complex.vertex_count())
    throw Error("state has " + std::to_string(state.size()) + " entries, complex has " +
                std::to_string(complex.vertex_count()) + " vertices");
  std::vector<CircleTrig> trig(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) trig[i] = state.trig(i);
  std::vector<double> T(state.size(), 0.0);
  for (const Edge& e : complex.edges()) {
    auto g = edge_geometry(e.theta, trig[e.a], trig[e.b]);
    T[e.a] += g.t_i;
    T[e.b] += g.t_j;
  }
  return T;
}

// ---------------------------------------------------------------------------

CurvatureJacobian::CurvatureJacobian(std::vector<std::vector<Entry>> rows) {
  row_ptr_.reserve(rows.size() + 1);
  row_ptr_.push_back(0);
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    for (const Entry& e : row) {
      if (!entries_.empty() && entries_.size() > row_ptr_.back() && entries_.back().col == e.col)
        entries_.back().value += e.value;
      else
        entries_.push_back(e);
    }
    row_ptr_.push_back(entries_.size());
  }
}

std::span<const CurvatureJacobian::Entry> CurvatureJacobian::row(std::size_t i) const {
  return std::span<const Entry>(entries_).subspan(row_ptr_.at(i), row_ptr_.at(i + 1) - row_ptr_.at(i));
}

double CurvatureJacobian::operator()(std::size_t i, std::size_t j) const {
  auto r = row(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.col < c; });
  return (it != r.end() && it->col == j) ? it->value : 0.0;
}

double CurvatureJacobian::row_abs_sum(std::size_t i) const {
  double s = 0.0;
  for (const Entry& e : row(i)) s += std::abs(e.value);
  return s;
}

double CurvatureJacobian::max_row_abs_sum() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) m = std::max(m, row_abs_sum(i));
  return m;
}

std::vector<double> CurvatureJacobian::multiply(std::span<const double> x) const {
  if (x.size() != size()) throw Error("jacobian multiply: size mismatch");
  std::vector<double> y(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i)
    for (const Entry& e : row(i)) y[i] += e.value * x[e.col];
  return y;
}

CurvatureJacobian assemble_jacobian(const PatternState& state, const ComplexTopology& complex) {
  if (state.size() != complex.vertex_count())
    throw Error("state has " + std::to_string(state.size()) + " entries, complex has " +
                std::to_string(complex.vertex_count()) + " vertices");
  std::vector<CircleTrig> trig(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) trig[i] = state.trig(i);

  std::vector<std::vector<CurvatureJacobian::Entry>> rows(state.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].reserve(complex.degree(i) + 1);
    rows[i].push_back({i, 0.0});
  }
  for (const Edge& e : complex.edges()) {
    const auto p = edge_geometry(e.theta, trig[e.a], trig[e.b]).partials;
    rows[e.a].push_back({e.a, p.dti_dui});
    rows[e.a].push_back({e.b, p.dti_duj});
    rows[e.b].push_back({e.b, p.dtj_duj});
    rows[e.b].push_back({e.a, p.dtj_dui});
  }
  return CurvatureJacobian(std::move(rows));
}

}  // namespace cpflow
