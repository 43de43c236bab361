#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cpflow/complex.hpp"

namespace cpflow {

/// Radius r in (0, pi/2) from the log-cotangent coordinate u = ln cot r.
double radius_from_u(double u);
/// u = ln cot r; requires r in (0, pi/2).
double u_from_radius(double r);

/// Sine and cosine of a radius. Computing them from u directly keeps full
/// relative precision near both ends of (0, pi/2).
struct CircleTrig {
  double sin = 0.0;
  double cos = 0.0;

  static CircleTrig from_u(double u);
  static CircleTrig from_radius(double r);
};

/// Per-vertex log-cotangent radius coordinates.
struct PatternState {
  std::vector<double> u;

  PatternState() = default;
  explicit PatternState(std::vector<double> values) : u(std::move(values)) {}

  static PatternState uniform_radius(std::size_t n, double r);
  static PatternState from_radii(std::span<const double> radii);

  std::size_t size() const { return u.size(); }
  double radius(std::size_t i) const { return radius_from_u(u.at(i)); }
  std::vector<double> radii() const;
  CircleTrig trig(std::size_t i) const { return CircleTrig::from_u(u.at(i)); }

  /// Throws Error if any entry is non-finite.
  void validate() const;
};

/// Circle data at one vertex.
struct VertexGeometry {
  double alpha = 0.0;  ///< cone angle, sum of half angles over incident edges
  double k = 0.0;      ///< geodesic curvature cot r
  double l = 0.0;      ///< circumference alpha sin r
  double T = 0.0;      ///< total geodesic curvature alpha cos r
};

/// Partials of the two edge curvature contributions with respect to u.
struct EdgePartials {
  double dti_dui = 0.0;
  double dti_duj = 0.0;
  double dtj_dui = 0.0;
  double dtj_duj = 0.0;
};

/// Everything one edge contributes, evaluated at once.
struct EdgeGeometry {
  double half_angle_i = 0.0;  ///< Theta(e, v_i), angle of the edge quadrilateral at v_i
  double half_angle_j = 0.0;
  double t_i = 0.0;  ///< T_(e, v_i) = Theta(e, v_i) cos r_i
  double t_j = 0.0;
  double area = 0.0;  ///< lens area 2 theta - t_i - t_j
  EdgePartials partials;
};

// Scalar kernels. Radii must lie in (0, pi/2) and theta in (0, pi/2];
// otherwise Error("domain violation: ...") is thrown.

/// Angle at v_i of the edge quadrilateral, from the spherical cotangent
/// four-part formula cot(Theta_i/2) = (cot r_j sin r_i + cos r_i cos theta) / sin theta.
double half_angle(double theta, double r_i, double r_j);

struct EdgeCurvatures {
  double t_i = 0.0;
  double t_j = 0.0;
};
EdgeCurvatures edge_curvatures(double theta, double r_i, double r_j);
double lens_area(double theta, double r_i, double r_j);
EdgePartials edge_jacobian(double theta, double r_i, double r_j);

/// Full edge evaluation from trig pairs (no domain checks beyond theta).
EdgeGeometry edge_geometry(double theta, CircleTrig ci, CircleTrig cj);

VertexGeometry vertex_geometry(const PatternState& state, const ComplexTopology& complex, std::size_t v);
VertexGeometry vertex_geometry(const PatternState& state, const ComplexTopology& complex, const VertexId& v);

/// T_i for every vertex, accumulated edge by edge.
std::vector<double> curvatures(const PatternState& state, const ComplexTopology& complex);

/// Sparse symmetric matrix of dT_i/du_j in compressed-row form, columns sorted.
class CurvatureJacobian {
 public:
  struct Entry {
    std::size_t col;
    double value;
  };

  CurvatureJacobian() = default;
  explicit CurvatureJacobian(std::vector<std::vector<Entry>> rows);

  std::size_t size() const { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nonzeros() const { return entries_.size(); }
  std::span<const Entry> row(std::size_t i) const;
  /// Entry (i, j); zero outside the sparsity pattern.
  double operator()(std::size_t i, std::size_t j) const;
  double row_abs_sum(std::size_t i) const;
  double max_row_abs_sum() const;
  /// y = L x
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::vector<std::size_t> row_ptr_;
  std::vector<Entry> entries_;
};

CurvatureJacobian assemble_jacobian(const PatternState& state, const ComplexTopology& complex);

}  // namespace cpflow
