#pragma once

// Shared test fixtures and independent oracles. Nothing here calls into the
// library code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "cpflow/complex.hpp"
#include "cpflow/geometry.hpp"

namespace cpflow::test {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2;
inline constexpr double kQuarterPi = std::numbers::pi / 4;

// Frozen values from a 40-digit mpmath evaluation of the cotangent four-part formula.
inline constexpr double kHalfAngleQuarter = 1.9106332362490185563;  // 2 atan(sqrt 2)
inline constexpr double kEdgeCurvatureQuarter = 1.3510217177120799260;
inline constexpr double kLensAreaQuarter = 0.43954921816563338639;
inline constexpr double kDegreeSixCurvature = 8.1061303062724795562;
// Octahedron / triangular lattice uniform limit: 8 cos r arccot(cos r) = 4.
inline constexpr double kOctahedronRadius = 1.1274353433390711814;
inline constexpr double kOctahedronU = -0.74466588463364772574;

inline ComplexTopology one_edge(double theta = kHalfPi) {
  std::vector<EdgeSpec> e{{"a", "b", theta}};
  return build_complex({"a", "b"}, e);
}

inline ComplexTopology isolated_vertex() { return build_complex({"v"}, std::span<const EdgeSpec>{}); }

inline ComplexTopology octahedron(double theta = kHalfPi, bool with_faces = true) {
  // Poles 0 and 5, equator 1-2-3-4.
  std::vector<VertexId> v;
  for (int i = 0; i < 6; ++i) v.push_back(VertexId::from_integer(i));
  auto id = [](int i) { return VertexId::from_integer(i); };
  std::vector<EdgeSpec> e;
  for (int k = 1; k <= 4; ++k) {
    e.push_back({id(0), id(k), theta});
    e.push_back({id(5), id(k), theta});
    e.push_back({id(k), id(k % 4 + 1), theta});
  }
  std::optional<std::vector<std::vector<VertexId>>> faces;
  if (with_faces) {
    faces.emplace();
    for (int k = 1; k <= 4; ++k) {
      faces->push_back({id(0), id(k), id(k % 4 + 1)});
      faces->push_back({id(5), id(k % 4 + 1), id(k)});
    }
  }
  return build_complex(v, e, faces);
}

/// Connected random graph on n vertices: a random spanning tree plus extra edges.
inline ComplexTopology random_complex(std::mt19937_64& rng, std::size_t n, double extra_edge_prob = 0.35,
                                      double theta_min = 0.15) {
  std::uniform_real_distribution<double> theta(theta_min, kHalfPi);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<VertexId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(VertexId("v" + std::to_string(i)));
  std::set<std::pair<std::size_t, std::size_t>> used;
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    const std::size_t j = pick(rng);
    used.insert({j, i});
    edges.push_back({ids[j], ids[i], theta(rng)});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!used.contains({i, j}) && coin(rng) < extra_edge_prob) {
        used.insert({i, j});
        edges.push_back({ids[i], ids[j], theta(rng)});
      }
  return build_complex(ids, edges);
}

inline PatternState random_state(std::mt19937_64& rng, std::size_t n, double spread = 1.5) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return PatternState(std::move(x));
}

// ---------------------------------------------------------------------------
// Oracles

/// Bisection on a sign change of f over [a, b].
inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
  double fa = f(a);
  for (int k = 0; k < iters; ++k) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fa <= 0) == (fm <= 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Root of 8 cos r arccot(cos r) = 4 on (0, pi/2).
inline double octahedron_radius_oracle() {
  return bisect([](double r) { return 8.0 * std::cos(r) * std::atan(1.0 / std::cos(r)) - 4.0; }, 0.5, 1.5);
}

/// Half angle straight from cot(x/2) = (cot r_j sin r_i + cos r_i cos theta) / sin theta.
inline double half_angle_direct(double theta, double ri, double rj) {
  const double cot_half = (std::sin(ri) / std::tan(rj) + std::cos(ri) * std::cos(theta)) / std::sin(theta);
  return 2.0 * std::atan(1.0 / cot_half);
}

inline double edge_t_direct(double theta, double ui, double uj) {
  const double ri = std::atan(std::exp(-ui));
  const double rj = std::atan(std::exp(-uj));
  return half_angle_direct(theta, ri, rj) * std::cos(ri);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Composite Gauss-Legendre (5 nodes per panel) on [a, b].
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
  static constexpr double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                  0.9061798459386640};
  static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                  0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int k = 0; k < 5; ++k) s += w[k] * f(mid + 0.5 * h * x[k]);
  }
  return 0.5 * h * s;
}

/// Breadth-first ball size of an abstract neighbor function.
template <class Key, class Neighbors>
std::size_t bfs_ball_size(const Key& root, int n, Neighbors nbrs) {
  std::set<Key> seen{root};
  std::vector<Key> frontier{root};
  for (int d = 0; d < n; ++d) {
    std::vector<Key> next;
    for (const auto& v : frontier)
      for (const auto& w : nbrs(v))
        if (seen.insert(w).second) next.push_back(w);
    frontier = std::move(next);
  }
  return seen.size();
}

/// Naive (S2) enumeration: every nonempty subset, slack computed from the edge list.
struct NaiveS2 {
  bool ok = true;
  double min_slack = 0.0;
  std::uint64_t first_violator = 0;  // smallest size, then lexicographic
};

inline NaiveS2 naive_s2(const ComplexTopology& c, const std::vector<double>& targets) {
  const std::size_t n = c.vertex_count();
  NaiveS2 out;
  out.min_slack = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> masks;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
    if (__builtin_popcountll(a) != __builtin_popcountll(b)) return __builtin_popcountll(a) < __builtin_popcountll(b);
    // lexicographic on sorted member lists
    for (std::size_t i = 0; i < 64; ++i) {
      const bool ia = a >> i & 1, ib = b >> i & 1;
      if (ia != ib) return ia;
    }
    return false;
  });
  for (std::uint64_t m : masks) {
    double t = 0.0, th = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (m >> v & 1) t += targets[v];
    for (const Edge& e : c.edges())
      if ((m >> e.a & 1) || (m >> e.b & 1)) th += e.theta;
    const double slack = 2.0 * th - t;
    out.min_slack = std::min(out.min_slack, slack);
    if (slack <= 0.0 && out.ok) {
      out.ok = false;
      out.first_violator = m;
    }
  }
  return out;
}

}  // namespace cpflow::test
