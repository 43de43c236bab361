#include <doctest.h>

#include <cmath>
#include <random>

#include "cpflow/geometry.hpp"
#include "support/fixtures.hpp"

using namespace cpflow;
using namespace cpflow::test;

namespace {

struct Triple {
  double theta, ri, rj;
};

Triple random_triple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> th(0.05, kHalfPi);
  std::uniform_real_distribution<double> r(0.05, kHalfPi - 0.05);
  return {th(rng), r(rng), r(rng)};
}

}  // namespace

TEST_SUITE("coordinates") {
  TEST_CASE("u and r are inverse") {
    for (double r : {1e-6, 0.1, kQuarterPi, 1.2, kHalfPi - 1e-6}) CHECK(radius_from_u(u_from_radius(r)) == doctest::Approx(r).epsilon(1e-14));
    CHECK(u_from_radius(kQuarterPi) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(u_from_radius(0.0), Error);
    CHECK_THROWS_AS(u_from_radius(kHalfPi), Error);
  }

  TEST_CASE("trig from u keeps relative precision at the ends") {
    const auto big = CircleTrig::from_u(40.0);
    CHECK(big.sin == doctest::Approx(std::exp(-40.0)).epsilon(1e-14));
    const auto small = CircleTrig::from_u(-40.0);
    CHECK(small.cos == doctest::Approx(std::exp(-40.0)).epsilon(1e-14));
    const auto mid = CircleTrig::from_u(0.3);
    const double r = std::atan(std::exp(-0.3));
    CHECK(mid.sin == doctest::Approx(std::sin(r)).epsilon(1e-15));
    CHECK(mid.cos == doctest::Approx(std::cos(r)).epsilon(1e-15));
  }

  TEST_CASE("state validation") {
    PatternState s({0.0, std::nan("")});
    CHECK_THROWS_AS(s.validate(), Error);
    const auto uni = PatternState::uniform_radius(3, kQuarterPi);
    CHECK(uni.size() == 3);
    CHECK(uni.radius(2) == doctest::Approx(kQuarterPi));
  }
}

TEST_SUITE("edge kernels") {
  TEST_CASE("half angle at the symmetric quarter point") {
    CHECK(half_angle(kHalfPi, kQuarterPi, kQuarterPi) == doctest::Approx(kHalfAngleQuarter).epsilon(1e-14));
    CHECK(kHalfAngleQuarter == doctest::Approx(2 * std::atan(std::sqrt(2.0))).epsilon(1e-15));
  }

  TEST_CASE("half angle tends to pi/2 as both radii shrink") {
    CHECK(half_angle(kHalfPi, 1e-7, 1e-7) == doctest::Approx(kHalfPi).epsilon(1e-9));
  }

  TEST_CASE("swap gives the other half angle") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 50; ++k) {
      const auto t = random_triple(rng);
      const auto g = edge_geometry(t.theta, CircleTrig::from_radius(t.ri), CircleTrig::from_radius(t.rj));
      CHECK(half_angle(t.theta, t.rj, t.ri) == doctest::Approx(g.half_angle_j).epsilon(1e-13));
      CHECK(half_angle(t.theta, t.ri, t.rj) == doctest::Approx(half_angle_direct(t.theta, t.ri, t.rj)).epsilon(1e-12));
      CHECK(g.half_angle_i > 0.0);
      CHECK(g.half_angle_i < kPi);
    }
  }

  TEST_CASE("edge curvatures") {
    const auto c = edge_curvatures(kHalfPi, kQuarterPi, kQuarterPi);
    CHECK(c.t_i == doctest::Approx(kEdgeCurvatureQuarter).epsilon(1e-14));
    CHECK(c.t_j == doctest::Approx(kEdgeCurvatureQuarter).epsilon(1e-14));
    CHECK(c.t_i + c.t_j < kPi);
    const auto edge = edge_curvatures(kHalfPi, kHalfPi - 1e-9, kQuarterPi);
    CHECK(edge.t_i < 1e-8);
    CHECK(edge.t_i > 0.0);
  }

  TEST_CASE("lens area") {
    CHECK(lens_area(kHalfPi, kQuarterPi, kQuarterPi) == doctest::Approx(kLensAreaQuarter).epsilon(1e-14));
    CHECK(lens_area(kHalfPi, 1e-6, 1e-6) < 1e-10);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
      const auto t = random_triple(rng);
      const double a = lens_area(t.theta, t.ri, t.rj);
      const auto c = edge_curvatures(t.theta, t.ri, t.rj);
      CHECK(a >= 0.0);
      CHECK(std::abs(c.t_i + c.t_j + a - 2 * t.theta) < 1e-12);
    }
  }

  TEST_CASE("domain violations") {
    CHECK_THROWS_WITH_AS(half_angle(0.0, 0.5, 0.5), doctest::Contains("domain violation"), Error);
    CHECK_THROWS_AS(half_angle(kHalfPi + 0.1, 0.5, 0.5), Error);
    CHECK_THROWS_AS(edge_curvatures(1.0, 0.0, 0.5), Error);
    CHECK_THROWS_AS(lens_area(1.0, 0.5, kHalfPi), Error);
    CHECK_THROWS_AS(edge_jacobian(1.0, -0.1, 0.5), Error);
  }

  TEST_CASE("cross partial at the symmetric point is -2/3") {
    const auto p = edge_jacobian(kHalfPi, kQuarterPi, kQuarterPi);
    CHECK(p.dti_duj == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
    CHECK(p.dtj_dui == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
    const double fd = central_difference([](double x) { return edge_t_direct(kHalfPi, 0.0, x); }, 0.0, 1e-6);
    CHECK(std::abs(fd + 2.0 / 3.0) < 1e-6);
  }

  TEST_CASE("cross partial equals the closed form") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 100; ++k) {
      const auto t = random_triple(rng);
      const auto p = edge_jacobian(t.theta, t.ri, t.rj);
      const double hi = half_angle_direct(t.theta, t.ri, t.rj), hj = half_angle_direct(t.theta, t.rj, t.ri);
      const double closed =
          -2 * std::cos(t.ri) * std::cos(t.rj) * std::sin(hi / 2) * std::sin(hj / 2) / std::sin(t.theta);
      CHECK(p.dti_duj == doctest::Approx(closed).epsilon(1e-11));
    }
  }

  TEST_CASE("frozen diagonal and pair-sum values") {
    const double ri = std::atan(std::exp(-0.3)), rj = std::atan(std::exp(0.4));
    const auto p = edge_jacobian(1.1, ri, rj);
    CHECK(p.dti_dui == doctest::Approx(0.62472263355).epsilon(1e-10));
    CHECK(p.dti_dui + p.dtj_dui == doctest::Approx(0.20975525568).epsilon(1e-10));
    const double hi = half_angle_direct(1.1, ri, rj);
    CHECK(p.dti_dui + p.dtj_dui ==
          doctest::Approx(std::sin(ri) * std::sin(ri) * std::cos(ri) * (hi - std::sin(hi))).epsilon(1e-12));
  }

  TEST_CASE("partials: finite differences, symmetry, signs, law of sines") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 100; ++k) {
      const auto t = random_triple(rng);
      const double ui = u_from_radius(t.ri), uj = u_from_radius(t.rj);
      const auto p = edge_jacobian(t.theta, t.ri, t.rj);
      auto ti = [&](double a, double b) { return edge_t_direct(t.theta, a, b); };
      auto tj = [&](double a, double b) { return edge_t_direct(t.theta, b, a); };
      constexpr double h = 1e-6;
      CHECK(std::abs(p.dti_dui - central_difference([&](double x) { return ti(x, uj); }, ui, h)) < 1e-6);
      CHECK(std::abs(p.dti_duj - central_difference([&](double x) { return ti(ui, x); }, uj, h)) < 1e-6);
      CHECK(std::abs(p.dtj_dui - central_difference([&](double x) { return tj(x, uj); }, ui, h)) < 1e-6);
      CHECK(std::abs(p.dtj_duj - central_difference([&](double x) { return tj(ui, x); }, uj, h)) < 1e-6);
      CHECK(std::abs(p.dti_duj - p.dtj_dui) < 1e-12);
      CHECK(p.dti_duj < 0.0);
      CHECK(p.dti_dui > 0.0);
      CHECK(p.dtj_duj > 0.0);
      CHECK(p.dti_dui + p.dtj_dui > 0.0);
      CHECK(p.dtj_duj + p.dti_duj > 0.0);

      const auto g = edge_geometry(t.theta, CircleTrig::from_radius(t.ri), CircleTrig::from_radius(t.rj));
      const double lhs = std::sin(g.half_angle_i / 2) / std::sin(t.rj);
      const double rhs = std::sin(g.half_angle_j / 2) / std::sin(t.ri);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
  }
}

TEST_SUITE("vertex geometry") {
  TEST_CASE("isolated vertex") {
    const auto c = isolated_vertex();
    const auto g = vertex_geometry(PatternState({0.0}), c, VertexId("v"));
    CHECK(g.alpha == 0.0);
    CHECK(g.T == 0.0);
    CHECK(g.k == doctest::Approx(1.0));
  }

  TEST_CASE("unknown vertex") {
    CHECK_THROWS_AS(vertex_geometry(PatternState({0.0}), isolated_vertex(), VertexId("w")), Error);
  }

  TEST_CASE("degree-six vertex at r = pi/4") {
    const auto ball = lattice_generator("triangular-disk", kHalfPi).extract(1);
    const auto s = PatternState::uniform_radius(ball.complex.vertex_count(), kQuarterPi);
    const auto g = vertex_geometry(s, ball.complex, 0);
    CHECK(g.T == doctest::Approx(kDegreeSixCurvature).epsilon(1e-14));
    CHECK(g.k == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.l == doctest::Approx(g.alpha * std::sin(kQuarterPi)));
  }

  TEST_CASE("alpha cos r equals the sum of edge terms, and T stays below 2 sum theta") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const auto c = random_complex(rng, 4 + trial % 9);
      const auto s = random_state(rng, c.vertex_count(), 3.0);
      const auto T = curvatures(s, c);
      for (std::size_t v = 0; v < c.vertex_count(); ++v) {
        const auto g = vertex_geometry(s, c, v);
        CHECK(std::abs(g.T - T[v]) <= 1e-12 * std::max(1.0, std::abs(T[v])));
        double direct = 0.0;
        for (std::size_t e : c.incident(v)) {
          const Edge& edge = c.edge(e);
          direct += edge_t_direct(edge.theta, s.u[v], s.u[edge.other(v)]);
        }
        CHECK(T[v] == doctest::Approx(direct).epsilon(1e-11));
        CHECK(T[v] > 0.0);
        CHECK(T[v] < 2 * c.theta_sum(v));
      }
    }
  }
}

TEST_SUITE("jacobian") {
  TEST_CASE("one edge symmetric") {
    const auto c = one_edge();
    const auto L = assemble_jacobian(PatternState({0.0, 0.0}), c);
    CHECK(L.size() == 2);
    CHECK(L(0, 1) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
    CHECK(L(1, 0) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
  }

  TEST_CASE("isolated vertex gives a 1x1 zero") {
    const auto L = assemble_jacobian(PatternState({0.7}), isolated_vertex());
    CHECK(L.size() == 1);
    CHECK(L(0, 0) == 0.0);
  }

  TEST_CASE("size mismatch") {
    CHECK_THROWS_AS(assemble_jacobian(PatternState({0.0}), one_edge()), Error);
    CHECK_THROWS_AS(curvatures(PatternState({0.0, 1.0, 2.0}), one_edge()), Error);
  }

  TEST_CASE("symmetric, diagonally dominant, and consistent with multiply") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const auto c = random_complex(rng, 3 + trial % 10);
      const auto s = random_state(rng, c.vertex_count());
      const auto L = assemble_jacobian(s, c);
      std::vector<double> ones(c.vertex_count(), 1.0);
      const auto y = L.multiply(ones);
      for (std::size_t i = 0; i < L.size(); ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < L.size(); ++j) {
          CHECK(std::abs(L(i, j) - L(j, i)) < 1e-12);
          if (j != i) off += std::abs(L(i, j));
        }
        // row sums are the pair-sum derivatives, so strictly positive for non-isolated vertices
        CHECK(L(i, i) > off);
        CHECK(y[i] > 0.0);
        CHECK(L.row_abs_sum(i) == doctest::Approx(L(i, i) + off));
      }
    }
  }
}
