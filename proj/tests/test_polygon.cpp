#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "wt/error.hpp"
#include "wt/polygon.hpp"
#include "wt/toeplitz.hpp"

using namespace wt;

TEST_CASE("farey_slopes examples") {
  auto eq = [](const std::vector<Fraction>& got, std::vector<std::pair<long, long>> want) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].num == want[i].first);
      CHECK(got[i].den == want[i].second);
    }
  };
  eq(farey_slopes(1), {{0, 1}, {1, 1}});
  eq(farey_slopes(2), {{0, 1}, {1, 2}, {1, 1}});
  eq(farey_slopes(3), {{0, 1}, {1, 3}, {1, 2}, {2, 3}, {1, 1}});
  CHECK_THROWS_AS(farey_slopes(0), Error);
}

TEST_CASE("property: farey_slopes equals brute force for q <= 20") {
  for (int q = 1; q <= 20; ++q) {
    const auto got = farey_slopes(q);
    const auto want = oracle::farey(q);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].num == want[i].first);
      CHECK(got[i].den == want[i].second);
      if (i > 0) CHECK(got[i - 1] < got[i]);
    }
  }
}

TEST_CASE("build_walk examples") {
  auto steps = [](int q) {
    std::vector<std::pair<long, long>> s;
    for (const Vec2& v : build_walk(q).steps) s.push_back({v.x, v.y});
    return s;
  };
  CHECK(steps(3) == std::vector<std::pair<long, long>>{{3, 0}, {3, 1}, {4, 2}, {3, 2}, {3, 3}});
  CHECK(build_walk(3).vertices.back() == Vec2{16, 8});
  CHECK(steps(1) == std::vector<std::pair<long, long>>{{1, 0}, {1, 1}});
  CHECK(build_walk(1).vertices.back() == Vec2{2, 1});
  CHECK(steps(2) == std::vector<std::pair<long, long>>{{2, 0}, {2, 1}, {2, 2}});
  CHECK(build_walk(2).vertices.back() == Vec2{6, 3});
}

TEST_CASE("property: walk invariants") {
  for (int q = 1; q <= 12; ++q) {
    const auto w = build_walk(q);
    CHECK(w.vertices.front() == Vec2{0, 0});
    for (std::size_t k = 0; k < w.steps.size(); ++k) {
      CHECK(w.vertices[k + 1] == w.vertices[k] + w.steps[k]);
      CHECK(w.steps[k].x >= q);
      if (k > 0) CHECK(cross(w.steps[k - 1], w.steps[k]) > 0);  // slopes strictly increase
    }
  }
}

TEST_CASE("complete_polygon") {
  const auto w1 = build_walk(1);
  const auto hat = octant_walk(w1);
  REQUIRE(hat.size() == 5);
  CHECK(hat[0] == Vec2{0, -3});
  CHECK(hat[1] == Vec2{1, -3});
  CHECK(hat[2] == Vec2{2, -2});
  const auto p1 = complete_polygon(w1);
  const std::set<Vec2> verts(p1.vertices.begin(), p1.vertices.end());
  for (const Vec2& h : {hat[0], hat[1], hat[2]}) {
    for (const Vec2& r : {h, Vec2{-h.x, h.y}, Vec2{h.x, -h.y}, Vec2{-h.x, -h.y}}) {
      // Every generated point is a vertex or lies inside.
      bool inside = true;
      for (std::size_t i = 0; i < p1.vertices.size(); ++i) {
        const Vec2 a = p1.vertices[i], b = p1.vertices[(i + 1) % p1.vertices.size()];
        inside = inside && cross(b - a, r - a) >= 0;
      }
      CHECK(inside);
    }
  }
  CHECK(verts.count({1, -3}));
  CHECK_FALSE(verts.count({2, -2}));  // collinear with (1,-3) and (3,-1)

  for (int q = 1; q <= 6; ++q) {
    const auto p = complete_polygon(build_walk(q));
    CHECK(mirror_symmetric(p));
    const std::size_t n = p.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 e = p.vertices[(i + 1) % n] - p.vertices[i];
      CHECK(cross(e, p.vertices[(i + 2) % n] - p.vertices[(i + 1) % n]) > 0);
      // Edge slopes are 0, vertical, or +-m/n with n <= q (either orientation).
      const long ax = std::labs(e.x), ay = std::labs(e.y);
      const long g = std::gcd(ax, ay);
      CHECK((ax == 0 || ay == 0 || std::min(ax, ay) / g <= q || std::max(ax, ay) / g <= q));
      CHECK(std::min(ax / g, ay / g) <= q);
    }
  }
}

TEST_CASE("q = 3 polygon vertices (frozen from the construction oracle)") {
  const auto p = complete_polygon(build_walk(3));
  CHECK(p.vertices.size() == 32);
  const std::set<Vec2> verts(p.vertices.begin(), p.vertices.end());
  for (const Vec2 v : {Vec2{3, -24}, Vec2{6, -23}, Vec2{10, -21}, Vec2{13, -19}, Vec2{19, -13}}) CHECK(verts.count(v));
}

TEST_CASE("verify_ks_conditions") {
  const auto q3 = complete_polygon(build_walk(3));
  auto r = verify_ks_conditions(q3, 1.4, 2.0);
  CHECK(r.cond_i);
  CHECK(r.cond_ii);
  CHECK(r.witnesses.empty());

  const auto square = make_polygon({{-5, -5}, {5, -5}, {5, 5}, {-5, 5}});
  r = verify_ks_conditions(square, 2.0, 1.0);
  CHECK_FALSE(r.cond_i);
  REQUIRE_FALSE(r.witnesses.empty());
  const Vec2 c = r.witnesses.front().vertex;
  const Vec2 z = r.witnesses.front().lattice_point;
  CHECK(std::labs(c.x) == 5);
  CHECK(std::labs(c.y) == 5);
  CHECK(norm2(z - c) < 16);

  CHECK(verify_ks_conditions(square, 2.0, 0.1).cond_ii);
  CHECK(verify_ks_conditions(q3, 1.0, 0.1).cond_ii);
  CHECK_FALSE(verify_ks_conditions(square, 2.0, 5.5).cond_ii);
  CHECK_THROWS_AS(make_polygon({{0, 0}, {0, 1}, {1, 0}}), Error);  // clockwise
}

TEST_CASE("property: inradius grows with q") {
  double prev = 0.0;
  for (int q = 1; q <= 6; ++q) {
    const double r = inradius(complete_polygon(build_walk(q)));
    CHECK(r >= prev);
    prev = r;
  }
  CHECK(prev > 20.0);
}

TEST_CASE("polygon_lattice_points") {
  const auto unit = make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const auto s = polygon_lattice_points(unit, 2);
  CHECK(s.size() == 9);
  CHECK(s[0] == LatticePoint{0, 0});
  CHECK(s[1] == LatticePoint{0, 1});
  CHECK(s.provenance() == IndexSetKind::polygon);
  CHECK(polygon_lattice_points(make_polygon({{0, 0}, {2, 0}, {0, 2}}), 1).size() == 6);
  const auto q2 = complete_polygon(build_walk(2));
  CHECK(polygon_lattice_points(q2, 2).size() >= polygon_lattice_points(q2, 1).size());
}

TEST_CASE("property: finite sections over a KS polygon stay bounded") {
  // Nonvanishing symbol with zero winding along both axes.
  const ConvolutionVector a(2, {{{0, 0}, 4.0}, {{1, 0}, -1.0}, {{0, 1}, 1.0}, {{-1, 1}, 0.5}});
  const auto poly = complete_polygon(build_walk(1));
  double lo = 1e300, hi = 0.0;
  for (int s = 1; s <= 6; ++s) {
    const double v = inverse_norm_l1(build_section(a, polygon_lattice_points(poly, s)));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi <= 2.0 * lo);
  CHECK(hi < 1.0);
}
