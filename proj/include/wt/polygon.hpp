#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "wt/toeplitz.hpp"

namespace wt {

/// Reduced fraction num/den with den > 0, compared exactly.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Fraction& x, const Fraction& y) { return x.num * y.den == y.num * x.den; }
  friend std::strong_ordering operator<=>(const Fraction& x, const Fraction& y) {
    return x.num * y.den <=> y.num * x.den;
  }
};

/// All reduced m/n in [0, 1] with n <= q, strictly increasing.
std::vector<Fraction> farey_slopes(int q);

struct Vec2 {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
  friend auto operator<=>(const Vec2&, const Vec2&) = default;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(std::int64_t s, Vec2 v) { return {s * v.x, s * v.y}; }
};

inline std::int64_t cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline std::int64_t norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }

/// Lattice walk j_0 = 0, j_k = j_{k-1} + tau_k.
struct LatticeWalk {
  int q = 1;
  std::vector<Vec2> vertices;
  std::vector<Vec2> steps;
};

/// Steps tau_k = s_k (1, lambda_k) over the Farey slopes of order q, with s_k
/// the smallest integer >= q making s_k lambda_k integral.
LatticeWalk build_walk(int q);

/// Convex lattice polygon, vertices counterclockwise with no collinear triples.
struct LatticePolygon {
  int q = 0;
  std::vector<Vec2> vertices;
};

/// Validates convexity and orientation; throws invalid_input otherwise.
LatticePolygon make_polygon(std::vector<Vec2> vertices, int q = 0);

/// Convex hull with collinear boundary points dropped (monotone chain).
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Shifts the walk so it starts on the vertical axis and ends on the
/// anti-diagonal, mirrors it across the anti-diagonal, closes it by the two
/// axis reflections and returns the convex hull.
LatticePolygon complete_polygon(const LatticeWalk& walk);

/// Closed walk points in the quadrant x >= 0, y <= 0 before the axis
/// reflections: j^_0 .. j^_{2K}.
std::vector<Vec2> octant_walk(const LatticeWalk& walk);

struct KsWitness {
  Vec2 vertex;
  Vec2 lattice_point;
};

struct KsReport {
  bool cond_i = false;
  bool cond_ii = false;
  double inradius = 0.0;
  std::vector<KsWitness> witnesses;
  /// Vertex-cone checks cover the edge and interior cases by the half-space
  /// argument; universal quantification over all of R^2 is not checked directly.
  std::string derivation;
};

/// Condition (ii): the open ball B(0, R) lies in the polygon (exact integer
/// half-plane tests, real R). Condition (i) via vertex cones: for every vertex
/// x, the two open side cones bounded by the incident edge lines contain no
/// lattice point of B(x, 2r).
KsReport verify_ks_conditions(const LatticePolygon& polygon, double r, double big_r);

/// Distance from the origin to the nearest edge line (negative when outside).
double inradius(const LatticePolygon& polygon);

/// Lattice points of scale * polygon including the boundary, lexicographic.
IndexSet polygon_lattice_points(const LatticePolygon& polygon, int scale);

/// True when the vertex set is invariant under both coordinate mirrors.
bool mirror_symmetric(const LatticePolygon& polygon);

}  // namespace wt
