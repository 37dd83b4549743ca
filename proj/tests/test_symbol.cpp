#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wt/error.hpp"
#include "wt/symbol.hpp"

using namespace wt;

namespace {

ConvolutionVector v1(std::initializer_list<std::pair<int, double>> e) {
  std::map<LatticePoint, double> m;
  for (auto [k, c] : e) m[LatticePoint{k}] = c;
  return ConvolutionVector(1, m);
}

ConvolutionVector douglas_howe() {
  return ConvolutionVector(2, {{{2, -2}, 16.0}, {{1, -1}, -36.0}, {{-1, 1}, 27.0}});
}

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("convolution vector invariants") {
  CHECK_THROWS_AS(ConvolutionVector(1, {}), Error);
  CHECK_THROWS_AS(ConvolutionVector(1, {{{0}, 0.0}}), Error);
  CHECK_THROWS_AS(ConvolutionVector(2, {{{0}, 1.0}}), Error);
  const auto a = ConvolutionVector(1, {{{0}, 1.0}, {{3}, 0.0}, {{1}, -2.0}});
  CHECK(a.size() == 2);
  CHECK(a.coefficient({3}) == 0.0);
  CHECK(a.l1_norm() == doctest::Approx(3.0));
}

TEST_CASE("evaluate_symbol examples") {
  const auto a = v1({{0, 1.0}, {1, -1.0}});
  CHECK(std::abs(evaluate_symbol(a, {pi}) - 2.0) < 1e-15);
  CHECK(std::abs(evaluate_symbol(a, {0.0})) == 0.0);
  for (double t = -3.1; t < 3.14; t += 0.173) {
    CHECK(evaluate_symbol(a, {t}).real() == doctest::Approx(1.0 - std::cos(t)).epsilon(1e-14));
    CHECK(evaluate_symbol(a, {t}).real() == doctest::Approx(2.0 * std::sin(t / 2) * std::sin(t / 2)).epsilon(1e-12));
  }
}

TEST_CASE("conjugate symmetry for real coefficients") {
  const auto dh = douglas_howe();
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t k = 0; k < 16; ++k) {
      const TorusPoint t{grid_angle(i, 16), grid_angle(k, 16)};
      const TorusPoint m{-t[0], -t[1]};
      CHECK(std::abs(evaluate_symbol(dh, m) - std::conj(evaluate_symbol(dh, t))) < 1e-12);
    }
  }
}

TEST_CASE("winding numbers") {
  CHECK(winding_number(v1({{1, 1.0}}), 1, 64, {}) == 1);
  CHECK(winding_number(v1({{0, 3.0}, {1, -1.0}}), 1, 64, {}) == 0);
  CHECK(winding_number(v1({{-2, 1.0}, {0, 0.3}}), 1, 8, {}) == -2);
  const auto dh = douglas_howe();
  CHECK(winding_vector(dh, 128) == std::vector<int>{0, 0});
  CHECK(winding_number(dh, 1, 128, {0.7}) == 0);
  CHECK_THROWS_AS(winding_number(v1({{0, 1.0}, {1, -1.0}}), 1, 64, {}), Error);
  try {
    winding_number(v1({{0, 1.0}, {1, -1.0}}), 1, 64, {});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::symbol_vanishes);
  }
}

TEST_CASE("translation") {
  const auto t = translate_vector(v1({{0, 1.0}}), {5});
  CHECK(t.entries() == std::map<LatticePoint, double>{{{5}, 1.0}});
  const auto u = translate_vector(v1({{0, 1.0}, {1, -1.0}}), {-1});
  CHECK(u.entries() == std::map<LatticePoint, double>{{{-1}, 1.0}, {{0}, -1.0}});
  CHECK(winding_number(translate_vector(v1({{0, 1.0}}), {1}), 1, 64, {}) == 1);
}

TEST_CASE("property: winding is additive and shifts by j0 under translation") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> lead(-3, 3), shift(-4, 4);
  std::uniform_real_distribution<double> small(-0.4, 0.4);
  for (int trial = 0; trial < 40; ++trial) {
    // A dominant mode fixes the winding number; the tail keeps |s| >= 3 - 2.4.
    auto make = [&] {
      const int j = lead(rng);
      std::map<LatticePoint, double> m{{{j}, 3.0}};
      for (int k = -3; k <= 3; ++k) {
        if (k != j) m[{k}] = small(rng);
      }
      return std::pair{ConvolutionVector(1, m), j};
    };
    const auto [a, ja] = make();
    const auto [b, jb] = make();
    CHECK(winding_number(a, 1, 64, {}) == ja);
    CHECK(winding_number(convolve(a, b), 1, 64, {}) == ja + jb);
    const int j0 = shift(rng);
    CHECK(winding_number(translate_vector(a, {j0}), 1, 64, {}) - ja == j0);
  }
  // Two dimensions, per axis.
  const ConvolutionVector a(2, {{{0, 0}, 4.0}, {{1, 0}, 1.0}, {{0, 1}, -1.0}});
  const auto t = translate_vector(a, {2, -3});
  CHECK(winding_vector(t, 32) == std::vector<int>{2, -3});
}

TEST_CASE("min_abs_on_torus examples") {
  auto m = min_abs_on_torus(v1({{0, 3.0}, {1, -1.0}}), 64);
  CHECK(m.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(m.point[0]) < 1e-6);
  m = min_abs_on_torus(v1({{0, 1.0}, {1, -1.0}}), 64);
  CHECK(m.value < 1e-12);
  CHECK(std::abs(m.point[0]) < 1e-6);
  CHECK(min_abs_on_torus(v1({{0, 1.0}}), 16).value == doctest::Approx(1.0));
}

TEST_CASE("sectorial_phase examples") {
  CHECK(*sectorial_phase(v1({{0, 1.0}, {1, -1.0}}), 256) == 0.0);
  CHECK(*sectorial_phase(v1({{0, 1.0}}), 256) == 0.0);
  CHECK(*sectorial_phase(v1({{-1, 1.0}, {1, 1.0}}), 256) == doctest::Approx(pi / 2));
  // Winding symbols are not sectorial.
  CHECK_FALSE(sectorial_phase(v1({{1, 1.0}}), 256).has_value());
  CHECK_FALSE(sectorial_phase(v1({{0, 1.0}, {1, 1.0}, {2, 1.0}}), 256).has_value());
}

// One-signed coefficients alone do not confine the values to a half-plane:
// {1:1} winds once around 0 and 1 + e^{it} + e^{2it} covers every direction.
// The property is checked on even one-signed vectors, whose symbols are real.
TEST_CASE("property: one-signed even vectors are sectorial") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double sign = trial % 2 ? 1.0 : -1.0;
    std::map<LatticePoint, double> m;
    for (int k = 0; k <= 1 + trial % 3; ++k) m[{k}] = m[{-k}] = sign * u(rng);
    const ConvolutionVector a(1, m);
    const auto phi = sectorial_phase(a, 128);
    REQUIRE(phi.has_value());
    for (std::size_t i = 0; i < 128; ++i) {
      const auto s = std::polar(1.0, *phi) * evaluate_symbol(a, {grid_angle(i, 128)});
      CHECK(s.real() >= -1e-9 * a.l1_norm());
    }
  }
}

TEST_CASE("real_part_zeros examples") {
  auto z = real_part_zeros(v1({{0, 1.0}, {1, -1.0}}), 256, 0.02);
  REQUIRE(z.size() == 1);
  CHECK(std::abs(z[0].location[0]) < 1e-6);
  CHECK(z[0].order == 2);
  CHECK(real_part_zeros(v1({{0, 1.0}}), 256, 0.01).empty());
  const auto b = v1({{0, 3.0}, {2, -1.0}, {-2, -1.0}, {1, -0.5}, {-1, -0.5}});
  z = real_part_zeros(b, 256, default_zero_threshold(b));
  REQUIRE(z.size() == 1);
  CHECK(std::abs(z[0].location[0]) < 1e-6);
  CHECK(z[0].order == 2);
  // Quartic contact: 3 - 4 cos t + cos 2t = 8 sin^4(t/2).
  z = real_part_zeros(v1({{0, 3.0}, {1, -2.0}, {-1, -2.0}, {2, 0.5}, {-2, 0.5}}), 256, 0.02);
  REQUIRE(z.size() == 1);
  CHECK(z[0].order == 4);
}

TEST_CASE("non-isolated zeros are reported") {
  const ConvolutionVector a(2, {{{0, 0}, 1.0}, {{1, 0}, -1.0}});
  CHECK_THROWS_AS(real_part_zeros(a, 64, 0.02), Error);
  const auto r = analyze_symbol(a, 64);
  CHECK(r.zeros_non_isolated);
}

TEST_CASE("d_tilde_bound") {
  CHECK(d_tilde_bound(v1({{0, 1.0}}), 50, {}) == 1.0);
  const auto a = v1({{0, 1.0}, {1, -1.0}});
  const auto z = real_part_zeros(a, 256, 0.02);
  CHECK(separation_radius(z) == 1.0);
  CHECK(d_tilde_bound(a, 100, z) == doctest::Approx(1.0 / (1.0 - std::cos(0.01))).epsilon(1e-9));
  CHECK(d_tilde_bound(a, 10, z) == doctest::Approx(1.0 / (1.0 - std::cos(0.1))).epsilon(1e-9));
  CHECK(d_tilde_bound(a, 10, z) == doctest::Approx(200.17).epsilon(1e-4));
  double prev = 0.0;
  for (double n : {2.0, 3.0, 5.0, 10.0, 30.0, 100.0, 1000.0}) {
    const double d = d_tilde_bound(a, n, z);
    CHECK(d >= prev);
    prev = d;
  }
  // D_a(l) = l^{1/2} D~(2 * 13 * l) for d = 1, M = 1.
  CHECK(d_a_bound(a, 4.0, z) == doctest::Approx(2.0 * d_tilde_bound(a, 104.0, z)));
}

TEST_CASE("invertibility criterion in one dimension") {
  CHECK(invertibility_criterion_1d(v1({{0, 3.0}, {1, -1.0}})));
  CHECK_FALSE(invertibility_criterion_1d(v1({{0, 1.0}, {1, -1.0}})));
  CHECK_FALSE(invertibility_criterion_1d(v1({{1, 1.0}})));
  CHECK_THROWS_AS(invertibility_criterion_1d(douglas_howe()), Error);
}

TEST_CASE("analyze_symbol report") {
  const auto r = analyze_symbol(v1({{0, 1.0}, {1, -1.0}}), 256);
  CHECK(r.min_abs < 1e-12);
  REQUIRE(r.winding.size() == 1);
  CHECK_FALSE(r.winding[0].has_value());
  CHECK(*r.sectorial_phase == 0.0);
  REQUIRE(r.real_zeros.size() == 1);
  CHECK(r.real_zeros[0].order == 2);

  const auto dh = analyze_symbol(douglas_howe(), 64);
  CHECK(dh.min_abs > 0.0);
  CHECK(dh.winding[0] == 0);
  CHECK(dh.winding[1] == 0);
}
