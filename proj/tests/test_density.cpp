#include <doctest.h>

#include <cmath>

#include "wt/density.hpp"
#include "wt/error.hpp"

using namespace wt;

namespace {

PiecewisePolynomial single(double lo, double hi, Polynomial c) { return PiecewisePolynomial({{lo, hi, std::move(c)}}); }

// Dense-grid variation, independent of the piece logic.
double grid_variation(const PiecewisePolynomial& f, double lo, double hi, int n) {
  double v = 0.0, prev = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double y = f(x);
    v += std::abs(y - prev);
    prev = y;
  }
  return v + std::abs(prev);
}

}  // namespace

TEST_CASE("polynomial helpers") {
  CHECK(poly_eval({1, 2, 3}, 2.0) == doctest::Approx(17.0));
  CHECK(poly_derivative({1, 2, 3}) == Polynomial{2, 6});
  CHECK(poly_antiderivative({2, 6}) == Polynomial{0, 2, 3});
  CHECK(poly_mul({1, 1}, {1, -1}) == Polynomial{1, 0, -1});
  CHECK(poly_degree({1, 0, 0}) == 0);
  CHECK(poly_degree({0, 0, 4, 0}) == 2);
  const auto cp = critical_points({0, -3, 0, 1}, -2, 2);  // x^3 - 3x
  REQUIRE(cp.size() == 2);
  CHECK(cp[0] == doctest::Approx(-1.0));
  CHECK(cp[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(critical_points({0, 0, 0, 0, 1}, -1, 1), Error);
}

TEST_CASE("density validation") {
  CHECK_NOTHROW(DensitySpec(single(0, 1, {1})));
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io_error;
  };
  CHECK(kind([] { DensitySpec(single(0, 1, {2})); }) == ErrorKind::invalid_density);
  CHECK(kind([] { DensitySpec(single(0.5, 1.5, {1})); }) == ErrorKind::invalid_density);
  CHECK(kind([] { DensitySpec(single(0, 1, {2, -2.5, 1.5})); }) == ErrorKind::invalid_density);
  CHECK(kind([] { DensitySpec(single(0, 2, {1.5, -1})); }) == ErrorKind::invalid_density);  // negative tail
  CHECK(kind([] { DensitySpec::uniform(0.0); }) == ErrorKind::invalid_density);
}

TEST_CASE("quantile examples") {
  const auto u = DensitySpec::uniform(1.0);
  CHECK(u.quantile(0.25) == doctest::Approx(0.25).epsilon(1e-12));
  const DensitySpec lin(single(0, 1, {0, 2}));
  CHECK(lin.quantile(0.25) == doctest::Approx(0.5).epsilon(1e-11));
  for (double p : {0.01, 0.3, 0.77, 0.999}) CHECK(lin.quantile(p) == doctest::Approx(std::sqrt(p)).epsilon(1e-11));
  CHECK(lin.cdf(0.5) == doctest::Approx(0.25));
  CHECK(lin.cdf(-1.0) == 0.0);
  CHECK(lin.cdf(3.0) == doctest::Approx(1.0));
}

TEST_CASE("property: quantile inverts cdf across pieces with a gap") {
  const DensitySpec f(PiecewisePolynomial({{0, 1, {0.25}}, {2, 3, {-3.0, 1.5}}}));
  CHECK(f.function().integral() == doctest::Approx(1.0));
  for (int i = 1; i < 100; ++i) {
    const double p = i / 100.0;
    const double x = f.quantile(p);
    CHECK(f.cdf(x) == doctest::Approx(p).epsilon(1e-10));
    CHECK((x <= 1.0 + 1e-12 || x >= 2.0 - 1e-12));
  }
}

TEST_CASE("variation examples") {
  CHECK(variation(single(0, 1, {1}), true) == doctest::Approx(2.0));
  CHECK(variation(single(0, 1, {1}), false) == doctest::Approx(0.0));
  const PiecewisePolynomial hat({{0, 0.5, {0, 4}}, {0.5, 1, {4, -4}}});
  CHECK(variation(hat, true) == doctest::Approx(4.0));
  const auto lin = single(0, 1, {0, 2});
  CHECK(variation(lin, true) == doctest::Approx(4.0));
  CHECK(variation(lin, true) == doctest::Approx(grid_variation(lin, 0, 1, 200000)).epsilon(1e-6));
  const auto cubic = single(0, 2, {0.1, 3, -3, 0.8});
  CHECK(variation(cubic, true) == doctest::Approx(grid_variation(cubic, 0, 2, 200000)).epsilon(1e-6));
}

TEST_CASE("variation_scan fallback agrees and covers high degree") {
  const auto cubic = single(0, 2, {0.1, 3, -3, 0.8});
  const auto scan = variation_scan(cubic, true);
  CHECK(scan.value == doctest::Approx(variation(cubic, true)).epsilon(1e-6));
  CHECK(scan.resolution == doctest::Approx(2.0 / 9999));
  const auto quintic = single(0, 1, {0, 0, 0, 0, 0, 6});
  CHECK_THROWS_AS(variation(quintic, true), Error);
  CHECK(variation_scan(quintic, true).value == doctest::Approx(12.0));
  CHECK(sup_abs(quintic) == doctest::Approx(6.0));
  const double xc = (6.0 - std::sqrt(36.0 - 28.8)) / 4.8;  // root of 3 - 6x + 2.4x^2
  CHECK(sup_abs(cubic) == doctest::Approx(poly_eval(cubic.pieces()[0].coeffs, xc)));
}
