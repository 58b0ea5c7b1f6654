#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cfloat>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "hyperbolic.hpp"

using namespace hypsurf;
using namespace hypsurf::hyp;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return out;
}

// Area of {|rho| <= w} in the metric d rho^2 + l^2 cosh^2(rho) dtheta^2, theta over [0, 2 pi].
double cylinder_area_quadrature(double l, double radius) {
  const double w = std::asinh(std::sinh(radius) / std::sinh(l / 2));
  boost::math::quadrature::tanh_sinh<double> ts;
  auto inner = [&](double rho) { return l * std::cosh(rho); };
  auto outer = [&](double) { return ts.integrate(inner, -w, w); };
  return ts.integrate(outer, 0.0, 2 * M_PI);
}

}  // namespace

TEST_CASE("strong types reject invalid values") {
  CHECK_THROWS_AS(GeodesicLength{0.0}, DomainError);
  CHECK_THROWS_AS(GeodesicLength{-1.0}, DomainError);
  CHECK_THROWS_AS(GeodesicLength{INFINITY}, DomainError);
  CHECK_THROWS_AS(GeodesicLength{NAN}, DomainError);
  CHECK_THROWS_AS(CollarWidth{-1e-300}, DomainError);
  CHECK(CollarWidth(0.0).value() == 0.0);
}

TEST_CASE("length_from_trace against 50-digit arccosh") {
  for (double tr : {7.0, 14.0, 23.0, 2.000001, 1e6}) {
    const Big expected = 2 * acosh(Big(tr) / 2);
    CHECK(length_from_trace(tr).value() == doctest::Approx(expected.convert_to<double>()).epsilon(1e-13));
  }
  CHECK(length_from_trace(7.0).value() == doctest::Approx(3.8496946004768278).epsilon(1e-14));
  CHECK_THROWS_AS(length_from_trace(2.0), NotHyperbolic);
  CHECK_THROWS_AS(length_from_trace(1.5), NotHyperbolic);
  CHECK_THROWS_AS(length_from_trace(-7.0), NotHyperbolic);
}

TEST_CASE("trace/length round trip on a log grid") {
  // A binary64 trace near 2 pins l only to about 2u / l^2 relative, so 1e-10
  // is reachable from l ~ 2.1e-3 on; below that the conditioning bound applies.
  for (double l : log_grid(1e-6, 50.0, 200)) {
    const double back = length_from_trace(trace_from_length(GeodesicLength(l))).value();
    const double conditioning = 4.0 * DBL_EPSILON / (l * l);
    CHECK(std::fabs(back - l) <= std::max(1e-10, conditioning) * l);
    if (l >= 2.2e-3) CHECK(std::fabs(back - l) <= 1e-10 * l);
  }
  for (double tr : {2.5, 7.0, 1e3, 1e8}) {
    const double back = trace_from_length(length_from_trace(tr));
    CHECK(std::fabs(back - tr) <= 1e-12 * tr);
  }
}

TEST_CASE("collar widths") {
  const double l_fixed = 2 * std::asinh(1.0);
  CHECK(collar_width(GeodesicLength(l_fixed)).value() == doctest::Approx(std::asinh(1.0)).epsilon(1e-14));
  CHECK(collar_width(GeodesicLength(1.0)).value() ==
        doctest::Approx(std::asinh(1.0 / std::sinh(0.5))).epsilon(1e-15));
  CHECK(collar_width(GeodesicLength(200.0)).value() < 1e-40);

  double prev = INFINITY;
  for (double l : log_grid(1e-6, 50.0, 100)) {
    const double w = collar_width(GeodesicLength(l)).value();
    CHECK(w < prev);
    prev = w;
    CHECK(collar_width_at_radius(GeodesicLength(l), standard_collar_radius()).value() ==
          doctest::Approx(w).epsilon(1e-14));
  }
  for (double l : {0.01, 1.0, 5.0}) {
    double last = 0.0;
    for (double r : log_grid(1e-3, 5.0, 40)) {
      const double w = collar_width_at_radius(GeodesicLength(l), r).value();
      CHECK(w > last);
      last = w;
    }
  }
  for (double r : {0.1, 1.0, 3.0}) {
    double last = INFINITY;
    for (double l : log_grid(1e-3, 20.0, 40)) {
      const double w = collar_width_at_radius(GeodesicLength(l), r).value();
      CHECK(w < last);
      last = w;
    }
  }
  CHECK(collar_width_at_radius(GeodesicLength(1.0), 1.0).value() ==
        doctest::Approx(std::asinh(std::sinh(1.0) / std::sinh(0.5))).epsilon(1e-15));
  CHECK(collar_width_at_radius(GeodesicLength(1.0), 1e-12).value() < 1e-11);
  CHECK_THROWS_AS(collar_width_at_radius(GeodesicLength(1.0), 0.0), DomainError);
}

TEST_CASE("cylinder volume: closed form, bound and 2-D quadrature") {
  CHECK(cylinder_volume(GeodesicLength(2.0), 1.0) == doctest::Approx(8 * M_PI).epsilon(1e-15));
  CHECK(cylinder_volume(GeodesicLength(1.0), 1.0) ==
        doctest::Approx(4 * M_PI * std::sinh(1.0) / std::sinh(0.5)).epsilon(1e-15));
  CHECK(cylinder_volume(GeodesicLength(1e-12), 1.0) == doctest::Approx(8 * M_PI * std::sinh(1.0)).epsilon(1e-15));
  for (double r : {0.1, 1.0, 3.0})
    for (double l : log_grid(1e-9, 40.0, 60)) CHECK(cylinder_volume(GeodesicLength(l), r) <= 8 * M_PI * std::sinh(r));
  for (double l : {0.3, 1.0, 4.0})
    for (double r : {0.5, 2.0}) {
      const double q = cylinder_area_quadrature(l, r);
      CHECK(std::fabs(q - cylinder_volume(GeodesicLength(l), r)) <= 1e-9 * q);
    }
  CHECK_THROWS_AS(cylinder_volume(GeodesicLength(1.0), -1.0), DomainError);
}

TEST_CASE("thin part bound") {
  CHECK(thin_part_upper_bound(0, 1.0) == 0.0);
  CHECK(thin_part_upper_bound(1, std::asinh(1.0)) == doctest::Approx(8 * M_PI).epsilon(1e-15));
  CHECK(thin_part_upper_bound(12, 1.0) == doctest::Approx(96 * M_PI * std::sinh(1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(thin_part_upper_bound(3, 0.0), DomainError);
}

TEST_CASE("injectivity radius from the collar") {
  CHECK(injrad_from_collar(GeodesicLength(1.0), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(injrad_from_collar(GeodesicLength(1.0), 1.0) ==
        doctest::Approx(std::asinh(std::sinh(0.5) * std::cosh(1.0))).epsilon(1e-15));
  double last = 0.0;
  for (double lambda = 0.0; lambda < 30.0; lambda += 0.5) {
    const double v = injrad_from_collar(GeodesicLength(0.1), lambda);
    CHECK(v > last);
    last = v;
  }
  for (double l : log_grid(1e-4, 10.0, 30)) {
    const GeodesicLength gl(l);
    const double lam = collar_width(gl).value();
    CHECK(std::sinh(injrad_from_collar(gl, lam)) ==
          doctest::Approx(std::sinh(l / 2) * std::cosh(lam)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(injrad_from_collar(GeodesicLength(1.0), -0.1), DomainError);
}

TEST_CASE("crossing bound and distortion bound") {
  const double fixed = 2 * std::asinh(1.0);
  CHECK(crossing_length_bound(GeodesicLength(fixed)).value() == doctest::Approx(fixed).epsilon(1e-14));
  CHECK(crossing_length_bound(GeodesicLength(0.1)).value() ==
        doctest::Approx(2 * std::asinh(1 / std::sinh(0.05))).epsilon(1e-15));
  CHECK(1 / std::sinh(0.05) == doctest::Approx(19.99167).epsilon(1e-6));
  CHECK(crossing_length_bound(GeodesicLength(1e-12)).value() > 50.0);

  CHECK(distortion_bound(0.4) == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(distortion_bound(1e-9) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(distortion_bound(0.5), DomainError);
  CHECK_THROWS_AS(distortion_bound(0.0), DomainError);
  CHECK_THROWS_AS(distortion_bound(NAN), DomainError);
}

TEST_CASE("sinh_half series branch is continuous") {
  for (double l : {1e-12, 5e-9, 9.99e-9, 1e-8, 1.01e-8, 1e-7}) {
    const Big exact = sinh(Big(l) / 2);
    CHECK(sinh_half(l) == doctest::Approx(exact.convert_to<double>()).epsilon(1e-15));
  }
}
