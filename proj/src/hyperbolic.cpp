#include "hyperbolic.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace hypsurf::hyp {

namespace {

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (got " << value << ")";
  return os.str();
}

// arccosh(x) for x >= 1 via log(x + sqrt(x^2 - 1)); near 1 the radicand is
// formed as (x - 1)(x + 1) to keep the small factor exact.
double stable_arccosh(double x) {
  const double xm1 = x - 1.0;
  if (xm1 < 0.5) {
    return std::log1p(xm1 + std::sqrt(xm1 * (x + 1.0)));
  }
  return std::log(x + std::sqrt(xm1 * (x + 1.0)));
}

}  // namespace

GeodesicLength::GeodesicLength(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(describe("geodesic length must be positive and finite", value));
  }
}

CollarWidth::CollarWidth(double value) : value_(value) {
  if (!(value >= 0.0) || std::isnan(value)) {
    throw DomainError(describe("collar width must be nonnegative", value));
  }
}

double sinh_half(double l) noexcept {
  const double x = 0.5 * l;
  if (l < 1e-8) {
    return x * (1.0 + x * x / 6.0);
  }
  return std::sinh(x);
}

double standard_collar_radius() noexcept { return std::asinh(1.0); }

GeodesicLength length_from_trace(double abs_trace) {
  if (!(abs_trace > 2.0) || !std::isfinite(abs_trace)) {
    throw NotHyperbolic(describe("|trace| must exceed 2 for a hyperbolic element", abs_trace));
  }
  return GeodesicLength(2.0 * stable_arccosh(0.5 * abs_trace));
}

double trace_from_length(GeodesicLength l) noexcept { return 2.0 * std::cosh(0.5 * l.value()); }

CollarWidth collar_width(GeodesicLength l) noexcept {
  return CollarWidth(std::asinh(1.0 / sinh_half(l.value())));
}

CollarWidth collar_width_at_radius(GeodesicLength l, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DomainError(describe("collar radius must be positive", radius));
  }
  return CollarWidth(std::asinh(std::sinh(radius) / sinh_half(l.value())));
}

double cylinder_volume(GeodesicLength l, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DomainError(describe("cylinder radius must be positive", radius));
  }
  return 4.0 * kPi * std::sinh(radius) * (l.value() / sinh_half(l.value()));
}

double thin_part_upper_bound(std::uint64_t simple_count, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DomainError(describe("thin-part radius must be positive", radius));
  }
  return 8.0 * kPi * std::sinh(radius) * static_cast<double>(simple_count);
}

double injrad_from_collar(GeodesicLength l, double lambda) {
  if (!(lambda >= 0.0) || std::isnan(lambda)) {
    throw DomainError(describe("distance from the geodesic must be nonnegative", lambda));
  }
  return std::asinh(sinh_half(l.value()) * std::cosh(lambda));
}

GeodesicLength crossing_length_bound(GeodesicLength t) {
  return GeodesicLength(2.0 * std::asinh(1.0 / sinh_half(t.value())));
}

double distortion_bound(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw DomainError(describe("distortion bound needs 0 < eps < 1/2", eps));
  }
  return 1.0 + 1.25 * eps * eps;
}

}  // namespace hypsurf::hyp
