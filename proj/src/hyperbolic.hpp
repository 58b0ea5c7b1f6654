#pragma once

// Closed-form hyperbolic trigonometry on collars, cylinders and thin parts.

#include <cstdint>

namespace hypsurf::hyp {

// Length of a closed geodesic; always positive and finite.
class GeodesicLength {
 public:
  explicit GeodesicLength(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

// Half-width of an embedded collar; nonnegative.
class CollarWidth {
 public:
  explicit CollarWidth(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

inline constexpr double kPi = 3.14159265358979323846;

// sinh(l/2), with a series branch for l < 1e-8.
double sinh_half(double l) noexcept;

// arcsinh(1) = log(1 + sqrt 2); the radius at which collar_width_at_radius
// reduces to the standard collar.
double standard_collar_radius() noexcept;

// l = 2 arccosh(|tr| / 2). Throws NotHyperbolic for abs_trace <= 2.
GeodesicLength length_from_trace(double abs_trace);

// Inverse of length_from_trace: 2 cosh(l/2).
double trace_from_length(GeodesicLength l) noexcept;

CollarWidth collar_width(GeodesicLength l) noexcept;

// w_R = arcsinh(sinh R / sinh(l/2)). Throws DomainError for R <= 0.
CollarWidth collar_width_at_radius(GeodesicLength l, double radius);

// Area of the cylinder [-w_R, w_R] x S^1 around a geodesic of length l:
// 4 pi sinh(R) l / sinh(l/2). Bounded by 8 pi sinh(R).
double cylinder_volume(GeodesicLength l, double radius);

// 8 pi sinh(R) * simple_count.
double thin_part_upper_bound(std::uint64_t simple_count, double radius);

// Injectivity radius at distance lambda from a geodesic of length l:
// sinh(InjRad) = sinh(l/2) cosh(lambda).
double injrad_from_collar(GeodesicLength l, double lambda);

// Shortest possible simple closed geodesic crossing a simple geodesic of
// length t: 2 arcsinh(1 / sinh(t/2)).
GeodesicLength crossing_length_bound(GeodesicLength t);

// 1 + (5/4) eps^2, valid for 0 < eps < 1/2.
double distortion_bound(double eps);

}  // namespace hypsurf::hyp
