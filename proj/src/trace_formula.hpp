#pragma once

// Test-function transforms for SL(2, R), the explicit Plancherel identity and
// the geometric side of the Selberg trace formula on pinched spectra.
//
// A profile phi on [0, inf) defines the K-bi-invariant function
// f(x) = phi(tr(x^T x) - 2). Its transforms are
//   g(r) = int_R phi(2 cosh r - 2 + s^2) ds,
//   h(r) = int_R g(|u|) cos(r u) du,
// and the Plancherel identity reads phi(0) = (1/4pi) int_R h(r) tanh(pi r) r dr.

#include <functional>
#include <span>
#include <vector>

#include "quadrature.hpp"
#include "sequence.hpp"
#include "summation.hpp"

namespace hypsurf::trace {

// A profile that vanishes on [support, inf).
class TestFunction {
 public:
  TestFunction(std::function<double(double)> evaluator, double support);

  // Zero for u >= support regardless of the evaluator.
  double operator()(double u) const { return u >= support_ ? 0.0 : evaluator_(u); }
  double support() const noexcept { return support_; }

  // Throws DomainError if the evaluator is nonzero beyond the support or
  // non-finite inside it, sampled on `samples` points of [0, 2 * support].
  void verify(int samples = 1000) const;

 private:
  std::function<double(double)> evaluator_;
  double support_;
};

// amplitude * exp(-1 / (1 - (u/S)^2)) on [0, S), zero beyond.
TestFunction bump(double support, double amplitude = 1.0);

// arccosh(1 + S/2): g vanishes from here on.
double g_support_radius(double phi_support);

// 2 int_0^{s_max} phi(2 cosh r - 2 + s^2) ds with s_max^2 = S - (2 cosh r - 2).
double g_transform(const TestFunction& phi, double r, const quad::Options& opts = {});

class TransformProfile {
 public:
  explicit TransformProfile(TestFunction phi, quad::Options g_opts = {1e-13, 1e-13, 4000});

  const TestFunction& phi() const noexcept { return phi_; }
  double g_support() const noexcept { return g_support_; }
  const quad::Options& g_options() const noexcept { return g_opts_; }

  double g(double r) const;

 private:
  TestFunction phi_;
  double g_support_;
  quad::Options g_opts_;
};

// int_{-L}^{L} g(|u|) cos(r u) du, L = g_support. Even in r bit for bit.
double h_transform(const TransformProfile& profile, double r, const quad::Options& opts = {});

struct PlancherelOptions {
  double tail_tol = 1e-10;     // target for the certified truncation tail
  double max_truncation = 1e5;
  double derivative_safety = 2.0;
  int min_derivative_order = 3;
  int max_derivative_order = 7;
};

struct PlancherelResult {
  double value = 0.0;              // (1/4pi) int_R h(r) tanh(pi r) r dr
  double truncation = 0.0;         // r_max
  double tail_bound = 0.0;         // bound on the dropped |r| > r_max part
  int derivative_order = 0;        // m in |h(r)| <= ||G^(m)||_1 / r^m
  double derivative_norm = 0.0;    // estimated ||G^(m)||_1, safety included
  double quadrature_error = 0.0;   // Gauss/Kronrod estimate for the kept part
};

// Evaluates the truncated Plancherel integral. The r-integration of the
// cosine transform over [0, r_max] is carried out analytically against the
// kernel int_0^X r cos(r u) dr, leaving a single u-quadrature of g; the
// tanh correction is integrated numerically from h. Throws NumericsError
// when no truncation below max_truncation certifies tail_tol.
PlancherelResult plancherel_integral(const TransformProfile& profile, const PlancherelOptions& opts = {});

// Estimates ||G^(m)||_1 for G(u) = g(|u|) from m-th finite differences on
// grids of `points` and 2 * `points` samples per half-support; returns the
// larger estimate. Exposed for diagnostics.
double derivative_norm_estimate(const TransformProfile& profile, int order, int points = 400);

// sum over classes of multiplicity * l0 / (2 sinh(l/2)) * g(l).
double geometric_side(std::span<const sequence::GeodesicClass> spectrum,
                      const std::function<double(double)>& g);
double geometric_side(std::span<const sequence::GeodesicClass> spectrum, const TransformProfile& profile);

// Same sum on a pinched family. Requires g nonnegative and nonincreasing
// (true for a nonincreasing nonnegative phi). The first head_terms summands
// are added directly; the rest is bracketed by integral bounds of the
// decreasing summand.
Certified geometric_side(const sequence::PinchedSpectrum& spectrum, const TransformProfile& profile,
                         double head_terms = 2e4);

// min of g over [0, R] sampled on a grid (including both endpoints).
double g_minimum(const TransformProfile& profile, double radius, int samples = 256);
double g_maximum(const TransformProfile& profile, double radius, int samples = 256);

struct VanishingRow {
  std::size_t j;
  std::int64_t level;
  double pinch_length;
  bool valid;
  std::string note;
  Certified value;  // geometric side / volume
};

// Normalized geometric side along a schedule, with the short spectrum taken
// up to the g-support radius.
std::vector<VanishingRow> vanishing_series(const sequence::Schedule& schedule, const TransformProfile& profile,
                                           std::size_t j_max, unsigned workers = 0);

}  // namespace hypsurf::trace
