#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cfloat>
#include <queue>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace hypsurf::quad {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int intervals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double resabs = std::fabs(kronrod);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    kronrod += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));

  const double value = kronrod * half;
  resabs *= std::fabs(half);
  resasc *= std::fabs(half);
  double err = std::fabs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > DBL_MIN / (50.0 * DBL_EPSILON)) err = std::max(50.0 * DBL_EPSILON * resabs, err);
  return {a, b, value, err};
}

}  // namespace detail

// Integrates f over [a, b]. Throws NumericsError when the error target is
// not met within opts.max_intervals panels.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
  if (a == b) return {};
  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gk15(f, a, b));
  double total = panels.top().value;
  double error = panels.top().error;
  int count = 1;
  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::fabs(total)); };
  while (error > target()) {
    if (count >= opts.max_intervals) {
      const auto& worst = panels.top();
      std::ostringstream os;
      os.precision(6);
      os << "quadrature on [" << a << ", " << b << "] did not converge: estimate " << total
         << ", error " << error << " > target " << target() << " after " << count
         << " panels; worst panel [" << worst.a << ", " << worst.b << "] error " << worst.error;
      throw NumericsError(os.str());
    }
    const detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::ostringstream os;
      os << "quadrature panel collapsed near " << worst.a << " with error " << worst.error;
      throw NumericsError(os.str());
    }
    const auto left = detail::gk15(f, worst.a, mid);
    const auto right = detail::gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the incremental updates.
  double value = 0.0, err = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  return {value, err, count};
}

// Fixed-panel rule: n equal panels, each integrated with one 15-point
// Kronrod step. The error field sums the per-panel Gauss/Kronrod estimates.
template <class F>
Result integrate_panels(F&& f, double a, double b, int n) {
  Result r;
  const double w = (b - a) / n;
  for (int i = 0; i < n; ++i) {
    const double lo = a + w * i;
    const double hi = i + 1 == n ? b : a + w * (i + 1);
    const auto p = detail::gk15(f, lo, hi);
    r.value += p.value;
    r.error += p.error;
  }
  r.intervals = n;
  return r;
}

}  // namespace hypsurf::quad
