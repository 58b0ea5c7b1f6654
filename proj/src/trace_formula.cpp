#include "trace_formula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"
#include "hyperbolic.hpp"

namespace hypsurf::trace {

namespace {

constexpr double kTwoPi = 2.0 * hyp::kPi;
// Beyond this the factor 1 - tanh(pi r) is below 1e-32.
constexpr double kTanhCutoff = 12.0;

// 2 cosh r - 2 without cancellation near r = 0.
double cosh_offset(double r) {
  const double s = std::sinh(0.5 * r);
  return 4.0 * s * s;
}

// int_0^X r cos(r u) dr = X sin(Xu)/u + (cos(Xu) - 1)/u^2.
double truncated_kernel(double truncation, double u) {
  const double z = truncation * u;
  if (z == 0.0) return 0.5 * truncation * truncation;
  const double half = std::sin(0.5 * z) / z;
  return truncation * truncation * (std::sin(z) / z - 2.0 * half * half);
}

// 1 - tanh(pi r) = 2 / (exp(2 pi r) + 1)
double tanh_complement(double r) {
  const double e = std::exp(-kTwoPi * r);
  return 2.0 * e / (1.0 + e);
}

// Finite-difference estimates of ||G^(m)||_1 for m = 0..max_order on one grid.
std::vector<double> difference_norms(const TransformProfile& profile, int max_order, int points) {
  const double L = profile.g_support();
  const double step = L / points;
  const int pad = max_order + 2;
  std::vector<double> values;
  values.reserve(2 * (points + pad) + 1);
  for (int i = -(points + pad); i <= points + pad; ++i) {
    values.push_back(profile.g(std::fabs(i * step)));
  }
  std::vector<double> norms(max_order + 1, 0.0);
  for (int m = 0; m <= max_order; ++m) {
    double total = 0.0;
    for (double v : values) total += std::fabs(v);
    norms[m] = total / std::pow(step, m - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) values[i] = values[i + 1] - values[i];
    values.pop_back();
  }
  return norms;
}

std::string format_row(std::int64_t level, double t) {
  std::ostringstream os;
  os.precision(17);
  os << "N=" << level << ", t=" << t;
  return os.str();
}

}  // namespace

TestFunction::TestFunction(std::function<double(double)> evaluator, double support)
    : evaluator_(std::move(evaluator)), support_(support) {
  if (!evaluator_) throw DomainError("test function needs an evaluator");
  if (!(support > 0.0) || !std::isfinite(support)) throw DomainError("test function support must be positive");
}

void TestFunction::verify(int samples) const {
  for (int i = 0; i <= samples; ++i) {
    const double u = 2.0 * support_ * i / samples;
    const double v = evaluator_(u);
    if (u >= support_ && v != 0.0) {
      std::ostringstream os;
      os << "test function is nonzero (" << v << ") at u = " << u << " beyond its support " << support_;
      throw DomainError(os.str());
    }
    if (u < support_ && !std::isfinite(v)) {
      std::ostringstream os;
      os << "test function is not finite at u = " << u;
      throw DomainError(os.str());
    }
  }
}

TestFunction bump(double support, double amplitude) {
  if (!(support > 0.0) || !std::isfinite(support)) throw DomainError("bump support must be positive");
  if (!std::isfinite(amplitude)) throw DomainError("bump amplitude must be finite");
  return TestFunction(
      [support, amplitude](double u) {
        if (u >= support) return 0.0;
        const double z = u / support;
        return amplitude * std::exp(-1.0 / ((1.0 - z) * (1.0 + z)));
      },
      support);
}

double g_support_radius(double phi_support) { return std::acosh(1.0 + 0.5 * phi_support); }

double g_transform(const TestFunction& phi, double r, const quad::Options& opts) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("g_transform needs r >= 0");
  const double offset = cosh_offset(r);
  if (offset >= phi.support()) return 0.0;
  const double s_max = std::sqrt(phi.support() - offset);
  const auto result = quad::integrate([&](double s) { return phi(offset + s * s); }, 0.0, s_max, opts);
  return 2.0 * result.value;
}

TransformProfile::TransformProfile(TestFunction phi, quad::Options g_opts)
    : phi_(std::move(phi)), g_support_(g_support_radius(phi_.support())), g_opts_(g_opts) {}

double TransformProfile::g(double r) const {
  if (r >= g_support_) return 0.0;
  return g_transform(phi_, r, g_opts_);
}

double h_transform(const TransformProfile& profile, double r, const quad::Options& opts) {
  const double freq = std::fabs(r);
  const auto result = quad::integrate([&](double u) { return profile.g(u) * std::cos(freq * u); }, 0.0,
                                      profile.g_support(), opts);
  return 2.0 * result.value;
}

double derivative_norm_estimate(const TransformProfile& profile, int order, int points) {
  if (order < 0) throw DomainError("derivative order must be nonnegative");
  const auto coarse = difference_norms(profile, order, points);
  const auto fine = difference_norms(profile, order, 2 * points);
  return std::max(coarse[order], fine[order]);
}

PlancherelResult plancherel_integral(const TransformProfile& profile, const PlancherelOptions& opts) {
  if (opts.min_derivative_order < 3 || opts.max_derivative_order < opts.min_derivative_order) {
    throw DomainError("derivative orders must satisfy 3 <= min <= max");
  }
  if (!(opts.tail_tol > 0.0)) throw DomainError("tail tolerance must be positive");
  const double L = profile.g_support();

  // |h(r)| <= ||G^(m)||_1 / r^m, so (1/2pi) int_X^inf r |h| dr <= ||G^(m)||_1 X^(2-m) / ((m-2) 2pi).
  PlancherelResult result;
  result.truncation = std::numeric_limits<double>::infinity();
  const auto coarse = difference_norms(profile, opts.max_derivative_order, 400);
  const auto fine = difference_norms(profile, opts.max_derivative_order, 800);
  for (int m = opts.min_derivative_order; m <= opts.max_derivative_order; ++m) {
    const double norm = opts.derivative_safety * std::max(coarse[m], fine[m]);
    const double k = m - 2.0;
    const double x = std::pow(norm / (k * kTwoPi * opts.tail_tol), 1.0 / k);
    if (x < result.truncation) {
      result.truncation = x;
      result.derivative_order = m;
      result.derivative_norm = norm;
    }
  }
  result.truncation = std::max(std::ceil(result.truncation), 4.0 * kTanhCutoff);
  if (!(result.truncation <= opts.max_truncation)) {
    std::ostringstream os;
    os << "cannot certify the Plancherel tail below " << opts.tail_tol << ": needs r_max ~ " << result.truncation
       << " (limit " << opts.max_truncation << ", m = " << result.derivative_order
       << ", ||G^(m)||_1 ~ " << result.derivative_norm << ")";
    throw NumericsError(os.str());
  }
  const double X = result.truncation;
  const double k = result.derivative_order - 2.0;
  result.tail_bound = result.derivative_norm * std::pow(X, -k) / (k * kTwoPi);

  // int_0^X r h(r) dr = 2 int_0^L g(u) K_X(u) du.
  const int panels = static_cast<int>(std::ceil(L / std::min(L / 32.0, 2.0 / X)));
  const auto main = quad::integrate_panels([&](double u) { return profile.g(u) * truncated_kernel(X, u); }, 0.0, L,
                                           panels);

  // tanh correction: int_0^X r h(r) (1 - tanh(pi r)) dr, h from a fixed table of g.
  struct Node {
    double u, weighted_g;
  };
  std::vector<Node> table;
  {
    const int table_panels = 64;
    const double w = L / table_panels;
    for (int p = 0; p < table_panels; ++p) {
      const double centre = (p + 0.5) * w;
      const double half = 0.5 * w;
      table.push_back({centre, 2.0 * half * quad::detail::kWgk[7] * profile.g(centre)});
      for (int j = 0; j < 7; ++j) {
        const double dx = half * quad::detail::kXgk[j];
        table.push_back({centre - dx, 2.0 * half * quad::detail::kWgk[j] * profile.g(centre - dx)});
        table.push_back({centre + dx, 2.0 * half * quad::detail::kWgk[j] * profile.g(centre + dx)});
      }
    }
  }
  double h_abs = 0.0;
  for (const auto& n : table) h_abs += std::fabs(n.weighted_g);
  auto h_table = [&](double r) {
    double acc = 0.0;
    for (const auto& n : table) acc += n.weighted_g * std::cos(r * n.u);
    return acc;
  };
  const auto correction = quad::integrate_panels(
      [&](double r) { return r * h_table(r) * tanh_complement(r); }, 0.0, kTanhCutoff,
      static_cast<int>(4 * kTanhCutoff));
  // int_c^inf r (1 - tanh(pi r)) dr <= 2 e^{-2 pi c} (c / 2pi + 1 / 4pi^2)
  const double c = kTanhCutoff;
  const double correction_tail = h_abs * 2.0 * std::exp(-kTwoPi * c) * (c / kTwoPi + 1.0 / (kTwoPi * kTwoPi));

  result.value = (2.0 * main.value - correction.value) / kTwoPi;
  result.tail_bound += correction_tail / kTwoPi;
  result.quadrature_error = (2.0 * main.error + correction.error) / kTwoPi;
  return result;
}

double geometric_side(std::span<const sequence::GeodesicClass> spectrum, const std::function<double(double)>& g) {
  CompensatedSum sum;
  for (const auto& c : spectrum) {
    const double gl = g(c.length);
    if (gl == 0.0) continue;
    sum.add(static_cast<double>(c.multiplicity) * c.primitive_length / (2.0 * hyp::sinh_half(c.length)) * gl);
  }
  return sum.value();
}

double geometric_side(std::span<const sequence::GeodesicClass> spectrum, const TransformProfile& profile) {
  return geometric_side(spectrum, [&](double r) { return profile.g(r); });
}

Certified geometric_side(const sequence::PinchedSpectrum& s, const TransformProfile& profile, double head_terms) {
  if (s.count <= 0.0 || s.multiplicity == 0) return {0.0, 0.0};
  const double t = s.primitive_length;
  const double L = profile.g_support();
  // g(k t) = 0 once k t >= L.
  const double n = std::min(s.count, std::ceil(L / t));
  const double head = std::min(n, std::max(1.0, std::floor(head_terms)));
  auto term = [&](double k) {
    const double x = k * t;
    return t * profile.g(x) / (2.0 * hyp::sinh_half(x));
  };

  CompensatedSum sum, weights;
  for (double k = 1.0; k <= head; k += 1.0) {
    sum.add(term(k));
    weights.add(t / (2.0 * hyp::sinh_half(k * t)));
  }
  double value = sum.value();
  double radius = sum.rounding_bound() + 8.0 * kUnitRoundoff * sum.abs_total();
  double weight_total = weights.value();

  if (n > head) {
    // x = k t turns int f(k) dk into int g(x) / (2 sinh(x/2)) dx; integrate in log x.
    auto integral = [&](double x0, double x1) {
      if (x1 <= x0) return quad::Result{};
      quad::Options opts{1e-12, 1e-12, 4000};
      return quad::integrate(
          [&](double y) {
            const double x = std::exp(y);
            return profile.g(x) * x / (2.0 * hyp::sinh_half(x));
          },
          std::log(x0), std::log(x1), opts);
    };
    const double a = head + 1.0;
    const double b = n;
    const auto below = integral(a * t, std::min((b + 1.0) * t, L));
    const auto above = integral(a * t, std::min(b * t, L));
    // Decreasing summand: int_a^{b+1} f <= sum_{k=a}^{b} f(k) <= f(a) + int_a^b f.
    const double lower = below.value;
    const double upper = term(a) + above.value;
    value += 0.5 * (lower + upper);
    radius += 0.5 * (upper - lower) + below.error + above.error;
    weight_total += std::log(std::tanh(0.25 * b * t) / std::tanh(0.25 * (a - 1.0) * t));
  }
  // Each g value carries its own quadrature error.
  radius += profile.g_options().abs_tol * weight_total;

  const double m = static_cast<double>(s.multiplicity);
  value *= m;
  radius = radius * m + 2.0 * kUnitRoundoff * std::fabs(value);
  return {value, radius};
}

double g_minimum(const TransformProfile& profile, double radius, int samples) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) best = std::min(best, profile.g(radius * i / samples));
  return best;
}

double g_maximum(const TransformProfile& profile, double radius, int samples) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) best = std::max(best, profile.g(radius * i / samples));
  return best;
}

std::vector<VanishingRow> vanishing_series(const sequence::Schedule& schedule, const TransformProfile& profile,
                                           std::size_t j_max, unsigned workers) {
  if (j_max < 1) throw DomainError("j_max must be >= 1");
  const std::size_t rows = std::min(j_max, schedule.size());
  const double radius = profile.g_support();
  std::vector<VanishingRow> out(rows);
  parallel_for(rows, workers, [&](std::size_t i) {
    VanishingRow& row = out[i];
    row.j = i + 1;
    row.level = schedule.levels()[i];
    row.pinch_length = schedule.pinch_at(i);
    row.valid = false;
    try {
      if (!sequence::validity_check(row.level, row.pinch_length, radius)) {
        row.note = "short spectrum incomplete at the g-support radius for " + format_row(row.level, row.pinch_length);
        return;
      }
      const auto spectrum = sequence::short_spectrum(row.level, row.pinch_length, radius);
      const double volume = sequence::compacted_surface(row.level, row.pinch_length).volume;
      const auto side = geometric_side(spectrum, profile);
      row.value = {side.value / volume, side.radius / volume + 2.0 * kUnitRoundoff * std::fabs(side.value / volume)};
      row.valid = true;
    } catch (const Error& e) {
      row.note = e.what();
    }
  });
  return out;
}

}  // namespace hypsurf::trace
