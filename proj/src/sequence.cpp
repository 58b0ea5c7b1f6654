#include "sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"
#include "hyperbolic.hpp"

namespace hypsurf::sequence {

namespace {

constexpr double u = kUnitRoundoff;

void require_pinch(double t) {
  if (!(t > 0.0) || !std::isfinite(t) || !std::isnormal(t)) {
    std::ostringstream os;
    os.precision(17);
    os << "pinch length must be a positive normal number (got " << t << ")";
    throw DomainError(os.str());
  }
}

void require_radius(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    std::ostringstream os;
    os.precision(17);
    os << "radius must be positive and finite (got " << radius << ")";
    throw DomainError(os.str());
  }
}

// t / sinh(k t / 2)
double pinched_term(double t, double k) { return t / hyp::sinh_half(k * t); }

// Antiderivative of k -> t / sinh(k t / 2) between two points: 2 log(tanh(b t/4) / tanh(a t/4)).
double pinched_integral(double t, double a, double b) {
  return 2.0 * std::log(std::tanh(0.25 * b * t) / std::tanh(0.25 * a * t));
}

// Rounding allowance for one evaluation of pinched_integral.
double pinched_integral_slack(double value) { return 16.0 * u * (1.0 + std::fabs(value)); }

std::string row_label(std::int64_t level, double t) {
  std::ostringstream os;
  os.precision(17);
  os << "N=" << level << ", t=" << t;
  return os.str();
}

}  // namespace

std::vector<GeodesicClass> PinchedSpectrum::materialize(double max_classes) const {
  if (count > max_classes) {
    std::ostringstream os;
    os << "refusing to materialize " << count << " geodesic classes (limit " << max_classes << ")";
    throw DomainError(os.str());
  }
  std::vector<GeodesicClass> classes;
  const auto n = static_cast<std::uint64_t>(count);
  classes.reserve(n);
  for (std::uint64_t k = 1; k <= n; ++k) {
    classes.push_back({static_cast<double>(k) * primitive_length, primitive_length, multiplicity});
  }
  return classes;
}

CompactedSurface compacted_surface(std::int64_t level, double pinch_length) {
  require_pinch(pinch_length);
  auto data = congruence::surface_data(level);
  BigInt pairs = data.cusps / 2;
  BigInt genus = data.genus + pairs;
  const double volume = 4.0 * hyp::kPi * BigInt(genus - 1).convert_to<double>();
  return {level, pinch_length, std::move(pairs), std::move(genus), volume};
}

double other_geodesic_floor(std::int64_t level, double pinch_length) {
  if (!(pinch_length > 0.0 && pinch_length < 0.5)) {
    std::ostringstream os;
    os.precision(17);
    os << "pinch length must lie in (0, 1/2) (got " << pinch_length << ")";
    throw DomainError(os.str());
  }
  if (level < 3) throw DomainError("level must be >= 3");
  const double crossing = hyp::crossing_length_bound(hyp::GeodesicLength(pinch_length)).value();
  const double n = static_cast<double>(level);
  const double systole_half = std::acosh((n * n - 2.0) / 2.0);
  const double distortion = hyp::distortion_bound(pinch_length);
  const double simple = systole_half / distortion;
  const double figure_eight = 2.0 * systole_half / distortion;
  return std::min({crossing, simple, figure_eight});
}

bool validity_check(std::int64_t level, double pinch_length, double radius) {
  require_radius(radius);
  return other_geodesic_floor(level, pinch_length) > radius;
}

double multiples_within(double pinch_length, double radius) {
  require_pinch(pinch_length);
  require_radius(radius);
  double k = std::floor(radius / pinch_length);
  if (k < 9007199254740992.0) {
    while (k > 0 && k * pinch_length > radius) k -= 1.0;
    while ((k + 1.0) * pinch_length <= radius) k += 1.0;
  }
  return k;
}

PinchedSpectrum short_spectrum(std::int64_t level, double pinch_length, double radius) {
  if (!validity_check(level, pinch_length, radius)) {
    std::ostringstream os;
    os.precision(17);
    os << "short spectrum incomplete at radius " << radius << " for " << row_label(level, pinch_length)
       << ": other geodesics may be as short as " << other_geodesic_floor(level, pinch_length);
    throw ValidityError(os.str());
  }
  const auto surface = compacted_surface(level, pinch_length);
  return {pinch_length, surface.pinched_count.convert_to<std::uint64_t>(),
          multiples_within(pinch_length, radius)};
}

Certified plancherel_sum(std::span<const GeodesicClass> spectrum, double radius) {
  require_radius(radius);
  CompensatedSum sum;
  for (const auto& c : spectrum) {
    if (c.length > radius) {
      std::ostringstream os;
      os.precision(17);
      os << "class of length " << c.length << " lies beyond radius " << radius;
      throw DomainError(os.str());
    }
    sum.add(static_cast<double>(c.multiplicity) * c.primitive_length / hyp::sinh_half(c.length));
  }
  // Each term carries a few roundings of its own.
  return {sum.value(), sum.rounding_bound() + 6.0 * u * sum.abs_total()};
}

Certified plancherel_sum(const PinchedSpectrum& s, double head_terms) {
  if (s.count <= 0.0 || s.multiplicity == 0) return {0.0, 0.0};
  require_pinch(s.primitive_length);
  const double t = s.primitive_length;
  const double n = s.count;
  const double head = std::min(n, std::max(1.0, std::floor(head_terms)));

  CompensatedSum sum;
  for (double k = 1.0; k <= head; k += 1.0) sum.add(pinched_term(t, k));
  double value = sum.value();
  double radius = sum.rounding_bound() + 6.0 * u * sum.abs_total();

  if (n > head) {
    const double a = head + 1.0;
    const double b = n;
    const double fa = pinched_term(t, a);
    const double fb = pinched_term(t, b);
    // Convex decreasing summand: trapezoid sums overestimate the integral,
    // midpoint values underestimate it.
    const double integral = pinched_integral(t, a, b);
    const double lower = integral + 0.5 * (fa + fb);
    const double upper = pinched_integral(t, a - 0.5, b + 0.5);
    value += 0.5 * (lower + upper);
    radius += 0.5 * (upper - lower) + pinched_integral_slack(integral) + pinched_integral_slack(upper) +
              8.0 * u * (fa + fb);
    // count is exact below 2^53 and known to within its ulp beyond.
    const double count_slack =
        b < 9007199254740992.0 ? 0.0 : std::nextafter(b, std::numeric_limits<double>::infinity()) - b;
    radius += (count_slack + 2.0 * u * b) * fb;
  }

  const double m = static_cast<double>(s.multiplicity);
  value *= m;
  radius = radius * m + 2.0 * u * std::fabs(value);
  return {value, radius};
}

Certified plancherel_normalized(std::int64_t level, double pinch_length, double radius) {
  const auto spectrum = short_spectrum(level, pinch_length, radius);
  const double volume = compacted_surface(level, pinch_length).volume;
  const Certified sum = plancherel_sum(spectrum);
  return {sum.value / volume, sum.radius / volume + 2.0 * u * std::fabs(sum.value / volume)};
}

double bs_ratio(std::int64_t level, double pinch_length, double radius) {
  if (!validity_check(level, pinch_length, radius)) {
    throw ValidityError("simple-geodesic count incomplete at radius for " + row_label(level, pinch_length));
  }
  if (pinch_length > radius) return 0.0;
  const auto surface = compacted_surface(level, pinch_length);
  return surface.pinched_count.convert_to<double>() / surface.volume;
}

double harmonic_sum(std::uint64_t n) {
  if (n == 0) throw DomainError("harmonic_sum needs n >= 1");
  if (n <= kHarmonicDirectLimit) {
    CompensatedSum sum;
    for (std::uint64_t k = n; k >= 1; --k) sum.add(1.0 / static_cast<double>(k));
    return sum.value();
  }
  // Truncation error below 1 / (120 n^4).
  const double x = static_cast<double>(n);
  return std::log(x) + kEulerGamma + 0.5 / x - 1.0 / (12.0 * x * x);
}

Sandwich pinched_sum_bounds(double pairs, double pinch_length, double radius) {
  require_pinch(pinch_length);
  require_radius(radius);
  if (radius < 1.0) throw DomainError("sandwich bounds need R >= 1");
  if (!(pinch_length < std::min(1.0, radius))) throw DomainError("sandwich bounds need t < min(1, R)");
  if (!(pairs >= 0.0)) throw DomainError("pair count must be nonnegative");
  const double log_t = std::fabs(std::log(pinch_length));
  const double lower = radius / hyp::sinh_half(radius) * pairs * log_t;
  const double upper = 2.0 * pairs * (std::log(radius / pinch_length) + 1.0);
  return {lower, upper};
}

Sandwich sandwich_bounds(std::int64_t level, double pinch_length, double radius) {
  require_pinch(pinch_length);
  if (radius < 1.0) throw DomainError("sandwich bounds need R >= 1");
  if (!(pinch_length < std::min(1.0, radius))) throw DomainError("sandwich bounds need t < min(1, R)");
  if (!validity_check(level, pinch_length, radius)) {
    throw DomainError("sandwich bounds need a complete short spectrum at " + row_label(level, pinch_length));
  }
  const auto surface = compacted_surface(level, pinch_length);
  return pinched_sum_bounds(surface.pinched_count.convert_to<double>(), pinch_length, radius);
}

// ---------------------------------------------------------------------------

const char* to_string(PinchRule rule) noexcept {
  switch (rule) {
    case PinchRule::kReciprocal: return "reciprocal";
    case PinchRule::kExponential: return "exponential";
    case PinchRule::kSuperexponential: return "superexponential";
    case PinchRule::kExplicit: return "explicit";
  }
  return "unknown";
}

std::optional<PinchRule> pinch_rule_from_string(std::string_view name) noexcept {
  for (auto rule : {PinchRule::kReciprocal, PinchRule::kExponential, PinchRule::kSuperexponential,
                    PinchRule::kExplicit}) {
    if (name == to_string(rule)) return rule;
  }
  return std::nullopt;
}

const char* to_string(Trend trend) noexcept {
  switch (trend) {
    case Trend::kVanishing: return "vanishing";
    case Trend::kBoundedAwayFromZero: return "bounded_away_from_zero";
    case Trend::kDivergent: return "divergent";
    case Trend::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

Schedule::Schedule(std::string name, std::vector<std::int64_t> levels, PinchRule rule, double scale,
                   std::vector<double> explicit_pinch)
    : name_(std::move(name)),
      levels_(std::move(levels)),
      rule_(rule),
      scale_(scale),
      explicit_pinch_(std::move(explicit_pinch)) {
  if (levels_.empty()) throw DomainError("schedule has no levels");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i] < 3) throw DomainError("schedule levels must be >= 3");
    if (i > 0 && levels_[i] <= levels_[i - 1]) throw DomainError("schedule levels must be strictly increasing");
  }
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw DomainError("schedule scale must be positive");
  if (rule_ == PinchRule::kExplicit) {
    if (explicit_pinch_.size() < levels_.size()) {
      throw DomainError("explicit schedule needs one pinch length per level");
    }
    for (std::size_t i = 0; i < explicit_pinch_.size(); ++i) {
      if (!(explicit_pinch_[i] > 0.0) || !std::isfinite(explicit_pinch_[i])) {
        throw DomainError("explicit pinch lengths must be positive");
      }
      if (i > 0 && explicit_pinch_[i] > explicit_pinch_[i - 1]) {
        throw DomainError("explicit pinch lengths must be nonincreasing");
      }
    }
  } else if (!explicit_pinch_.empty()) {
    throw DomainError("pinch values are only accepted by the explicit rule");
  }
}

double Schedule::pinch_at(std::size_t index) const {
  if (index >= levels_.size()) throw DomainError("schedule index out of range");
  const double n = static_cast<double>(levels_[index]);
  switch (rule_) {
    case PinchRule::kReciprocal: return scale_ / n;
    case PinchRule::kExponential: return scale_ * std::exp(-n);
    case PinchRule::kSuperexponential: return scale_ * std::exp(-n * n);
    case PinchRule::kExplicit: return explicit_pinch_[index];
  }
  return 0.0;
}

Trend observed_trend(std::span<const double> levels, std::span<const double> values, double* slope) {
  const std::size_t n = std::min(levels.size(), values.size());
  if (slope) *slope = 0.0;
  if (n < 3) return Trend::kInconclusive;
  const std::size_t start = n / 2 == n - 1 ? n - 2 : n / 2;

  bool increasing = true;
  // Growth must exceed 1e-9 relative per step.
  for (std::size_t i = start + 1; i < n; ++i) {
    increasing = increasing && values[i] > values[i - 1] * (1.0 + 1e-9);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = start; i < n; ++i) {
    if (!(values[i] > 0.0) || !(levels[i] > 0.0)) return Trend::kInconclusive;
    const double x = std::log(levels[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  const double fitted = denom > 0 ? (static_cast<double>(m) * sxy - sx * sy) / denom : 0.0;
  if (slope) *slope = fitted;
  if (increasing) return Trend::kDivergent;
  return fitted <= -0.5 ? Trend::kVanishing : Trend::kBoundedAwayFromZero;
}

ScheduleReport classify_schedule(const Schedule& schedule, double radius, std::size_t j_max,
                                 unsigned workers) {
  require_radius(radius);
  if (j_max < 1) throw DomainError("j_max must be >= 1");
  const std::size_t rows = std::min(j_max, schedule.size());

  ScheduleReport report;
  report.rows.resize(rows);
  parallel_for(rows, workers, [&](std::size_t i) {
    ScheduleRow& row = report.rows[i];
    row.j = i + 1;
    row.level = schedule.levels()[i];
    row.pinch_length = schedule.pinch_at(i);
    row.valid = false;
    try {
      const auto surface = compacted_surface(row.level, row.pinch_length);
      row.pinched_count = surface.pinched_count;
      row.genus = surface.genus;
      row.volume = surface.volume;
      if (!validity_check(row.level, row.pinch_length, radius)) {
        std::ostringstream os;
        os.precision(6);
        os << "validity radius " << other_geodesic_floor(row.level, row.pinch_length)
           << " does not exceed R";
        row.note = os.str();
        return;
      }
      row.bs_ratio = bs_ratio(row.level, row.pinch_length, radius);
      row.plancherel_sum = plancherel_sum(short_spectrum(row.level, row.pinch_length, radius));
      row.plancherel_normalized = {row.plancherel_sum.value / row.volume,
                                   row.plancherel_sum.radius / row.volume +
                                       2.0 * u * row.plancherel_sum.value / row.volume};
      if (radius >= 1.0 && row.pinch_length < 1.0 && row.pinch_length < radius) {
        const auto bounds = pinched_sum_bounds(row.pinched_count.convert_to<double>(), row.pinch_length, radius);
        row.normalized_bounds = Sandwich{bounds.lower / row.volume, bounds.upper / row.volume};
      }
      row.valid = true;
    } catch (const Error& e) {
      row.valid = false;
      row.note = e.what();
    }
  });

  ScheduleVerdict& verdict = report.verdict;
  std::vector<double> levels, norms, growth, bs;
  for (const auto& row : report.rows) {
    if (!row.valid) continue;
    levels.push_back(static_cast<double>(row.level));
    norms.push_back(row.plancherel_normalized.value);
    growth.push_back(std::fabs(std::log(row.pinch_length)) / static_cast<double>(row.level));
    bs.push_back(row.bs_ratio);
  }
  verdict.valid_rows = levels.size();
  verdict.bs_vanishing = bs.size() >= 2;
  for (std::size_t i = 1; i < bs.size(); ++i) verdict.bs_vanishing = verdict.bs_vanishing && bs[i] < bs[i - 1];

  // Growth rate of 1/t_j in N_j: |log t_j| / N_j -> 0 is the sub-exponential regime.
  verdict.plancherel_expected = observed_trend(levels, growth);
  verdict.plancherel_observed = observed_trend(levels, norms, &verdict.tail_loglog_slope);

  if (norms.size() >= 2) {
    std::size_t first = norms.size() - 1;
    while (first > 0 && norms[first - 1] > norms[first]) --first;
    if (first < norms.size() - 1) {
      std::size_t seen = 0;
      for (const auto& row : report.rows) {
        if (!row.valid) continue;
        if (seen++ == first) {
          verdict.decreasing_from = row.j;
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace hypsurf::sequence
