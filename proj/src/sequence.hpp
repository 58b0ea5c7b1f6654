#pragma once

// The pinched surfaces X_t(N) and the convergence functionals evaluated on
// their short length spectra.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "congruence.hpp"
#include "summation.hpp"

namespace hypsurf::sequence {

using congruence::BigInt;

// X_t(N): every cusp of X(N) replaced by a boundary geodesic of length t and
// the new geodesics glued in pairs. Genus and volume follow from the Euler
// characteristic, which the gluing preserves.
struct CompactedSurface {
  std::int64_t level;
  double pinch_length;
  BigInt pinched_count;  // b_N / 2
  BigInt genus;          // g_N + b_N / 2
  double volume;         // 4 pi (genus - 1) = pi d_N / 6
};

struct GeodesicClass {
  double length;
  double primitive_length;
  std::uint64_t multiplicity;
};

// The classes {k t : 1 <= k <= count}, each with the same multiplicity.
// Below the validity radius this is the complete length spectrum of X_t(N);
// count can be astronomically large, so it is kept symbolic.
struct PinchedSpectrum {
  double primitive_length = 0.0;
  std::uint64_t multiplicity = 0;
  double count = 0.0;  // exact while below 2^53

  // Throws DomainError when count exceeds max_classes.
  std::vector<GeodesicClass> materialize(double max_classes = 1e7) const;
};

inline constexpr double kDefaultHeadTerms = 1e6;

CompactedSurface compacted_surface(std::int64_t level, double pinch_length);

// Lower bound for the length of any closed geodesic on X_t(N) that is not a
// power of a pinched geodesic: the minimum of the crossing bound, the
// distorted bound for non-crossing simple geodesics and the figure-eight
// bound. Requires 0 < t < 1/2.
double other_geodesic_floor(std::int64_t level, double pinch_length);

// True iff other_geodesic_floor exceeds the radius.
bool validity_check(std::int64_t level, double pinch_length, double radius);

// Largest k with k * t <= radius in floating point (0 if t > radius).
double multiples_within(double pinch_length, double radius);

// Throws ValidityError when validity_check fails.
PinchedSpectrum short_spectrum(std::int64_t level, double pinch_length, double radius);

// sum over classes of multiplicity * primitive_length / sinh(length / 2).
// Every class must satisfy length <= radius (DomainError otherwise).
Certified plancherel_sum(std::span<const GeodesicClass> spectrum, double radius);

// Same functional on a pinched family. Up to head_terms summands are added
// exactly; the rest of the convex decreasing summand is bracketed between
// its trapezoid and midpoint integral bounds.
Certified plancherel_sum(const PinchedSpectrum& spectrum, double head_terms = kDefaultHeadTerms);

// plancherel_sum(short_spectrum(N, t, R)) / volume(X_t(N)).
Certified plancherel_normalized(std::int64_t level, double pinch_length, double radius);

// Count of simple closed geodesics of length <= R per unit volume; equals
// 3 / (2 pi N) whenever t <= R and 0 when t > R.
double bs_ratio(std::int64_t level, double pinch_length, double radius);

// H_n; direct summation up to 1e8, Euler-Maclaurin beyond.
double harmonic_sum(std::uint64_t n);
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr std::uint64_t kHarmonicDirectLimit = 100'000'000;

struct Sandwich {
  double lower;
  double upper;
};

// Bounds for pairs * sum_{k t <= R} t / sinh(k t / 2) that do not depend on
// the validity radius: lower = (R / sinh(R/2)) pairs |log t|,
// upper = 2 pairs (log(R / t) + 1). Needs t < min(1, R) and R >= 1.
Sandwich pinched_sum_bounds(double pairs, double pinch_length, double radius);

// pinched_sum_bounds for X_t(N), additionally requiring validity.
Sandwich sandwich_bounds(std::int64_t level, double pinch_length, double radius);

// ---------------------------------------------------------------------------
// Schedules

enum class PinchRule { kReciprocal, kExponential, kSuperexponential, kExplicit };

const char* to_string(PinchRule rule) noexcept;
std::optional<PinchRule> pinch_rule_from_string(std::string_view name) noexcept;

class Schedule {
 public:
  // Levels must be >= 3 and strictly increasing; explicit pinch lengths must
  // be positive, nonincreasing and at least as many as the levels. Rule
  // schedules use t_j = scale / N_j, scale exp(-N_j) or scale exp(-N_j^2).
  Schedule(std::string name, std::vector<std::int64_t> levels, PinchRule rule, double scale = 1.0,
           std::vector<double> explicit_pinch = {});

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::int64_t>& levels() const noexcept { return levels_; }
  PinchRule rule() const noexcept { return rule_; }
  double scale() const noexcept { return scale_; }
  std::size_t size() const noexcept { return levels_.size(); }

  // Pinch length at 0-based row index.
  double pinch_at(std::size_t index) const;

 private:
  std::string name_;
  std::vector<std::int64_t> levels_;
  PinchRule rule_;
  double scale_;
  std::vector<double> explicit_pinch_;
};

struct ScheduleRow {
  std::size_t j;  // 1-based
  std::int64_t level;
  double pinch_length;
  BigInt pinched_count;
  BigInt genus;
  double volume;
  bool valid;
  std::string note;  // reason when the row is not valid
  double bs_ratio = 0.0;
  Certified plancherel_sum;
  Certified plancherel_normalized;
  std::optional<Sandwich> normalized_bounds;  // sandwich / volume
};

enum class Trend { kVanishing, kBoundedAwayFromZero, kDivergent, kInconclusive };

const char* to_string(Trend trend) noexcept;

struct ScheduleVerdict {
  bool bs_vanishing = false;         // bs_ratio strictly decreasing over valid rows
  Trend plancherel_expected = Trend::kInconclusive;  // from the growth of 1/t_j
  Trend plancherel_observed = Trend::kInconclusive;  // from the computed series
  double tail_loglog_slope = 0.0;    // d log(pl_norm) / d log N over the tail
  std::optional<std::size_t> decreasing_from;  // first j after which pl_norm strictly decreases
  std::size_t valid_rows = 0;
};

struct ScheduleReport {
  std::vector<ScheduleRow> rows;
  ScheduleVerdict verdict;
};

// Observed trend of a positive series indexed by increasing levels: the last
// half strictly increasing is divergent; otherwise a log-log slope <= -1/2 over
// the last half is vanishing, anything else bounded away from zero.
Trend observed_trend(std::span<const double> levels, std::span<const double> values,
                     double* slope = nullptr);

ScheduleReport classify_schedule(const Schedule& schedule, double radius, std::size_t j_max,
                                 unsigned workers = 0);

}  // namespace hypsurf::sequence
