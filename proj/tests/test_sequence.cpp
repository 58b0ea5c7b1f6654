#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "errors.hpp"
#include "sequence.hpp"

using namespace hypsurf;
using namespace hypsurf::sequence;

namespace {

// Plain long-double summation of pairs * sum_{k <= n} t / sinh(k t / 2).
long double direct_pinched_sum(double pairs, double t, double n) {
  long double s = 0.0L;
  for (double k = n; k >= 1.0; k -= 1.0) s += (long double)t / std::sinh((long double)k * t / 2.0L);
  return s * pairs;
}

}  // namespace

TEST_CASE("compacted surface records") {
  const auto s3 = compacted_surface(3, 0.1);
  CHECK(s3.pinched_count == 2);
  CHECK(s3.genus == 2);
  CHECK(s3.volume == doctest::Approx(4 * M_PI).epsilon(1e-15));
  const auto s7 = compacted_surface(7, 0.1);
  CHECK(s7.pinched_count == 12);
  CHECK(s7.genus == 15);
  CHECK(s7.volume == doctest::Approx(56 * M_PI).epsilon(1e-15));
  CHECK(compacted_surface(5, 0.2).volume == doctest::Approx(20 * M_PI).epsilon(1e-15));
  for (std::int64_t n = 3; n <= 60; ++n) {
    const auto s = compacted_surface(n, 0.01);
    const auto base = congruence::surface_data(n);
    CHECK(s.genus >= base.genus);
    CHECK(s.volume == doctest::Approx(4 * M_PI * (s.genus.convert_to<double>() - 1)).epsilon(1e-12));
    CHECK(s.volume == doctest::Approx(M_PI * base.index_d.convert_to<double>() / 6).epsilon(1e-12));
  }
  CHECK_THROWS_AS(compacted_surface(2, 0.1), DomainError);
  CHECK_THROWS_AS(compacted_surface(5, 0.0), DomainError);
}

TEST_CASE("other-geodesic floor takes the smallest branch") {
  const double t = 0.01;
  const double crossing = 2 * std::asinh(1 / std::sinh(t / 2));
  const double simple = std::acosh(49.0) / (1 + 1.25 * t * t);
  CHECK(crossing == doctest::Approx(2 * std::asinh(200.0)).epsilon(1e-4));
  CHECK(simple < crossing);
  CHECK(other_geodesic_floor(10, t) == doctest::Approx(simple).epsilon(1e-15));

  const double t3 = 0.4;
  const double b1 = 2 * std::asinh(1 / std::sinh(t3 / 2));
  const double b2 = std::acosh(3.5) / (1 + 1.25 * t3 * t3);
  CHECK(other_geodesic_floor(3, t3) == doctest::Approx(std::min(b1, b2)).epsilon(1e-15));
  CHECK(other_geodesic_floor(25, 1e-12) == doctest::Approx(std::acosh((625.0 - 2) / 2)).epsilon(1e-12));
  CHECK_THROWS_AS(other_geodesic_floor(5, 0.5), DomainError);
}

TEST_CASE("validity check") {
  CHECK(validity_check(100, 0.01, 5.0));
  CHECK(other_geodesic_floor(100, 0.01) == doctest::Approx(std::acosh(4999.0) / (1 + 1.25e-4)).epsilon(1e-14));
  CHECK_FALSE(validity_check(3, 0.4, 100.0));
  CHECK(validity_check(3, 0.4, 1e-9));
}

TEST_CASE("short spectrum") {
  const auto s = short_spectrum(5, 0.2, 1.0);
  CHECK(s.count == 5);
  CHECK(s.multiplicity == 6);
  const auto classes = s.materialize();
  REQUIRE(classes.size() == 5);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    CHECK(classes[k].primitive_length == 0.2);
    CHECK(classes[k].length == doctest::Approx(0.2 * double(k + 1)).epsilon(1e-15));
    CHECK(classes[k].multiplicity == 6);
  }
  CHECK(short_spectrum(5, 0.4, 0.3).count == 0);
  CHECK(multiples_within(0.5, 1.0) == 2);
  CHECK(multiples_within(0.1, 0.3) == 2);  // 3 * 0.1 rounds above 0.3
  CHECK(multiples_within(std::exp(-20.0), 1.0) == std::floor(std::exp(20.0)));
  CHECK_THROWS_AS(short_spectrum(3, 0.4, 100.0), ValidityError);
  PinchedSpectrum huge{1e-9, 1, 1e9};
  CHECK_THROWS_AS(huge.materialize(), DomainError);
}

TEST_CASE("plancherel sum on explicit classes") {
  const std::vector<GeodesicClass> two = {{0.5, 0.5, 1}, {1.0, 0.5, 1}};
  const auto r = plancherel_sum(two, 1.0);
  CHECK(r.value == doctest::Approx(0.5 / std::sinh(0.25) + 0.5 / std::sinh(0.5)).epsilon(1e-15));
  CHECK(r.value == doctest::Approx(2.938835).epsilon(1e-6));
  CHECK(plancherel_sum(std::vector<GeodesicClass>{}, 1.0).value == 0.0);
  CHECK_THROWS_AS(plancherel_sum(two, 0.9), DomainError);
  // Each term is at most 2 * multiplicity / k.
  for (double k = 1; k <= 50; ++k) {
    const double term = 0.02 / std::sinh(k * 0.02 / 2);
    CHECK(term <= 2.0 / k);
  }
}

TEST_CASE("pinched-family sum agrees with direct summation") {
  struct Case {
    double t, pairs, count, head;
  };
  for (const Case c : {Case{0.2, 6, 5, 1e6}, Case{1e-3, 12, 1000, 10}, Case{1e-4, 30, 50000, 1000},
                       Case{1e-5, 2, 2e5, 500}, Case{3e-6, 1, 333333, 1e5}}) {
    const PinchedSpectrum s{c.t, static_cast<std::uint64_t>(c.pairs), c.count};
    const double direct = static_cast<double>(direct_pinched_sum(c.pairs, c.t, c.count));
    const auto short_head = plancherel_sum(s, c.head);
    CHECK(std::fabs(short_head.value - direct) <= short_head.radius);
    const auto r = plancherel_sum(s);
    CHECK(std::fabs(r.value - direct) <= r.radius);
    CHECK(r.relative_radius() <= 1e-9);
    CHECK(std::fabs(r.value - direct) <= 1e-9 * direct);
  }
  const auto norm = plancherel_normalized(5, 0.2, 1.0);
  CHECK(norm.value == doctest::Approx(static_cast<double>(direct_pinched_sum(6, 0.2, 5)) / (20 * M_PI)).epsilon(1e-14));
  CHECK(norm.value == doctest::Approx(0.431).epsilon(1e-3));
}

TEST_CASE("plancherel sum brackets contain the truth beyond the head") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logt(std::log(1e-6), std::log(0.3));
  for (int i = 0; i < 25; ++i) {
    const double t = std::exp(logt(rng));
    const double n = std::floor(1.0 / t);
    if (n > 2e6) continue;
    const auto r = plancherel_sum(PinchedSpectrum{t, 1, n}, 100);
    const double direct = static_cast<double>(direct_pinched_sum(1, t, n));
    CHECK(r.lower() <= direct);
    CHECK(direct <= r.upper());
  }
}

TEST_CASE("normalized sum is nondecreasing in R") {
  double last = 0.0;
  for (double R : {0.5, 1.0, 2.0, 3.0}) {
    const double v = plancherel_normalized(40, 0.01, R).value;
    CHECK(v >= last);
    last = v;
  }
  CHECK(plancherel_normalized(40, 0.3, 0.2).value == 0.0);
}

TEST_CASE("BS ratio closed form") {
  CHECK(bs_ratio(5, 0.2, 1.0) == doctest::Approx(3 / (10 * M_PI)).epsilon(1e-12));
  for (std::int64_t n : {5, 17, 100, 2000}) {
    const double t = 1.0 / n;
    CHECK(std::fabs(bs_ratio(n, t, 1.0) - 3 / (2 * M_PI * n)) <= 1e-12 * 3 / (2 * M_PI * n));
  }
  CHECK(bs_ratio(5, 0.3, 0.2) == 0.0);
  CHECK_THROWS_AS(bs_ratio(3, 0.4, 100.0), ValidityError);
}

TEST_CASE("harmonic sums") {
  CHECK(harmonic_sum(1) == 1.0);
  CHECK(harmonic_sum(100) == doctest::Approx(5.18737751763962).epsilon(1e-14));
  for (std::uint64_t n : {10ULL, 1000ULL, 1000000ULL}) {
    long double h = 0;
    for (std::uint64_t k = n; k >= 1; --k) h += 1.0L / k;
    CHECK(harmonic_sum(n) == doctest::Approx(static_cast<double>(h)).epsilon(1e-15));
    CHECK(std::fabs(harmonic_sum(n) - std::log(double(n)) - kEulerGamma) <= 1.0 / (2.0 * n));
  }
  // Past the direct limit the expansion takes over smoothly.
  const double n = 1e12;
  const double asym = std::log(n) + kEulerGamma + 1 / (2 * n) - 1 / (12 * n * n);
  CHECK(harmonic_sum(1'000'000'000'000ULL) == doctest::Approx(asym).epsilon(1e-15));
  CHECK_THROWS_AS(harmonic_sum(0), DomainError);
}

TEST_CASE("sandwich bounds hold on a random grid") {
  const double R1 = 1.0;
  CHECK(pinched_sum_bounds(1, 0.1, R1).lower == doctest::Approx(std::log(10.0) / std::sinh(0.5)).epsilon(1e-14));
  CHECK(pinched_sum_bounds(1, 0.1, R1).lower == doctest::Approx(4.418).epsilon(1e-3));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> level(5, 200);
  std::uniform_real_distribution<double> logt(std::log(1e-7), std::log(0.4));
  std::uniform_real_distribution<double> rad(1.0, 6.0);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 60; ++i) {
    const int n = level(rng);
    const double t = std::exp(logt(rng));
    const double R = rad(rng);
    if (!validity_check(n, t, R) || t >= std::min(1.0, R)) continue;
    const auto b = sandwich_bounds(n, t, R);
    const auto s = plancherel_sum(short_spectrum(n, t, R));
    CHECK(b.lower <= s.lower());
    CHECK(s.upper() <= b.upper);
    ++checked;
  }
  CHECK(checked >= 30);
  CHECK_THROWS_AS(sandwich_bounds(5, 0.1, 0.5), DomainError);
  CHECK_THROWS_AS(sandwich_bounds(5, 0.1, 5.0), DomainError);  // validity floor below 5
}

TEST_CASE("schedule construction and pinch rules") {
  const Schedule rec("r", {3, 4, 10}, PinchRule::kReciprocal);
  CHECK(rec.pinch_at(2) == doctest::Approx(0.1));
  const Schedule ex("e", {3, 4}, PinchRule::kExponential, 2.0);
  CHECK(ex.pinch_at(1) == doctest::Approx(2 * std::exp(-4.0)));
  const Schedule sup("s", {3, 4}, PinchRule::kSuperexponential);
  CHECK(sup.pinch_at(1) == doctest::Approx(std::exp(-16.0)));
  const Schedule exp_list("x", {5, 6}, PinchRule::kExplicit, 1.0, {0.3, 0.2, 0.1});
  CHECK(exp_list.pinch_at(1) == 0.2);

  CHECK_THROWS_AS(Schedule("bad", {}, PinchRule::kReciprocal), DomainError);
  CHECK_THROWS_AS(Schedule("bad", {5, 5}, PinchRule::kReciprocal), DomainError);
  CHECK_THROWS_AS(Schedule("bad", {2, 5}, PinchRule::kReciprocal), DomainError);
  CHECK_THROWS_AS(Schedule("bad", {5}, PinchRule::kReciprocal, 0.0), DomainError);
  CHECK_THROWS_AS(Schedule("bad", {5, 6}, PinchRule::kExplicit, 1.0, {0.1}), DomainError);
  CHECK_THROWS_AS(Schedule("bad", {5, 6}, PinchRule::kExplicit, 1.0, {0.1, 0.2}), DomainError);
  CHECK_THROWS_AS(Schedule("bad", {5, 6}, PinchRule::kExplicit, 1.0, {0.1, -0.2}), DomainError);
  CHECK_THROWS_AS(rec.pinch_at(3), DomainError);

  for (auto r : {PinchRule::kReciprocal, PinchRule::kExponential, PinchRule::kSuperexponential, PinchRule::kExplicit})
    CHECK(pinch_rule_from_string(to_string(r)) == r);
  CHECK_FALSE(pinch_rule_from_string("linear").has_value());
}

TEST_CASE("observed trend classifier") {
  const std::vector<double> levels = {10, 20, 40, 80, 160, 320};
  std::vector<double> vanishing, flat, growing;
  for (double n : levels) {
    vanishing.push_back(std::log(n) / n);
    flat.push_back(0.9 + 1.0 / n);
    growing.push_back(n);
  }
  double slope = 0;
  CHECK(observed_trend(levels, vanishing, &slope) == Trend::kVanishing);
  CHECK(slope < -0.5);
  CHECK(observed_trend(levels, flat) == Trend::kBoundedAwayFromZero);
  CHECK(observed_trend(levels, growing) == Trend::kDivergent);
  CHECK(observed_trend(std::vector<double>{3, 4}, std::vector<double>{1, 2}) == Trend::kInconclusive);
}

TEST_CASE("classify schedule: rows, flags, determinism") {
  const Schedule s("mixed", {3, 5, 20, 40, 80}, PinchRule::kReciprocal);
  const auto a = classify_schedule(s, 2.0, 10, 1);
  const auto b = classify_schedule(s, 2.0, 10, 4);
  REQUIRE(a.rows.size() == 5);
  CHECK_FALSE(a.rows[0].valid);  // floor(3, 1/3) is about 1.69
  CHECK_FALSE(a.rows[0].note.empty());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].j == i + 1);
    CHECK(a.rows[i].valid == b.rows[i].valid);
    CHECK(a.rows[i].plancherel_sum.value == b.rows[i].plancherel_sum.value);
    if (a.rows[i].valid) {
      CHECK(a.rows[i].bs_ratio == doctest::Approx(3 / (2 * M_PI * a.rows[i].level)).epsilon(1e-12));
    }
  }
  CHECK(classify_schedule(s, 1.0, 2).rows.size() == 2);
  CHECK_THROWS_AS(classify_schedule(s, 1.0, 0), DomainError);
}
