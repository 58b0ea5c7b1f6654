#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>

#include "congruence.hpp"
#include "errors.hpp"

using namespace hypsurf;
using namespace hypsurf::congruence;

namespace {

// |SL(2, Z/N)| by brute force; this is the index of Gamma(N) in SL(2, Z).
std::int64_t sl2_order_mod(std::int64_t n) {
  std::int64_t count = 0;
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      for (std::int64_t c = 0; c < n; ++c)
        for (std::int64_t d = 0; d < n; ++d)
          if (((a * d - b * c) % n + n) % n == 1 % n) ++count;
  return count;
}

std::int64_t mod(std::int64_t x, std::int64_t n) { return ((x % n) + n) % n; }

// Minimal |trace| > 2 over all four entries in [-B, B], no determinant solving.
std::int64_t brute_min_trace(std::int64_t n, std::int64_t bound) {
  std::int64_t best = 0;
  for (std::int64_t a = -bound; a <= bound; ++a) {
    if (mod(a, n) != 1) continue;
    for (std::int64_t d = -bound; d <= bound; ++d) {
      if (mod(d, n) != 1) continue;
      const std::int64_t tr = std::llabs(a + d);
      if (tr <= 2 || (best && tr >= best)) continue;
      for (std::int64_t b = -bound; b <= bound; b += 1) {
        if (mod(b, n) != 0) continue;
        for (std::int64_t c = -bound; c <= bound; ++c) {
          if (mod(c, n) != 0) continue;
          if (a * d - b * c == 1) {
            best = tr;
            goto next_d;
          }
        }
      }
    next_d:;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("IntegerMatrix2 requires determinant one") {
  CHECK_NOTHROW(IntegerMatrix2(2, 1, 1, 1));
  CHECK_THROWS_AS(IntegerMatrix2(2, 0, 0, 2), DomainError);
  CHECK_THROWS_AS(IntegerMatrix2(INT64_MAX, 1, 1, 1), DomainError);
  CHECK(IntegerMatrix2::identity().trace() == 2);
}

TEST_CASE("prime divisors") {
  CHECK(prime_divisors(1).empty());
  CHECK(prime_divisors(12) == std::vector<std::int64_t>{2, 3});
  CHECK(prime_divisors(97) == std::vector<std::int64_t>{97});
  CHECK(prime_divisors(2 * 3 * 5 * 7 * 11 * 13) == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13});
  CHECK(prime_divisors(1024) == std::vector<std::int64_t>{2});
}

TEST_CASE("index d_N against |SL(2, Z/N)|") {
  CHECK(index_d(2) == 12);
  CHECK(index_d(3) == 24);
  CHECK(index_d(6) == 144);
  CHECK(index_d(7) == 336);
  for (std::int64_t n = 3; n <= 12; ++n) CHECK(index_d(n) == sl2_order_mod(n));
  CHECK_THROWS_AS(index_d(1), DomainError);
  // Large levels stay exact: N = 10^6 has primes 2 and 5.
  CHECK(index_d(1'000'000) == BigInt("1000000000000000000") * 3 / 4 * 24 / 25);
}

TEST_CASE("surface data against the classical genus table") {
  const std::map<std::int64_t, int> genus = {{3, 0},  {4, 0},  {5, 0},  {6, 1},   {7, 3},
                                             {8, 5},  {9, 10}, {10, 13}, {11, 26}, {12, 25}};
  for (auto [n, g] : genus) {
    const auto s = surface_data(n);
    CHECK(s.genus == g);
    CHECK(s.cusps % 2 == 0);
    CHECK(s.cusps * 2 * n == s.index_d);
    // Riemann-Hurwitz over the modular curve, PSL index d/2, no elliptic points.
    CHECK(12 * (2 * s.genus - 2) == s.index_d - 12 * s.cusps);
    CHECK(s.area == doctest::Approx(M_PI * s.index_d.convert_to<double>() / 6).epsilon(1e-15));
    CHECK(2 * std::cosh(s.systole.value() / 2) == doctest::Approx(double(n * n - 2)).epsilon(1e-12));
  }
  const auto s11 = surface_data(11);
  CHECK(s11.index_d == 1320);
  CHECK(s11.cusps == 60);
  CHECK_THROWS_AS(surface_data(2), DomainError);
}

TEST_CASE("membership in Gamma(N)") {
  CHECK(is_in_gamma(IntegerMatrix2::identity(), 3));
  CHECK(is_in_gamma(IntegerMatrix2(1 - 9, 3, -3, 1), 3));
  CHECK_FALSE(is_in_gamma(IntegerMatrix2(2, 1, 1, 1), 3));
  CHECK(is_in_gamma(IntegerMatrix2(-2, 3, 3, -5), 3));
  CHECK_FALSE(is_in_gamma(IntegerMatrix2(1, 1, 0, 1), 3));
  for (std::int64_t n = 3; n <= 40; ++n) {
    const auto w = witness_matrix(n);
    CHECK(is_in_gamma(w, n));
    CHECK(abs(w.trace()) == n * n - 2);
  }
}

TEST_CASE("exhaustive minimal trace matches a brute-force oracle") {
  CHECK(min_hyperbolic_trace(3, 90) == BigInt(7));
  CHECK(min_hyperbolic_trace(5, 250) == BigInt(23));
  for (std::int64_t n : {3, 4, 5}) {
    const std::int64_t bound = n * n + 3;
    CHECK(min_hyperbolic_trace(n, bound, 1) == BigInt(brute_min_trace(n, bound)));
  }
  CHECK_THROWS_AS(min_hyperbolic_trace(3, 5), DomainError);
}

TEST_CASE("minimal trace does not depend on worker count") {
  const auto one = min_hyperbolic_trace(6, 360, 1);
  CHECK(one == BigInt(34));
  CHECK(min_hyperbolic_trace(6, 360, 3) == one);
  CHECK(min_hyperbolic_trace(6, 360, 8) == one);
}

TEST_CASE("projected candidates grows cubically") {
  const double a = projected_candidates(5, 250);
  const double b = projected_candidates(5, 500);
  CHECK(b / a == doctest::Approx(8.0).epsilon(0.05));
  CHECK(projected_candidates(100, 200'000) > 1e10);
}
