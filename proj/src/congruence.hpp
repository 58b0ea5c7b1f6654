#pragma once

// Exact arithmetic for the principal congruence subgroups Gamma(N) of
// SL(2, Z) and the level-N congruence surfaces X(N) = Gamma(N) \ H.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <vector>

#include "hyperbolic.hpp"

namespace hypsurf::congruence {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// A 2x2 integer matrix of determinant 1.
class IntegerMatrix2 {
 public:
  // Throws DomainError unless a*d - b*c == 1.
  IntegerMatrix2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

  static IntegerMatrix2 identity() { return {1, 0, 0, 1}; }

  std::int64_t a() const noexcept { return a_; }
  std::int64_t b() const noexcept { return b_; }
  std::int64_t c() const noexcept { return c_; }
  std::int64_t d() const noexcept { return d_; }

  BigInt trace() const { return BigInt(a_) + d_; }

  friend bool operator==(const IntegerMatrix2&, const IntegerMatrix2&) = default;

 private:
  std::int64_t a_, b_, c_, d_;
};

struct CongruenceSurfaceData {
  std::int64_t level;
  BigInt index_d;   // [SL(2,Z) : Gamma(N)] = |SL(2, Z/N)|
  BigInt genus;
  BigInt cusps;     // always even for N >= 3
  hyp::GeodesicLength systole;
  double area;      // pi * d_N / 6
};

// Distinct prime divisors in increasing order.
std::vector<std::int64_t> prime_divisors(std::int64_t n);

// d_2 = 12; d_N = N^3 prod_{p | N} (1 - 1/p^2) for N >= 3.
BigInt index_d(std::int64_t level);

// Throws DomainError for N < 3 and InternalInvariantViolation if genus or
// cusp count fail to be integral.
CongruenceSurfaceData surface_data(std::int64_t level);

bool is_in_gamma(const IntegerMatrix2& m, std::int64_t level);

// {1 - N^2, N, -N, 1}: an element of Gamma(N) with |trace| = N^2 - 2.
IntegerMatrix2 witness_matrix(std::int64_t level);

// Exhaustive search over Gamma(N) elements with all entries bounded by
// entry_bound in absolute value. Returns the smallest |trace| > 2, or
// nullopt if the box holds no hyperbolic element.
//
// Requires entry_bound >= N^2 (DomainError otherwise) so that the witness
// lies inside the box. `workers` = 0 picks the hardware concurrency; the
// result does not depend on it.
std::optional<BigInt> min_hyperbolic_trace(std::int64_t level, std::int64_t entry_bound,
                                           unsigned workers = 0);

// Number of (a, b, c) triples the search visits.
double projected_candidates(std::int64_t level, std::int64_t entry_bound);

}  // namespace hypsurf::congruence
