#include "congruence.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include "errors.hpp"

namespace hypsurf::congruence {

namespace {

// Keeps |b*c| + 1 inside int64 during the search.
constexpr std::int64_t kMaxEntryBound = 3'000'000'000;

std::int64_t mod(std::int64_t x, std::int64_t n) {
  const std::int64_t r = x % n;
  return r < 0 ? r + n : r;
}

// Smallest x >= lo with x == residue (mod n).
std::int64_t first_at_least(std::int64_t lo, std::int64_t residue, std::int64_t n) {
  return lo + mod(residue - lo, n);
}

void require_level(std::int64_t level, std::int64_t minimum) {
  if (level < minimum) {
    std::ostringstream os;
    os << "level must be >= " << minimum << " (got " << level << ")";
    throw DomainError(os.str());
  }
}

}  // namespace

IntegerMatrix2::IntegerMatrix2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
    : a_(a), b_(b), c_(c), d_(d) {
  const BigInt det = BigInt(a) * d - BigInt(b) * c;
  if (det != 1) {
    std::ostringstream os;
    os << "matrix {" << a << ", " << b << ", " << c << ", " << d << "} has determinant " << det
       << ", expected 1";
    throw DomainError(os.str());
  }
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 2; p <= n / p; ++p) {
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) primes.push_back(n);
  return primes;
}

BigInt index_d(std::int64_t level) {
  require_level(level, 2);
  if (level == 2) return 12;
  BigRational d = BigRational(BigInt(level) * level * level);
  for (const std::int64_t p : prime_divisors(level)) {
    d *= BigRational(1) - BigRational(1, BigInt(p) * p);
  }
  if (boost::multiprecision::denominator(d) != 1) {
    throw InternalInvariantViolation("index d_N is not an integer");
  }
  return boost::multiprecision::numerator(d);
}

CongruenceSurfaceData surface_data(std::int64_t level) {
  require_level(level, 3);
  const BigInt d = index_d(level);
  const BigInt n(level);

  // g = 1 + d (N - 6) / (24 N), b = d / (2N); both divisions must be exact.
  const BigInt genus_num = d * (n - 6);
  const BigInt genus_den = 24 * n;
  const BigInt cusp_den = 2 * n;
  if (genus_num % genus_den != 0 || d % cusp_den != 0) {
    std::ostringstream os;
    os << "non-integral genus or cusp count at level " << level;
    throw InternalInvariantViolation(os.str());
  }
  BigInt cusps = d / cusp_den;
  if (cusps % 2 != 0) {
    std::ostringstream os;
    os << "odd cusp count at level " << level;
    throw InternalInvariantViolation(os.str());
  }

  const double trace = static_cast<double>(level) * static_cast<double>(level) - 2.0;
  return CongruenceSurfaceData{
      level,
      d,
      1 + genus_num / genus_den,
      std::move(cusps),
      hyp::length_from_trace(trace),
      hyp::kPi * d.convert_to<double>() / 6.0,
  };
}

bool is_in_gamma(const IntegerMatrix2& m, std::int64_t level) {
  require_level(level, 1);
  return mod(m.a(), level) == mod(1, level) && mod(m.d(), level) == mod(1, level) &&
         mod(m.b(), level) == 0 && mod(m.c(), level) == 0;
}

IntegerMatrix2 witness_matrix(std::int64_t level) {
  require_level(level, 3);
  if (level > 2'000'000'000) throw DomainError("level too large for a 64-bit witness");
  return {1 - level * level, level, -level, 1};
}

double projected_candidates(std::int64_t level, std::int64_t entry_bound) {
  const double per_axis = 2.0 * static_cast<double>(entry_bound) / static_cast<double>(level) + 1.0;
  return per_axis * per_axis * per_axis;
}

std::optional<BigInt> min_hyperbolic_trace(std::int64_t level, std::int64_t entry_bound,
                                           unsigned workers) {
  require_level(level, 3);
  if (entry_bound / level < level) {
    std::ostringstream os;
    os << "entry bound " << entry_bound << " is below N^2 = " << level * level
       << "; the witness would lie outside the box";
    throw DomainError(os.str());
  }
  if (entry_bound > kMaxEntryBound) {
    throw DomainError("entry bound exceeds the 64-bit safe search range");
  }

  const std::int64_t n = level;
  const std::int64_t bound = entry_bound;
  const std::int64_t a_first = first_at_least(-bound, 1, n);
  const std::int64_t zero_first = first_at_least(-bound, 0, n);
  const std::int64_t a_count = (bound - a_first) / n + 1;

  constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::max();

  // a == 1 (mod N) is never zero, so d is determined by a*d = 1 + b*c.
  auto scan = [&](std::int64_t a_begin, std::int64_t a_end) {
    std::int64_t best = kNone;
    for (std::int64_t ia = a_begin; ia < a_end; ++ia) {
      const std::int64_t a = a_first + ia * n;
      for (std::int64_t b = zero_first; b <= bound; b += n) {
        for (std::int64_t c = zero_first; c <= bound; c += n) {
          const std::int64_t rhs = 1 + b * c;
          if (rhs % a != 0) continue;
          const std::int64_t d = rhs / a;
          if (d > bound || d < -bound || mod(d, n) != 1 % n) continue;
          const std::int64_t abs_trace = a + d < 0 ? -(a + d) : a + d;
          if (abs_trace > 2 && abs_trace < best) best = abs_trace;
        }
      }
    }
    return best;
  };

  unsigned count = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  count = static_cast<unsigned>(std::min<std::int64_t>(count, a_count));

  std::vector<std::int64_t> partial(count, kNone);
  {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) {
      const std::int64_t lo = a_count * w / count;
      const std::int64_t hi = a_count * (w + 1) / count;
      pool.emplace_back([&, w, lo, hi] { partial[w] = scan(lo, hi); });
    }
  }
  const std::int64_t best = *std::min_element(partial.begin(), partial.end());
  if (best == kNone) return std::nullopt;
  return BigInt(best);
}

}  // namespace hypsurf::congruence
