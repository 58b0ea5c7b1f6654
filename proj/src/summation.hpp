#pragma once

#include <cfloat>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

namespace hypsurf {

// A value with a guaranteed absolute error radius.
struct Certified {
  double value = 0.0;
  double radius = 0.0;

  double lower() const noexcept { return value - radius; }
  double upper() const noexcept { return value + radius; }
  double relative_radius() const noexcept {
    return value == 0.0 ? radius : radius / std::fabs(value);
  }
};

inline constexpr double kUnitRoundoff = DBL_EPSILON / 2;

// Neumaier's variant of compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    abs_ += std::fabs(x);
    ++count_;
  }

  double value() const noexcept { return sum_ + comp_; }

  // Bound on the accumulated rounding error of the additions alone.
  double rounding_bound() const noexcept {
    const double n = static_cast<double>(count_);
    return 2.0 * kUnitRoundoff * std::fabs(value()) + 4.0 * n * kUnitRoundoff * kUnitRoundoff * abs_;
  }

  double abs_total() const noexcept { return abs_; }
  std::size_t count() const noexcept { return count_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
  std::size_t count_ = 0;
};

// Runs body(i) for i in [0, n) on up to `workers` threads (0 = hardware
// concurrency). Each index is handled exactly once; callers write results by
// index so the output order never depends on scheduling.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  unsigned count = workers == 0 ? std::thread::hardware_concurrency() : workers;
  if (count <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (count > n) count = static_cast<unsigned>(n);
  std::vector<std::jthread> pool;
  pool.reserve(count);
  for (unsigned w = 0; w < count; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += count) body(i);
    });
  }
}

}  // namespace hypsurf
