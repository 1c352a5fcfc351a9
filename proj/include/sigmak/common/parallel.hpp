#pragma once

// Point-wise loop drivers. Every grid kernel goes through these so the serial
// path stays available as a reference for the OpenMP path.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <vector>

namespace sigmak {

enum class Exec { serial, parallel };

/// Process-wide default used by the high level operations.
Exec default_exec() noexcept;
void set_default_exec(Exec exec) noexcept;

namespace detail {

// Exceptions cannot cross an OpenMP region; the first one is kept and rethrown.
class ExceptionSlot {
 public:
  template <class Fn>
  void run(Fn&& fn) noexcept {
    try {
      fn();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace detail

template <class Fn>
void for_each_index(std::size_t count, Fn&& fn, Exec exec = default_exec()) {
  const auto n = static_cast<std::int64_t>(count);
  if (exec == Exec::serial) {
    for (std::int64_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    slot.run([&] { fn(static_cast<std::size_t>(i)); });
  }
  slot.rethrow();
}

/// Maximum of fn(i) over all indices; max is order independent, so both paths agree bitwise.
template <class Fn>
double max_over(std::size_t count, Fn&& fn, Exec exec = default_exec()) {
  const auto n = static_cast<std::int64_t>(count);
  double best = -std::numeric_limits<double>::infinity();
  if (exec == Exec::serial) {
    for (std::int64_t i = 0; i < n; ++i) best = std::max(best, fn(static_cast<std::size_t>(i)));
    return best;
  }
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (std::int64_t i = 0; i < n; ++i) {
    slot.run([&] { best = std::max(best, fn(static_cast<std::size_t>(i))); });
  }
  slot.rethrow();
  return best;
}

/// Sum with a fixed block decomposition so the result does not depend on the thread count.
template <class Fn>
double sum_over(std::size_t count, Fn&& fn, Exec exec = default_exec()) {
  constexpr std::size_t block = 4096;
  const std::size_t blocks = (count + block - 1) / block;
  std::vector<double> partial(blocks, 0.0);
  for_each_index(
      blocks,
      [&](std::size_t b) {
        const std::size_t lo = b * block;
        const std::size_t hi = std::min(count, lo + block);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += fn(i);
        partial[b] = s;
      },
      exec);
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace sigmak
