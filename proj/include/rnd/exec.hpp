#pragma once

// Serial and OpenMP execution of independent index ranges. The serial path is
// the reference; both must give identical results since every item is a pure
// function of its index.

#include <cstddef>
#include <exception>
#include <string>
#include <vector>

#include <omp.h>

namespace rnd {

enum class Exec { Serial, Parallel };

// Runs fn(i) for i in [0, n). Exceptions are captured per item and returned as
// messages (empty string on success) so one failed grid point does not abort
// the sweep.
template <class Fn>
std::vector<std::string> for_each_index(std::size_t n, Fn&& fn, Exec exec = Exec::Parallel) {
  std::vector<std::string> errors(n);
  auto body = [&](std::size_t i) {
    try {
      fn(i);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
  } else {
    const long long m = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < m; ++i) body(static_cast<std::size_t>(i));
  }
  return errors;
}

inline void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace rnd
