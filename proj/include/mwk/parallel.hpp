#pragma once

#include <omp.h>

#include <cstddef>
#include <exception>
#include <mutex>

namespace mwk {

// Runs body(i) for i in [0, n) across OpenMP threads (or inline when already
// inside a parallel region). The first exception thrown by any iteration is
// rethrown on the calling thread after the loop. Callers write results into
// slot i so the output order never depends on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) if (n > 1 && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace mwk
