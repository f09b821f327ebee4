#pragma once

#include <cstddef>
#include <exception>
#include <limits>

namespace qplanar {

/// Selects the serial reference loop or the OpenMP loop for batch kernels.
/// Both paths evaluate the same per-index body, so results are identical.
enum class Execution { serial, parallel };

/// Runs fn(i) for i in [0, n). In parallel mode the exception raised by the
/// lowest failing index is rethrown after the loop, matching serial order.
template <class Fn>
void for_each_index(Execution policy, std::size_t n, Fn&& fn) {
  if (policy == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(qplanar_for_each_index)
      {
        if (static_cast<std::size_t>(i) < first_index) {
          first_index = static_cast<std::size_t>(i);
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qplanar
