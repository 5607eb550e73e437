#pragma once

// Index-ordered parallel map. Every kernel that fans out over instances,
// encoders or multistarts goes through here; each index writes only its own
// slot and all reductions happen afterwards in index order, so results are
// identical for any thread count. Execution::serial is the reference path
// kept for tests and benchmarks.

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qsc {

enum class Execution { serial, parallel };

template <class F>
auto parallel_map(std::size_t count, F&& fn, Execution exec = Execution::parallel)
    -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);

  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < count; ++i) slots[i].emplace(fn(i));
  } else {
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) {
      try {
        slots[static_cast<std::size_t>(i)].emplace(fn(static_cast<std::size_t>(i)));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
    // Lowest failing index wins so the reported error is deterministic too.
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// Index of the smallest value; ties resolve to the lowest index.
template <class T, class Less = std::less<T>>
std::size_t ordered_argmin(const std::vector<T>& values, Less less = Less{}) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (less(values[i], values[best])) best = i;
  return best;
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace qsc
