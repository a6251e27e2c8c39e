#pragma once

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tamed {

/// How an ensemble is fanned out. Results are gathered by member index, and
/// every member derives its noise from (master seed, index), so the serial
/// and parallel paths produce bit-identical results.
struct ExecutionPolicy {
  bool parallel = true;
  /// 0 selects default_thread_count().
  int threads = 0;

  static ExecutionPolicy serial() { return {false, 1}; }
};

/// TAMED_THREADS when set to a positive integer, otherwise the OpenMP default.
int default_thread_count();

/// Serial reference: results[i] = fn(i) for i in [0, count).
template <class Fn>
auto map_members_serial(std::size_t count, Fn&& fn) {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<Result> results(count);
  for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
  return results;
}

/// OpenMP version of map_members_serial. The first exception (by member
/// index) is rethrown after the loop.
template <class Fn>
auto map_members_parallel(std::size_t count, Fn&& fn, int threads) {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
#ifdef _OPENMP
  std::vector<Result> results(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long i = 0; i < n; ++i) {
    try {
      results[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
#else
  (void)threads;
  return map_members_serial(count, std::forward<Fn>(fn));
#endif
}

template <class Fn>
auto map_members(std::size_t count, Fn&& fn, const ExecutionPolicy& policy) {
  if (!policy.parallel) return map_members_serial(count, std::forward<Fn>(fn));
  const int threads = policy.threads > 0 ? policy.threads : default_thread_count();
  return map_members_parallel(count, std::forward<Fn>(fn), threads);
}

}  // namespace tamed
