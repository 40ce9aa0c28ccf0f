#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <utility>

namespace vqg {

enum class Exec { Serial, Parallel };

Exec exec_mode();
void set_exec_mode(Exec mode);
int worker_count();

// Restores the previous mode on destruction.
class ExecScope {
public:
  explicit ExecScope(Exec mode) : prev_(exec_mode()) { set_exec_mode(mode); }
  ~ExecScope() { set_exec_mode(prev_); }
  ExecScope(const ExecScope&) = delete;
  ExecScope& operator=(const ExecScope&) = delete;

private:
  Exec prev_;
};

template <class T>
using Probe = std::function<std::optional<T>(size_t)>;

// Reference loop: stops at the first index whose probe reports something.
template <class T>
std::optional<std::pair<size_t, T>> first_failure_serial(size_t n, const Probe<T>& probe) {
  for (size_t i = 0; i < n; ++i)
    if (auto r = probe(i)) return std::make_pair(i, std::move(*r));
  return std::nullopt;
}

// Same result as the serial loop. Workers skip indices above the best failure found so
// far; exceptions are ordered with failures by index and the least one is rethrown.
template <class T>
std::optional<std::pair<size_t, T>> first_failure_parallel(size_t n, const Probe<T>& probe) {
  std::atomic<size_t> best{n};
  std::mutex mu;
  std::optional<T> best_value;
  std::exception_ptr best_error;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long li = 0; li < count; ++li) {
    size_t i = static_cast<size_t>(li);
    if (i >= best.load(std::memory_order_relaxed)) continue;
    std::optional<T> r;
    std::exception_ptr err;
    try {
      r = probe(i);
    } catch (...) {
      err = std::current_exception();
    }
    if (!r && !err) continue;
    std::lock_guard<std::mutex> lock(mu);
    if (i < best.load()) {
      best.store(i);
      best_value = std::move(r);
      best_error = err;
    }
  }
  if (best_error) std::rethrow_exception(best_error);
  if (best.load() == n) return std::nullopt;
  return std::make_pair(best.load(), std::move(*best_value));
}

template <class T>
std::optional<std::pair<size_t, T>> first_failure(size_t n, const Probe<T>& probe) {
  return exec_mode() == Exec::Parallel ? first_failure_parallel<T>(n, probe)
                                       : first_failure_serial<T>(n, probe);
}

}  // namespace vqg
