#include "diocap/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace diocap {
namespace {

std::size_t default_threads() {
  if (const char* env = std::getenv("DIOCAP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::atomic<std::size_t>& threads_setting() {
  static std::atomic<std::size_t> value{default_threads()};
  return value;
}

}  // namespace

std::size_t thread_count() { return threads_setting().load(); }

void set_thread_count(std::size_t n) { threads_setting().store(std::max<std::size_t>(n, 1)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  // Small chunks keep triangular workloads (pair loops) balanced.
  const std::size_t chunk = std::max<std::size_t>(1, n / (workers * 16));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      try {
        for (;;) {
          const std::size_t begin = next.fetch_add(chunk);
          if (begin >= n) break;
          const std::size_t end = std::min(n, begin + chunk);
          for (std::size_t i = begin; i < end; ++i) body(i);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace diocap
