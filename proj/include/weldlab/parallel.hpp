#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace weldlab {

// Runs fn(i) for i in [0, n) on `workers` threads. Results are stored by index,
// so the output does not depend on scheduling; the lowest-index failure is rethrown.
template <class R, class F>
std::vector<R> run_replicas(std::size_t n, std::size_t workers, F&& fn) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t w = workers < 1 ? 1 : (workers > n ? (n > 0 ? n : 1) : workers);
  if (w == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < w; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace weldlab
