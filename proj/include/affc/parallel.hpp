// Order-preserving parallel map over an index range.

#ifndef AFFC_PARALLEL_HPP
#define AFFC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace affc {

/// out[i] = f(i) for i in [0, n), evaluated on up to hardware_concurrency
/// threads. The first exception thrown by f is rethrown after all workers join.
template <typename T, typename F>
std::vector<T> parallel_map(int n, F&& f) {
  std::vector<T> out(static_cast<std::size_t>(std::max(n, 0)));
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, 16);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        out[static_cast<std::size_t>(i)] = f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::min(workers, n); ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace affc

#endif  // AFFC_PARALLEL_HPP
