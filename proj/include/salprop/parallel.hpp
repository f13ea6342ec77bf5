#ifndef SALPROP_PARALLEL_HPP_
#define SALPROP_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace salprop {

/// Run fn(i) for i in [0,n) on up to `workers` threads. Results must be
/// written to per-index slots by the caller. The exception thrown for the
/// lowest index, if any, is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn && fn)
{
  const auto threads = static_cast<std::size_t>(std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto & e : errors) {
    if (e) { std::rethrow_exception(e); }
  }
}

}  // namespace salprop

#endif  // SALPROP_PARALLEL_HPP_
