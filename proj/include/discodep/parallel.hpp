#pragma once

// Ordered parallel map: result i always comes from input i, whatever the
// worker count or scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace discodep {

/// Applies `fn` to every item using up to `workers` threads. If any call
/// throws, the exception of the lowest-index failing item is rethrown after
/// all threads finish.
template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& items, std::size_t workers, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, const T&>> {
  using R = std::invoke_result_t<Fn&, const T&>;
  std::vector<std::optional<R>> slots(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (auto i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
      try {
        slots[i].emplace(fn(items[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (workers == 0) workers = 1;
  workers = std::min(workers, items.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(items.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace discodep
