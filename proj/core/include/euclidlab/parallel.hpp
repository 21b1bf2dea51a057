#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace euclidlab {

/// 0 means "one per available processor".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {

// Runs body(i) for i in [0, count) on `threads` workers pulling indices from a
// shared counter. The first exception (lowest index) is rethrown after join.
template <class Body>
void run_indexed(std::size_t count, unsigned threads, Body&& body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
          if (failed.load(std::memory_order_relaxed)) continue;
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Evaluates fn(i) for every i in [0, count); results are in index order, so
/// the output does not depend on scheduling.
template <class Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn&& fn) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<std::optional<R>> slots(count);
  detail::run_indexed(count, threads, [&](std::size_t i) { slots[i].emplace(fn(i)); });
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Lowest index i in [0, count) with pred(i) engaged, together with its value.
/// Workers skip indices above the best hit found so far; the answer is the same
/// for every thread count.
template <class Pred>
auto parallel_find_first(std::size_t count, unsigned threads, Pred&& pred)
    -> std::optional<std::pair<std::size_t, typename std::invoke_result_t<Pred&, std::size_t>::value_type>> {
  using V = typename std::invoke_result_t<Pred&, std::size_t>::value_type;
  std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
  std::vector<std::optional<V>> hits(count);
  detail::run_indexed(count, threads, [&](std::size_t i) {
    if (i > best.load(std::memory_order_relaxed)) return;
    auto hit = pred(i);
    if (!hit) return;
    hits[i] = std::move(hit);
    std::size_t current = best.load();
    while (i < current && !best.compare_exchange_weak(current, i)) {
    }
  });
  const std::size_t b = best.load();
  if (b == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return std::make_pair(b, std::move(*hits[b]));
}

}  // namespace euclidlab
