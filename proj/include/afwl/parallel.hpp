#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace afwl {

/// Number of worker threads used by data-parallel loops (>= 1).
void set_thread_count(int n);
int thread_count();

namespace detail {
void run_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);
}

/// Splits [0, count) into contiguous chunks, one per worker. `body(begin, end)`
/// must only write to state owned by its index range.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  if (thread_count() <= 1 || count < 2) {
    body(std::size_t{0}, count);
    return;
  }
  detail::run_chunks(count, std::function<void(std::size_t, std::size_t)>(body));
}

/// Deterministic reduction: `partial(i)` is evaluated for every i (possibly in
/// parallel) and the partials are summed in index order, so the result does not
/// depend on the thread count.
template <class Partial>
double ordered_sum(std::size_t count, Partial&& partial) {
  std::vector<double> parts(count, 0.0);
  parallel_for(count, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) parts[i] = partial(i);
  });
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

/// Same as ordered_sum but reduces with max.
template <class Partial>
double ordered_max(std::size_t count, Partial&& partial) {
  std::vector<double> parts(count, 0.0);
  parallel_for(count, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) parts[i] = partial(i);
  });
  double best = 0.0;
  for (double p : parts) best = p > best ? p : best;
  return best;
}

}  // namespace afwl
