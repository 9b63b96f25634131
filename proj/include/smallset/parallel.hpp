#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace smallset {

/// Split [0, total) into at most `jobs` contiguous chunks, run `fn(begin, end)`
/// on each (concurrently when jobs > 1) and return the results in chunk order.
/// Callers reduce the results, so the outcome does not depend on scheduling.
template <class Fn>
auto map_chunks(std::uint64_t total, unsigned jobs, Fn fn) {
  using Result = std::invoke_result_t<Fn, std::uint64_t, std::uint64_t>;
  jobs = std::max(1U, jobs);
  const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min<std::uint64_t>(jobs, total));
  std::vector<Result> results(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  auto bounds = [&](std::uint64_t i) { return total / chunks * i + std::min(i, total % chunks); };
  auto run = [&](std::uint64_t i) {
    try {
      results[i] = fn(bounds(i), bounds(i + 1));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (chunks == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (std::uint64_t i = 0; i < chunks; ++i) pool.emplace_back(run, i);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace smallset
