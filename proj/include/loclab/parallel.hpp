#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace loclab {

inline int default_workers() { return std::max(1U, std::thread::hardware_concurrency()); }

// Runs body(begin, end, chunk) over `workers` contiguous chunks of [0, count).
// Chunk c always covers the same range for a given (count, workers), so
// callers merge per-chunk results in chunk order. Rethrows the first exception.
template <class Body>
void parallel_chunks(std::uint64_t count, int workers, Body&& body) {
  const auto chunks = static_cast<std::uint64_t>(std::max(1, workers));
  if (chunks == 1 || count < 2) {
    body(std::uint64_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> threads;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const std::uint64_t begin = count * c / chunks;
    const std::uint64_t end = count * (c + 1) / chunks;
    threads.emplace_back([&, begin, end, c] {
      try {
        body(begin, end, static_cast<std::size_t>(c));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace loclab
