#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace poisson_chaos {

/// Worker cap from POISSON_CHAOS_THREADS (default: hardware concurrency).
std::size_t worker_count();

/// Replicates per reduction chunk. Fixed so the reduction tree never depends on the worker count.
inline constexpr std::size_t kReplicateChunk = 1024;

/// Reduces body(i, acc) over i in [0, n). Chunks are folded sequentially and
/// merged in chunk order, so the result is bit-identical for any worker count.
/// If several replicates throw, the exception from the lowest chunk is rethrown.
template <class Acc, class Body>
Acc deterministic_reduce(std::size_t n, const Acc& identity, Body&& body) {
  const std::size_t chunks = (n + kReplicateChunk - 1) / kReplicateChunk;
  std::vector<Acc> partial(chunks, identity);
  std::vector<std::exception_ptr> errors(chunks);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      try {
        const std::size_t end = std::min(n, (c + 1) * kReplicateChunk);
        for (std::size_t i = c * kReplicateChunk; i < end; ++i) {
          body(i, partial[c]);
        }
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(chunks, 1));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
      pool.emplace_back(work);
    }
    work();
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  Acc out = identity;
  for (const auto& p : partial) {
    out.merge(p);
  }
  return out;
}

}  // namespace poisson_chaos
