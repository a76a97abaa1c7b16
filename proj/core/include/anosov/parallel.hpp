#pragma once

// deterministic worker pool: work is split into fixed-size chunks whose
// boundaries depend only on the item count. workers race for chunk indices,
// but every result lands in a slot keyed by chunk, and reductions always
// combine chunks in index order, so outputs are bitwise identical for any
// thread count.

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace anosov {

inline constexpr std::int64_t kChunkSize = 8192;

// requested <= 0 resolves through ANOSOV_LAB_THREADS, then hardware_concurrency
int resolve_threads(int requested);

inline int chunk_count(std::int64_t count) {
  return static_cast<int>((count + kChunkSize - 1) / kChunkSize);
}

// Scratch: per-worker reusable state, created once per worker via make.
// fn(scratch, chunk, begin, end) must write results only into chunk-keyed slots.
template <class Scratch>
void parallel_chunks(std::int64_t count, int threads,
                     const std::function<Scratch()>& make,
                     const std::function<void(Scratch&, int, std::int64_t, std::int64_t)>& fn) {
  if (count <= 0) return;
  const int nchunks = chunk_count(count);
  const int nworkers = std::max(1, std::min(threads, nchunks));
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&]() {
    try {
      Scratch scratch = make();
      while (true) {
        const int c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= nchunks) break;
        const std::int64_t b = static_cast<std::int64_t>(c) * kChunkSize;
        const std::int64_t e = std::min(count, b + kChunkSize);
        fn(scratch, c, b, e);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lk(err_mu);
      if (!err) err = std::current_exception();
    }
  };
  if (nworkers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nworkers - 1));
    for (int i = 1; i < nworkers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace anosov
