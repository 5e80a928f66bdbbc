#pragma once

#include <atomic>
#include <complex>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace splinekit {

inline unsigned default_workers() {
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

// Runs fn(i) for i in [0, count). Work is split into fixed-size chunks that
// workers pull from a shared counter; since fn(i) writes only to slot i of
// caller-owned storage, the result is independent of the schedule.
inline void parallel_for(std::uint64_t count, unsigned workers,
                         const std::function<void(std::uint64_t)>& fn) {
  if (count == 0) return;
  if (workers <= 1 || count < 128) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::uint64_t chunk = 64;
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::uint64_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      std::uint64_t end = std::min(count, begin + chunk);
      for (std::uint64_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// Deterministic parallel sum: chunk boundaries depend only on count, partial
// sums are accumulated sequentially within a chunk and combined pairwise in
// chunk order, so the floating-point result is identical for any worker count.
inline std::complex<double> parallel_sum(
    std::uint64_t count, unsigned workers,
    const std::function<std::complex<double>(std::uint64_t)>& term) {
  if (count == 0) return {0.0, 0.0};
  const std::uint64_t chunk = 4096;
  const std::uint64_t nchunks = (count + chunk - 1) / chunk;
  std::vector<std::complex<double>> partial(nchunks, {0.0, 0.0});
  parallel_for(nchunks, workers, [&](std::uint64_t c) {
    std::complex<double> acc{0.0, 0.0};
    const std::uint64_t end = std::min(count, (c + 1) * chunk);
    for (std::uint64_t i = c * chunk; i < end; ++i) acc += term(i);
    partial[c] = acc;
  });
  // pairwise tree reduction in fixed order
  std::vector<std::complex<double>> level = std::move(partial);
  while (level.size() > 1) {
    std::vector<std::complex<double>> up;
    up.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2)
      up.push_back(level[i] + level[i + 1]);
    if (level.size() % 2) up.push_back(level.back());
    level = std::move(up);
  }
  return level[0];
}

}  // namespace splinekit
