#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace youngwave {

// Pairwise (cascade) summation. Deterministic for a fixed input order and
// independent of how work was distributed beforehand, which is what the
// module concurrency contracts ask of reductions.
inline double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n <= 64) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(std::span<const double>(v));
}

// Static-chunk parallel loop. Chunk boundaries depend only on (n, threads
// requested), and callers must reduce per-index results in index order, so
// results do not depend on the actual thread count. The first worker
// exception is rethrown on the calling thread.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                         unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || n < 2) {
    body(0, n);
    return;
  }
  const std::size_t nchunks = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nchunks);
  std::vector<std::exception_ptr> errors(nchunks);
  const std::size_t q = n / nchunks, r = n % nchunks;
  std::size_t begin = 0;
  for (std::size_t c = 0; c < nchunks; ++c) {
    const std::size_t len = q + (c < r ? 1 : 0);
    pool.emplace_back(
        [&body, &errors, c](std::size_t lo, std::size_t hi) {
          try {
            body(lo, hi);
          } catch (...) {
            errors[c] = std::current_exception();
          }
        },
        begin, begin + len);
    begin += len;
  }
  for (auto& t : pool) t.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
}

// SplitMix64. Used as the per-stream generator and as the mixer that derives
// independent substreams from (master seed, stream key); one stream per
// lattice mode keeps noise synthesis independent of iteration order.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in (0, 1]; never returns 0 so log() below is safe
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; draws two uniforms per call
  double next_gaussian() {
    const double u = next_unit();
    const double v = next_unit();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) {
  SplitMix64 g(key ^ 0x6a09e667f3bcc909ULL);
  return seed ^ g.next_u64();
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// least-squares fit y = slope*x + intercept
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace youngwave
