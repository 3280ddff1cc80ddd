#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ms {

using Real = double;

// Floor with a snap to the nearest integer when t lies within 4 ulp of it.
// Lattice points such as 1/(xy) = N^2/(mn) must not fall one below the
// integer because of a rounding in the reciprocal.
inline Real snapped_floor(Real t) {
  const Real r = std::nearbyint(t);
  const Real ulp = std::nextafter(std::fabs(t), std::numeric_limits<Real>::infinity()) - std::fabs(t);
  if (std::fabs(t - r) <= 4.0 * ulp) return r;
  return std::floor(t);
}

inline Real snapped_frac(Real t) {
  const Real f = t - snapped_floor(t);
  return f < 0.0 ? 0.0 : f;
}

// Pairwise summation; the reduction tree depends only on the length, so the
// result is bit-stable for a given input.
inline Real pairwise_sum(std::span<const Real> v) {
  if (v.size() <= 16) {
    Real s = 0.0;
    for (Real x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

namespace detail {
inline std::atomic<unsigned>& thread_override() {
  static std::atomic<unsigned> n{0};
  return n;
}
}  // namespace detail

// Worker count: MS_THREADS wins, then set_thread_count(), then the machine.
inline unsigned thread_count() {
  if (const char* env = std::getenv("MS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  if (unsigned o = detail::thread_override().load(); o > 0) return o;
  return std::max(1u, std::thread::hardware_concurrency());
}

inline void set_thread_count(unsigned n) { detail::thread_override().store(n); }

// Static block partition of [0, n); f(begin, end) must only write to
// locations owned by its block.
template <class F>
void parallel_blocks(std::size_t n, F&& f) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1)));
  if (workers <= 1 || n < 2) {
    f(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&f, b, e] { f(b, e); });
  }
  for (auto& t : pool) t.join();
}

template <class F>
void parallel_for(std::size_t n, F&& f) {
  parallel_blocks(n, [&f](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) f(i);
  });
}

inline void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace ms
