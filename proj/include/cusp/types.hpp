#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace cusp {

// Ambient dimensions up to 4 (base cubes up to dimension 3).
inline constexpr int kMaxDim = 4;
using Vec = std::array<double, kMaxDim>;

// Axis-parallel box; only the first `dim` coordinates are meaningful.
struct Box {
  int dim = 0;
  Vec lo{};
  Vec hi{};

  double side(int i) const { return hi[i] - lo[i]; }
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= hi[i] - lo[i];
    return v;
  }
  bool contains_closed(const Vec& x) const {
    for (int i = 0; i < dim; ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
};

// l-infinity distance from a point to a closed box.
inline double linf_point_box(const Vec& x, const Box& b) {
  double d = 0.0;
  for (int i = 0; i < b.dim; ++i) {
    double g = std::max({b.lo[i] - x[i], x[i] - b.hi[i], 0.0});
    d = std::max(d, g);
  }
  return d;
}

// l-infinity gap between two closed boxes (0 when they touch).
inline double linf_box_box(const Box& a, const Box& b) {
  double d = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    double g = std::max({a.lo[i] - b.hi[i], b.lo[i] - a.hi[i], 0.0});
    d = std::max(d, g);
  }
  return d;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; fn must write to disjoint slots.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  int t = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(t);
  pool.reserve(t);
  for (int w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += t) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace cusp
