#pragma once

// Uniform rasterization of a box domain. Cells are addressed by a
// linear index with axis 0 fastest; all tie-breaking rules in the
// library refer to this order.

#include "anisovoro/core.hpp"

namespace anisovoro {

template <int N>
struct Grid {
  Box<N> box;
  std::array<int, N> res{};

  void validate() const {
    box.validate();
    for (int i = 0; i < N; ++i)
      if (res[i] < 1) throw std::invalid_argument("Grid: resolution must be >= 1");
  }

  int64_t cell_count() const {
    int64_t n = 1;
    for (int i = 0; i < N; ++i) n *= res[i];
    return n;
  }

  Vec<N> spacing() const {
    Vec<N> h;
    for (int i = 0; i < N; ++i) h[i] = (box.max[i] - box.min[i]) / res[i];
    return h;
  }

  double min_spacing() const {
    const Vec<N> h = spacing();
    double m = h[0];
    for (int i = 1; i < N; ++i) m = std::min(m, h[i]);
    return m;
  }

  double cell_diagonal() const { return norm(spacing()); }

  std::array<int, N> multi_of(int64_t linear) const {
    std::array<int, N> m;
    for (int i = 0; i < N; ++i) {
      m[i] = static_cast<int>(linear % res[i]);
      linear /= res[i];
    }
    return m;
  }

  int64_t linear_of(const std::array<int, N>& m) const {
    int64_t idx = 0;
    for (int i = N - 1; i >= 0; --i) idx = idx * res[i] + m[i];
    return idx;
  }

  Vec<N> center(const std::array<int, N>& m) const {
    Vec<N> p;
    const Vec<N> h = spacing();
    for (int i = 0; i < N; ++i) p[i] = box.min[i] + (m[i] + 0.5) * h[i];
    return p;
  }

  Vec<N> center(int64_t linear) const { return center(multi_of(linear)); }

  std::array<int, N> cell_multi_of(const Vec<N>& p) const {
    std::array<int, N> m;
    const Vec<N> h = spacing();
    for (int i = 0; i < N; ++i) {
      const int idx = static_cast<int>(std::floor((p[i] - box.min[i]) / h[i]));
      m[i] = std::clamp(idx, 0, res[i] - 1);
    }
    return m;
  }

  int64_t cell_of(const Vec<N>& p) const { return linear_of(cell_multi_of(p)); }

  Grid refined(int factor) const {
    Grid g = *this;
    for (int i = 0; i < N; ++i) g.res[i] *= factor;
    return g;
  }
};

}  // namespace anisovoro
