#pragma once

// Sampled estimation of the maximum-variation constant: the smallest
// sigma with rho(M_b M_a^{-1} - I) <= sigma |M_a (a - b)| over all point
// pairs. Any sampled maximum is a lower bound of the true constant, and
// nested sample sets give nondecreasing estimates.

#include <vector>

#include "anisovoro/distance.hpp"
#include "anisovoro/grid.hpp"
#include "anisovoro/parallel.hpp"

namespace anisovoro {

template <int N>
struct SigmaEstimate {
  double sigma_hat = 0;
  int64_t pairs_sampled = 0;
  int refinement_rounds = 0;  // 0 flags a coarse, unrefined estimate
  Vec<N> attaining_a{}, attaining_b{};
};

struct SigmaOptions {
  int refine_rounds = 4;
  int64_t pair_budget = 2'000'000;
  int threads = 1;
};

namespace detail {

template <int N>
inline double variation_ratio(const Mat<N>& sqrt_a_inv, const Mat<N>& sqrt_a,
                              const Mat<N>& sqrt_b, const Vec<N>& a, const Vec<N>& b) {
  const double den = norm(sqrt_a * (a - b));
  if (den == 0.0) return 0.0;
  return spectral_norm(sqrt_b * sqrt_a_inv - Mat<N>::identity()) / den;
}

template <int N>
inline double variation_ratio(const MetricField<N>& field, const Vec<N>& a, const Vec<N>& b) {
  const SpdMatrix<N> qa = field.spd_at(a);
  return variation_ratio(qa.inverse_sqrt(), qa.sqrt_matrix(), field.sqrt_at(b), a, b);
}

}  // namespace detail

/// Dense all-ordered-pairs scan over the cell centers of `grid`. No
/// budget and no refinement; this is the reference the sampling
/// estimator is validated against.
template <int N>
inline SigmaEstimate<N> sigma_brute_force(const MetricField<N>& field, const Grid<N>& grid,
                                          int threads = 1) {
  grid.validate();
  const int64_t n = grid.cell_count();
  std::vector<Vec<N>> pts(static_cast<size_t>(n));
  std::vector<Mat<N>> roots(static_cast<size_t>(n)), inv_roots(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    pts[i] = grid.center(i);
    const SpdMatrix<N> q = field.spd_at(pts[i]);
    roots[i] = q.sqrt_matrix();
    inv_roots[i] = q.inverse_sqrt();
  }
  const int64_t total = n * n;
  const int64_t blocks = parallel_block_count(total);
  std::vector<double> best(static_cast<size_t>(blocks), -1.0);
  std::vector<int64_t> best_pair(static_cast<size_t>(blocks), -1);
  parallel_blocks(total, threads, [&](int64_t blk, int64_t begin, int64_t end) {
    double b = -1.0;
    int64_t bp = -1;
    for (int64_t k = begin; k < end; ++k) {
      const int64_t i = k / n, j = k % n;
      if (i == j) continue;
      const double r =
          detail::variation_ratio(inv_roots[i], roots[i], roots[j], pts[i], pts[j]);
      if (r > b) {
        b = r;
        bp = k;
      }
    }
    best[static_cast<size_t>(blk)] = b;
    best_pair[static_cast<size_t>(blk)] = bp;
  });
  SigmaEstimate<N> out;
  out.pairs_sampled = total - n;
  double b = -1.0;
  int64_t bp = -1;
  for (int64_t blk = 0; blk < blocks; ++blk)
    if (best[static_cast<size_t>(blk)] > b) {
      b = best[static_cast<size_t>(blk)];
      bp = best_pair[static_cast<size_t>(blk)];
    }
  out.sigma_hat = std::max(0.0, b);
  if (bp >= 0) {
    out.attaining_a = pts[static_cast<size_t>(bp / n)];
    out.attaining_b = pts[static_cast<size_t>(bp % n)];
  }
  return out;
}

/// Coarse all-pairs scan over cell centers (deterministically strided
/// down to the pair budget when needed) followed by rounds of local
/// refinement: a 3x3(x3) stencil around each end of the attaining pair
/// with the spacing halved every round.
template <int N>
inline SigmaEstimate<N> estimate_sigma(const MetricField<N>& field, const Grid<N>& grid,
                                       const SigmaOptions& opt = {}) {
  grid.validate();
  for (int i = 0; i < N; ++i)
    if (grid.res[i] < 2)
      throw std::invalid_argument("estimate_sigma: coarse resolution must be >= 2 per axis");

  const int64_t n = grid.cell_count();
  const int64_t total = n * n;
  const int64_t stride = std::max<int64_t>(1, (total + opt.pair_budget - 1) / opt.pair_budget);

  std::vector<Vec<N>> pts(static_cast<size_t>(n));
  std::vector<Mat<N>> roots(static_cast<size_t>(n)), inv_roots(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    pts[i] = grid.center(i);
    const SpdMatrix<N> q = field.spd_at(pts[i]);
    roots[i] = q.sqrt_matrix();
    inv_roots[i] = q.inverse_sqrt();
  }

  const int64_t strided = (total + stride - 1) / stride;
  const int64_t blocks = parallel_block_count(strided);
  std::vector<double> best(static_cast<size_t>(blocks), -1.0);
  std::vector<int64_t> best_pair(static_cast<size_t>(blocks), -1);
  parallel_blocks(strided, opt.threads, [&](int64_t blk, int64_t begin, int64_t end) {
    double b = -1.0;
    int64_t bp = -1;
    for (int64_t s = begin; s < end; ++s) {
      const int64_t k = s * stride;
      const int64_t i = k / n, j = k % n;
      if (i == j) continue;
      const double r =
          detail::variation_ratio(inv_roots[i], roots[i], roots[j], pts[i], pts[j]);
      if (r > b) {
        b = r;
        bp = k;
      }
    }
    best[static_cast<size_t>(blk)] = b;
    best_pair[static_cast<size_t>(blk)] = bp;
  });

  SigmaEstimate<N> out;
  out.pairs_sampled = strided;
  double cur = -1.0;
  int64_t bp = -1;
  for (int64_t blk = 0; blk < blocks; ++blk)
    if (best[static_cast<size_t>(blk)] > cur) {
      cur = best[static_cast<size_t>(blk)];
      bp = best_pair[static_cast<size_t>(blk)];
    }
  if (bp < 0) {
    out.sigma_hat = 0;
    return out;
  }
  Vec<N> a_star = pts[static_cast<size_t>(bp / n)];
  Vec<N> b_star = pts[static_cast<size_t>(bp % n)];

  const Vec<N> h0 = grid.spacing();
  // Stencil points can collide up to roundoff (a*+h vs b*-h reaching
  // the same coordinate); such pairs are floating-point noise, not
  // samples of the variation ratio.
  const double min_separation = 1e-9 * grid.box.diagonal();
  for (int round = 1; round <= opt.refine_rounds; ++round) {
    Vec<N> h = h0;
    for (int i = 0; i < N; ++i) h[i] /= std::pow(2.0, round);
    std::vector<Vec<N>> as, bs;
    constexpr int kStencil = 1;
    std::array<int, N> off{};
    auto gather = [&](const Vec<N>& around, std::vector<Vec<N>>& into) {
      off.fill(-kStencil);
      for (;;) {
        Vec<N> p = around;
        for (int i = 0; i < N; ++i) p[i] += off[i] * h[i];
        into.push_back(field.domain().clamp(p));
        int axis = 0;
        while (axis < N && ++off[axis] > kStencil) off[axis++] = -kStencil;
        if (axis == N) break;
      }
    };
    gather(a_star, as);
    gather(b_star, bs);
    Vec<N> next_a = a_star, next_b = b_star;
    double improved = cur;
    for (const auto& a : as)
      for (const auto& b : bs) {
        if (norm(a - b) < min_separation) continue;
        ++out.pairs_sampled;
        const double r = detail::variation_ratio(field, a, b);
        if (r > improved) {
          improved = r;
          next_a = a;
          next_b = b;
        }
      }
    cur = improved;
    a_star = next_a;
    b_star = next_b;
    out.refinement_rounds = round;
  }

  out.sigma_hat = std::max(0.0, cur);
  out.attaining_a = a_star;
  out.attaining_b = b_star;
  return out;
}

}  // namespace anisovoro
