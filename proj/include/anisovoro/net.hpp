#pragma once

// Asymmetric epsilon-nets over a rasterized domain: cover and packing
// checks at grid resolution, and greedy farthest-point construction
// with incremental nearest-distance maintenance. The greedy step always
// inserts the cell center maximizing the distance to the current sites,
// breaking ties toward the lowest linear cell index, so runs are fully
// deterministic.

#include "anisovoro/diagram.hpp"

namespace anisovoro {

template <int N>
struct NetHistoryEntry {
  Vec<N> point;
  double farthest_distance;  // min-distance of the point at insertion time
};

template <int N>
struct AsymmetricNet {
  std::vector<Vec<N>> sites;
  double epsilon = 0;  // cover radius achieved at grid resolution
  DistanceKind kind = DistanceKind::DW;
  std::vector<NetHistoryEntry<N>> history;
};

template <int N>
struct CoverCheck {
  bool holds = false;
  Vec<N> worst_point{};
  double worst_distance = 0;
};

struct PackingCheck {
  bool holds = true;
  int first = -1, second = -1;  // violating pair, when any
};

template <int N>
inline CoverCheck<N> check_cover(const std::vector<Vec<N>>& sites, double epsilon,
                                 const MetricField<N>& field, DistanceKind kind,
                                 const Grid<N>& grid, int threads = 1) {
  if (sites.empty()) throw std::invalid_argument("check_cover: empty site list");
  grid.validate();
  const SiteIndex<N> index(sites, field, kind);
  const int64_t cells = grid.cell_count();
  const int64_t blocks = parallel_block_count(cells);
  std::vector<double> worst(static_cast<size_t>(blocks), -1.0);
  std::vector<int64_t> worst_cell(static_cast<size_t>(blocks), -1);
  parallel_blocks(cells, threads, [&](int64_t blk, int64_t begin, int64_t end) {
    double w = -1.0;
    int64_t wc = -1;
    for (int64_t c = begin; c < end; ++c) {
      const double dsq = index.nearest(grid.center(c)).d_sq;
      if (dsq > w) {
        w = dsq;
        wc = c;
      }
    }
    worst[static_cast<size_t>(blk)] = w;
    worst_cell[static_cast<size_t>(blk)] = wc;
  });
  double wsq = -1.0;
  int64_t wc = -1;
  for (int64_t blk = 0; blk < blocks; ++blk)
    if (worst[static_cast<size_t>(blk)] > wsq) {
      wsq = worst[static_cast<size_t>(blk)];
      wc = worst_cell[static_cast<size_t>(blk)];
    }
  CoverCheck<N> out;
  out.worst_distance = std::sqrt(std::max(0.0, wsq));
  out.worst_point = grid.center(wc);
  out.holds = out.worst_distance <= epsilon;
  return out;
}

template <int N>
inline PackingCheck check_packing(const std::vector<Vec<N>>& sites, double epsilon,
                                  const MetricField<N>& field, DistanceKind kind) {
  PackingCheck out;
  for (size_t i = 0; i < sites.size(); ++i) {
    const SitePoint<N> si{sites[i], static_cast<int>(i)};
    for (size_t j = i + 1; j < sites.size(); ++j) {
      const SitePoint<N> sj{sites[j], static_cast<int>(j)};
      const double dij = distance(kind, si, sites[j], field);
      const double dji = distance(kind, sj, sites[i], field);
      if (dij > epsilon || dji > epsilon) continue;
      out.holds = false;
      out.first = static_cast<int>(i);
      out.second = static_cast<int>(j);
      return out;
    }
  }
  return out;
}

struct StopRule {
  enum class Kind { TargetEpsilon, OrphanFree, MaxSites };
  Kind kind = Kind::MaxSites;
  double target_epsilon = 0;
  int max_sites = 0;

  static StopRule target(double epsilon) {
    return {Kind::TargetEpsilon, epsilon, 0};
  }
  static StopRule orphan_free() { return {Kind::OrphanFree, 0, 0}; }
  static StopRule sites(int n) { return {Kind::MaxSites, 0, n}; }
};

template <int N>
struct GreedyOptions {
  int check_every = 8;     // orphan-free mode: labeling check cadence
  int max_sites = 100000;  // hard budget for all stop kinds
  std::optional<Vec<N>> seed_site;
  int threads = 1;
  OrphanCheckOptions orphan_options;
};

template <int N>
struct GreedyResult {
  AsymmetricNet<N> net;
  LabeledDiagram<N> diagram;
  bool budget_exhausted = false;
  int orphan_checks_run = 0;
};

namespace detail {

// Incremental farthest-point state: squared nearest distances, labels,
// and per-block maxima so the argmax cell is found without a full scan.
template <int N>
class GreedyState {
 public:
  GreedyState(const MetricField<N>& field, DistanceKind kind, const Grid<N>& grid,
              int threads)
      : field_(field), kind_(kind), grid_(grid), threads_(threads) {
    const int64_t cells = grid.cell_count();
    dist_sq_.assign(static_cast<size_t>(cells), std::numeric_limits<double>::infinity());
    labels_.assign(static_cast<size_t>(cells), -1);
    if (kind == DistanceKind::DW) {
      cell_q_.resize(static_cast<size_t>(cells));
      parallel_blocks(cells, threads, [&](int64_t, int64_t begin, int64_t end) {
        for (int64_t c = begin; c < end; ++c)
          cell_q_[static_cast<size_t>(c)] = field.q_at(grid.center(c));
      });
    }
    const int64_t blocks = parallel_block_count(cells);
    block_max_.assign(static_cast<size_t>(blocks), std::numeric_limits<double>::infinity());
    block_argmax_.assign(static_cast<size_t>(blocks), 0);
    sqrt_lambda_min_ = std::sqrt(field.min_eigenvalue_lower_bound());
  }

  // Inserts a site and updates distances in the window it can win.
  void insert(const Vec<N>& pos, int site_index, double farthest_sq_before) {
    std::array<int, N> lo{}, hi{};
    const Vec<N> h = grid_.spacing();
    int64_t window = 1;
    const bool full = !std::isfinite(farthest_sq_before);
    const double radius =
        full ? 0 : std::sqrt(farthest_sq_before) / sqrt_lambda_min_;
    for (int i = 0; i < N; ++i) {
      if (full) {
        lo[i] = 0;
        hi[i] = grid_.res[i] - 1;
      } else {
        lo[i] = std::clamp(
            static_cast<int>(std::floor((pos[i] - radius - grid_.box.min[i]) / h[i])), 0,
            grid_.res[i] - 1);
        hi[i] = std::clamp(
            static_cast<int>(std::floor((pos[i] + radius - grid_.box.min[i]) / h[i])), 0,
            grid_.res[i] - 1);
      }
      window *= hi[i] - lo[i] + 1;
    }
    const Mat<N> q_site =
        kind_ == DistanceKind::LS ? field_.q_at(pos) : Mat<N>{};
    // Iterate the window; parallelization is over axis-1..N-1 slabs with
    // contiguous axis-0 runs inside, so block boundaries stay fixed.
    const int64_t slabs = window / (hi[0] - lo[0] + 1);
    parallel_blocks(slabs, threads_, [&](int64_t, int64_t begin, int64_t end) {
      for (int64_t s = begin; s < end; ++s) {
        std::array<int, N> m{};
        int64_t rest = s;
        for (int i = 1; i < N; ++i) {
          const int span = hi[i] - lo[i] + 1;
          m[i] = lo[i] + static_cast<int>(rest % span);
          rest /= span;
        }
        m[0] = lo[0];
        int64_t c = grid_.linear_of(m);
        for (int x = lo[0]; x <= hi[0]; ++x, ++c) {
          m[0] = x;
          const Vec<N> diff = pos - grid_.center(m);
          const double dsq = kind_ == DistanceKind::DW
                                 ? quadratic_form(cell_q_[static_cast<size_t>(c)], diff)
                                 : quadratic_form(q_site, diff);
          if (dsq < dist_sq_[static_cast<size_t>(c)]) {
            dist_sq_[static_cast<size_t>(c)] = dsq;
            labels_[static_cast<size_t>(c)] = site_index;
          }
        }
      }
    });
    refresh_block_maxima(lo, hi);
  }

  // Lowest-index cell attaining the maximum nearest distance.
  std::pair<int64_t, double> farthest() const {
    double best = -1.0;
    int64_t cell = 0;
    for (size_t b = 0; b < block_max_.size(); ++b)
      if (block_max_[b] > best) {
        best = block_max_[b];
        cell = block_argmax_[b];
      }
    return {cell, best};
  }

  const std::vector<int32_t>& labels() const { return labels_; }
  const std::vector<double>& dist_sq() const { return dist_sq_; }

 private:
  void refresh_block_maxima(const std::array<int, N>& lo, const std::array<int, N>& hi) {
    // Which blocks intersect the window: conservative, all blocks whose
    // cell range overlaps [first, last] linear indices of the window.
    std::array<int, N> first = lo, last = hi;
    const int64_t c0 = grid_.linear_of(first);
    const int64_t c1 = grid_.linear_of(last);
    const int64_t b0 = c0 / kParallelBlockSize;
    const int64_t b1 = c1 / kParallelBlockSize;
    const int64_t cells = grid_.cell_count();
    parallel_blocks(b1 - b0 + 1, threads_, [&](int64_t, int64_t begin, int64_t end) {
      for (int64_t k = begin; k < end; ++k) {
        const int64_t b = b0 + k;
        const int64_t cb = b * kParallelBlockSize;
        const int64_t ce = std::min(cells, cb + kParallelBlockSize);
        double mx = -1.0;
        int64_t arg = cb;
        for (int64_t c = cb; c < ce; ++c)
          if (dist_sq_[static_cast<size_t>(c)] > mx) {
            mx = dist_sq_[static_cast<size_t>(c)];
            arg = c;
          }
        block_max_[static_cast<size_t>(b)] = mx;
        block_argmax_[static_cast<size_t>(b)] = arg;
      }
    });
  }

  const MetricField<N>& field_;
  DistanceKind kind_;
  Grid<N> grid_;
  int threads_;
  std::vector<double> dist_sq_;
  std::vector<int32_t> labels_;
  std::vector<Mat<N>> cell_q_;  // DW only
  std::vector<double> block_max_;
  std::vector<int64_t> block_argmax_;
  double sqrt_lambda_min_ = 1;
};

}  // namespace detail

/// Greedy farthest-point insertion until the stop rule fires. In
/// orphan-free mode the diagram is checked every `check_every`
/// insertions; the reported epsilon is the farthest distance remaining
/// after the final insertion, i.e. the cover radius actually achieved.
template <int N>
inline GreedyResult<N> greedy_build(const MetricField<N>& field, DistanceKind kind,
                                    const Grid<N>& grid, const StopRule& stop,
                                    const GreedyOptions<N>& opt = {}) {
  grid.validate();
  if (grid.cell_count() < 1) throw std::invalid_argument("greedy_build: empty grid");
  const int budget = stop.kind == StopRule::Kind::MaxSites
                         ? std::min(stop.max_sites, opt.max_sites)
                         : opt.max_sites;
  if (budget < 1) throw std::invalid_argument("greedy_build: site budget must be >= 1");

  detail::GreedyState<N> state(field, kind, grid, opt.threads);
  GreedyResult<N> out;
  out.net.kind = kind;

  Vec<N> first = opt.seed_site ? *opt.seed_site : grid.center(grid.cell_of(grid.box.center()));
  if (!grid.box.contains(first))
    throw std::invalid_argument("greedy_build: seed site outside the grid box");
  state.insert(first, 0, std::numeric_limits<double>::infinity());
  out.net.sites.push_back(first);
  out.net.history.push_back({first, std::numeric_limits<double>::infinity()});

  auto diagram_from_state = [&] {
    LabeledDiagram<N> d;
    d.grid = grid;
    d.kind = kind;
    d.labels = state.labels();
    detail::compute_components(d, out.net.sites);
    return d;
  };

  bool done = false;
  while (!done) {
    auto [cell, far_sq] = state.farthest();
    if (!std::isfinite(far_sq))
      throw std::runtime_error("greedy_build: non-finite distance from metric");
    out.net.epsilon = std::sqrt(std::max(0.0, far_sq));

    switch (stop.kind) {
      case StopRule::Kind::TargetEpsilon:
        done = out.net.epsilon <= stop.target_epsilon;
        break;
      case StopRule::Kind::MaxSites:
        done = static_cast<int>(out.net.sites.size()) >= budget;
        break;
      case StopRule::Kind::OrphanFree: {
        const int n = static_cast<int>(out.net.sites.size());
        if (n % opt.check_every == 0 || n >= budget) {
          out.diagram = diagram_from_state();
          find_orphans(out.diagram, out.net.sites, field, opt.orphan_options);
          ++out.orphan_checks_run;
          done = out.diagram.confirmed_orphans.empty();
        }
        break;
      }
    }
    if (done) break;
    if (static_cast<int>(out.net.sites.size()) >= budget) {
      out.budget_exhausted = true;
      break;
    }
    if (far_sq == 0.0) {  // grid saturated, every cell is a site
      out.budget_exhausted = stop.kind != StopRule::Kind::MaxSites;
      break;
    }
    const Vec<N> next = grid.center(cell);
    const int index = static_cast<int>(out.net.sites.size());
    state.insert(next, index, far_sq);
    out.net.sites.push_back(next);
    out.net.history.push_back({next, std::sqrt(far_sq)});
  }

  if (!out.diagram.orphans_checked || out.diagram.labels.empty() ||
      out.diagram.site_count() != static_cast<int64_t>(out.net.sites.size())) {
    out.diagram = diagram_from_state();
  }
  return out;
}

}  // namespace anisovoro
