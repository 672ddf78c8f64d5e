#pragma once

// Rasterized anisotropic Voronoi diagrams: per-cell nearest-site labels,
// connected components per site, orphan detection with a local 2x
// refinement re-check, star-shapedness sampling, and equidistant
// boundary witnesses located by bisection.

#include <map>
#include <optional>
#include <vector>

#include "anisovoro/distance.hpp"
#include "anisovoro/grid.hpp"
#include "anisovoro/parallel.hpp"

namespace anisovoro {

// Bucketed nearest-site queries. Buckets are scanned in growing
// Chebyshev rings; the search stops once the remaining rings cannot
// beat the best metric distance found (using the field-wide smallest
// eigenvalue as the Euclidean-to-metric conversion). Ties resolve to
// the lowest site index no matter the scan order.
template <int N>
class SiteIndex {
 public:
  struct Hit {
    int site = -1;
    double d_sq = std::numeric_limits<double>::infinity();
  };

  SiteIndex(const std::vector<Vec<N>>& sites, const MetricField<N>& field,
            DistanceKind kind)
      : sites_(sites), field_(field), kind_(kind), box_(field.domain()) {
    if (sites.empty()) throw std::invalid_argument("SiteIndex: empty site list");
    for (const auto& s : sites)
      if (!box_.contains(s))
        throw std::invalid_argument("SiteIndex: site outside the domain box");
    if (kind == DistanceKind::LS) {
      site_q_.reserve(sites.size());
      for (const auto& s : sites) site_q_.push_back(field.q_at(s));
    }
    const int nb = std::clamp(
        static_cast<int>(std::round(std::pow(double(sites.size()), 1.0 / N))), 1, 64);
    for (int i = 0; i < N; ++i) bucket_res_[i] = nb;
    buckets_.assign(static_cast<size_t>(bucket_count()), {});
    for (size_t s = 0; s < sites.size(); ++s)
      buckets_[static_cast<size_t>(bucket_of(sites[s]))].push_back(static_cast<int>(s));
    min_bucket_h_ = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i)
      min_bucket_h_ = std::min(min_bucket_h_, (box_.max[i] - box_.min[i]) / bucket_res_[i]);
    sqrt_lambda_min_ = std::sqrt(field.min_eigenvalue_lower_bound());
  }

  // DW callers that already hold Q_p should use the two-argument form.
  Hit nearest(const Vec<N>& p) const {
    if (kind_ == DistanceKind::DW) return nearest(p, field_.q_at(p));
    return nearest(p, Mat<N>{});
  }

  Hit nearest(const Vec<N>& p, const Mat<N>& q_p) const {
    Hit best;
    const auto pb = bucket_multi_of(p);
    int max_ring = 0;
    for (int i = 0; i < N; ++i)
      max_ring = std::max(max_ring, std::max(pb[i], bucket_res_[i] - 1 - pb[i]));
    for (int ring = 0; ring <= max_ring; ++ring) {
      if (best.site >= 0) {
        const double reachable = sqrt_lambda_min_ * (ring - 1) * min_bucket_h_;
        if (ring >= 2 && reachable * reachable > best.d_sq) break;
      }
      scan_ring(pb, ring, p, q_p, best);
    }
    return best;
  }

  const std::vector<Vec<N>>& sites() const { return sites_; }

 private:
  int64_t bucket_count() const {
    int64_t n = 1;
    for (int i = 0; i < N; ++i) n *= bucket_res_[i];
    return n;
  }

  std::array<int, N> bucket_multi_of(const Vec<N>& p) const {
    std::array<int, N> m;
    for (int i = 0; i < N; ++i) {
      const double h = (box_.max[i] - box_.min[i]) / bucket_res_[i];
      m[i] = std::clamp(static_cast<int>(std::floor((p[i] - box_.min[i]) / h)), 0,
                        bucket_res_[i] - 1);
    }
    return m;
  }

  int64_t bucket_of(const Vec<N>& p) const {
    const auto m = bucket_multi_of(p);
    int64_t idx = 0;
    for (int i = N - 1; i >= 0; --i) idx = idx * bucket_res_[i] + m[i];
    return idx;
  }

  void consider(int site, const Vec<N>& p, const Mat<N>& q_p, Hit& best) const {
    const Vec<N> d = sites_[static_cast<size_t>(site)] - p;
    const double dsq = kind_ == DistanceKind::DW
                           ? quadratic_form(q_p, d)
                           : quadratic_form(site_q_[static_cast<size_t>(site)], d);
    if (dsq < best.d_sq || (dsq == best.d_sq && site < best.site)) {
      best.d_sq = dsq;
      best.site = site;
    }
  }

  void scan_ring(const std::array<int, N>& pb, int ring, const Vec<N>& p,
                 const Mat<N>& q_p, Hit& best) const {
    std::array<int, N> lo, hi, it;
    for (int i = 0; i < N; ++i) {
      lo[i] = std::max(0, pb[i] - ring);
      hi[i] = std::min(bucket_res_[i] - 1, pb[i] + ring);
      if (lo[i] > hi[i]) return;
      it[i] = lo[i];
    }
    for (;;) {
      int cheb = 0;
      for (int i = 0; i < N; ++i) cheb = std::max(cheb, std::abs(it[i] - pb[i]));
      if (cheb == ring) {
        int64_t idx = 0;
        for (int i = N - 1; i >= 0; --i) idx = idx * bucket_res_[i] + it[i];
        for (int s : buckets_[static_cast<size_t>(idx)]) consider(s, p, q_p, best);
      }
      int axis = 0;
      while (axis < N && ++it[axis] > hi[axis]) it[axis++] = lo[axis];
      if (axis == N) break;
    }
  }

  const std::vector<Vec<N>>& sites_;
  const MetricField<N>& field_;
  DistanceKind kind_;
  Box<N> box_;
  std::vector<Mat<N>> site_q_;  // LS only
  std::array<int, N> bucket_res_{};
  std::vector<std::vector<int>> buckets_;
  double min_bucket_h_ = 0;
  double sqrt_lambda_min_ = 0;
};

template <int N>
struct Component {
  int site = -1;
  bool is_main = false;
  std::vector<int64_t> cells;
  std::array<int, N> bbox_lo{}, bbox_hi{};
};

template <int N>
struct LabeledDiagram {
  Grid<N> grid;
  DistanceKind kind;
  std::vector<int32_t> labels;        // per cell, argmin site (lowest index on ties)
  std::vector<int32_t> component_of;  // per cell, index into components
  std::vector<Component<N>> components;
  std::vector<int> main_component;      // per site, -1 when the site holds no cell
  std::vector<int> orphan_candidates;   // non-main components, unconfirmed
  std::vector<int> confirmed_orphans;   // set by find_orphans
  std::vector<int> dropped_suspects;    // set by find_orphans
  bool orphans_checked = false;
  bool resolution_suspect = false;

  int64_t site_count() const { return static_cast<int64_t>(main_component.size()); }
};

namespace detail {

template <int N>
inline void compute_components(LabeledDiagram<N>& d, const std::vector<Vec<N>>& sites) {
  const int64_t cells = d.grid.cell_count();
  d.component_of.assign(static_cast<size_t>(cells), -1);
  d.components.clear();
  std::vector<int64_t> stack;
  for (int64_t c0 = 0; c0 < cells; ++c0) {
    if (d.component_of[static_cast<size_t>(c0)] >= 0) continue;
    const int32_t label = d.labels[static_cast<size_t>(c0)];
    const int comp_id = static_cast<int>(d.components.size());
    Component<N> comp;
    comp.site = label;
    comp.bbox_lo = comp.bbox_hi = d.grid.multi_of(c0);
    stack.assign(1, c0);
    d.component_of[static_cast<size_t>(c0)] = comp_id;
    while (!stack.empty()) {
      const int64_t c = stack.back();
      stack.pop_back();
      comp.cells.push_back(c);
      const auto m = d.grid.multi_of(c);
      for (int i = 0; i < N; ++i) {
        comp.bbox_lo[i] = std::min(comp.bbox_lo[i], m[i]);
        comp.bbox_hi[i] = std::max(comp.bbox_hi[i], m[i]);
      }
      for (int axis = 0; axis < N; ++axis) {
        for (int step = -1; step <= 1; step += 2) {
          auto nm = m;
          nm[axis] += step;
          if (nm[axis] < 0 || nm[axis] >= d.grid.res[axis]) continue;
          const int64_t nc = d.grid.linear_of(nm);
          if (d.labels[static_cast<size_t>(nc)] != label) continue;
          if (d.component_of[static_cast<size_t>(nc)] >= 0) continue;
          d.component_of[static_cast<size_t>(nc)] = comp_id;
          stack.push_back(nc);
        }
      }
    }
    d.components.push_back(std::move(comp));
  }
  d.main_component.assign(sites.size(), -1);
  for (size_t s = 0; s < sites.size(); ++s) {
    const int64_t cell = d.grid.cell_of(sites[s]);
    if (d.labels[static_cast<size_t>(cell)] == static_cast<int32_t>(s))
      d.main_component[s] = d.component_of[static_cast<size_t>(cell)];
  }
  d.orphan_candidates.clear();
  for (size_t ci = 0; ci < d.components.size(); ++ci) {
    auto& comp = d.components[ci];
    comp.is_main = d.main_component[static_cast<size_t>(comp.site)] == static_cast<int>(ci);
    if (!comp.is_main) d.orphan_candidates.push_back(static_cast<int>(ci));
  }
}

}  // namespace detail

/// Labels every grid cell with its nearest site (site as first distance
/// argument; ties to the lowest index) and decomposes each label set
/// into face-connected components.
template <int N>
inline LabeledDiagram<N> label_grid(const std::vector<Vec<N>>& sites,
                                    const MetricField<N>& field, DistanceKind kind,
                                    const Grid<N>& grid, int threads = 1) {
  grid.validate();
  if (sites.empty()) throw std::invalid_argument("label_grid: empty site list");
  for (const auto& s : sites)
    if (!grid.box.contains(s))
      throw std::invalid_argument("label_grid: site outside the grid box");

  LabeledDiagram<N> d;
  d.grid = grid;
  d.kind = kind;
  const int64_t cells = grid.cell_count();
  d.labels.assign(static_cast<size_t>(cells), -1);
  const SiteIndex<N> index(sites, field, kind);
  parallel_blocks(cells, threads, [&](int64_t, int64_t begin, int64_t end) {
    for (int64_t c = begin; c < end; ++c) {
      const Vec<N> p = grid.center(c);
      d.labels[static_cast<size_t>(c)] = index.nearest(p).site;
    }
  });
  detail::compute_components(d, sites);
  return d;
}

struct OrphanCheckOptions {
  int window_margin = 2;  // base cells added around a candidate bbox
  int threads = 1;
};

namespace detail {

// Re-examines one thin candidate component on a locally 2x-refined
// window. Returns true when the candidate survives (confirmed orphan):
// refined cells of the candidate's site exist inside the candidate area
// and none of them connects, within the window, to the site's main
// region just outside the window.
template <int N>
inline bool survives_refinement(const LabeledDiagram<N>& d, const std::vector<Vec<N>>& sites,
                                const MetricField<N>& field, int comp_index,
                                const OrphanCheckOptions& opt) {
  const Component<N>& comp = d.components[static_cast<size_t>(comp_index)];
  const int v = comp.site;
  std::array<int, N> lo = comp.bbox_lo, hi = comp.bbox_hi, wres;
  int64_t wcells = 1;
  for (int i = 0; i < N; ++i) {
    lo[i] = std::max(0, lo[i] - opt.window_margin);
    hi[i] = std::min(d.grid.res[i] - 1, hi[i] + opt.window_margin);
    wres[i] = 2 * (hi[i] - lo[i] + 1);
    wcells *= wres[i];
  }
  const Grid<N> fine = d.grid.refined(2);

  // Window-local refined labeling.
  const SiteIndex<N> index(sites, field, d.kind);
  std::vector<int32_t> wlabels(static_cast<size_t>(wcells));
  auto fine_multi = [&](int64_t wlin) {
    std::array<int, N> m;
    for (int i = 0; i < N; ++i) {
      m[i] = 2 * lo[i] + static_cast<int>(wlin % wres[i]);
      wlin /= wres[i];
    }
    return m;
  };
  parallel_blocks(wcells, opt.threads, [&](int64_t, int64_t begin, int64_t end) {
    for (int64_t w = begin; w < end; ++w)
      wlabels[static_cast<size_t>(w)] = index.nearest(fine.center(fine_multi(w))).site;
  });

  // Seeds: refined cells over the candidate's base cells that kept the
  // candidate's label.
  std::vector<int8_t> state(static_cast<size_t>(wcells), 0);  // 1 queued/visited
  std::vector<int64_t> stack;
  for (int64_t w = 0; w < wcells; ++w) {
    if (wlabels[static_cast<size_t>(w)] != v) continue;
    const auto fm = fine_multi(w);
    std::array<int, N> base;
    for (int i = 0; i < N; ++i) base[i] = fm[i] / 2;
    const int64_t base_lin = d.grid.linear_of(base);
    if (d.component_of[static_cast<size_t>(base_lin)] == comp_index) {
      state[static_cast<size_t>(w)] = 1;
      stack.push_back(w);
    }
  }
  if (stack.empty()) return false;  // vanished under refinement

  const int main_comp = d.main_component[static_cast<size_t>(v)];
  while (!stack.empty()) {
    const int64_t w = stack.back();
    stack.pop_back();
    const auto fm = fine_multi(w);
    std::array<int, N> wm;
    for (int i = 0; i < N; ++i) wm[i] = fm[i] - 2 * lo[i];
    for (int axis = 0; axis < N; ++axis) {
      for (int step = -1; step <= 1; step += 2) {
        auto nm = wm;
        nm[axis] += step;
        if (nm[axis] < 0 || nm[axis] >= wres[axis]) {
          // Leaving the window: connected to the outside iff the base
          // cell beyond the face belongs to v's main component.
          auto bm = fm;
          bm[axis] += step;
          if (bm[axis] < 0 || bm[axis] >= 2 * d.grid.res[axis]) continue;
          std::array<int, N> base;
          for (int i = 0; i < N; ++i) base[i] = (i == axis ? bm[i] : fm[i]) / 2;
          const int64_t base_lin = d.grid.linear_of(base);
          if (main_comp >= 0 && d.component_of[static_cast<size_t>(base_lin)] == main_comp)
            return false;  // rasterization artifact, reaches the main region
          continue;
        }
        int64_t nlin = 0;
        for (int i = N - 1; i >= 0; --i) nlin = nlin * wres[i] + nm[i];
        if (state[static_cast<size_t>(nlin)] || wlabels[static_cast<size_t>(nlin)] != v)
          continue;
        state[static_cast<size_t>(nlin)] = 1;
        stack.push_back(nlin);
      }
    }
  }
  return true;
}

}  // namespace detail

/// Confirms or drops every orphan candidate. Wide candidates are
/// confirmed outright; candidates whose every cell touches a label
/// boundary are re-checked on a locally 2x-refined window and dropped
/// as resolution suspects when they vanish or reconnect.
template <int N>
inline const std::vector<int>& find_orphans(LabeledDiagram<N>& d,
                                            const std::vector<Vec<N>>& sites,
                                            const MetricField<N>& field,
                                            const OrphanCheckOptions& opt = {}) {
  d.confirmed_orphans.clear();
  d.dropped_suspects.clear();
  for (int ci : d.orphan_candidates) {
    const Component<N>& comp = d.components[static_cast<size_t>(ci)];
    bool thin = true;
    for (int64_t cell : comp.cells) {
      const auto m = d.grid.multi_of(cell);
      bool touches_boundary = false;
      for (int axis = 0; axis < N && !touches_boundary; ++axis) {
        for (int step = -1; step <= 1; step += 2) {
          auto nm = m;
          nm[axis] += step;
          if (nm[axis] < 0 || nm[axis] >= d.grid.res[axis]) continue;
          if (d.labels[static_cast<size_t>(d.grid.linear_of(nm))] != comp.site) {
            touches_boundary = true;
            break;
          }
        }
      }
      if (!touches_boundary) {
        thin = false;
        break;
      }
    }
    const bool confirmed =
        thin ? detail::survives_refinement(d, sites, field, ci, opt) : true;
    if (confirmed)
      d.confirmed_orphans.push_back(ci);
    else
      d.dropped_suspects.push_back(ci);
  }
  d.orphans_checked = true;
  d.resolution_suspect = !d.dropped_suspects.empty();
  return d.confirmed_orphans;
}

template <int N>
struct StarViolation {
  int site;
  int64_t boundary_cell;
  Vec<N> point;
  int got_label;
};

template <int N>
struct StarCheckResult {
  std::vector<StarViolation<N>> violations;
  int64_t samples_checked = 0;
};

/// Samples the segment from every boundary cell of a region to its
/// generating site. A sample is a violation when another region claims
/// it and it sits deeper than one cell from every label boundary.
template <int N>
inline StarCheckResult<N> check_star_shaped(const LabeledDiagram<N>& d,
                                            const std::vector<Vec<N>>& sites,
                                            const MetricField<N>& field,
                                            int samples_per_cell = 4, int threads = 1) {
  const SiteIndex<N> index(sites, field, d.kind);
  const int64_t cells = d.grid.cell_count();
  const double step_len = d.grid.min_spacing() / samples_per_cell;

  auto deep_inside_foreign = [&](const Vec<N>& p, int foreign) {
    const auto m = d.grid.cell_multi_of(p);
    std::array<int, N> it;
    for (int i = 0; i < N; ++i) it[i] = std::max(0, m[i] - 1);
    for (;;) {
      if (d.labels[static_cast<size_t>(d.grid.linear_of(it))] != foreign) return false;
      int axis = 0;
      while (axis < N) {
        if (++it[axis] <= std::min(d.grid.res[axis] - 1, m[axis] + 1)) break;
        it[axis] = std::max(0, m[axis] - 1);
        ++axis;
      }
      if (axis == N) break;
    }
    return true;
  };

  const int64_t blocks = parallel_block_count(cells);
  std::vector<StarCheckResult<N>> partial(static_cast<size_t>(blocks));
  parallel_blocks(cells, threads, [&](int64_t blk, int64_t begin, int64_t end) {
    auto& out = partial[static_cast<size_t>(blk)];
    for (int64_t c = begin; c < end; ++c) {
      const int v = d.labels[static_cast<size_t>(c)];
      const auto m = d.grid.multi_of(c);
      bool boundary = false;
      for (int axis = 0; axis < N && !boundary; ++axis)
        for (int step = -1; step <= 1; step += 2) {
          auto nm = m;
          nm[axis] += step;
          if (nm[axis] < 0 || nm[axis] >= d.grid.res[axis]) continue;
          if (d.labels[static_cast<size_t>(d.grid.linear_of(nm))] != v) {
            boundary = true;
            break;
          }
        }
      if (!boundary) continue;
      const Vec<N> from = d.grid.center(c);
      const Vec<N> to = sites[static_cast<size_t>(v)];
      const double len = norm(to - from);
      const int nsamples = std::max(2, static_cast<int>(std::ceil(len / step_len)));
      for (int k = 1; k < nsamples; ++k) {
        const double t = double(k) / nsamples;
        const Vec<N> p = from + t * (to - from);
        ++out.samples_checked;
        const auto hit = index.nearest(p);
        if (hit.site == v) continue;
        if (deep_inside_foreign(p, hit.site))
          out.violations.push_back({v, c, p, hit.site});
      }
    }
  });
  StarCheckResult<N> out;
  for (const auto& part : partial) {
    out.samples_checked += part.samples_checked;
    out.violations.insert(out.violations.end(), part.violations.begin(),
                          part.violations.end());
  }
  return out;
}

template <int N>
struct NeighborWitness {
  int v = -1, w = -1;
  Vec<N> c{};                    // equidistant point on the shared boundary
  Vec<N> m{};                    // Euclidean midpoint of the two sites
  double d_v = 0, d_w = 0;       // distances from v and w to c
  std::optional<Vec<N>> c_prime; // second equidistant point, when located
};

template <int N>
struct WitnessResult {
  std::vector<NeighborWitness<N>> witnesses;
  int dropped = 0;
};

/// One witness per face-adjacent label pair: bisection along the
/// segment joining the two cell centers, converging on the equidistant
/// point of the pair's shared boundary.
template <int N>
inline WitnessResult<N> find_neighbor_witnesses(const LabeledDiagram<N>& d,
                                                const std::vector<Vec<N>>& sites,
                                                const MetricField<N>& field,
                                                double residual_rel = 1e-9,
                                                int max_iter = 200) {
  WitnessResult<N> out;
  std::map<std::pair<int, int>, std::pair<int64_t, int64_t>> first_face;
  const int64_t cells = d.grid.cell_count();
  for (int64_t c = 0; c < cells; ++c) {
    const auto m = d.grid.multi_of(c);
    const int32_t lc = d.labels[static_cast<size_t>(c)];
    for (int axis = 0; axis < N; ++axis) {
      auto nm = m;
      nm[axis] += 1;
      if (nm[axis] >= d.grid.res[axis]) continue;
      const int64_t nc = d.grid.linear_of(nm);
      const int32_t ln = d.labels[static_cast<size_t>(nc)];
      if (ln == lc) continue;
      const std::pair<int, int> key{std::min(lc, ln), std::max(lc, ln)};
      first_face.emplace(key, std::make_pair(c, nc));
    }
  }

  for (const auto& [key, face] : first_face) {
    const int v = key.first, w = key.second;
    const SitePoint<N> sv{sites[static_cast<size_t>(v)], v};
    const SitePoint<N> sw{sites[static_cast<size_t>(w)], w};
    auto gap = [&](const Vec<N>& x) {
      return distance_sq(d.kind, sv, x, field) - distance_sq(d.kind, sw, x, field);
    };
    Vec<N> a = d.grid.center(face.first), b = d.grid.center(face.second);
    if (d.labels[static_cast<size_t>(face.first)] != v) std::swap(a, b);
    // gap(a) <= 0 <= gap(b) by the labeling.
    Vec<N> c{};
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
      c = 0.5 * (a + b);
      const double dv = distance(d.kind, sv, c, field);
      const double dw = distance(d.kind, sw, c, field);
      if (std::abs(dv - dw) <= residual_rel * std::max(dv, dw)) {
        converged = true;
        break;
      }
      (gap(c) <= 0 ? a : b) = c;
    }
    if (!converged) {
      ++out.dropped;
      continue;
    }
    NeighborWitness<N> wit;
    wit.v = v;
    wit.w = w;
    wit.c = c;
    wit.m = 0.5 * (sv.pos + sw.pos);
    wit.d_v = distance(d.kind, sv, c, field);
    wit.d_w = distance(d.kind, sw, c, field);
    out.witnesses.push_back(wit);
  }
  return out;
}

template <int N>
struct PhiProfile {
  Vec<N> seg_from{}, seg_to{};
  std::vector<double> lambdas;
  std::vector<double> values;
  std::vector<double> zero_lambdas;  // sign changes away from the witness anchor
  std::vector<Vec<N>> zeros;
};

/// Samples the proof's phi function along the witness segment.
/// DW: p(l) = c (1-l) + v l,  phi = eps^-2 (w-v)^t Q_p (m - p).
/// LS: p(l) = v (1-l) + c l,  phi = eps^-2 [d_ls(w,p) - d_ls(v,p)].
/// Sign changes (candidate c' points) are refined by bisection; the
/// anchor zero at c itself is excluded.
template <int N>
inline PhiProfile<N> phi_profile(const Vec<N>& v_pos, const Vec<N>& w_pos, const Vec<N>& c,
                                 double epsilon, const MetricField<N>& field,
                                 DistanceKind kind, int samples = 1024) {
  if (epsilon <= 0) throw std::invalid_argument("phi_profile: epsilon must be > 0");
  if (samples < 2) throw std::invalid_argument("phi_profile: needs at least 2 samples");
  PhiProfile<N> out;
  const Vec<N> m = 0.5 * (v_pos + w_pos);
  const double inv_e2 = 1.0 / (epsilon * epsilon);
  if (kind == DistanceKind::DW) {
    out.seg_from = c;
    out.seg_to = v_pos;
  } else {
    out.seg_from = v_pos;
    out.seg_to = c;
  }
  auto phi = [&](double l) {
    const Vec<N> p = out.seg_from + l * (out.seg_to - out.seg_from);
    if (kind == DistanceKind::DW)
      return inv_e2 * bilinear_form(w_pos - v_pos, field.q_at(p), m - p);
    const SitePoint<N> sv{v_pos, -1}, sw{w_pos, -1};
    return inv_e2 * (d_ls(sw, p, field) - d_ls(sv, p, field));
  };
  out.lambdas.resize(static_cast<size_t>(samples));
  out.values.resize(static_cast<size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double l = double(k) / (samples - 1);
    out.lambdas[static_cast<size_t>(k)] = l;
    out.values[static_cast<size_t>(k)] = phi(l);
  }
  const double anchor = kind == DistanceKind::DW ? 0.0 : 1.0;
  const double anchor_window = 2.0 / (samples - 1);
  for (int k = 1; k < samples; ++k) {
    const double f0 = out.values[static_cast<size_t>(k - 1)];
    const double f1 = out.values[static_cast<size_t>(k)];
    if (!(f0 < 0 && f1 > 0) && !(f0 > 0 && f1 < 0)) continue;
    double lo = out.lambdas[static_cast<size_t>(k - 1)], hi = out.lambdas[static_cast<size_t>(k)];
    double flo = f0;
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = phi(mid);
      if ((flo < 0) == (fm < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    const double root = 0.5 * (lo + hi);
    if (std::abs(root - anchor) <= anchor_window) continue;
    out.zero_lambdas.push_back(root);
    out.zeros.push_back(out.seg_from + root * (out.seg_to - out.seg_from));
  }
  return out;
}

}  // namespace anisovoro
