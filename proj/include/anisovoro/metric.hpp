#pragma once

// Spatially-varying SPD metric fields Q : domain -> R^{nxn}. A field is
// either an analytic preset or a piecewise-multilinear interpolant of
// SPD matrices stored on a uniform vertex lattice. Evaluation is pure
// and deterministic: the same point always yields the bitwise-identical
// matrix.

#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "anisovoro/core.hpp"
#include "anisovoro/grid.hpp"
#include "anisovoro/spd.hpp"

namespace anisovoro {

enum class MetricPreset { Identity, AxisScaling, Swirl, RadialBump };

inline const char* preset_name(MetricPreset p) {
  switch (p) {
    case MetricPreset::Identity: return "identity";
    case MetricPreset::AxisScaling: return "axis-scaling";
    case MetricPreset::Swirl: return "swirl";
    case MetricPreset::RadialBump: return "radial-bump";
  }
  return "?";
}

template <int N>
class MetricField {
 public:
  static constexpr double kDefaultConditionCap = 1e4;

  static MetricField identity(const Box<N>& box) {
    MetricField f(box);
    f.preset_ = MetricPreset::Identity;
    f.lambda_min_lb_ = 1.0;
    f.lambda_max_ub_ = 1.0;
    return f;
  }

  // Q = diag(1, (1 + s x_0)^2, ..., (1 + s x_{n-2})^2).
  static MetricField axis_scaling(const Box<N>& box, double s) {
    MetricField f(box);
    f.preset_ = MetricPreset::AxisScaling;
    f.scale_rate_ = s;
    double fmin = 1.0, fmax = 1.0;
    for (int i = 0; i + 1 < N; ++i) {
      const double lo = 1.0 + s * box.min[i], hi = 1.0 + s * box.max[i];
      fmin = std::min({fmin, lo, hi});
      fmax = std::max({fmax, lo, hi});
    }
    if (fmin < 0.05)
      throw std::invalid_argument("axis_scaling: 1 + s*x must stay positive on the box");
    f.lambda_min_lb_ = fmin * fmin;
    f.lambda_max_ub_ = fmax * fmax;
    f.check_condition_cap();
    return f;
  }

  // Radially stretched frame around a center in the x0-x1 plane:
  // Q = I + (a^2 - 1) e_r e_r^t, eigenvalues {a^2, 1, ..., 1}. The
  // center must stay outside the box (the frame is singular there).
  static MetricField swirl(const Box<N>& box, const Vec<N>& center, double anisotropy) {
    static_assert(N >= 2, "swirl needs at least two axes");
    MetricField f(box);
    f.preset_ = MetricPreset::Swirl;
    f.center_ = center;
    f.anisotropy_ = anisotropy;
    if (anisotropy <= 0) throw std::invalid_argument("swirl: anisotropy must be > 0");
    // Distance from the center to the box, in the x0-x1 plane only.
    double d2 = 0;
    for (int i = 0; i < 2; ++i) {
      const double c = std::clamp(center[i], box.min[i], box.max[i]);
      d2 += (center[i] - c) * (center[i] - c);
    }
    if (std::sqrt(d2) < 0.02 * box.diagonal())
      throw std::invalid_argument("swirl: center must lie clearly outside the domain");
    f.lambda_min_lb_ = std::min(1.0, anisotropy * anisotropy);
    f.lambda_max_ub_ = std::max(1.0, anisotropy * anisotropy);
    f.check_condition_cap();
    return f;
  }

  // Conformal bump Q = (1 + b exp(-|p-c|^2 / w^2))^2 I.
  static MetricField radial_bump(const Box<N>& box, const Vec<N>& center,
                                 double amplitude, double width) {
    MetricField f(box);
    f.preset_ = MetricPreset::RadialBump;
    f.center_ = center;
    f.amplitude_ = amplitude;
    f.width_ = width;
    if (width <= 0) throw std::invalid_argument("radial_bump: width must be > 0");
    const double fmin = 1.0 + std::min(0.0, amplitude);
    const double fmax = 1.0 + std::max(0.0, amplitude);
    if (fmin < 0.05)
      throw std::invalid_argument("radial_bump: amplitude drives the metric to zero");
    f.lambda_min_lb_ = fmin * fmin;
    f.lambda_max_ub_ = fmax * fmax;
    f.check_condition_cap();
    return f;
  }

  // res counts cells per axis; vertex_values holds (res+1) vertices per
  // axis, axis 0 varying fastest, each matrix exactly symmetric.
  static MetricField pl_grid(const Box<N>& box, const std::array<int, N>& res,
                             std::vector<Mat<N>> vertex_values,
                             double condition_cap = kDefaultConditionCap) {
    MetricField f(box);
    f.condition_cap_ = condition_cap;
    f.preset_ = std::nullopt;
    f.pl_res_ = res;
    int64_t expect = 1;
    for (int i = 0; i < N; ++i) {
      if (res[i] < 1) throw std::invalid_argument("pl_grid: res must be >= 1 per axis");
      expect *= res[i] + 1;
    }
    if (static_cast<int64_t>(vertex_values.size()) != expect)
      throw std::invalid_argument("pl_grid: vertex count does not match res");
    double lmin = std::numeric_limits<double>::infinity(), lmax = 0;
    for (const auto& q : vertex_values) {
      const SpdMatrix<N> s(q);  // validates symmetry and PD
      lmin = std::min(lmin, s.eigenvalues()[0]);
      lmax = std::max(lmax, s.eigenvalues()[N - 1]);
    }
    // lambda_min is concave and lambda_max convex over symmetric
    // matrices, so vertex extremes bound every convex combination.
    f.lambda_min_lb_ = lmin;
    f.lambda_max_ub_ = lmax;
    f.check_condition_cap();
    f.pl_values_ = std::make_shared<const std::vector<Mat<N>>>(std::move(vertex_values));
    return f;
  }

  static MetricField from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const Box<N>& domain() const { return box_; }
  double condition_cap() const { return condition_cap_; }
  double min_eigenvalue_lower_bound() const { return lambda_min_lb_; }
  double max_eigenvalue_upper_bound() const { return lambda_max_ub_; }
  bool is_pl_grid() const { return !preset_.has_value(); }
  std::optional<MetricPreset> preset() const { return preset_; }

  // The metric tensor at p (fast path, no validation wrapper).
  Mat<N> q_at(const Vec<N>& p) const {
    if (!box_.contains(p)) throw std::domain_error("MetricField: point outside domain");
    if (!preset_) return interpolate(p);
    switch (*preset_) {
      case MetricPreset::Identity:
        return Mat<N>::identity();
      case MetricPreset::AxisScaling: {
        Vec<N> d;
        d[0] = 1.0;
        for (int i = 1; i < N; ++i) {
          const double fi = 1.0 + scale_rate_ * p[i - 1];
          d[i] = fi * fi;
        }
        return Mat<N>::diagonal(d);
      }
      case MetricPreset::Swirl: {
        const double dx = p[0] - center_[0], dy = p[1] - center_[1];
        const double r2 = dx * dx + dy * dy;
        const double g = (anisotropy_ * anisotropy_ - 1.0) / r2;
        Mat<N> q = Mat<N>::identity();
        q(0, 0) += g * dx * dx;
        q(1, 1) += g * dy * dy;
        const double off = g * dx * dy;
        q(0, 1) = off;
        q(1, 0) = off;
        return q;
      }
      case MetricPreset::RadialBump: {
        const double r2 = norm2(p - center_);
        const double fp = 1.0 + amplitude_ * std::exp(-r2 / (width_ * width_));
        return Mat<N>::identity() * (fp * fp);
      }
    }
    throw std::logic_error("MetricField: unknown preset");
  }

  SpdMatrix<N> spd_at(const Vec<N>& p) const { return SpdMatrix<N>(q_at(p)); }

  // M_p, the symmetric PD square root of Q_p.
  Mat<N> sqrt_at(const Vec<N>& p) const { return spd_at(p).sqrt_matrix(); }

 private:
  explicit MetricField(const Box<N>& box) : box_(box) { box.validate(); }

  void check_condition_cap() const {
    if (lambda_max_ub_ / lambda_min_lb_ > condition_cap_)
      throw std::invalid_argument("MetricField: condition number bound exceeds cap");
  }

  Mat<N> interpolate(const Vec<N>& p) const {
    std::array<int, N> cell;
    std::array<double, N> frac;
    for (int i = 0; i < N; ++i) {
      const double h = (box_.max[i] - box_.min[i]) / pl_res_[i];
      const double t = (p[i] - box_.min[i]) / h;
      int c = static_cast<int>(std::floor(t));
      c = std::clamp(c, 0, pl_res_[i] - 1);
      cell[i] = c;
      frac[i] = std::clamp(t - c, 0.0, 1.0);
    }
    Mat<N> out;
    const auto& vals = *pl_values_;
    for (int corner = 0; corner < (1 << N); ++corner) {
      double w = 1.0;
      int64_t idx = 0;
      for (int i = N - 1; i >= 0; --i) {
        const int bit = (corner >> i) & 1;
        w *= bit ? frac[i] : (1.0 - frac[i]);
        idx = idx * (pl_res_[i] + 1) + (cell[i] + bit);
      }
      if (w == 0.0) continue;
      out += vals[static_cast<size_t>(idx)] * w;
    }
    return detail::symmetrize(out);
  }

  Box<N> box_;
  double condition_cap_ = kDefaultConditionCap;
  std::optional<MetricPreset> preset_ = MetricPreset::Identity;
  double scale_rate_ = 0;   // axis-scaling
  Vec<N> center_{};         // swirl, radial-bump
  double anisotropy_ = 1;   // swirl
  double amplitude_ = 0;    // radial-bump
  double width_ = 1;        // radial-bump
  std::array<int, N> pl_res_{};
  std::shared_ptr<const std::vector<Mat<N>>> pl_values_;
  double lambda_min_lb_ = 1, lambda_max_ub_ = 1;
};

namespace detail {

template <int N>
inline Vec<N> vec_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != N)
    throw std::invalid_argument("expected an array of " + std::to_string(N) + " numbers");
  Vec<N> v;
  for (int i = 0; i < N; ++i) v[i] = j[static_cast<size_t>(i)].get<double>();
  return v;
}

template <int N>
inline nlohmann::json vec_to_json(const Vec<N>& v) {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < N; ++i) j.push_back(v[i]);
  return j;
}

}  // namespace detail

// PL-grid file schema:
// { "dim": n, "box": {"min": [...], "max": [...]}, "res": [...],
//   "values": [ [q00, q01, ..., q(n-1)(n-1)], ... ] }
// with one flat row-major matrix per vertex, axis 0 varying fastest.
template <int N>
MetricField<N> MetricField<N>::from_json(const nlohmann::json& j) {
  if (!j.contains("dim") || j["dim"].get<int>() != N)
    throw std::invalid_argument("pl-grid json: dim mismatch");
  Box<N> box{detail::vec_from_json<N>(j.at("box").at("min")),
             detail::vec_from_json<N>(j.at("box").at("max"))};
  std::array<int, N> res;
  const auto& jr = j.at("res");
  if (!jr.is_array() || jr.size() != N)
    throw std::invalid_argument("pl-grid json: res must have dim entries");
  for (int i = 0; i < N; ++i) res[i] = jr[static_cast<size_t>(i)].get<int>();
  std::vector<Mat<N>> values;
  for (const auto& jm : j.at("values")) {
    if (!jm.is_array() || jm.size() != static_cast<size_t>(N * N))
      throw std::invalid_argument("pl-grid json: each value must hold n*n entries");
    Mat<N> m;
    for (int k = 0; k < N * N; ++k) m.a[static_cast<size_t>(k)] = jm[static_cast<size_t>(k)].get<double>();
    values.push_back(m);
  }
  const double cap = j.value("condition_cap", kDefaultConditionCap);
  return pl_grid(box, res, std::move(values), cap);
}

template <int N>
nlohmann::json MetricField<N>::to_json() const {
  nlohmann::json j;
  j["dim"] = N;
  j["box"] = {{"min", detail::vec_to_json<N>(box_.min)},
              {"max", detail::vec_to_json<N>(box_.max)}};
  j["condition_cap"] = condition_cap_;
  if (preset_) {
    j["preset"] = preset_name(*preset_);
    nlohmann::json params = nlohmann::json::object();
    switch (*preset_) {
      case MetricPreset::Identity: break;
      case MetricPreset::AxisScaling: params["s"] = scale_rate_; break;
      case MetricPreset::Swirl:
        params["center"] = detail::vec_to_json<N>(center_);
        params["anisotropy"] = anisotropy_;
        break;
      case MetricPreset::RadialBump:
        params["center"] = detail::vec_to_json<N>(center_);
        params["amplitude"] = amplitude_;
        params["width"] = width_;
        break;
    }
    j["params"] = params;
  } else {
    nlohmann::json res = nlohmann::json::array();
    for (int i = 0; i < N; ++i) res.push_back(pl_res_[i]);
    j["res"] = res;
    nlohmann::json values = nlohmann::json::array();
    for (const auto& m : *pl_values_) {
      nlohmann::json flat = nlohmann::json::array();
      for (double x : m.a) flat.push_back(x);
      values.push_back(flat);
    }
    j["values"] = values;
  }
  return j;
}

// Builds a preset field from a config-style spec:
// {"preset": "axis-scaling", "params": {"s": 0.5}}.
template <int N>
inline MetricField<N> metric_from_preset_spec(const Box<N>& box, const nlohmann::json& spec) {
  const std::string name = spec.at("preset").get<std::string>();
  const nlohmann::json params = spec.value("params", nlohmann::json::object());
  if (name == "identity") return MetricField<N>::identity(box);
  if (name == "axis-scaling")
    return MetricField<N>::axis_scaling(box, params.at("s").get<double>());
  if (name == "swirl")
    return MetricField<N>::swirl(box, detail::vec_from_json<N>(params.at("center")),
                                 params.at("anisotropy").get<double>());
  if (name == "radial-bump")
    return MetricField<N>::radial_bump(box, detail::vec_from_json<N>(params.at("center")),
                                       params.at("amplitude").get<double>(),
                                       params.at("width").get<double>());
  throw std::invalid_argument("unknown metric preset: " + name);
}

}  // namespace anisovoro
