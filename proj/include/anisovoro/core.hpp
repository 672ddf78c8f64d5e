#pragma once

// Small fixed-dimension vectors and matrices plus the dense symmetric
// eigensolver everything else is built on. Dimensions of interest are
// tiny (2..5), so all storage is on the stack and all algorithms are
// direct.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace anisovoro {

using std::int64_t;

template <int N>
struct Vec {
  static_assert(N >= 1);
  std::array<double, N> c{};

  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<size_t>(i)]; }

  static constexpr Vec zero() { return Vec{}; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < N; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < N; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < N; ++i) c[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend bool operator==(const Vec& a, const Vec& b) { return a.c == b.c; }
};

template <int N>
inline double dot(const Vec<N>& a, const Vec<N>& b) {
  double s = 0;
  for (int i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <int N>
inline double norm2(const Vec<N>& a) {
  return dot(a, a);
}

template <int N>
inline double norm(const Vec<N>& a) {
  return std::sqrt(norm2(a));
}

template <int N>
inline bool all_finite(const Vec<N>& a) {
  for (int i = 0; i < N; ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

// Row-major square matrix.
template <int N>
struct Mat {
  static_assert(N >= 1);
  std::array<double, N * N> a{};

  double& operator()(int i, int j) { return a[static_cast<size_t>(i * N + j)]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i * N + j)]; }

  static Mat identity() {
    Mat m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat diagonal(const Vec<N>& d) {
    Mat m;
    for (int i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  Mat& operator+=(const Mat& o) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
  }
  Mat& operator*=(double s) {
    for (size_t i = 0; i < a.size(); ++i) a[i] *= s;
    return *this;
  }
  friend Mat operator+(Mat x, const Mat& y) { return x += y; }
  friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
  friend Mat operator*(Mat x, double s) { return x *= s; }
  friend Mat operator*(double s, Mat x) { return x *= s; }
  friend bool operator==(const Mat& x, const Mat& y) { return x.a == y.a; }
};

template <int N>
inline Mat<N> operator*(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> r;
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      const double xik = x(i, k);
      for (int j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

template <int N>
inline Vec<N> operator*(const Mat<N>& m, const Vec<N>& v) {
  Vec<N> r;
  for (int i = 0; i < N; ++i) {
    double s = 0;
    for (int j = 0; j < N; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

template <int N>
inline Mat<N> transpose(const Mat<N>& m) {
  Mat<N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = m(j, i);
  return r;
}

template <int N>
inline double frobenius_norm(const Mat<N>& m) {
  double s = 0;
  for (double x : m.a) s += x * x;
  return std::sqrt(s);
}

template <int N>
inline double trace(const Mat<N>& m) {
  double s = 0;
  for (int i = 0; i < N; ++i) s += m(i, i);
  return s;
}

template <int N>
inline bool all_finite(const Mat<N>& m) {
  for (double x : m.a)
    if (!std::isfinite(x)) return false;
  return true;
}

template <int N>
inline bool is_symmetric_exact(const Mat<N>& m) {
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

// (x^t M y), the bilinear form.
template <int N>
inline double bilinear_form(const Vec<N>& x, const Mat<N>& m, const Vec<N>& y) {
  double s = 0;
  for (int i = 0; i < N; ++i) {
    double row = 0;
    for (int j = 0; j < N; ++j) row += m(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}

template <int N>
inline double quadratic_form(const Mat<N>& m, const Vec<N>& d) {
  return bilinear_form(d, m, d);
}

// Eigendecomposition A = V diag(values) V^t of a symmetric matrix by
// cyclic Jacobi rotations. Eigenvalues are sorted ascending, which also
// fixes the column order of V, so results are deterministic.
template <int N>
struct SymEigen {
  Vec<N> values;   // ascending
  Mat<N> vectors;  // columns are eigenvectors
};

template <int N>
inline SymEigen<N> sym_eigen(Mat<N> m) {
  if (!all_finite(m)) throw std::invalid_argument("sym_eigen: non-finite entries");
  Mat<N> v = Mat<N>::identity();
  const double scale = frobenius_norm(m);
  const double off_tol = scale * 1e-15;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) off += m(p, q) * m(p, q);
    if (std::sqrt(2.0 * off) <= off_tol) break;
    for (int p = 0; p < N; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Rotate rows/cols p and q of m.
        for (int i = 0; i < N; ++i) {
          const double mip = m(i, p), miq = m(i, q);
          m(i, p) = c * mip - s * miq;
          m(i, q) = s * mip + c * miq;
        }
        for (int j = 0; j < N; ++j) {
          const double mpj = m(p, j), mqj = m(q, j);
          m(p, j) = c * mpj - s * mqj;
          m(q, j) = s * mpj + c * mqj;
        }
        for (int i = 0; i < N; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  SymEigen<N> out;
  std::array<int, N> order;
  for (int i = 0; i < N; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return m(i, i) < m(j, j); });
  for (int k = 0; k < N; ++k) {
    out.values[k] = m(order[k], order[k]);
    for (int i = 0; i < N; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

// Gauss-Jordan inverse with partial pivoting; fine at these sizes.
template <int N>
inline Mat<N> inverse(Mat<N> m) {
  if (!all_finite(m)) throw std::invalid_argument("inverse: non-finite entries");
  Mat<N> inv = Mat<N>::identity();
  const double tiny = frobenius_norm(m) * 1e-300 + 1e-300;
  for (int col = 0; col < N; ++col) {
    int piv = col;
    for (int r = col + 1; r < N; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) <= tiny)
      throw std::invalid_argument("inverse: singular matrix");
    if (piv != col) {
      for (int j = 0; j < N; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const double d = 1.0 / m(col, col);
    for (int j = 0; j < N; ++j) {
      m(col, j) *= d;
      inv(col, j) *= d;
    }
    for (int r = 0; r < N; ++r) {
      if (r == col) continue;
      const double f = m(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < N; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

// Uniform double in [0, 1), independent of the standard library's
// distribution implementations so seeded runs reproduce everywhere.
inline double rand_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Axis-aligned box domain.
template <int N>
struct Box {
  Vec<N> min, max;

  bool contains(const Vec<N>& p) const {
    for (int i = 0; i < N; ++i)
      if (p[i] < min[i] || p[i] > max[i]) return false;
    return true;
  }
  Vec<N> center() const {
    Vec<N> c;
    for (int i = 0; i < N; ++i) c[i] = 0.5 * (min[i] + max[i]);
    return c;
  }
  Vec<N> extent() const { return max - min; }
  double diagonal() const { return norm(extent()); }
  Vec<N> clamp(Vec<N> p) const {
    for (int i = 0; i < N; ++i) p[i] = std::clamp(p[i], min[i], max[i]);
    return p;
  }
  void validate() const {
    for (int i = 0; i < N; ++i)
      if (!(min[i] < max[i]))
        throw std::invalid_argument("Box: min must be strictly below max per axis");
  }
};

}  // namespace anisovoro
