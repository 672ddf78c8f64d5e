#pragma once

// Symmetric positive definite matrices and their unique symmetric PD
// square roots. Two construction routes are provided: the
// eigendecomposition route (production path) and a matrix power series
// (kept as an independent cross-check of the same object).

#include <sstream>

#include "anisovoro/core.hpp"

namespace anisovoro {

struct NotPositiveDefinite : std::runtime_error {
  double min_eigenvalue;
  explicit NotPositiveDefinite(double lambda_min)
      : std::runtime_error("matrix is not positive definite (lambda_min = " +
                           std::to_string(lambda_min) + ")"),
        min_eigenvalue(lambda_min) {}
};

struct ConvergenceFailure : std::runtime_error {
  double residual;
  ConvergenceFailure(const std::string& what, double r)
      : std::runtime_error(what + " (residual = " + std::to_string(r) + ")"),
        residual(r) {}
};

/// Largest singular value, sup_{r != 0} |A r| / |r|.
template <int N>
inline double spectral_norm(const Mat<N>& a) {
  if (!all_finite(a)) throw std::invalid_argument("spectral_norm: non-finite entries");
  const auto e = sym_eigen(transpose(a) * a);
  return std::sqrt(std::max(0.0, e.values[N - 1]));
}

/// Smallest singular value, inf_{r != 0} |A r| / |r|.
template <int N>
inline double spectral_min(const Mat<N>& a) {
  if (!all_finite(a)) throw std::invalid_argument("spectral_min: non-finite entries");
  const auto e = sym_eigen(transpose(a) * a);
  return std::sqrt(std::max(0.0, e.values[0]));
}

namespace detail {

// Force bitwise symmetry of an almost-symmetric product.
template <int N>
inline Mat<N> symmetrize(const Mat<N>& m) {
  Mat<N> r;
  for (int i = 0; i < N; ++i) {
    r(i, i) = m(i, i);
    for (int j = i + 1; j < N; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

}  // namespace detail

// A validated SPD matrix. Construction checks exact symmetry of the
// stored entries and strict positive definiteness (smallest eigenvalue
// above a trace-scaled tolerance), and keeps the eigendecomposition and
// the symmetric PD square root M = R sqrt(Lambda) R^t around.
template <int N>
class SpdMatrix {
 public:
  static constexpr double kPdTolerance = 1e-12;

  explicit SpdMatrix(const Mat<N>& q) : q_(q) {
    if (!all_finite(q)) throw std::invalid_argument("SpdMatrix: non-finite entries");
    if (!is_symmetric_exact(q))
      throw std::invalid_argument("SpdMatrix: entries are not symmetric");
    eigen_ = sym_eigen(q);
    const double tol = kPdTolerance * std::abs(trace(q));
    if (!(eigen_.values[0] > tol)) throw NotPositiveDefinite(eigen_.values[0]);
    Vec<N> root_values;
    for (int i = 0; i < N; ++i) root_values[i] = std::sqrt(eigen_.values[i]);
    sqrt_ = detail::symmetrize(eigen_.vectors * Mat<N>::diagonal(root_values) *
                               transpose(eigen_.vectors));
  }

  // For matrices assembled from floating-point products that are
  // symmetric only up to roundoff.
  static SpdMatrix from_symmetric_part(const Mat<N>& q) {
    return SpdMatrix(detail::symmetrize(q));
  }

  const Mat<N>& matrix() const { return q_; }
  const Mat<N>& sqrt_matrix() const { return sqrt_; }
  const Vec<N>& eigenvalues() const { return eigen_.values; }
  const Mat<N>& eigenvectors() const { return eigen_.vectors; }
  double condition_number() const { return eigen_.values[N - 1] / eigen_.values[0]; }

  Mat<N> inverse_sqrt() const {
    Vec<N> inv_root;
    for (int i = 0; i < N; ++i) inv_root[i] = 1.0 / std::sqrt(eigen_.values[i]);
    return detail::symmetrize(eigen_.vectors * Mat<N>::diagonal(inv_root) *
                              transpose(eigen_.vectors));
  }

 private:
  Mat<N> q_;
  Mat<N> sqrt_;
  SymEigen<N> eigen_;
};

/// Unique symmetric PD square root via eigendecomposition.
/// Throws std::invalid_argument on non-symmetric input and
/// NotPositiveDefinite when the smallest eigenvalue is below tolerance.
template <int N>
inline Mat<N> spd_sqrt(const Mat<N>& q) {
  return SpdMatrix<N>(q).sqrt_matrix();
}

template <int N>
inline SpdMatrix<N> spd_sqrt(const SpdMatrix<N>& q) {
  return SpdMatrix<N>(q.sqrt_matrix());
}

/// Square root by the power series S = sum_i a_i (Q - I)^i with
/// a_0 = 1, a_{i+1} = a_i (1 - 2i) / (2i + 2), after rescaling Q by
/// 1/rho(Q) so the series converges; the result is scaled back by
/// sqrt(rho(Q)). Stops when the Frobenius norm of the next term drops
/// below tol; throws ConvergenceFailure if max_terms is hit first.
template <int N>
inline Mat<N> spd_sqrt_series(const Mat<N>& q, int max_terms = 1000,
                              double tol = 1e-12) {
  if (!is_symmetric_exact(q))
    throw std::invalid_argument("spd_sqrt_series: entries are not symmetric");
  const SpdMatrix<N> checked(q);  // validates PD, gives rho(Q) = lambda_max
  const double rho = checked.eigenvalues()[N - 1];
  const Mat<N> x = q * (1.0 / rho) - Mat<N>::identity();

  Mat<N> sum = Mat<N>::identity();
  Mat<N> power = Mat<N>::identity();  // (Q' - I)^i
  double coeff = 1.0;
  double last_term_norm = std::numeric_limits<double>::infinity();
  for (int i = 0; i < max_terms; ++i) {
    power = power * x;
    coeff *= (1.0 - 2.0 * i) / (2.0 * i + 2.0);
    const Mat<N> term = power * coeff;
    sum += term;
    last_term_norm = frobenius_norm(term);
    if (last_term_norm < tol)
      return detail::symmetrize(sum * std::sqrt(rho));
  }
  throw ConvergenceFailure("spd_sqrt_series: no convergence within max_terms",
                           last_term_norm);
}

}  // namespace anisovoro
