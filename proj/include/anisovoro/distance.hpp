#pragma once

// The two asymmetric distance functions. Sites always go first:
//   d_ls(v, p) = |M_v (v - p)|   (metric at the site)
//   d_dw(v, p) = |M_p (v - p)|   (metric at the query point)
// Neither is a metric; only nonnegativity and zero-iff-equal hold.
// Hot paths compare squared forms, so the *_sq variants are the primary
// implementations and the public ones take the square root at the end.

#include "anisovoro/metric.hpp"

namespace anisovoro {

enum class DistanceKind { DW, LS };

inline const char* kind_name(DistanceKind k) {
  return k == DistanceKind::DW ? "DW" : "LS";
}

inline DistanceKind kind_from_name(const std::string& s) {
  if (s == "DW" || s == "dw") return DistanceKind::DW;
  if (s == "LS" || s == "ls") return DistanceKind::LS;
  throw std::invalid_argument("unknown distance kind: " + s);
}

// A site position, kept distinct from plain query points so call sites
// cannot swap the asymmetric arguments silently.
template <int N>
struct SitePoint {
  Vec<N> pos;
  int index = -1;
};

template <int N>
inline double d_ls_sq(const SitePoint<N>& site, const Vec<N>& p, const MetricField<N>& field) {
  if (!field.domain().contains(p))
    throw std::domain_error("d_ls: query point outside domain");
  return quadratic_form(field.q_at(site.pos), site.pos - p);
}

template <int N>
inline double d_dw_sq(const SitePoint<N>& site, const Vec<N>& p, const MetricField<N>& field) {
  if (!field.domain().contains(site.pos))
    throw std::domain_error("d_dw: site outside domain");
  return quadratic_form(field.q_at(p), site.pos - p);
}

template <int N>
inline double d_ls(const SitePoint<N>& site, const Vec<N>& p, const MetricField<N>& field) {
  return std::sqrt(d_ls_sq(site, p, field));
}

template <int N>
inline double d_dw(const SitePoint<N>& site, const Vec<N>& p, const MetricField<N>& field) {
  return std::sqrt(d_dw_sq(site, p, field));
}

template <int N>
inline double distance_sq(DistanceKind kind, const SitePoint<N>& site, const Vec<N>& p,
                          const MetricField<N>& field) {
  return kind == DistanceKind::DW ? d_dw_sq(site, p, field) : d_ls_sq(site, p, field);
}

template <int N>
inline double distance(DistanceKind kind, const SitePoint<N>& site, const Vec<N>& p,
                       const MetricField<N>& field) {
  return std::sqrt(distance_sq(kind, site, p, field));
}

/// |M_b (a-b)| / |M_a (a-b)|; bounded by the extreme singular values of
/// M_b M_a^{-1}.
template <int N>
inline double asymmetry_ratio(const Vec<N>& a, const Vec<N>& b, const MetricField<N>& field) {
  if (a == b) throw std::invalid_argument("asymmetry_ratio: points coincide");
  const Vec<N> d = a - b;
  const double num = norm(field.sqrt_at(b) * d);
  const double den = norm(field.sqrt_at(a) * d);
  return num / den;
}

}  // namespace anisovoro
