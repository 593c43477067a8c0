#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spectra/dense_matrix.hpp"
#include "spectra/error.hpp"

namespace spectra {

namespace detail {

// Implicit-shift QL on a symmetric tridiagonal matrix (diagonal d, e[i] the
// coupling of i and i+1, e[n-1] ignored). On return d holds the eigenvalues,
// unsorted. If v is non-null its columns are rotated along, so passing the
// Householder basis yields eigenvectors of the original matrix.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, DenseMatrix* v) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e.resize(n);
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0, tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;
    if (m > l) {
      int iterations = 0;
      do {
        if (++iterations > 200) throw std::runtime_error("tridiagonal_ql: no convergence");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0, el1 = e[l + 1], s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (v) {
            for (std::size_t k = 0; k < n; ++k) {
              double t = (*v)(k, ii + 1);
              (*v)(k, ii + 1) = s * (*v)(k, ii) + c * t;
              (*v)(k, ii) = c * (*v)(k, ii) - s * t;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

// Householder reduction of a symmetric matrix to tridiagonal form. Returns
// (diagonal, couplings). With accumulate the orthogonal basis is left in v.
inline std::pair<std::vector<double>, std::vector<double>> householder_tridiagonalize(DenseMatrix& v,
                                                                                     bool accumulate) {
  const std::size_t n = v.rows();
  std::vector<double> d(n), e(n, 0.0);
  if (n == 0) return {d, e};
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);
  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  if (!accumulate) {
    for (std::size_t i = 0; i < n; ++i) d[i] = v(i, i);
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      v(n - 1, i) = v(i, i);
      v(i, i) = 1.0;
      double h = d[i + 1];
      if (h != 0.0) {
        for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
        for (std::size_t j = 0; j <= i; ++j) {
          double g = 0.0;
          for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
          for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
        }
      }
      for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = v(n - 1, j);
      v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
  }
  // Shift couplings so that e[i] joins i and i+1.
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  return {d, e};
}

}  // namespace detail

/// All eigenvalues of the Jacobi matrix with diagonal b and off-diagonal a,
/// ascending.
inline std::vector<double> eig_sym_tridiag(std::span<const double> a, std::span<const double> b) {
  if (b.empty()) return {};
  if (a.size() + 1 != b.size()) throw dimension_error("eig_sym_tridiag: need |a| = |b| - 1");
  for (double x : a)
    if (!(x > 0.0)) throw parameter_error("eig_sym_tridiag: off-diagonal entries must be positive");
  std::vector<double> d(b.begin(), b.end()), e(a.begin(), a.end());
  detail::tridiagonal_ql(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

struct EigenDecomposition {
  std::vector<double> values;         // ascending
  std::optional<DenseMatrix> vectors;  // column k belongs to values[k]
};

/// Symmetric dense eigensolver: Householder tridiagonalisation followed by
/// implicit QL.
inline EigenDecomposition eig_sym_dense(const DenseMatrix& m, bool want_vectors = false) {
  if (!m.square()) throw dimension_error("eig_sym_dense: matrix not square");
  if (m.asymmetry() > 1e-12 * std::max(1.0, m.max_abs()))
    throw parameter_error("eig_sym_dense: matrix is not symmetric");
  const std::size_t n = m.rows();
  EigenDecomposition out;
  if (n == 0) return out;
  DenseMatrix v = m;
  auto [d, e] = detail::householder_tridiagonalize(v, want_vectors);
  detail::tridiagonal_ql(d, e, want_vectors ? &v : nullptr);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = d[order[k]];
  if (want_vectors) {
    DenseMatrix sorted(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) sorted(i, k) = v(i, order[k]);
    out.vectors = std::move(sorted);
  }
  return out;
}

/// Lanczos with full reorthogonalisation. Returns the Ritz values of the
/// Krylov space generated by `start` (at most `steps` of them); stops early
/// when the space becomes invariant.
inline std::vector<double> lanczos_ritz_values(std::size_t n,
                                               const std::function<void(std::span<const double>, std::span<double>)>& apply,
                                               std::vector<double> start, std::size_t steps) {
  if (start.size() != n) throw dimension_error("lanczos: start vector has wrong size");
  double norm = std::sqrt(std::inner_product(start.begin(), start.end(), start.begin(), 0.0));
  if (norm == 0.0) throw parameter_error("lanczos: zero start vector");
  for (double& x : start) x /= norm;
  steps = std::min(steps, n);
  std::vector<std::vector<double>> basis{start};
  std::vector<double> alpha, beta;
  std::vector<double> w(n);
  for (std::size_t j = 0; j < steps; ++j) {
    apply(basis[j], w);
    double aj = std::inner_product(w.begin(), w.end(), basis[j].begin(), 0.0);
    alpha.push_back(aj);
    // Two passes of Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        double c = std::inner_product(w.begin(), w.end(), q.begin(), 0.0);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
      }
    double bj = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (j + 1 == steps || bj < 1e-10 * std::max(1.0, std::abs(aj))) break;
    beta.push_back(bj);
    for (double& x : w) x /= bj;
    basis.push_back(w);
  }
  std::vector<double> d = alpha, e = beta;
  detail::tridiagonal_ql(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

// ---------------------------------------------------------------------------
// Spectrum approximation

struct Interval {
  double lo = 0.0, hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct SpectrumApproximation {
  std::vector<double> eigenvalues;  // ascending
  std::vector<Interval> intervals;  // disjoint, ascending
  std::optional<std::vector<double>> residual_certificates;
  std::size_t truncation_radius = 0;
  std::vector<double> stability;  // Hausdorff distance between consecutive radii
  double gap_threshold = 0.0;

  double lower() const { return intervals.empty() ? 0.0 : intervals.front().lo; }
  double upper() const { return intervals.empty() ? 0.0 : intervals.back().hi; }

  /// Distance from x to the nearest interval (0 inside).
  double distance_to(double x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& iv : intervals) {
      double dd = x < iv.lo ? iv.lo - x : (x > iv.hi ? x - iv.hi : 0.0);
      best = std::min(best, dd);
    }
    return best;
  }
};

/// Default gap threshold: ten times the mean eigenvalue spacing.
inline double default_gap_threshold(std::span<const double> sorted) {
  if (sorted.size() < 2) return 0.0;
  return 10.0 * (sorted.back() - sorted.front()) / static_cast<double>(sorted.size());
}

/// Groups sorted eigenvalues into intervals, merging neighbours closer than
/// `gap` (non-strictly, so gap 0 merges exact repeats only).
inline std::vector<Interval> cluster_intervals(std::span<const double> sorted, double gap) {
  std::vector<Interval> out;
  for (double x : sorted) {
    if (!out.empty() && x - out.back().hi <= gap)
      out.back().hi = std::max(out.back().hi, x);
    else
      out.push_back({x, x});
  }
  return out;
}

/// Hausdorff distance between two finite sorted point sets.
inline double hausdorff_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  auto one_sided = [](std::span<const double> x, std::span<const double> y) {
    double worst = 0.0;
    for (double v : x) {
      auto it = std::lower_bound(y.begin(), y.end(), v);
      double best = std::numeric_limits<double>::infinity();
      if (it != y.end()) best = *it - v;
      if (it != y.begin()) best = std::min(best, v - *(it - 1));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

/// Hausdorff distance between two finite unions of closed intervals.
inline double hausdorff_distance(std::span<const Interval> a, std::span<const Interval> b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  auto dist_to = [](double x, std::span<const Interval> set) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& iv : set) best = std::min(best, x < iv.lo ? iv.lo - x : (x > iv.hi ? x - iv.hi : 0.0));
    return best;
  };
  // The farthest point of an interval from a union of intervals is an
  // endpoint or the midpoint of a gap of the other set lying inside it.
  auto one_sided = [&](std::span<const Interval> x, std::span<const Interval> y) {
    double worst = 0.0;
    for (const auto& iv : x) {
      worst = std::max({worst, dist_to(iv.lo, y), dist_to(iv.hi, y)});
      for (std::size_t k = 0; k + 1 < y.size(); ++k) {
        double mid = 0.5 * (y[k].hi + y[k + 1].lo);
        if (mid > iv.lo && mid < iv.hi) worst = std::max(worst, dist_to(mid, y));
      }
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

/// Sorted union of intervals with overlapping pieces merged.
inline std::vector<Interval> merge_intervals(std::vector<Interval> pieces, double gap = 0.0) {
  std::sort(pieces.begin(), pieces.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  std::vector<Interval> out;
  for (const auto& iv : pieces) {
    if (!out.empty() && iv.lo - out.back().hi <= gap)
      out.back().hi = std::max(out.back().hi, iv.hi);
    else
      out.push_back(iv);
  }
  return out;
}

}  // namespace spectra
