#pragma once

#include <cmath>
#include <complex>
#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectra/eigensolve.hpp"
#include "spectra/error.hpp"

namespace spectra {

using complex = std::complex<double>;
using MFunction = std::function<complex(complex)>;

struct HerglotzValue {
  complex z;
  complex value;
  bool pole = false;  // 1 + alpha F(z) vanished: z is a candidate eigenvalue
};

struct EigenvalueCertificate {
  enum class Kind { isolated_point, not_in_spectrum };
  double lambda = 0.0;
  Kind kind = Kind::isolated_point;
  double witness = 0.0;  // root residual, or |1 - m_T m_N| for not_in_spectrum
  double margin = 0.0;   // distance of lambda from the essential spectrum when known
  double x = 0.0;        // auxiliary root (x_k for solve_zk)
};

inline const char* to_string(EigenvalueCertificate::Kind k) {
  return k == EigenvalueCertificate::Kind::isolated_point ? "ISOLATED_POINT" : "NOT_IN_SPECTRUM";
}

/// sqrt(z^2 - a^2) with the cut on [-a, a] and value ~ z at infinity,
/// evaluated as sqrt(z - a) sqrt(z + a) with principal roots.
inline complex cut_sqrt(complex z, double a) { return std::sqrt(z - a) * std::sqrt(z + a); }

namespace detail {
inline void require_off_cut(complex z, double a, const char* who) {
  if (z.imag() == 0.0 && std::abs(z.real()) <= a)
    throw std::domain_error(std::string(who) + ": z lies on the cut [-" + std::to_string(a) + ", " +
                            std::to_string(a) + "]");
}
}  // namespace detail

/// Free half-line, <delta_1, (Delta_N - z)^{-1} delta_1> = (-z + sqrt(z^2-4))/2.
inline complex m_halfline_free(complex z) {
  detail::require_off_cut(z, 2.0, "m_halfline_free");
  return 0.5 * (-z + cut_sqrt(z, 2.0));
}

/// Free line, <delta_0, (Delta_Z - z)^{-1} delta_0> = -1/sqrt(z^2-4).
inline complex m_line_free(complex z) {
  detail::require_off_cut(z, 2.0, "m_line_free");
  return -1.0 / cut_sqrt(z, 2.0);
}

/// Root of the d-regular tree,
/// m_T(z) = -2(d-1) / ((d-2) z + d sqrt(z^2 - 4(d-1))).
inline complex m_tree(complex z, int d) {
  if (d < 2) throw parameter_error("m_tree: d must be >= 2");
  double edge = 2.0 * std::sqrt(d - 1.0);
  detail::require_off_cut(z, edge, "m_tree");
  return -2.0 * (d - 1.0) / ((d - 2.0) * z + static_cast<double>(d) * cut_sqrt(z, edge));
}

/// Half-line with constant coupling a: m_N(z/a)/a.
inline complex m_halfline_scaled(complex z, double a) { return m_halfline_free(z / a) / a; }

/// Line with constant coupling a: -1/sqrt(z^2 - 4a^2).
inline complex m_line_scaled(complex z, double a) { return m_line_free(z / a) / a; }

/// F_alpha = F / (1 + alpha F). A vanishing denominator is flagged, not thrown.
inline std::function<HerglotzValue(complex)> rank_one_transform(MFunction f, double alpha) {
  return [f = std::move(f), alpha](complex z) {
    complex fz = f(z);
    complex den = 1.0 + alpha * fz;
    HerglotzValue out{z, {}, false};
    if (std::abs(den) < 1e-14 * std::max(1.0, std::abs(alpha * fz))) {
      out.pole = true;
      out.value = complex(std::numeric_limits<double>::infinity(), 0.0);
    } else {
      out.value = fz / den;
    }
    return out;
  };
}

/// Real root of 1 + alpha F(x) = 0 in [lo, hi] (F real there) by bisection;
/// the interval must bracket a sign change.
inline double rank_one_pole(const MFunction& f, double alpha, double lo, double hi) {
  auto g = [&](double x) { return 1.0 + alpha * f(complex(x, 0.0)).real(); };
  double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0) == (ghi > 0)) throw std::domain_error("rank_one_pole: no sign change in bracket");
  for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Sparse radial potential on T_d

/// Bound state of the line sqrt(d-1) Delta_Z + alpha delta_0:
/// z0 = sign(alpha) sqrt(alpha^2 + 4(d-1)).
inline double sparse_z0(int d, double alpha) {
  if (alpha == 0.0) throw parameter_error("sparse_z0: alpha must be nonzero");
  return std::copysign(std::sqrt(alpha * alpha + 4.0 * (d - 1.0)), alpha);
}

/// Bound state of the half-line sqrt(d-1) Delta_N + alpha delta_1:
/// z1 = alpha + (d-1)/alpha (exists when |alpha| > sqrt(d-1)).
inline double sparse_z1(int d, double alpha) {
  if (alpha == 0.0) throw parameter_error("sparse_z1: alpha must be nonzero");
  return alpha + (d - 1.0) / alpha;
}

/// f_k(x) = x (1 + x^2 + ... + x^{2k-2}).
inline double f_k(int k, double x) {
  double x2 = x * x, s = 0.0;
  for (int j = 0; j < k; ++j) s = s * x2 + 1.0;
  return x * s;
}

/// Bound state z_k of sqrt(d-1) Delta_N + alpha delta_k (delta_k at the k-th
/// site, 1-based): the root x_k of f_k(x) = sqrt(d-1)/alpha by bisection,
/// then z_k = sqrt(d-1)(x_k + 1/x_k). Throws std::domain_error when the root
/// has |x_k| >= 1, in which case there is no bound state.
inline EigenvalueCertificate solve_zk(int k, int d, double alpha) {
  if (k < 1) throw parameter_error("solve_zk: k must be >= 1");
  if (d < 2) throw parameter_error("solve_zk: d must be >= 2");
  if (alpha == 0.0) throw parameter_error("solve_zk: alpha must be nonzero");
  const double beta = std::sqrt(d - 1.0) / alpha;
  if (std::abs(beta) >= k)
    throw std::domain_error("solve_zk: |sqrt(d-1)/alpha| >= k, no eigenvalue outside the essential spectrum");
  double lo = -1.0, hi = 1.0;
  for (int it = 0; it < 2000 && hi - lo > 0.0; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (f_k(k, mid) < beta)
      lo = mid;
    else
      hi = mid;
  }
  double x = std::abs(f_k(k, lo) - beta) <= std::abs(f_k(k, hi) - beta) ? lo : hi;
  EigenvalueCertificate c;
  c.kind = EigenvalueCertificate::Kind::isolated_point;
  c.x = x;
  c.lambda = std::sqrt(d - 1.0) * (x + 1.0 / x);
  c.witness = std::abs(f_k(k, x) - beta);
  c.margin = std::abs(c.lambda) - 2.0 * std::sqrt(d - 1.0);
  return c;
}

// ---------------------------------------------------------------------------
// Star and comb

/// Isolated eigenvalue k/sqrt(k-1) of k half-lines glued at a point, the root
/// of z + k m_N(z) = 0.
inline EigenvalueCertificate star_eigenvalue(int k) {
  if (k < 3) throw parameter_error("star_eigenvalue: k must be >= 3");
  EigenvalueCertificate c;
  c.kind = EigenvalueCertificate::Kind::isolated_point;
  c.lambda = k / std::sqrt(k - 1.0);
  c.witness = std::abs(c.lambda + static_cast<double>(k) * m_halfline_free(complex(c.lambda, 0.0)));
  c.margin = c.lambda - 2.0;
  return c;
}

struct CombEdgeCheck {
  double theta = 0.0;
  double predicted = 0.0;  // extreme eigenvalue of A_Z + 2 cos(theta) delta_0
  double observed = 0.0;   // the same extreme of the truncation
};

struct CombSweep {
  SpectrumApproximation spectrum;
  std::vector<CombEdgeCheck> edges;
};

/// Predicted spectral edge of A_Z + 2 cos(theta) delta_0 on the side of the
/// perturbation: sign(cos theta) 2 sqrt(1 + cos^2 theta), or 2 when cos theta = 0.
inline double comb_edge(double theta) {
  double c = std::cos(theta);
  if (std::abs(c) < 1e-15) return 2.0;
  return std::copysign(2.0 * std::sqrt(1.0 + c * c), c);
}

/// Union over the theta grid of the spectra of the centred free-line
/// truncation of odd size N with 2 cos(theta) added at the centre.
inline CombSweep comb_sweep(const std::vector<double>& theta_grid, std::size_t n, double gap_threshold = 0.0) {
  if (n % 2 == 0 || n < 3) throw parameter_error("comb_sweep: N must be odd and >= 3");
  CombSweep out;
  std::vector<double> all;
  std::vector<double> a(n - 1, 1.0);
  for (double theta : theta_grid) {
    std::vector<double> b(n, 0.0);
    b[n / 2] = 2.0 * std::cos(theta);
    auto eigs = eig_sym_tridiag(a, b);
    CombEdgeCheck check;
    check.theta = theta;
    check.predicted = comb_edge(theta);
    check.observed = check.predicted < 0 ? eigs.front() : eigs.back();
    out.edges.push_back(check);
    all.insert(all.end(), eigs.begin(), eigs.end());
  }
  std::sort(all.begin(), all.end());
  out.spectrum.gap_threshold = gap_threshold > 0.0 ? gap_threshold : default_gap_threshold(all);
  out.spectrum.intervals = cluster_intervals(all, out.spectrum.gap_threshold);
  out.spectrum.eigenvalues = std::move(all);
  out.spectrum.truncation_radius = n / 2;
  return out;
}

// ---------------------------------------------------------------------------
// Counterexample certificate

inline bool is_perfect_square(long long n) {
  if (n < 0) return false;
  auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
  for (long long j = std::max(0LL, r - 1); j <= r + 1; ++j)
    if (j * j == n) return true;
  return false;
}

/// Certificate that lambda = d is not in the spectrum of the d-regular tree
/// with a half-line glued to its root: the witness
/// 1 - m_T(d) m_N(d) = 1 - (d-1)(d - sqrt(d^2-4)) / (2d(d-2)) is nonzero, and
/// d lies outside [-2 sqrt(d-1), 2 sqrt(d-1)] by the recorded margin.
inline EigenvalueCertificate certify_counterexample_gap(int d) {
  if (d < 3) throw parameter_error("certify_counterexample_gap: d must be >= 3");
  long long dd = static_cast<long long>(d) * d - 4;
  if (is_perfect_square(dd))
    throw std::logic_error("certify_counterexample_gap: d^2 - 4 is a perfect square for d = " + std::to_string(d));
  EigenvalueCertificate c;
  c.kind = EigenvalueCertificate::Kind::not_in_spectrum;
  c.lambda = d;
  c.witness = std::abs(1.0 - (d - 1.0) * (d - std::sqrt(static_cast<double>(dd))) / (2.0 * d * (d - 2.0)));
  c.margin = d - 2.0 * std::sqrt(d - 1.0);
  return c;
}

}  // namespace spectra
