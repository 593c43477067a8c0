#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectra/eigensolve.hpp"
#include "spectra/error.hpp"
#include "spectra/graph.hpp"
#include "spectra/operator.hpp"

namespace spectra {

/// Index -> value rule for a coefficient sequence (0-based):
///   constant:       c
///   explicit:       values[i]; undefined past the end
///   eventually:     values[i], then c past the end
///   periodic:       values[i mod p]
///   sparse-squares: alpha when i = k^2 for some k >= 1, else 0
///   tree:           sqrt(d) at i = 0, sqrt(d-1) after (radial couplings of T_d)
struct SequenceRule {
  std::string rule = "constant";
  double c = 0.0;
  double alpha = 0.0;
  int d = 0;
  std::vector<double> values;

  static SequenceRule constant(double c) { return {"constant", c, 0.0, 0, {}}; }
  static SequenceRule explicit_values(std::vector<double> v) { return {"explicit", 0.0, 0.0, 0, std::move(v)}; }
  static SequenceRule eventually(std::vector<double> v, double c) { return {"eventually", c, 0.0, 0, std::move(v)}; }
  static SequenceRule periodic(std::vector<double> v) { return {"periodic", 0.0, 0.0, 0, std::move(v)}; }
  static SequenceRule sparse_squares(double alpha) { return {"sparse-squares", 0.0, alpha, 0, {}}; }
  static SequenceRule tree(int d) { return {"tree", 0.0, 0.0, d, {}}; }

  /// Length of the sequence when it is finite.
  std::optional<std::size_t> length() const {
    if (rule == "explicit") return values.size();
    return std::nullopt;
  }

  double operator()(std::size_t i) const {
    if (rule == "constant") return c;
    if (rule == "explicit") {
      if (i >= values.size()) throw std::out_of_range("SequenceRule: index past explicit sequence");
      return values[i];
    }
    if (rule == "eventually") return i < values.size() ? values[i] : c;
    if (rule == "periodic") {
      if (values.empty()) throw parameter_error("SequenceRule: empty period");
      return values[i % values.size()];
    }
    if (rule == "sparse-squares") return is_positive_square(i) ? alpha : 0.0;
    if (rule == "tree") {
      if (d < 2) throw parameter_error("SequenceRule: tree rule needs d >= 2");
      return i == 0 ? std::sqrt(static_cast<double>(d)) : std::sqrt(d - 1.0);
    }
    throw parameter_error("unknown sequence rule '" + rule + "'");
  }
};

/// Half-line Jacobi matrix with off-diagonal a (a_i joins sites i and i+1)
/// and diagonal b, both given by rules and shifted by `offset`. Finite when
/// `length` is set.
class JacobiMatrix {
 public:
  JacobiMatrix(SequenceRule a, SequenceRule b, std::optional<std::size_t> length = std::nullopt)
      : a_(std::move(a)), b_(std::move(b)), length_(length) {
    if (!length_) {
      auto la = a_.length(), lb = b_.length();
      if (lb) length_ = *lb;
      if (la) length_ = std::min(length_.value_or(*la + 1), *la + 1);
    }
  }

  /// Finite Jacobi matrix from explicit coefficient vectors (|a| = |b| - 1).
  static JacobiMatrix finite(std::vector<double> a, std::vector<double> b) {
    if (a.size() + 1 != b.size()) throw dimension_error("JacobiMatrix::finite: need |a| = |b| - 1");
    std::size_t n = b.size();
    return JacobiMatrix(SequenceRule::explicit_values(std::move(a)), SequenceRule::explicit_values(std::move(b)), n);
  }

  double a(std::size_t i) const { return a_(i + offset_); }
  double b(std::size_t i) const { return b_(i + offset_); }

  std::optional<std::size_t> length() const { return length_; }
  std::size_t offset() const { return offset_; }
  const SequenceRule& a_rule() const { return a_; }
  const SequenceRule& b_rule() const { return b_; }

  /// k-th tail: (A^[k])_{i,j} = A_{i+k,j+k}.
  JacobiMatrix tail(std::size_t k) const {
    if (length_ && k >= *length_) throw std::out_of_range("JacobiMatrix::tail: k out of range");
    JacobiMatrix t = *this;
    t.offset_ += k;
    if (t.length_) *t.length_ -= k;
    return t;
  }

  /// Coefficients of the leading n x n section.
  std::pair<std::vector<double>, std::vector<double>> section(std::size_t n) const {
    if (length_ && n > *length_) throw std::out_of_range("JacobiMatrix::section: beyond finite length");
    std::vector<double> a(n > 0 ? n - 1 : 0), b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = this->b(i);
    for (std::size_t i = 0; i + 1 < n; ++i) a[i] = this->a(i);
    return {a, b};
  }

  std::vector<double> eigenvalues(std::size_t n) const {
    auto [a, b] = section(n);
    return eig_sym_tridiag(a, b);
  }

  /// sup_i (|a_i| + |b_i| + 1/a_i) over the first n sites.
  double boundedness(std::size_t n) const {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) m = std::max(m, std::abs(a(i)) + std::abs(b(i)) + 1.0 / a(i));
    return m;
  }

 private:
  SequenceRule a_, b_;
  std::optional<std::size_t> length_;
  std::size_t offset_ = 0;
};

/// <delta_i, (J - z)^{-1} delta_i> for the finite Jacobi matrix (a, b) by
/// tridiagonal elimination (no eigensolver).
inline std::complex<double> tridiagonal_resolvent(const std::vector<double>& a, const std::vector<double>& b,
                                                  std::complex<double> z, std::size_t i) {
  const std::size_t n = b.size();
  if (a.size() + 1 != n) throw dimension_error("tridiagonal_resolvent: need |a| = |b| - 1");
  if (i >= n) throw std::out_of_range("tridiagonal_resolvent: site out of range");
  // Continued fractions from both ends meet at site i:
  // G_ii = 1 / (b_i - z - a_{i-1}^2 g_left - a_i^2 g_right).
  std::complex<double> left = 0.0, right = 0.0;
  for (std::size_t j = 0; j < i; ++j) {
    std::complex<double> prev = j == 0 ? 0.0 : a[j - 1] * a[j - 1] * left;
    left = 1.0 / (b[j] - z - prev);
  }
  for (std::size_t j = n; j-- > i + 1;) {
    std::complex<double> next = j + 1 == n ? 0.0 : a[j] * a[j] * right;
    right = 1.0 / (b[j] - z - next);
  }
  std::complex<double> den = b[i] - z;
  if (i > 0) den -= a[i - 1] * a[i - 1] * left;
  if (i + 1 < n) den -= a[i] * a[i] * right;
  return 1.0 / den;
}

// ---------------------------------------------------------------------------
// Right limits and strong limits of tails

struct JacobiWindow {
  std::vector<double> a;  // couplings inside the window
  std::vector<double> b;  // diagonal entries
  std::size_t occurrences = 0;
  std::size_t first_index = 0;  // first sampled position (centre or tail offset)
};

struct LimitSampling {
  std::size_t first = 64;    // first sampled position
  std::size_t count = 4096;  // number of positions
  std::size_t min_recurrence = 3;
};

namespace detail {

inline JacobiWindow window_at(const JacobiMatrix& j, std::size_t start, std::size_t len) {
  JacobiWindow w;
  w.b.resize(len);
  w.a.resize(len > 0 ? len - 1 : 0);
  for (std::size_t i = 0; i < len; ++i) w.b[i] = j.b(start + i);
  for (std::size_t i = 0; i + 1 < len; ++i) w.a[i] = j.a(start + i);
  return w;
}

inline double window_distance(const JacobiWindow& x, const JacobiWindow& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.b.size(); ++i) m = std::max(m, std::abs(x.b[i] - y.b[i]));
  for (std::size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
  return m;
}

// Greedy clustering in sampling order; returns clusters with >= min_recurrence members.
inline std::vector<JacobiWindow> cluster_windows(std::vector<JacobiWindow> samples, double eps,
                                                 std::size_t min_recurrence) {
  std::vector<JacobiWindow> reps;
  for (auto& s : samples) {
    bool placed = false;
    for (auto& r : reps)
      if (window_distance(r, s) < eps) {
        ++r.occurrences;
        placed = true;
        break;
      }
    if (!placed) {
      s.occurrences = 1;
      reps.push_back(std::move(s));
    }
  }
  std::vector<JacobiWindow> out;
  for (auto& r : reps)
    if (r.occurrences >= min_recurrence) out.push_back(std::move(r));
  return out;
}

// x shifted by s sites agrees with y on the overlap, and both windows carry
// the same multiset of entries (within eps).
inline bool shift_equivalent(const JacobiWindow& x, const JacobiWindow& y, double eps) {
  const long n = static_cast<long>(x.b.size());
  auto same_multiset = [eps](std::vector<double> p, std::vector<double> q) {
    std::sort(p.begin(), p.end());
    std::sort(q.begin(), q.end());
    for (std::size_t i = 0; i < p.size(); ++i)
      if (std::abs(p[i] - q[i]) >= eps) return false;
    return true;
  };
  if (!same_multiset(x.b, y.b) || !same_multiset(x.a, y.a)) return false;
  for (long s = -(n - 1); s <= n - 1; ++s) {
    bool ok = true;
    for (long i = 0; i < n && ok; ++i) {
      long k = i + s;
      if (k < 0 || k >= n) continue;
      if (std::abs(x.b[i] - y.b[k]) >= eps) ok = false;
      if (ok && i + 1 < n && k + 1 < n && std::abs(x.a[i] - y.a[k]) >= eps) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace detail

/// Two-sided right-limit patterns: windows of `window` sites centred at the
/// sampled positions, clustered within eps, kept when they recur, and merged
/// when they are translates of each other.
inline std::vector<JacobiWindow> jacobi_right_limits(const JacobiMatrix& j, std::size_t window, double eps,
                                                     const LimitSampling& sampling = {}) {
  if (window < 1) throw parameter_error("jacobi_right_limits: window must be positive");
  std::size_t half = window / 2;
  std::size_t first = std::max(sampling.first, half);
  std::vector<JacobiWindow> samples;
  for (std::size_t c = first; c < first + sampling.count; ++c) {
    if (j.length() && c - half + window > *j.length()) break;
    auto w = detail::window_at(j, c - half, window);
    w.first_index = c;
    samples.push_back(std::move(w));
  }
  auto reps = detail::cluster_windows(std::move(samples), eps, sampling.min_recurrence);

  // Union-find over shift equivalence.
  std::vector<std::size_t> parent(reps.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t x = 0; x < reps.size(); ++x)
    for (std::size_t y = x + 1; y < reps.size(); ++y)
      if (detail::shift_equivalent(reps[x], reps[y], eps)) parent[find(y)] = find(x);
  std::vector<JacobiWindow> out;
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t x = 0; x < reps.size(); ++x) {
    std::size_t root = find(x);
    auto it = slot.find(root);
    if (it == slot.end()) {
      slot.emplace(root, out.size());
      out.push_back(reps[x]);
    } else {
      out[it->second].occurrences += reps[x].occurrences;
    }
  }
  return out;
}

/// One-sided strong limits of tails: prefixes of length `depth` of the tails
/// J^[k] at the sampled offsets, clustered entrywise within eps.
inline std::vector<JacobiWindow> strong_limits_of_tails(const JacobiMatrix& j, std::size_t depth, double eps,
                                                        const LimitSampling& sampling = {}) {
  if (depth < 1) throw parameter_error("strong_limits_of_tails: depth must be positive");
  std::vector<JacobiWindow> samples;
  for (std::size_t k = sampling.first; k < sampling.first + sampling.count; ++k) {
    if (j.length() && k + depth > *j.length()) break;
    auto w = detail::window_at(j, k, depth);
    w.first_index = k;
    samples.push_back(std::move(w));
  }
  return detail::cluster_windows(std::move(samples), eps, sampling.min_recurrence);
}

/// True when every full-width sub-window of the one-sided limit is a
/// translate of some right-limit pattern (restriction to the half-line).
inline bool is_half_line_restriction(const JacobiWindow& strong, const std::vector<JacobiWindow>& right_limits,
                                     double eps) {
  if (right_limits.empty()) return false;
  std::size_t w = right_limits.front().b.size();
  if (strong.b.size() < w) return false;
  for (std::size_t start = 0; start + w <= strong.b.size(); ++start) {
    JacobiWindow sub;
    sub.b.assign(strong.b.begin() + start, strong.b.begin() + start + w);
    sub.a.assign(strong.a.begin() + start, strong.a.begin() + start + w - 1);
    bool found = false;
    for (const auto& r : right_limits)
      if (detail::shift_equivalent(sub, r, eps)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Spherical decomposition

struct SphericalComponent {
  std::size_t start_level = 0;  // the component lives on levels start_level..depth
  std::size_t multiplicity = 0;
  std::vector<double> a, b;  // Jacobi coefficients, |a| = |b| - 1

  std::vector<double> eigenvalues() const { return eig_sym_tridiag(a, b); }
};

struct SphericalDecomposition {
  std::vector<SphericalComponent> components;
  std::size_t total_dimension = 0;
  std::vector<std::size_t> sphere_sizes;
  std::vector<std::size_t> branching;  // children per vertex at each level < depth

  /// Multiset union of component spectra with multiplicities, ascending.
  std::vector<double> eigenvalues() const {
    std::vector<double> out;
    for (const auto& c : components) {
      auto e = c.eigenvalues();
      for (std::size_t m = 0; m < c.multiplicity; ++m) out.insert(out.end(), e.begin(), e.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// Decomposes H restricted to B_depth(root) of a spherically homogeneous tree
/// into Jacobi components. The component starting at level m has couplings
/// sqrt(kappa_j) and multiplicity s_m - s_{m-1} (1 for m = 0).
inline SphericalDecomposition spherical_decompose(const SchrodingerOperator& h, std::size_t depth) {
  const RootedGraph& g = h.graph();
  BallView view = ball(g, g.root(), depth);
  std::size_t ball_edges = 0;
  for (vertex_id v : view.members)
    for (vertex_id u : g.neighbors(v))
      if (view.contains(u)) ++ball_edges;
  ball_edges /= 2;
  if (ball_edges + 1 != view.size()) throw parameter_error("spherical_decompose: ball around the root is not a tree");

  std::vector<std::vector<vertex_id>> spheres(depth + 1);
  for (std::size_t i = 0; i < view.size(); ++i) spheres[view.distance[i]].push_back(view.members[i]);
  while (!spheres.empty() && spheres.back().empty()) spheres.pop_back();
  const std::size_t top = spheres.size() - 1;

  SphericalDecomposition out;
  std::vector<double> diag(top + 1);
  for (std::size_t lvl = 0; lvl <= top; ++lvl) {
    out.sphere_sizes.push_back(spheres[lvl].size());
    double q0 = h.diagonal(spheres[lvl].front());
    for (vertex_id v : spheres[lvl])
      if (std::abs(h.diagonal(v) - q0) > 1e-12)
        throw parameter_error("spherical_decompose: potential not radial on sphere " + std::to_string(lvl) +
                              " (vertices " + std::to_string(spheres[lvl].front()) + " and " + std::to_string(v) +
                              ")");
    diag[lvl] = q0;
    if (lvl < top) {
      std::size_t kids = spheres[lvl + 1].size() / spheres[lvl].size();
      if (kids * spheres[lvl].size() != spheres[lvl + 1].size())
        throw parameter_error("spherical_decompose: tree not spherically homogeneous at level " + std::to_string(lvl));
      for (vertex_id v : spheres[lvl]) {
        std::size_t c = 0;
        for (vertex_id u : g.neighbors(v))
          if (view.contains(u) && view.distance[view.index_of.at(u)] == lvl + 1) ++c;
        if (c != kids)
          throw parameter_error("spherical_decompose: tree not spherically homogeneous at level " +
                                std::to_string(lvl));
      }
      out.branching.push_back(kids);
    }
  }

  for (std::size_t m = 0; m <= top; ++m) {
    std::size_t mult = m == 0 ? 1 : out.sphere_sizes[m] - out.sphere_sizes[m - 1];
    if (mult == 0) continue;
    SphericalComponent c;
    c.start_level = m;
    c.multiplicity = mult;
    for (std::size_t lvl = m; lvl <= top; ++lvl) {
      c.b.push_back(diag[lvl]);
      if (lvl < top) c.a.push_back(std::sqrt(static_cast<double>(out.branching[lvl])));
    }
    out.total_dimension += mult * c.b.size();
    out.components.push_back(std::move(c));
  }
  return out;
}

}  // namespace spectra
