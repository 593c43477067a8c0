#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spectra/dense_matrix.hpp"
#include "spectra/eigensolve.hpp"
#include "spectra/error.hpp"
#include "spectra/graph.hpp"
#include "spectra/operator.hpp"

namespace spectra {

// ---------------------------------------------------------------------------
// Partitions of unity

/// PYRAMID: chi_{u,r}(v) = (r - k)/r for k = dist(u, v) <= r, centres u in G,
///   psi_{u,r} = chi_{u,r} / (eta_r(v) c_r(u)).
/// ANNULI: chi_{k,r}(v) = 1 - ||v| - k|/r for ||v| - k| < r, centres k over
///   all integers, psi_{k,r} = chi_{k,r} / sqrt(sum_k chi_{k,r}^2(v)). With
///   every integer as a centre the normaliser is the same at every vertex.
enum class PartitionKind { pyramid, annuli };

inline const char* to_string(PartitionKind k) { return k == PartitionKind::pyramid ? "pyramid" : "annuli"; }

class PartitionOfUnity {
 public:
  PartitionKind kind() const noexcept { return kind_; }
  std::size_t radius() const noexcept { return r_; }
  const RootedGraph& graph() const noexcept { return *graph_; }

  /// Vertices at distance >= 2r + 2 from the truncation boundary.
  const std::vector<vertex_id>& interior() const noexcept { return interior_; }
  bool in_interior(vertex_id v) const { return interior_mask_.at(v) != 0; }

  /// c_r^2(u) (PYRAMID; NaN where not evaluated).
  double c2(vertex_id u) const { return c2_.at(u); }
  /// eta_r^2(v) (PYRAMID) or sum_k chi_{k,r}^2(v) (ANNULI); NaN where not evaluated.
  double eta2(vertex_id v) const { return kind_ == PartitionKind::annuli ? annuli_norm2_ : eta2_.at(v); }

  /// chi_{u,r}(v) for a PYRAMID centre u, or chi_{k,r}(v) for an ANNULI level k.
  double chi(long centre, vertex_id v) const {
    const double r = static_cast<double>(r_);
    if (kind_ == PartitionKind::annuli) {
      double off = std::abs(static_cast<double>(root_dist_[v]) - static_cast<double>(centre));
      return off < r ? 1.0 - off / r : 0.0;
    }
    std::size_t k = distance_between(static_cast<vertex_id>(centre), v);
    return k <= r_ ? (r - static_cast<double>(k)) / r : 0.0;
  }

  double psi(long centre, vertex_id v) const {
    double x = chi(centre, v);
    if (x == 0.0) return 0.0;
    if (kind_ == PartitionKind::annuli) return x / std::sqrt(annuli_norm2_);
    return x / std::sqrt(eta2_.at(v) * c2_.at(static_cast<vertex_id>(centre)));
  }

  /// Range of ANNULI centres: every level k with some nonzero chi_{k,r}.
  std::pair<long, long> annuli_centres() const {
    long far = static_cast<long>(*std::max_element(root_dist_.begin(), root_dist_.end()));
    return {-static_cast<long>(r_) + 1, far + static_cast<long>(r_) - 1};
  }

  /// sum over centres of psi^2 at v.
  double partition_sum(vertex_id v) const {
    double s = 0.0;
    if (kind_ == PartitionKind::annuli) {
      auto [lo, hi] = annuli_centres();
      for (long k = lo; k <= hi; ++k) s += psi(k, v) * psi(k, v);
      return s;
    }
    BallView b = ball(*graph_, v, r_);
    for (vertex_id u : b.members) s += psi(static_cast<long>(u), v) * psi(static_cast<long>(u), v);
    return s;
  }

  friend PartitionOfUnity build_partition(const RootedGraph& g, PartitionKind kind, std::size_t r);

 private:
  std::size_t distance_between(vertex_id u, vertex_id v) const {
    if (u == v) return 0;
    BallView b = ball(*graph_, u, r_);
    auto it = b.index_of.find(v);
    return it == b.index_of.end() ? unreached : b.distance[it->second];
  }

  PartitionKind kind_ = PartitionKind::pyramid;
  std::size_t r_ = 1;
  const RootedGraph* graph_ = nullptr;
  std::vector<std::size_t> root_dist_;
  std::vector<vertex_id> interior_;
  std::vector<char> interior_mask_;
  std::vector<double> c2_, eta2_;
  double annuli_norm2_ = 0.0;
};

namespace detail {

// Reusable truncated BFS with a stamp array.
class LocalBfs {
 public:
  explicit LocalBfs(const RootedGraph& g) : g_(g), dist_(g.vertex_count(), 0), stamp_(g.vertex_count(), 0) {}

  // Vertices within `radius` of `src`, in BFS order; distance() is valid for them.
  const std::vector<vertex_id>& run(vertex_id src, std::size_t radius) {
    ++epoch_;
    order_.clear();
    order_.push_back(src);
    stamp_[src] = epoch_;
    dist_[src] = 0;
    for (std::size_t head = 0; head < order_.size(); ++head) {
      vertex_id u = order_[head];
      if (dist_[u] == radius) continue;
      for (vertex_id w : g_.neighbors(u))
        if (stamp_[w] != epoch_) {
          stamp_[w] = epoch_;
          dist_[w] = dist_[u] + 1;
          order_.push_back(w);
        }
    }
    return order_;
  }

  bool reached(vertex_id v) const { return stamp_[v] == epoch_; }
  std::size_t distance(vertex_id v) const { return dist_[v]; }

 private:
  const RootedGraph& g_;
  std::vector<std::size_t> dist_;
  std::vector<std::size_t> stamp_;
  std::vector<vertex_id> order_;
  std::size_t epoch_ = 0;
};

// Vertices within `radius` of the seed set.
inline std::vector<char> neighbourhood(const RootedGraph& g, const std::vector<vertex_id>& seeds, std::size_t radius) {
  std::vector<std::size_t> dist(g.vertex_count(), unreached);
  std::vector<vertex_id> queue(seeds.begin(), seeds.end());
  for (vertex_id s : seeds) dist[s] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    vertex_id u = queue[head];
    if (dist[u] == radius) continue;
    for (vertex_id w : g.neighbors(u))
      if (dist[w] == unreached) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }
  std::vector<char> out(g.vertex_count(), 0);
  for (vertex_id v = 0; v < g.vertex_count(); ++v) out[v] = dist[v] != unreached;
  return out;
}

}  // namespace detail

/// Partition of unity of the given kind and radius on g (which must outlive
/// it). Normalisers are
/// evaluated where the interior computation needs them. Throws when no vertex
/// lies at distance >= 2r + 2 from the truncation boundary.
inline PartitionOfUnity build_partition(const RootedGraph& g, PartitionKind kind, std::size_t r) {
  if (r < 1) throw parameter_error("build_partition: r must be >= 1");
  PartitionOfUnity p;
  p.kind_ = kind;
  p.r_ = r;
  p.graph_ = &g;
  p.root_dist_ = bfs_distances(g, g.root());
  auto bdist = multi_source_distances(g, g.boundary());
  p.interior_mask_.assign(g.vertex_count(), 0);
  for (vertex_id v = 0; v < g.vertex_count(); ++v)
    if (bdist[v] == unreached || bdist[v] >= 2 * r + 2) {
      p.interior_mask_[v] = 1;
      p.interior_.push_back(v);
    }
  if (p.interior_.empty())
    throw parameter_error("build_partition: truncation margin too small, no vertex at distance >= " +
                          std::to_string(2 * r + 2) + " from the boundary");

  const double rr = static_cast<double>(r);
  if (kind == PartitionKind::annuli) {
    for (std::size_t j = 0; j < r; ++j) {
      double x = 1.0 - static_cast<double>(j) / rr;
      p.annuli_norm2_ += (j == 0 ? 1.0 : 2.0) * x * x;
    }
    return p;
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  p.c2_.assign(g.vertex_count(), nan);
  p.eta2_.assign(g.vertex_count(), nan);
  auto need_eta = detail::neighbourhood(g, p.interior_, 2);
  auto need_c = detail::neighbourhood(g, p.interior_, r + 2);
  detail::LocalBfs bfs(g);
  for (vertex_id u = 0; u < g.vertex_count(); ++u) {
    if (!need_c[u]) continue;
    double s = 0.0;
    for (vertex_id v : bfs.run(u, r - 1)) {
      double x = (rr - static_cast<double>(bfs.distance(v))) / rr;
      s += x * x;
    }
    p.c2_[u] = s;
  }
  for (vertex_id v = 0; v < g.vertex_count(); ++v) {
    if (!need_eta[v]) continue;
    double s = 0.0;
    for (vertex_id u : bfs.run(v, r - 1)) {
      double x = (rr - static_cast<double>(bfs.distance(u))) / rr;
      s += x * x / p.c2_[u];
    }
    p.eta2_[v] = s;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Commutator C^(r) = -2 sum_u [H, psi_u]^2

/// Sparse symmetric matrix on the interior, rows indexed like interior().
struct CommutatorOperator {
  std::size_t radius = 0;
  std::vector<vertex_id> interior;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;  // (column index, value), sorted

  std::size_t dimension() const noexcept { return interior.size(); }

  double entry(std::size_t i, std::size_t j) const {
    for (auto [c, x] : rows.at(i))
      if (c == j) return x;
    return 0.0;
  }

  double diagonal(std::size_t i) const { return entry(i, i); }

  double min_abs_diagonal() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i) m = std::min(m, std::abs(diagonal(i)));
    return m;
  }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(x.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double s = 0.0;
      for (auto [c, v] : rows[i]) s += v * x[c];
      y[i] = s;
    }
  }

  DenseMatrix dense() const {
    DenseMatrix m(dimension(), dimension());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (auto [c, v] : rows[i]) m(i, c) = v;
    return m;
  }

  /// Largest |eigenvalue|, by Lanczos with full reorthogonalisation from a
  /// fixed pseudo-random start. The step count doubles until the extreme Ritz
  /// values move by less than rel_tol relatively (or the Krylov space is full).
  double norm(double rel_tol = 1e-8) const {
    const std::size_t n = dimension();
    if (n == 0) return 0.0;
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(0.5, 1.5);
    std::vector<double> start(n);
    for (double& v : start) v = unit(rng);
    auto op = [&](std::span<const double> x, std::span<double> y) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        double s = 0.0;
        for (auto [c, v] : rows[i]) s += v * x[c];
        y[i] = s;
      }
    };
    double previous = -1.0;
    for (std::size_t steps = std::min<std::size_t>(n, 32);; steps = std::min(n, 2 * steps)) {
      auto ritz = lanczos_ritz_values(n, op, start, steps);
      double top = std::max(std::abs(ritz.front()), std::abs(ritz.back()));
      if (steps == n || (previous >= 0.0 && std::abs(top - previous) <= rel_tol * top)) return top;
      previous = top;
    }
  }
};

/// C^(r) restricted to the interior of the partition. The commutator only
/// involves the off-diagonal part of H, so neither the potential nor the
/// convention enters.
inline CommutatorOperator assemble_commutator(const PartitionOfUnity& p, const SchrodingerOperator& h) {
  const RootedGraph& g = p.graph();
  if (&g != &h.graph() && !(g == h.graph()))
    throw parameter_error("assemble_commutator: partition and operator live on different graphs");
  if (p.interior().empty()) throw parameter_error("assemble_commutator: empty interior");
  const std::size_t n = g.vertex_count();
  CommutatorOperator out;
  out.radius = p.radius();
  out.interior = p.interior();
  std::vector<std::size_t> index(n, unreached);
  for (std::size_t i = 0; i < out.interior.size(); ++i) index[out.interior[i]] = i;
  std::vector<std::vector<std::pair<std::size_t, double>>> acc(out.interior.size());
  auto add = [&](std::size_t i, std::size_t j, double v) {
    for (auto& [c, x] : acc[i])
      if (c == j) {
        x += v;
        return;
      }
    acc[i].emplace_back(j, v);
  };
  auto near = detail::neighbourhood(g, out.interior, 1);  // the x in sum_x

  // For one centre, psi on the relevant vertices, then
  // C_vw += 2 sum_x (psi(v) - psi(x)) (psi(w) - psi(x)) over x ~ v, x ~ w.
  auto accumulate = [&](auto&& psi_of, const std::vector<vertex_id>& xs) {
    for (vertex_id x : xs) {
      if (!near[x]) continue;
      double px = psi_of(x);
      auto nb = g.neighbors(x);
      for (vertex_id v : nb) {
        if (index[v] == unreached) continue;
        double dv = psi_of(v) - px;
        if (dv == 0.0) continue;
        for (vertex_id w : nb) {
          if (index[w] == unreached) continue;
          double dw = psi_of(w) - px;
          if (dw != 0.0) add(index[v], index[w], 2.0 * dv * dw);
        }
      }
    }
  };

  if (p.kind() == PartitionKind::pyramid) {
    const std::size_t r = p.radius();
    const double rr = static_cast<double>(r);
    auto centres = detail::neighbourhood(g, out.interior, r + 1);
    detail::LocalBfs bfs(g);
    for (vertex_id u = 0; u < n; ++u) {
      if (!centres[u]) continue;
      const auto& reach = bfs.run(u, r + 1);
      std::vector<vertex_id> xs(reach.begin(), reach.end());
      const double cu = p.c2(u);
      auto psi_of = [&](vertex_id v) {
        if (!bfs.reached(v)) return 0.0;
        std::size_t k = bfs.distance(v);
        if (k >= r) return 0.0;
        return ((rr - static_cast<double>(k)) / rr) / std::sqrt(p.eta2(v) * cu);
      };
      accumulate(psi_of, xs);
    }
  } else {
    auto [lo, hi] = p.annuli_centres();
    std::vector<vertex_id> xs;
    for (vertex_id v = 0; v < n; ++v)
      if (near[v]) xs.push_back(v);
    for (long k = lo; k <= hi; ++k) accumulate([&](vertex_id v) { return p.psi(k, v); }, xs);
  }
  for (auto& row : acc) std::sort(row.begin(), row.end());
  out.rows = std::move(acc);
  return out;
}

/// Norm of the ANNULI commutator on the infinite d-regular tree (any radial
/// potential), via the spherical reduction: C^(r) commutes with the
/// decomposition into half-line components, on which it is pentadiagonal with
/// entries on the diagonal and at distance two. With centres over all integers
/// every block starting at level m >= 1 is the same Toeplitz operator, whose
/// norm is the maximum of its symbol c0 + 2 c2 cos(2 theta). The root block is
/// a finite-rank perturbation of it; an eigenvalue above the symbol range is
/// resolved by the finite section of size `length`.
inline double annuli_tree_norm(std::size_t d, std::size_t r, std::size_t length = 0) {
  if (d < 2) throw parameter_error("annuli_tree_norm: d must be >= 2");
  if (r < 1) throw parameter_error("annuli_tree_norm: r must be >= 1");
  if (length == 0) length = 20 * r;
  const double rr = static_cast<double>(r);
  double z = 0.0;
  for (std::size_t j = 0; j < r; ++j) {
    double x = 1.0 - static_cast<double>(j) / rr;
    z += (j == 0 ? 1.0 : 2.0) * x * x;
  }
  auto profile = [&](long offset) {  // psi_k at level l with offset = l - k
    double off = std::abs(static_cast<double>(offset));
    return off < rr ? (1.0 - off / rr) / std::sqrt(z) : 0.0;
  };
  const double a = std::sqrt(d - 1.0);

  // Far field: e_l(k) = (p(l) - p(l+1)) a depends on l - k only.
  double c0 = 0.0, c2 = 0.0;
  for (long t = -static_cast<long>(r) - 1; t <= static_cast<long>(r) + 1; ++t) {
    double e_prev = (profile(t - 1) - profile(t)) * a;
    double e_here = (profile(t) - profile(t + 1)) * a;
    c0 += 2.0 * (e_prev * e_prev + e_here * e_here);
    c2 += -2.0 * e_prev * e_here;
  }
  double best = c0 + 2.0 * std::abs(c2);

  // Root block on levels 0 .. length-1, coupling sqrt(d) from the root.
  std::vector<double> coupling(length - 1, a);
  coupling[0] = std::sqrt(static_cast<double>(d));
  DenseMatrix c(length, length);
  for (long k = -static_cast<long>(r) + 1; k <= static_cast<long>(length + r); ++k) {
    std::vector<double> e(length - 1);
    for (std::size_t l = 0; l + 1 < length; ++l)
      e[l] = (profile(static_cast<long>(l) - k) - profile(static_cast<long>(l) + 1 - k)) * coupling[l];
    // D_k has D(l+1, l) = e_l, D(l, l+1) = -e_l; accumulate 2 D^T D.
    for (std::size_t l = 0; l + 1 < length; ++l) {
      c(l, l) += 2.0 * e[l] * e[l];
      c(l + 1, l + 1) += 2.0 * e[l] * e[l];
    }
    for (std::size_t l = 1; l + 1 < length; ++l) {
      double v = -2.0 * e[l - 1] * e[l];
      c(l - 1, l + 1) += v;
      c(l + 1, l - 1) += v;
    }
  }
  auto ev = eig_sym_dense(c).values;
  return std::max({best, std::abs(ev.front()), std::abs(ev.back())});
}

/// Diagonal entry of the ANNULI commutator on the infinite d-regular tree.
/// Every vertex sees its parent and d - 1 children (the root d children) and
/// the centres run over all integers, so the entry is the same at every level:
/// 2 d sum_t (p(t) - p(t+1))^2 with p the normalised annulus profile.
inline double annuli_tree_diagonal(std::size_t d, std::size_t r) {
  if (d < 2) throw parameter_error("annuli_tree_diagonal: d must be >= 2");
  if (r < 1) throw parameter_error("annuli_tree_diagonal: r must be >= 1");
  const double rr = static_cast<double>(r);
  double z = 0.0, s = 0.0;
  for (std::size_t j = 0; j < r; ++j) {
    double x = 1.0 - static_cast<double>(j) / rr;
    z += (j == 0 ? 1.0 : 2.0) * x * x;
  }
  auto profile = [&](long t) { return std::abs(t) < static_cast<long>(r) ? 1.0 - std::abs(static_cast<double>(t)) / rr : 0.0; };
  for (long t = -static_cast<long>(r) - 1; t <= static_cast<long>(r); ++t) {
    double e = profile(t) - profile(t + 1);
    s += e * e;
  }
  return 2.0 * static_cast<double>(d) * s / z;
}

// ---------------------------------------------------------------------------
// Leindler's weighted Hardy inequality

/// Both sides of sum_n lambda_n (sum_{k<=n} a_k)^p <= p^p sum_n lambda_n^{1-p} (sum_{k>=n} lambda_k)^p a_n^p.
inline std::pair<double, double> leindler_sides(const std::vector<double>& lambda, const std::vector<double>& a,
                                                double p = 2.0) {
  if (lambda.size() != a.size()) throw dimension_error("leindler_sides: length mismatch");
  if (p < 1.0) throw parameter_error("leindler_sides: p must be >= 1");
  const std::size_t n = a.size();
  double lhs = 0.0, rhs = 0.0, prefix = 0.0;
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) tail[i] = tail[i + 1] + lambda[i];
  for (std::size_t i = 0; i < n; ++i) {
    if (lambda[i] < 0.0 || a[i] < 0.0) throw parameter_error("leindler_sides: entries must be non-negative");
    prefix += a[i];
    lhs += lambda[i] * std::pow(prefix, p);
    if (lambda[i] > 0.0) rhs += std::pow(lambda[i], 1.0 - p) * std::pow(tail[i], p) * std::pow(a[i], p);
  }
  return {lhs, std::pow(p, p) * rhs};
}

/// The p = 2 instance used for the diagonal lower bound: lambda_n = S(r - n),
/// a_n = x_r(n) = f_r(r - n) - f_r(r - n + 1) for n = 1 .. r - 1, where
/// `sphere` holds S(0..r) and `profile` holds f_r(0..r).
inline std::pair<double, double> leindler_check(const std::vector<double>& sphere, const std::vector<double>& profile,
                                                std::size_t r) {
  if (r < 2) throw parameter_error("leindler_check: r must be >= 2");
  if (sphere.size() < r + 1 || profile.size() < r + 1)
    throw dimension_error("leindler_check: need S(0..r) and f_r(0..r)");
  std::vector<double> lambda, a;
  for (std::size_t n = 1; n + 1 <= r; ++n) {
    lambda.push_back(sphere[r - n]);
    a.push_back(profile[r - n] - profile[r - n + 1]);
  }
  return leindler_sides(lambda, a, 2.0);
}

/// Pyramid profile f_r(k) = (r - k)/r on 0..r.
inline std::vector<double> pyramid_profile(std::size_t r) {
  std::vector<double> f(r + 1);
  for (std::size_t k = 0; k <= r; ++k) f[k] = static_cast<double>(r - k) / static_cast<double>(r);
  return f;
}

// ---------------------------------------------------------------------------
// Growth of generalised eigenfunctions

struct ShnolRow {
  double lambda = 0.0;
  double pointwise_ratio = 0.0;  // max_v |phi(v)| / ((|v|+1) sqrt(S(|v|))) after sup-normalisation
  double weighted_sum = 0.0;     // sum_v (phi(v) omega(v))^2, omega(v) = 1/((|v|+1) sqrt(S(|v|)))
  double sum_bound = 0.0;        // sum_k 1/(k+1)^2 over the spheres present
  bool monotone = true;          // partial sums over spheres never decrease
  bool pass = false;
};

/// Growth check for eigenvectors given on the vertices of g (sup-normalised
/// here), spheres taken around `base`.
inline std::vector<ShnolRow> shnol_growth_check(const RootedGraph& g, const std::vector<double>& eigenvalues,
                                                const std::vector<std::vector<double>>& eigenvectors, vertex_id base) {
  if (eigenvalues.size() != eigenvectors.size()) throw dimension_error("shnol_growth_check: length mismatch");
  auto dist = bfs_distances(g, base);
  std::size_t far = 0;
  for (std::size_t d : dist)
    if (d != unreached) far = std::max(far, d);
  std::vector<double> sphere(far + 1, 0.0);
  for (std::size_t d : dist)
    if (d != unreached) sphere[d] += 1.0;
  std::vector<ShnolRow> out;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const auto& phi = eigenvectors[i];
    if (phi.size() != g.vertex_count()) throw dimension_error("shnol_growth_check: eigenvector length");
    double sup = 0.0;
    for (double x : phi) sup = std::max(sup, std::abs(x));
    ShnolRow row;
    row.lambda = eigenvalues[i];
    if (sup == 0.0) {
      out.push_back(row);
      continue;
    }
    std::vector<double> per_sphere(far + 1, 0.0);
    for (vertex_id v = 0; v < g.vertex_count(); ++v) {
      if (dist[v] == unreached) continue;
      double k = static_cast<double>(dist[v]);
      double bound = (k + 1.0) * std::sqrt(sphere[dist[v]]);
      double x = std::abs(phi[v]) / sup;
      row.pointwise_ratio = std::max(row.pointwise_ratio, x / bound);
      per_sphere[dist[v]] += (x / bound) * (x / bound);
    }
    double partial = 0.0;
    for (std::size_t k = 0; k <= far; ++k) {
      double next = partial + per_sphere[k];
      if (next < partial) row.monotone = false;
      partial = next;
      row.sum_bound += 1.0 / ((k + 1.0) * (k + 1.0));
    }
    row.weighted_sum = partial;
    row.pass = row.pointwise_ratio <= 1.0 && row.monotone && row.weighted_sum <= row.sum_bound * (1.0 + 1e-12);
    out.push_back(row);
  }
  return out;
}

/// max |((H - lambda) 1)(v)| over vertices at distance >= 1 from the
/// truncation boundary (the constant function as a bounded generalised
/// eigenfunction).
inline double constant_function_residual(const SchrodingerOperator& h, double lambda) {
  const RootedGraph& g = h.graph();
  auto bdist = multi_source_distances(g, g.boundary());
  double worst = 0.0;
  for (vertex_id v = 0; v < g.vertex_count(); ++v) {
    if (bdist[v] != unreached && bdist[v] < 1) continue;
    double s = h.diagonal(v) + static_cast<double>(g.degree(v)) - lambda;
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

}  // namespace spectra
