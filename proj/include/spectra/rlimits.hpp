#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spectra/builders.hpp"
#include "spectra/canonical.hpp"
#include "spectra/dense_matrix.hpp"
#include "spectra/eigensolve.hpp"
#include "spectra/error.hpp"
#include "spectra/graph.hpp"
#include "spectra/operator.hpp"

namespace spectra {

// ---------------------------------------------------------------------------
// Paths to infinity (finite surrogate: geodesics to the truncation boundary)

enum class PathStrategy { all_distance_maximal, random_geodesic };

struct PathSampling {
  PathStrategy strategy = PathStrategy::all_distance_maximal;
  std::uint64_t seed = 0;
  std::size_t count = 0;  // random_geodesic only
};

namespace detail {

// Vertices lying on a shortest path from the root to a target, with the
// root distances. Targets are the truncation boundary, or the outermost
// sphere when the boundary is empty.
struct GeodesicDag {
  std::vector<std::size_t> dist;
  std::vector<char> on_dag;
  std::vector<char> target;

  std::vector<vertex_id> successors(const RootedGraph& g, vertex_id v) const {
    std::vector<vertex_id> out;
    for (vertex_id u : g.neighbors(v))
      if (on_dag[u] && dist[u] == dist[v] + 1) out.push_back(u);
    return out;
  }
};

inline GeodesicDag geodesic_dag(const RootedGraph& g) {
  GeodesicDag dag;
  dag.dist = bfs_distances(g, g.root());
  const std::size_t n = g.vertex_count();
  dag.target.assign(n, 0);
  dag.on_dag.assign(n, 0);
  auto boundary = g.boundary();
  if (boundary.empty()) {
    std::size_t far = *std::max_element(dag.dist.begin(), dag.dist.end());
    for (vertex_id v = 0; v < n; ++v)
      if (dag.dist[v] == far) dag.target[v] = 1;
  } else {
    for (vertex_id v : boundary) dag.target[v] = 1;
  }
  std::vector<vertex_id> order(n);
  for (vertex_id v = 0; v < n; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](vertex_id a, vertex_id b) {
    return dag.dist[a] != dag.dist[b] ? dag.dist[a] > dag.dist[b] : a < b;
  });
  for (vertex_id v : order) {
    if (dag.target[v]) {
      dag.on_dag[v] = 1;
      continue;
    }
    for (vertex_id u : g.neighbors(v))
      if (dag.on_dag[u] && dag.dist[u] == dag.dist[v] + 1) {
        dag.on_dag[v] = 1;
        break;
      }
  }
  return dag;
}

}  // namespace detail

/// Vertex sequences of strictly increasing distance from the root, each
/// running until no longer geodesic continuation towards the boundary exists.
///
/// all_distance_maximal covers every vertex that lies on some root-to-boundary
/// geodesic: paths are added, in order of (distance, id) of their first
/// uncovered vertex, until everything on the geodesic set is covered.
/// random_geodesic walks `count` times from the root, choosing uniformly among
/// geodesic continuations.
inline std::vector<std::vector<vertex_id>> sample_paths(const RootedGraph& g, const PathSampling& s = {}) {
  auto dag = detail::geodesic_dag(g);
  std::vector<std::vector<vertex_id>> paths;
  if (s.strategy == PathStrategy::random_geodesic) {
    std::mt19937_64 rng(s.seed);
    for (std::size_t i = 0; i < s.count; ++i) {
      std::vector<vertex_id> path{g.root()};
      while (true) {
        auto next = dag.successors(g, path.back());
        if (next.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, next.size() - 1);
        path.push_back(next[pick(rng)]);
      }
      paths.push_back(std::move(path));
    }
    return paths;
  }

  const std::size_t n = g.vertex_count();
  std::vector<vertex_id> order;
  for (vertex_id v = 0; v < n; ++v)
    if (dag.on_dag[v]) order.push_back(v);
  std::sort(order.begin(), order.end(), [&](vertex_id a, vertex_id b) {
    return dag.dist[a] != dag.dist[b] ? dag.dist[a] < dag.dist[b] : a < b;
  });
  std::vector<char> covered(n, 0);
  for (vertex_id v : order) {
    if (covered[v]) continue;
    std::vector<vertex_id> path{v};
    while (dag.dist[path.back()] > 0) {
      vertex_id cur = path.back();
      for (vertex_id u : g.neighbors(cur))
        if (dag.dist[u] + 1 == dag.dist[cur]) {
          path.push_back(u);
          break;
        }
    }
    std::reverse(path.begin(), path.end());
    while (true) {
      auto next = dag.successors(g, path.back());
      if (next.empty()) break;
      auto fresh = std::find_if(next.begin(), next.end(), [&](vertex_id u) { return !covered[u]; });
      path.push_back(fresh != next.end() ? *fresh : next.front());
    }
    for (vertex_id u : path) covered[u] = 1;
    paths.push_back(std::move(path));
  }
  return paths;
}

// ---------------------------------------------------------------------------
// Local patterns

/// Canonical form of a ball matrix: the entries permuted into canonical
/// order, together with the certificate used for exact comparison.
struct LocalPattern {
  std::size_t radius = 0;
  CanonicalForm form;
  DenseMatrix matrix;                // canonical order
  std::vector<std::size_t> distance;  // canonical order, ascending

  std::size_t size() const noexcept { return matrix.rows(); }
};

inline LocalPattern make_pattern(const DenseMatrix& m, const std::vector<std::size_t>& distance, std::size_t radius,
                                 double quantum) {
  LocalPattern p;
  p.radius = radius;
  p.form = canonical_form(m, distance, quantum);
  p.matrix = permute(m, p.form.order);
  p.distance.resize(distance.size());
  for (std::size_t i = 0; i < distance.size(); ++i) p.distance[i] = distance[p.form.order[i]];
  return p;
}

/// Largest |eigenvalue| of a symmetric matrix.
inline double symmetric_norm(const DenseMatrix& m) {
  if (m.rows() == 0) return 0.0;
  auto e = eig_sym_dense(m).values;
  return std::max(std::abs(e.front()), std::abs(e.back()));
}

/// Operator-norm distance of two patterns of equal size.
inline double pattern_distance(const LocalPattern& a, const LocalPattern& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  DenseMatrix d(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) d(i, j) = a.matrix(i, j) - b.matrix(i, j);
  return symmetric_norm(d);
}

// ---------------------------------------------------------------------------
// Catalogue of vertex-transitive limits

/// Homogeneous pattern families with a closed-form periodic model.
struct CatalogEntry {
  enum class Kind { none, lattice, tree } kind = Kind::none;
  std::size_t parameter = 0;  // lattice dimension, or tree degree
  double diagonal = 0.0;

  std::string name() const {
    if (kind == Kind::lattice) return parameter == 1 ? "Z" : "Z^" + std::to_string(parameter);
    if (kind == Kind::tree) return "T_" + std::to_string(parameter);
    return "";
  }
};

namespace detail {

inline DenseMatrix catalog_ball(const RootedGraph& g, std::size_t r, double diagonal, std::vector<std::size_t>& dist) {
  BallView view = ball(g, g.root(), r);
  DenseMatrix m(view.size(), view.size());
  for (std::size_t i = 0; i < view.size(); ++i) {
    m(i, i) = diagonal;
    for (vertex_id u : g.neighbors(view.members[i])) {
      auto it = view.index_of.find(u);
      if (it != view.index_of.end()) m(i, it->second) = 1.0;
    }
  }
  dist = view.distance;
  return m;
}

}  // namespace detail

/// Identifies a pattern with the ball of Z^n (n <= 3) or T_D carrying a
/// constant diagonal, by comparing canonical certificates.
inline CatalogEntry identify_catalog(const LocalPattern& p, double quantum) {
  CatalogEntry none;
  if (p.size() == 0) return none;
  const double c = p.matrix(0, 0);
  for (std::size_t i = 0; i < p.size(); ++i)
    if (std::abs(p.matrix(i, i) - c) > quantum) return none;
  std::size_t deg = 0;
  for (std::size_t j = 1; j < p.size(); ++j)
    if (p.matrix(0, j) != 0.0) ++deg;
  const std::size_t r = p.radius;
  auto matches = [&](const RootedGraph& g) {
    std::vector<std::size_t> dist;
    DenseMatrix m = detail::catalog_ball(g, r, c, dist);
    if (m.rows() != p.size()) return false;
    return canonical_form(m, dist, quantum).certificate == p.form.certificate;
  };
  if (deg % 2 == 0 && deg / 2 >= 1 && deg / 2 <= 3) {
    if (matches(build_lattice_box(deg / 2, 2 * r + 1))) return {CatalogEntry::Kind::lattice, deg / 2, c};
  }
  if (deg >= 3 && matches(build_regular_tree(deg, r))) return {CatalogEntry::Kind::tree, deg, c};
  return none;
}

/// Eigenvalues of the periodic model of a catalogue entry at a given radius.
///
/// Z^n: the discrete torus (Z/N)^n with N = 2 radius + 2 (reduced so that at
/// most 2^18 eigenvalues are produced). T_D: the radial reduction at the root,
/// i.e. the root Jacobi component of length radius + 1 together with the
/// constant tail sqrt(D-1) closed into a cycle of length 2 radius + 2.
inline std::vector<double> catalog_model_eigenvalues(const CatalogEntry& e, std::size_t radius) {
  std::vector<double> out;
  const double pi = std::acos(-1.0);
  if (e.kind == CatalogEntry::Kind::lattice) {
    std::size_t n = 2 * radius + 2;
    while (n > 4 && std::pow(static_cast<double>(n), static_cast<double>(e.parameter)) > 262144.0) n -= 2;
    std::vector<double> one(n);
    for (std::size_t j = 0; j < n; ++j) one[j] = 2.0 * std::cos(2.0 * pi * j / n);
    out = {e.diagonal};
    for (std::size_t dim = 0; dim < e.parameter; ++dim) {
      std::vector<double> next;
      next.reserve(out.size() * n);
      for (double x : out)
        for (double y : one) next.push_back(x + y);
      out = std::move(next);
    }
  } else if (e.kind == CatalogEntry::Kind::tree) {
    const double a = std::sqrt(e.parameter - 1.0);
    std::vector<double> off(radius, a), diag(radius + 1, e.diagonal);
    if (!off.empty()) off[0] = std::sqrt(static_cast<double>(e.parameter));
    out = eig_sym_tridiag(off, diag);
    std::size_t n = 2 * radius + 2;
    for (std::size_t j = 0; j < n; ++j) out.push_back(e.diagonal + 2.0 * a * std::cos(2.0 * pi * j / n));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Detection

struct RLimitCandidate {
  std::vector<LocalPattern> patterns;  // radius 1..r_max
  std::vector<vertex_id> witnesses;    // pairwise farther apart than 2 r_max
  std::size_t stability_count = 0;     // number of such witnesses
  std::size_t observations = 0;        // eligible path vertices with this pattern
  CatalogEntry catalog;
  double eps = 0.0;
  std::shared_ptr<const SchrodingerOperator> source;

  std::size_t radius() const { return patterns.empty() ? 0 : patterns.back().radius; }
  std::string hash_hex() const { return patterns.empty() ? std::string() : patterns.back().form.hash_hex(); }
};

struct RLimitOptions {
  std::size_t min_witnesses = 3;
};

struct RLimitReport {
  std::vector<RLimitCandidate> candidates;
  std::vector<std::string> diagnostics;
  std::size_t eligible = 0;
};

namespace detail {

inline LocalPattern corner_pattern(const LocalPattern& big, std::size_t r, double quantum) {
  std::size_t k = static_cast<std::size_t>(std::upper_bound(big.distance.begin(), big.distance.end(), r) -
                                           big.distance.begin());
  std::vector<std::size_t> dist(big.distance.begin(), big.distance.begin() + static_cast<std::ptrdiff_t>(k));
  return make_pattern(big.matrix.top_left(k), dist, r, quantum);
}

}  // namespace detail

/// Finite-radius R-limit candidates of h along the given paths.
///
/// Eligible vertices are path vertices at distance >= margin from the
/// truncation boundary. Their radius-r_max ball matrices are grouped by
/// canonical certificate (entries quantised to eps/10) and split further so
/// that every member lies within eps of the group's first member in operator
/// norm. A group is reported when it has at least min_witnesses members whose
/// balls of radius r_max are pairwise disjoint (distance > 2 r_max), so that a
/// single finite cluster cannot masquerade as a recurring pattern.
inline RLimitReport detect_rlimits(const SchrodingerOperator& h, const std::vector<std::vector<vertex_id>>& paths,
                                   std::size_t r_max, double eps, std::size_t margin,
                                   const RLimitOptions& opt = {}) {
  if (r_max < 1) throw parameter_error("detect_rlimits: r_max must be >= 1");
  if (!(eps > 0.0)) throw parameter_error("detect_rlimits: eps must be positive");
  if (margin < r_max) throw parameter_error("detect_rlimits: margin must be >= r_max");
  const RootedGraph& g = h.graph();
  const double quantum = eps / 10.0;
  RLimitReport report;

  auto bdist = multi_source_distances(g, g.boundary());
  auto rdist = bfs_distances(g, g.root());
  std::vector<vertex_id> eligible;
  {
    std::vector<char> seen(g.vertex_count(), 0);
    for (const auto& path : paths)
      for (vertex_id v : path) {
        if (v >= g.vertex_count()) throw parameter_error("detect_rlimits: path vertex out of range");
        if (seen[v]) continue;
        seen[v] = 1;
        if (bdist[v] == unreached || bdist[v] >= margin) eligible.push_back(v);
      }
  }
  std::sort(eligible.begin(), eligible.end(),
            [&](vertex_id a, vertex_id b) { return rdist[a] != rdist[b] ? rdist[a] < rdist[b] : a < b; });
  report.eligible = eligible.size();
  if (eligible.empty()) {
    report.diagnostics.push_back("no eligible vertices: every path vertex is within " + std::to_string(margin) +
                                 " of the truncation boundary");
    return report;
  }

  std::vector<LocalPattern> patterns;
  patterns.reserve(eligible.size());
  for (vertex_id v : eligible) {
    BallMatrix bm = ball_matrix(h, v, r_max);
    patterns.push_back(make_pattern(bm.entries, bm.view.distance, r_max, quantum));
  }

  // Exact grouping by certificate, then the operator-norm confirmation.
  std::map<std::vector<std::int64_t>, std::vector<std::size_t>> by_cert;
  for (std::size_t i = 0; i < patterns.size(); ++i) by_cert[patterns[i].form.certificate].push_back(i);
  std::vector<std::vector<std::size_t>> groups;
  for (auto& [cert, members] : by_cert) {
    std::vector<char> used(members.size(), 0);
    for (std::size_t a = 0; a < members.size(); ++a) {
      if (used[a]) continue;
      std::vector<std::size_t> group{members[a]};
      used[a] = 1;
      for (std::size_t b = a + 1; b < members.size(); ++b)
        if (!used[b] && pattern_distance(patterns[members[a]], patterns[members[b]]) < eps) {
          group.push_back(members[b]);
          used[b] = 1;
        }
      groups.push_back(std::move(group));
    }
  }
  std::sort(groups.begin(), groups.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });

  auto source = std::make_shared<const SchrodingerOperator>(h);
  for (const auto& group : groups) {
    std::vector<vertex_id> witnesses;
    std::vector<std::size_t> witness_idx;
    for (std::size_t i : group) {
      vertex_id v = eligible[i];
      BallView near = ball(g, v, 2 * r_max);
      bool apart = std::none_of(witnesses.begin(), witnesses.end(), [&](vertex_id w) { return near.contains(w); });
      if (apart) {
        witnesses.push_back(v);
        witness_idx.push_back(i);
      }
    }
    if (witnesses.size() < opt.min_witnesses) continue;

    RLimitCandidate cand;
    cand.eps = eps;
    cand.source = source;
    cand.observations = group.size();
    cand.witnesses = witnesses;
    cand.stability_count = witnesses.size();
    const LocalPattern& top = patterns[witness_idx.front()];
    for (std::size_t r = 1; r < r_max; ++r) cand.patterns.push_back(detail::corner_pattern(top, r, quantum));
    cand.patterns.push_back(top);

    // Corner coherence: each witness's r-corner re-canonicalises to the
    // representative's pattern at r.
    std::string problem;
    for (std::size_t k = 1; k < witness_idx.size() && problem.empty(); ++k) {
      const LocalPattern& other = patterns[witness_idx[k]];
      for (std::size_t r = 1; r < r_max; ++r)
        if (detail::corner_pattern(other, r, quantum).form.certificate != cand.patterns[r - 1].form.certificate) {
          problem = "witness " + std::to_string(witnesses[k]) + " breaks corner coherence at radius " +
                    std::to_string(r);
          break;
        }
    }
    if (!problem.empty()) {
      report.diagnostics.push_back("candidate " + top.form.hash_hex() + " rejected: " + problem);
      continue;
    }
    cand.catalog = identify_catalog(top, quantum);
    report.candidates.push_back(std::move(cand));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Spectra of candidates

/// Largest radius rho in [r_max, max_radius] at which all witness balls are
/// still pairwise isomorphic, do not reach the truncation boundary, and have
/// at most max_vertices vertices.
inline std::size_t consistency_radius(const RLimitCandidate& c, std::size_t max_radius,
                                      std::size_t max_vertices = 400) {
  const SchrodingerOperator& h = *c.source;
  const RootedGraph& g = h.graph();
  const double quantum = c.eps / 10.0;
  std::vector<char> is_boundary(g.vertex_count(), 0);
  for (vertex_id b : g.boundary()) is_boundary[b] = 1;
  std::size_t rho = c.radius();
  for (std::size_t r = c.radius() + 1; r <= max_radius; ++r) {
    std::optional<std::vector<std::int64_t>> cert;
    bool ok = true;
    for (vertex_id w : c.witnesses) {
      BallMatrix bm = ball_matrix(h, w, r);
      bool touches = std::any_of(bm.view.members.begin(), bm.view.members.end(),
                                 [&](vertex_id v) { return is_boundary[v] != 0; });
      if (bm.view.size() > max_vertices || touches) {
        ok = false;
        break;
      }
      auto form = canonical_form(bm.entries, bm.view.distance, quantum);
      if (!cert) {
        cert = form.certificate;
      } else if (*cert != form.certificate) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    rho = r;
  }
  return rho;
}

struct CandidateModel {
  std::string model;  // catalogue name, or "ball"
  std::size_t radius = 0;
  std::vector<double> eigenvalues;
};

/// Finite model of one candidate: the periodic catalogue model for
/// vertex-transitive patterns, otherwise the first witness's ball at
/// min(model_radius, consistency radius).
inline CandidateModel candidate_model(const RLimitCandidate& c, std::size_t model_radius) {
  if (c.patterns.empty() || !c.source) throw parameter_error("candidate_model: empty candidate");
  CandidateModel m;
  if (c.catalog.kind != CatalogEntry::Kind::none) {
    m.model = c.catalog.name();
    m.radius = model_radius;
    m.eigenvalues = catalog_model_eigenvalues(c.catalog, model_radius);
    return m;
  }
  m.model = "ball";
  m.radius = consistency_radius(c, std::max(model_radius, c.radius()));
  if (m.radius > model_radius) m.radius = std::max(model_radius, c.radius());
  BallMatrix bm = ball_matrix(*c.source, c.witnesses.front(), m.radius);
  m.eigenvalues = eig_sym_dense(bm.entries).values;
  return m;
}

namespace detail {

inline std::string coherence_problem(const RLimitCandidate& c) {
  const double quantum = c.eps / 10.0;
  for (std::size_t i = 0; i < c.patterns.size(); ++i)
    if (c.patterns[i].radius != i + 1) return "pattern radii are not 1..r_max";
  for (std::size_t i = 0; i + 1 < c.patterns.size(); ++i) {
    auto corner = corner_pattern(c.patterns[i + 1], c.patterns[i].radius, quantum);
    if (corner.form.certificate != c.patterns[i].form.certificate)
      return "pattern at radius " + std::to_string(i + 2) + " does not contain the radius-" + std::to_string(i + 1) +
             " pattern as its corner";
  }
  return {};
}

}  // namespace detail

/// Union of the model spectra of the candidates, clustered per candidate with
/// `gap_threshold` and merged. Candidates whose pattern family is not coherent
/// are skipped and reported through `diagnostics`.
inline SpectrumApproximation union_spectrum(const std::vector<RLimitCandidate>& candidates, std::size_t model_radius,
                                            double gap_threshold, std::vector<std::string>* diagnostics = nullptr,
                                            std::vector<CandidateModel>* models = nullptr) {
  if (candidates.empty()) throw parameter_error("union_spectrum: no candidates");
  SpectrumApproximation out;
  out.gap_threshold = gap_threshold;
  out.truncation_radius = model_radius;
  std::vector<Interval> pieces;
  for (const auto& c : candidates) {
    std::string problem = detail::coherence_problem(c);
    if (!problem.empty()) {
      if (diagnostics) diagnostics->push_back("candidate " + c.hash_hex() + " rejected: " + problem);
      continue;
    }
    CandidateModel m = candidate_model(c, model_radius);
    auto iv = cluster_intervals(m.eigenvalues, gap_threshold);
    pieces.insert(pieces.end(), iv.begin(), iv.end());
    out.eigenvalues.insert(out.eigenvalues.end(), m.eigenvalues.begin(), m.eigenvalues.end());
    if (models) models->push_back(std::move(m));
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  out.intervals = merge_intervals(std::move(pieces), 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Transplanted eigenvectors

struct TransplantCheck {
  vertex_id witness = 0;
  double lambda = 0.0;
  double residual = 0.0;       // ||(H - lambda) psi|| / ||psi|| in the original graph
  double boundary_term = 0.0;  // part of the residual carried outside the witness ball
  double bound = 0.0;          // 3 eps + boundary_term
};

/// Eigenvectors of the first witness's ball matrix at `radius`, carried over
/// to every witness ball through the canonical labelling and tested as
/// approximate eigenvectors of the original operator.
inline std::vector<TransplantCheck> transplant_residuals(const RLimitCandidate& c, std::size_t radius) {
  if (!c.source || c.witnesses.empty()) throw parameter_error("transplant_residuals: empty candidate");
  const SchrodingerOperator& h = *c.source;
  const double quantum = c.eps / 10.0;
  BallMatrix rep = ball_matrix(h, c.witnesses.front(), radius);
  LocalPattern rep_pattern = make_pattern(rep.entries, rep.view.distance, radius, quantum);
  auto dec = eig_sym_dense(rep_pattern.matrix, true);
  std::vector<TransplantCheck> out;
  for (vertex_id w : c.witnesses) {
    BallMatrix bm = ball_matrix(h, w, radius);
    LocalPattern pw = make_pattern(bm.entries, bm.view.distance, radius, quantum);
    if (pw.form.certificate != rep_pattern.form.certificate)
      throw parameter_error("transplant_residuals: witness balls differ at radius " + std::to_string(radius));
    // Residual split into the part inside the ball (the witness's own ball
    // matrix) and the coupling across its outer sphere.
    std::map<vertex_id, std::vector<std::size_t>> rim;  // outside vertex -> adjacent ball positions
    std::vector<std::size_t> pos(pw.size());
    for (std::size_t p = 0; p < pw.size(); ++p) pos[pw.form.order[p]] = p;
    for (std::size_t i = 0; i < bm.view.size(); ++i)
      for (vertex_id u : h.graph().neighbors(bm.view.members[i]))
        if (!bm.view.contains(u)) rim[u].push_back(pos[i]);
    for (std::size_t k = 0; k < dec.values.size(); ++k) {
      const double lambda = dec.values[k];
      double inside = 0.0, outside = 0.0;
      for (std::size_t p = 0; p < pw.size(); ++p) {
        double s = -lambda * (*dec.vectors)(p, k);
        for (std::size_t q = 0; q < pw.size(); ++q) s += pw.matrix(p, q) * (*dec.vectors)(q, k);
        inside += s * s;
      }
      for (const auto& [u, ps] : rim) {
        double s = 0.0;
        for (std::size_t p : ps) s += (*dec.vectors)(p, k);
        outside += s * s;
      }
      TransplantCheck t;
      t.witness = w;
      t.lambda = lambda;
      t.residual = std::sqrt(inside + outside);  // eigenvectors are unit vectors
      t.boundary_term = std::sqrt(outside);
      t.bound = 3.0 * c.eps + t.boundary_term;
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace spectra
