#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spectra/dense_matrix.hpp"
#include "spectra/error.hpp"
#include "spectra/graph.hpp"

namespace spectra {

/// ADJACENCY: (Delta psi)(v) = sum_{u~v} psi(u).
/// COMBINATORIAL: (Delta psi)(v) = sum_{u~v} (psi(u) - psi(v)).
enum class Convention { adjacency, combinatorial };

inline const char* to_string(Convention c) { return c == Convention::adjacency ? "adj" : "lap"; }

inline Convention parse_convention(const std::string& s) {
  if (s == "adj" || s == "adjacency") return Convention::adjacency;
  if (s == "lap" || s == "combinatorial") return Convention::combinatorial;
  throw parameter_error("unknown convention '" + s + "'");
}

/// Per-vertex vector with its Euclidean norm cached.
template <class T = double>
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::vector<T> values) : values_(std::move(values)) { refresh(); }

  static StateVector delta(std::size_t n, vertex_id v) {
    std::vector<T> x(n, T{});
    x.at(v) = T{1};
    return StateVector(std::move(x));
  }

  static StateVector constant(std::size_t n, T c) { return StateVector(std::vector<T>(n, c)); }

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<T>& values() const noexcept { return values_; }
  T operator[](std::size_t i) const { return values_[i]; }
  double norm() const noexcept { return norm_; }

 private:
  void refresh() {
    double s = 0.0;
    for (const T& x : values_) s += std::norm(x);
    norm_ = std::sqrt(s);
  }

  std::vector<T> values_;
  double norm_ = 0.0;
};

/// H restricted to a ball, indexed in coherent BFS order.
struct BallMatrix {
  BallView view;
  DenseMatrix entries;
};

/// H = Delta + Q on a finite graph. Immutable; the graph is shared.
class SchrodingerOperator {
 public:
  SchrodingerOperator(std::shared_ptr<const RootedGraph> graph, std::vector<double> potential,
                      Convention convention = Convention::adjacency)
      : graph_(std::move(graph)), potential_(std::move(potential)), convention_(convention) {
    if (!graph_) throw parameter_error("SchrodingerOperator: null graph");
    if (potential_.empty()) potential_.assign(graph_->vertex_count(), 0.0);
    if (potential_.size() != graph_->vertex_count())
      throw dimension_error("SchrodingerOperator: potential length differs from vertex count");
  }

  /// Free operator (Q = 0).
  static SchrodingerOperator free(std::shared_ptr<const RootedGraph> graph,
                                  Convention convention = Convention::adjacency) {
    return SchrodingerOperator(std::move(graph), {}, convention);
  }

  const RootedGraph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const RootedGraph>& graph_ptr() const noexcept { return graph_; }
  const std::vector<double>& potential() const noexcept { return potential_; }
  Convention convention() const noexcept { return convention_; }
  std::size_t dimension() const noexcept { return potential_.size(); }

  /// Diagonal matrix element <delta_v, H delta_v>.
  double diagonal(vertex_id v) const {
    double q = potential_.at(v);
    return convention_ == Convention::combinatorial ? q - static_cast<double>(graph_->degree(v)) : q;
  }

  /// Matrix-free application, O(edges).
  template <class T>
  void apply(std::span<const T> in, std::span<T> out) const {
    if (in.size() != dimension() || out.size() != dimension())
      throw dimension_error("SchrodingerOperator::apply: dimension mismatch");
    for (vertex_id v = 0; v < dimension(); ++v) {
      T s = diagonal(v) * in[v];
      for (vertex_id u : graph_->neighbors(v)) s += in[u];
      out[v] = s;
    }
  }

  template <class T>
  StateVector<T> apply(const StateVector<T>& psi) const {
    std::vector<T> out(dimension());
    apply<T>(std::span<const T>(psi.values()), std::span<T>(out));
    return StateVector<T>(std::move(out));
  }

  /// Gershgorin bound on the operator norm: max_v |diag(v)| + deg(v).
  double gershgorin_bound() const {
    double m = 0.0;
    for (vertex_id v = 0; v < dimension(); ++v)
      m = std::max(m, std::abs(diagonal(v)) + static_cast<double>(graph_->degree(v)));
    return m;
  }

  /// Dense matrix of H restricted to the vertex list (plain restriction).
  DenseMatrix restrict_to(std::span<const vertex_id> members,
                          const std::unordered_map<vertex_id, std::size_t>& index_of) const {
    const std::size_t n = members.size();
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      vertex_id v = members[i];
      m(i, i) = diagonal(v);
      for (vertex_id u : graph_->neighbors(v)) {
        auto it = index_of.find(u);
        if (it != index_of.end()) m(i, it->second) = 1.0;
      }
    }
    return m;
  }

 private:
  std::shared_ptr<const RootedGraph> graph_;
  std::vector<double> potential_;
  Convention convention_;
};

/// Ball matrix M^(v)_r: H restricted to B_r(v) in coherent BFS order. The
/// diagonal keeps the full-graph degree term under COMBINATORIAL.
inline BallMatrix ball_matrix(const SchrodingerOperator& h, vertex_id v, std::size_t r) {
  BallMatrix bm;
  bm.view = ball(h.graph(), v, r);
  bm.entries = h.restrict_to(bm.view.members, bm.view.index_of);
  return bm;
}

/// ||(H - lambda) psi|| / ||psi||.
template <class T>
double weyl_residual(const SchrodingerOperator& h, const StateVector<T>& psi, double lambda) {
  if (psi.size() != h.dimension()) throw dimension_error("weyl_residual: dimension mismatch");
  if (psi.norm() == 0.0) throw parameter_error("weyl_residual: zero vector");
  std::vector<T> out(h.dimension());
  h.apply<T>(std::span<const T>(psi.values()), std::span<T>(out));
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += std::norm(out[i] - lambda * psi[i]);
  return std::sqrt(s) / psi.norm();
}

/// Extends a vector on the members of a ball by zero to the whole graph.
template <class T>
StateVector<T> extend_by_zero(const BallView& view, std::span<const T> local, std::size_t n) {
  if (local.size() != view.size()) throw dimension_error("extend_by_zero: dimension mismatch");
  std::vector<T> x(n, T{});
  for (std::size_t i = 0; i < local.size(); ++i) x[view.members[i]] = local[i];
  return StateVector<T>(std::move(x));
}

// ---------------------------------------------------------------------------
// Potential rules

/// Named potential rules, evaluated once against a graph:
///   constant:       Q(v) = c
///   sparse-squares: Q(v) = alpha when |v| = k^2 for some k >= 1, else 0
///   radial:         Q(v) = values[|v|] (0 past the end)
///   explicit:       Q(v) = values[v]
struct PotentialRule {
  std::string rule = "constant";
  double alpha = 0.0;
  double c = 0.0;
  std::vector<double> values;

  static PotentialRule constant(double c) { return {"constant", 0.0, c, {}}; }
  static PotentialRule sparse_squares(double alpha) { return {"sparse-squares", alpha, 0.0, {}}; }
  static PotentialRule radial(std::vector<double> q) { return {"radial", 0.0, 0.0, std::move(q)}; }
  static PotentialRule explicit_values(std::vector<double> q) { return {"explicit", 0.0, 0.0, std::move(q)}; }
};

inline bool is_positive_square(std::size_t n) {
  if (n == 0) return false;
  auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  for (std::size_t j = (k > 0 ? k - 1 : 0); j <= k + 1; ++j)
    if (j * j == n) return true;
  return false;
}

inline std::vector<double> evaluate_potential(const PotentialRule& rule, const RootedGraph& g) {
  const std::size_t n = g.vertex_count();
  if (rule.rule == "constant") return std::vector<double>(n, rule.c);
  if (rule.rule == "explicit") {
    if (rule.values.size() != n) throw dimension_error("explicit potential: length differs from vertex count");
    return rule.values;
  }
  if (rule.rule == "sparse-squares" || rule.rule == "radial") {
    auto dist = bfs_distances(g, g.root());
    std::vector<double> q(n, 0.0);
    for (vertex_id v = 0; v < n; ++v) {
      if (rule.rule == "sparse-squares")
        q[v] = is_positive_square(dist[v]) ? rule.alpha : 0.0;
      else
        q[v] = dist[v] < rule.values.size() ? rule.values[dist[v]] : 0.0;
    }
    return q;
  }
  throw parameter_error("unknown potential rule '" + rule.rule + "'");
}

inline SchrodingerOperator make_operator(std::shared_ptr<const RootedGraph> g, const PotentialRule& rule,
                                         Convention convention = Convention::adjacency) {
  auto q = evaluate_potential(rule, *g);
  return SchrodingerOperator(std::move(g), std::move(q), convention);
}

inline SchrodingerOperator make_operator(RootedGraph g, const PotentialRule& rule = PotentialRule::constant(0.0),
                                         Convention convention = Convention::adjacency) {
  return make_operator(std::make_shared<const RootedGraph>(std::move(g)), rule, convention);
}

}  // namespace spectra
