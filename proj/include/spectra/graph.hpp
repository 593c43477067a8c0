#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spectra/error.hpp"

namespace spectra {

using vertex_id = std::size_t;

inline constexpr std::size_t unreached = std::numeric_limits<std::size_t>::max();

class GraphBuilder;

/// Finite, connected, simple undirected graph with a distinguished root.
///
/// Adjacency lists are sorted. Graphs are immutable once built and may be
/// shared freely between threads. The optional truncation boundary marks the
/// vertices whose neighbourhood was cut when the finite graph was produced
/// from an infinite family; when no boundary is marked, the outermost sphere
/// around the root is used.
class RootedGraph {
 public:
  std::size_t vertex_count() const noexcept { return adjacency_.size(); }
  vertex_id root() const noexcept { return root_; }
  std::size_t max_degree() const noexcept { return max_degree_; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const vertex_id> neighbors(vertex_id v) const { return adjacency_.at(v); }
  std::size_t degree(vertex_id v) const { return adjacency_.at(v).size(); }

  bool adjacent(vertex_id u, vertex_id v) const {
    const auto& nb = adjacency_.at(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  bool has_labels() const noexcept { return !labels_.empty(); }
  const std::string& label(vertex_id v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  bool boundary_marked() const noexcept { return boundary_marked_; }
  std::span<const vertex_id> boundary() const noexcept { return boundary_; }

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<std::pair<vertex_id, vertex_id>> edges() const {
    std::vector<std::pair<vertex_id, vertex_id>> out;
    out.reserve(edge_count_);
    for (vertex_id u = 0; u < adjacency_.size(); ++u)
      for (vertex_id v : adjacency_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  /// Same graph with a different root.
  RootedGraph rerooted(vertex_id new_root) const {
    if (new_root >= vertex_count()) throw parameter_error("rerooted: vertex out of range");
    RootedGraph g = *this;
    g.root_ = new_root;
    if (!boundary_marked_) g.boundary_ = outermost_sphere(g);
    return g;
  }

  friend bool operator==(const RootedGraph& a, const RootedGraph& b) {
    return a.root_ == b.root_ && a.adjacency_ == b.adjacency_ && a.labels_ == b.labels_ &&
           a.boundary_marked_ == b.boundary_marked_ && a.boundary_ == b.boundary_;
  }

 private:
  friend class GraphBuilder;

  static std::vector<vertex_id> outermost_sphere(const RootedGraph& g);

  std::vector<std::vector<vertex_id>> adjacency_;
  std::vector<std::string> labels_;
  std::vector<vertex_id> boundary_;
  vertex_id root_ = 0;
  std::size_t max_degree_ = 0;
  std::size_t edge_count_ = 0;
  bool boundary_marked_ = false;
};

/// Incremental construction of a RootedGraph. Duplicate edges are merged;
/// self-loops are rejected.
class GraphBuilder {
 public:
  GraphBuilder() = default;
  explicit GraphBuilder(std::size_t n) : adjacency_(n) {}

  vertex_id add_vertex(std::string label = {}) {
    adjacency_.emplace_back();
    if (!label.empty() || !labels_.empty()) {
      labels_.resize(adjacency_.size() - 1);
      labels_.push_back(std::move(label));
    }
    return adjacency_.size() - 1;
  }

  std::size_t vertex_count() const noexcept { return adjacency_.size(); }

  void set_label(vertex_id v, std::string label) {
    labels_.resize(adjacency_.size());
    labels_.at(v) = std::move(label);
  }

  void add_edge(vertex_id u, vertex_id v) {
    if (u == v) throw parameter_error("GraphBuilder: self-loop at vertex " + std::to_string(u));
    if (u >= adjacency_.size() || v >= adjacency_.size())
      throw parameter_error("GraphBuilder: edge endpoint out of range");
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }

  bool has_edge(vertex_id u, vertex_id v) const {
    const auto& nb = adjacency_.at(u);
    return std::find(nb.begin(), nb.end(), v) != nb.end();
  }

  std::size_t degree(vertex_id v) const { return adjacency_.at(v).size(); }

  void mark_boundary(vertex_id v) { boundary_.push_back(v); boundary_marked_ = true; }
  void mark_boundary_empty() { boundary_marked_ = true; }

  /// Validates connectivity from `root` and freezes the graph.
  RootedGraph finish(vertex_id root) &&;

 private:
  std::vector<std::vector<vertex_id>> adjacency_;
  std::vector<std::string> labels_;
  std::vector<vertex_id> boundary_;
  bool boundary_marked_ = false;
};

// ---------------------------------------------------------------------------
// Metric primitives

/// BFS distances from `source`; vertices farther than `max_radius` are `unreached`.
inline std::vector<std::size_t> bfs_distances(const RootedGraph& g, vertex_id source,
                                              std::size_t max_radius = unreached) {
  std::vector<std::size_t> dist(g.vertex_count(), unreached);
  std::queue<vertex_id> q;
  dist.at(source) = 0;
  q.push(source);
  while (!q.empty()) {
    vertex_id u = q.front();
    q.pop();
    if (dist[u] == max_radius) continue;
    for (vertex_id w : g.neighbors(u)) {
      if (dist[w] == unreached) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

/// Distance from every vertex to the nearest vertex of `sources`.
inline std::vector<std::size_t> multi_source_distances(const RootedGraph& g,
                                                       std::span<const vertex_id> sources) {
  std::vector<std::size_t> dist(g.vertex_count(), unreached);
  std::queue<vertex_id> q;
  for (vertex_id s : sources) {
    if (dist.at(s) == unreached) {
      dist[s] = 0;
      q.push(s);
    }
  }
  while (!q.empty()) {
    vertex_id u = q.front();
    q.pop();
    for (vertex_id w : g.neighbors(u)) {
      if (dist[w] == unreached) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

inline std::vector<vertex_id> RootedGraph::outermost_sphere(const RootedGraph& g) {
  auto dist = bfs_distances(g, g.root_);
  std::size_t far = *std::max_element(dist.begin(), dist.end());
  std::vector<vertex_id> out;
  for (vertex_id v = 0; v < dist.size(); ++v)
    if (dist[v] == far) out.push_back(v);
  return out;
}

inline RootedGraph GraphBuilder::finish(vertex_id root) && {
  if (adjacency_.empty()) throw parameter_error("GraphBuilder: empty graph");
  if (root >= adjacency_.size()) throw parameter_error("GraphBuilder: root out of range");
  RootedGraph g;
  g.adjacency_ = std::move(adjacency_);
  for (auto& nb : g.adjacency_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    g.max_degree_ = std::max(g.max_degree_, nb.size());
    g.edge_count_ += nb.size();
  }
  g.edge_count_ /= 2;
  g.root_ = root;
  if (!labels_.empty()) {
    labels_.resize(g.adjacency_.size());
    g.labels_ = std::move(labels_);
  }
  auto dist = bfs_distances(g, root);
  for (vertex_id v = 0; v < dist.size(); ++v)
    if (dist[v] == unreached)
      throw parameter_error("GraphBuilder: vertex " + std::to_string(v) + " unreachable from root");
  g.boundary_marked_ = boundary_marked_;
  if (boundary_marked_) {
    std::sort(boundary_.begin(), boundary_.end());
    boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
    g.boundary_ = std::move(boundary_);
  } else {
    g.boundary_ = RootedGraph::outermost_sphere(g);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Balls

/// Ball B_r(center) in coherent BFS order: members sorted by distance from
/// the center, ties by ascending vertex id. The order restricted to a smaller
/// radius is that radius' order, so ball matrices nest as upper-left corners.
struct BallView {
  vertex_id center = 0;
  std::size_t radius = 0;
  std::vector<vertex_id> members;
  std::vector<std::size_t> distance;  // parallel to members
  std::unordered_map<vertex_id, std::size_t> index_of;

  std::size_t size() const noexcept { return members.size(); }
  bool contains(vertex_id v) const { return index_of.count(v) != 0; }

  /// Number of members within distance `r` of the center (a prefix length).
  std::size_t prefix_size(std::size_t r) const {
    return static_cast<std::size_t>(std::upper_bound(distance.begin(), distance.end(), r) -
                                    distance.begin());
  }
};

inline BallView ball(const RootedGraph& g, vertex_id center, std::size_t radius) {
  if (center >= g.vertex_count()) throw parameter_error("ball: center out of range");
  BallView view;
  view.center = center;
  view.radius = radius;
  // Sparse BFS so small balls in large graphs stay cheap.
  std::unordered_map<vertex_id, std::size_t> dist;
  std::vector<vertex_id> frontier{center};
  dist.emplace(center, 0);
  std::vector<std::pair<std::size_t, vertex_id>> found{{0, center}};
  for (std::size_t d = 1; d <= radius && !frontier.empty(); ++d) {
    std::vector<vertex_id> next;
    for (vertex_id u : frontier)
      for (vertex_id w : g.neighbors(u))
        if (dist.emplace(w, d).second) {
          next.push_back(w);
          found.emplace_back(d, w);
        }
    frontier = std::move(next);
  }
  std::sort(found.begin(), found.end());
  view.members.reserve(found.size());
  view.distance.reserve(found.size());
  for (auto [d, v] : found) {
    view.index_of.emplace(v, view.members.size());
    view.members.push_back(v);
    view.distance.push_back(d);
  }
  return view;
}

// ---------------------------------------------------------------------------
// Growth

/// Sphere and ball counts S(0..R), N(0..R) around a base vertex.
struct GrowthProfile {
  std::vector<std::size_t> sphere_sizes;
  std::vector<std::size_t> ball_sizes;
  double ratio_sup = 0.0;  // max over 1 <= r <= R of N(r)/S(r)
};

inline GrowthProfile growth_profile(const RootedGraph& g, vertex_id base, std::size_t radius) {
  auto dist = bfs_distances(g, base, radius);
  GrowthProfile p;
  p.sphere_sizes.assign(radius + 1, 0);
  for (std::size_t d : dist)
    if (d != unreached) ++p.sphere_sizes[d];
  p.ball_sizes.resize(radius + 1);
  std::size_t acc = 0;
  for (std::size_t r = 0; r <= radius; ++r) {
    acc += p.sphere_sizes[r];
    p.ball_sizes[r] = acc;
    if (r >= 1 && p.sphere_sizes[r] > 0)
      p.ratio_sup = std::max(p.ratio_sup, static_cast<double>(acc) / p.sphere_sizes[r]);
  }
  return p;
}

/// Length of a shortest cycle; std::nullopt for forests.
inline std::optional<std::size_t> girth(const RootedGraph& g) {
  std::size_t best = unreached;
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> dist(n, unreached);
  std::vector<vertex_id> parent(n, unreached);
  std::vector<vertex_id> touched;
  for (vertex_id s = 0; s < n; ++s) {
    for (vertex_id t : touched) dist[t] = unreached;
    touched.clear();
    std::queue<vertex_id> q;
    dist[s] = 0;
    parent[s] = unreached;
    touched.push_back(s);
    q.push(s);
    while (!q.empty()) {
      vertex_id u = q.front();
      q.pop();
      // Any cycle found from here is no shorter than 2*dist[u]+1.
      if (best != unreached && 2 * dist[u] + 1 >= best) break;
      for (vertex_id w : g.neighbors(u)) {
        if (dist[w] == unreached) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          touched.push_back(w);
          q.push(w);
        } else if (parent[u] != w) {
          best = std::min(best, dist[u] + dist[w] + 1);
        }
      }
    }
  }
  if (best == unreached) return std::nullopt;
  return best;
}

}  // namespace spectra
