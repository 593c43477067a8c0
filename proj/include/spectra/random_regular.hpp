#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spectra/error.hpp"
#include "spectra/graph.hpp"

namespace spectra {

using edge_list = std::vector<std::pair<vertex_id, vertex_id>>;

struct RandomRegularOptions {
  int restarts = 8;
  std::size_t steps_per_restart = 300000;
  double start_temperature = 0.6;
};

namespace detail {

// Multigraph keyed by edge id, used while a random pairing is repaired by
// double-edge switches.
class SwitchGraph {
 public:
  SwitchGraph(std::size_t n, edge_list edges) : adj_(n), on_path_(n, 0), edges_(std::move(edges)) {
    for (std::size_t e = 0; e < edges_.size(); ++e) attach(e);
  }

  const edge_list& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  // Cycles of length < girth_floor through edge e, ignoring edges ex1, ex2 and
  // every edge with id below `floor_id`. Each such cycle is counted once.
  long cycles_through(std::size_t e, int girth_floor, std::size_t ex1 = SIZE_MAX,
                      std::size_t ex2 = SIZE_MAX, std::size_t floor_id = 0) {
    auto [u, v] = edges_[e];
    if (u == v) return 1;
    int max_len = girth_floor - 2;
    if (max_len < 1) return 0;
    ex_[0] = e;
    ex_[1] = ex1;
    ex_[2] = ex2;
    floor_ = floor_id;
    on_path_[v] = 1;
    long count = 0;
    count_paths(v, u, max_len, count);
    on_path_[v] = 0;
    return count;
  }

  void replace(std::size_t e, vertex_id u, vertex_id v) {
    detach(e);
    edges_[e] = {u, v};
    attach(e);
  }

 private:
  struct Half {
    vertex_id to;
    std::size_t edge;
  };

  void attach(std::size_t e) {
    auto [u, v] = edges_[e];
    adj_[u].push_back({v, e});
    if (u != v) adj_[v].push_back({u, e});
  }

  void detach(std::size_t e) {
    auto [u, v] = edges_[e];
    auto drop = [&](vertex_id x) {
      auto& nb = adj_[x];
      nb.erase(std::find_if(nb.begin(), nb.end(), [e](const Half& h) { return h.edge == e; }));
    };
    drop(u);
    if (u != v) drop(v);
  }

  void count_paths(vertex_id x, vertex_id target, int budget, long& count) {
    for (const Half& h : adj_[x]) {
      if (h.edge == ex_[0] || h.edge == ex_[1] || h.edge == ex_[2] || h.edge < floor_ || h.to == x)
        continue;
      if (h.to == target) {
        ++count;
      } else if (budget > 1 && !on_path_[h.to]) {
        on_path_[h.to] = 1;
        count_paths(h.to, target, budget - 1, count);
        on_path_[h.to] = 0;
      }
    }
  }

  std::vector<std::vector<Half>> adj_;
  std::vector<char> on_path_;
  edge_list edges_;
  std::size_t ex_[3] = {SIZE_MAX, SIZE_MAX, SIZE_MAX};
  std::size_t floor_ = 0;
};

// Number of cycles shorter than girth_floor, each counted once via its
// smallest edge id.
inline long count_short_cycles(SwitchGraph& g, int girth_floor) {
  long total = 0;
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    total += g.cycles_through(e, girth_floor, SIZE_MAX, SIZE_MAX, e);
  return total;
}

inline bool connected(std::size_t n, const edge_list& edges) {
  std::vector<std::vector<vertex_id>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::vector<vertex_id> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    vertex_id u = stack.back();
    stack.pop_back();
    for (vertex_id w : adj[u])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == n;
}

// Girth of a multigraph: 1 with a loop, 2 with a parallel edge, 0 for a forest.
inline std::size_t multigraph_girth(std::size_t n, const edge_list& edges) {
  edge_list sorted;
  for (auto [u, v] : edges) {
    if (u == v) return 1;
    sorted.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return 2;
  std::vector<std::vector<vertex_id>> adj(n);
  for (auto [u, v] : sorted) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::size_t best = unreached;
  std::vector<std::size_t> dist(n);
  std::vector<vertex_id> parent(n);
  for (vertex_id s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), unreached);
    std::vector<vertex_id> q{s};
    dist[s] = 0;
    parent[s] = unreached;
    for (std::size_t i = 0; i < q.size(); ++i) {
      vertex_id u = q[i];
      for (vertex_id w : adj[u]) {
        if (dist[w] == unreached) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          q.push_back(w);
        } else if (parent[u] != w) {
          best = std::min(best, dist[u] + dist[w] + 1);
        }
      }
    }
  }
  return best == unreached ? 0 : best;
}

}  // namespace detail

/// Random simple connected d-regular graph on n vertices with girth at least
/// `girth_floor`.
///
/// A uniform pairing is drawn and then repaired by annealed double-edge
/// switches that minimise the number of cycles shorter than the floor (loops
/// and parallel edges count as cycles of length 1 and 2). Throws
/// generation_error with the best girth seen if every restart fails.
inline edge_list random_regular_edges(std::size_t n, std::size_t d, int girth_floor,
                                      std::mt19937_64& rng, const RandomRegularOptions& opt = {}) {
  if (d < 1 || d >= n) throw parameter_error("random_regular: need 1 <= d < n");
  if ((n * d) % 2 != 0) throw parameter_error("random_regular: n*d must be even");
  girth_floor = std::max(girth_floor, 3);
  const std::size_t m = n * d / 2;

  edge_list best_edges;
  long best_energy = -1;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int attempt = 0; attempt < opt.restarts; ++attempt) {
    std::vector<vertex_id> points(n * d);
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = i / d;
    std::shuffle(points.begin(), points.end(), rng);
    edge_list pairing(m);
    for (std::size_t e = 0; e < m; ++e) pairing[e] = {points[2 * e], points[2 * e + 1]};

    detail::SwitchGraph g(n, std::move(pairing));
    long energy = detail::count_short_cycles(g, girth_floor);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);

    for (std::size_t step = 0; step < opt.steps_per_restart && energy > 0; ++step) {
      double temperature =
          opt.start_temperature * (1.0 - static_cast<double>(step) / opt.steps_per_restart) + 1e-3;
      std::size_t e1 = pick(rng);
      for (int tries = 0; tries < 64 && g.cycles_through(e1, girth_floor) == 0; ++tries) e1 = pick(rng);
      std::size_t e2 = pick(rng);
      if (e2 == e1) continue;

      auto [a, b] = g.edges()[e1];
      auto [c, dd] = g.edges()[e2];
      if (rng() & 1U) std::swap(c, dd);

      long removed = g.cycles_through(e1, girth_floor) + g.cycles_through(e2, girth_floor, e1);
      g.replace(e1, a, c);
      g.replace(e2, b, dd);
      long added = g.cycles_through(e1, girth_floor) + g.cycles_through(e2, girth_floor, e1);
      long delta = added - removed;
      if (delta <= 0 || unit(rng) < std::exp(-static_cast<double>(delta) / temperature)) {
        energy += delta;
      } else {
        g.replace(e1, a, b);
        g.replace(e2, c, dd);
      }
    }

    if (best_energy < 0 || energy < best_energy) {
      best_energy = energy;
      best_edges = g.edges();
    }
    if (energy == 0 && detail::connected(n, g.edges())) {
      edge_list out = g.edges();
      for (auto& [u, v] : out)
        if (u > v) std::swap(u, v);
      std::sort(out.begin(), out.end());
      return out;
    }
  }
  int best_girth = static_cast<int>(detail::multigraph_girth(n, best_edges));
  throw generation_error("random_regular: girth " + std::to_string(girth_floor) + " not reached for n=" +
                             std::to_string(n) + ", d=" + std::to_string(d) + "; best girth " +
                             std::to_string(best_girth),
                         best_girth);
}

}  // namespace spectra

namespace spectra {

/// Hoffman-Singleton graph (50 vertices, 7-regular, girth 5) via Robertson's
/// pentagons P_h and pentagrams Q_i: P_h[j] ~ Q_i[h*i + j mod 5].
/// Vertex P_h[j] is 5h + j, vertex Q_i[j] is 25 + 5i + j.
inline edge_list hoffman_singleton_edges() {
  edge_list out;
  auto p = [](int h, int j) { return static_cast<vertex_id>(5 * h + ((j % 5) + 5) % 5); };
  auto q = [](int i, int j) { return static_cast<vertex_id>(25 + 5 * i + ((j % 5) + 5) % 5); };
  for (int h = 0; h < 5; ++h)
    for (int j = 0; j < 5; ++j) {
      out.emplace_back(p(h, j), p(h, j + 1));
      out.emplace_back(q(h, j), q(h, j + 2));
      for (int i = 0; i < 5; ++i) out.emplace_back(p(h, j), q(i, h * i + j));
    }
  for (auto& [u, v] : out)
    if (u > v) std::swap(u, v);
  std::sort(out.begin(), out.end());
  return out;
}

/// Point-line incidence graph of the projective plane over F_q, q prime:
/// (q+1)-regular, girth 6, on 2(q^2 + q + 1) vertices. Points are ids
/// 0..m-1, lines m..2m-1, both in the order of their normalised coordinates.
inline edge_list projective_plane_incidence_edges(int q) {
  std::vector<std::array<int, 3>> pts;
  for (int x = 0; x < q; ++x)
    for (int y = 0; y < q; ++y) pts.push_back({1, x, y});
  for (int y = 0; y < q; ++y) pts.push_back({0, 1, y});
  pts.push_back({0, 0, 1});
  const vertex_id m = pts.size();
  edge_list out;
  for (vertex_id i = 0; i < m; ++i)
    for (vertex_id j = 0; j < m; ++j) {
      int dot = pts[i][0] * pts[j][0] + pts[i][1] * pts[j][1] + pts[i][2] * pts[j][2];
      if (dot % q == 0) out.emplace_back(i, m + j);
    }
  return out;
}

/// Known extremal regular graphs that random repair cannot be expected to hit
/// (orders at or next to the cage bound). Returned with vertices relabelled by
/// a seeded random permutation.
inline std::optional<edge_list> known_regular_graph(std::size_t n, std::size_t d, int girth_floor,
                                                    std::mt19937_64& rng) {
  edge_list base;
  if (girth_floor <= 5 && d == 7 && n == 50) {
    base = hoffman_singleton_edges();
  } else if (girth_floor <= 5 && d == 6 && n == 40) {
    // Deleting the induced Petersen graph P_0 u Q_0 leaves the (6,5)-cage.
    auto hs = hoffman_singleton_edges();
    auto removed = [](vertex_id v) { return v < 5 || (v >= 25 && v < 30); };
    auto relabel = [](vertex_id v) { return v < 25 ? v - 5 : v - 10; };
    for (auto [u, v] : hs)
      if (!removed(u) && !removed(v)) base.emplace_back(relabel(u), relabel(v));
  } else if (girth_floor <= 6 && (d == 3 || d == 4 || d == 6) && n == 2 * ((d - 1) * (d - 1) + d)) {
    base = projective_plane_incidence_edges(static_cast<int>(d) - 1);
  } else if (girth_floor <= 5 && d == 3 && n == 10) {
    for (vertex_id j = 0; j < 5; ++j) {
      base.emplace_back(j, (j + 1) % 5);
      base.emplace_back(5 + j, 5 + (j + 2) % 5);
      base.emplace_back(j, 5 + j);
    }
  } else {
    return std::nullopt;
  }
  std::vector<vertex_id> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& [u, v] : base) {
    u = perm[u];
    v = perm[v];
    if (u > v) std::swap(u, v);
  }
  std::sort(base.begin(), base.end());
  return base;
}

/// Random regular graph with a girth floor, falling back to a known extremal
/// construction when the requested order is a cage order.
inline edge_list regular_graph_with_girth(std::size_t n, std::size_t d, int girth_floor, std::mt19937_64& rng,
                                          const RandomRegularOptions& opt = {}) {
  if (auto known = known_regular_graph(n, d, girth_floor, rng)) return *known;
  return random_regular_edges(n, d, girth_floor, rng, opt);
}

}  // namespace spectra
