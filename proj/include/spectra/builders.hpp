#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "spectra/error.hpp"
#include "spectra/graph.hpp"
#include "spectra/random_regular.hpp"

namespace spectra {

// Hard cap on the size of generated graphs.
inline constexpr std::size_t max_generated_vertices = std::size_t{1} << 27;

namespace detail {

inline std::size_t checked_mul(std::size_t a, std::size_t b, const char* what) {
  if (a != 0 && b > max_generated_vertices / a) throw size_error(std::string(what) + ": vertex count too large");
  return a * b;
}

inline std::size_t checked_add(std::size_t a, std::size_t b, const char* what) {
  if (a + b > max_generated_vertices) throw size_error(std::string(what) + ": vertex count too large");
  return a + b;
}

}  // namespace detail

/// d-regular tree truncated at `depth`. Vertices are numbered level by level;
/// the leaves form the boundary.
inline RootedGraph build_regular_tree(std::size_t degree, std::size_t depth) {
  if (degree < 2) throw parameter_error("build_regular_tree: degree must be >= 2");
  std::size_t total = 1, level = 1;
  for (std::size_t k = 1; k <= depth; ++k) {
    level = detail::checked_mul(level, k == 1 ? degree : degree - 1, "build_regular_tree");
    total = detail::checked_add(total, level, "build_regular_tree");
  }
  GraphBuilder b(total);
  std::size_t first = 0, count = 1, next = 1;
  for (std::size_t k = 1; k <= depth; ++k) {
    std::size_t children = (k == 1) ? degree : degree - 1;
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t c = 0; c < children; ++c) b.add_edge(first + i, next++);
    first += count;
    count *= children;
  }
  for (std::size_t v = first; v < first + count; ++v) b.mark_boundary(v);
  return std::move(b).finish(0);
}

/// Path on n vertices, numbered along the path.
inline RootedGraph build_path(std::size_t n, vertex_id root = 0) {
  if (n < 1) throw parameter_error("build_path: need at least one vertex");
  GraphBuilder b(n);
  for (vertex_id v = 0; v + 1 < n; ++v) b.add_edge(v, v + 1);
  b.mark_boundary(0);
  b.mark_boundary(n - 1);
  return std::move(b).finish(root);
}

inline RootedGraph build_cycle(std::size_t n) {
  if (n < 3) throw parameter_error("build_cycle: need at least three vertices");
  GraphBuilder b(n);
  for (vertex_id v = 0; v < n; ++v) b.add_edge(v, (v + 1) % n);
  b.mark_boundary_empty();
  return std::move(b).finish(0);
}

/// Box {0..side-1}^dim of the lattice Z^dim, rooted at the centre (lower
/// middle for even sides). Vertex id is the mixed-radix encoding of the
/// coordinates, first coordinate fastest. Faces form the boundary.
inline RootedGraph build_lattice_box(std::size_t dim, std::size_t side) {
  if (dim < 1 || side < 1) throw parameter_error("build_lattice_box: dim and side must be positive");
  std::size_t n = 1;
  for (std::size_t k = 0; k < dim; ++k) n = detail::checked_mul(n, side, "build_lattice_box");
  GraphBuilder b(n);
  std::vector<std::size_t> coord(dim, 0);
  for (vertex_id v = 0; v < n; ++v) {
    std::size_t stride = 1;
    bool face = false;
    for (std::size_t k = 0; k < dim; ++k) {
      if (coord[k] + 1 < side) b.add_edge(v, v + stride);
      if (coord[k] == 0 || coord[k] + 1 == side) face = true;
      stride *= side;
    }
    if (face) b.mark_boundary(v);
    for (std::size_t k = 0; k < dim && ++coord[k] == side; ++k) coord[k] = 0;
  }
  vertex_id root = 0;
  for (std::size_t k = 0, stride = 1; k < dim; ++k, stride *= side) root += (side - 1) / 2 * stride;
  return std::move(b).finish(root);
}

/// Z_{n x n}: a box of side 2|x|_inf + 1 for every lattice point x with
/// |x|_inf <= levels, neighbouring boxes joined by fresh paths of length
/// max(|x|_inf, |x + e_j|_inf) between the centres of their facing faces.
/// The boundary consists of the face centres where an outward connector was
/// cut off by the truncation.
inline RootedGraph build_znxn(std::size_t n, std::size_t levels) {
  if (n < 1 || levels < 1) throw parameter_error("build_znxn: n and levels must be positive");
  const long L = static_cast<long>(levels);
  const std::size_t grid_side = 2 * levels + 1;
  std::size_t box_count = 1;
  for (std::size_t k = 0; k < n; ++k) box_count = detail::checked_mul(box_count, grid_side, "build_znxn");

  auto decode = [&](std::size_t idx) {
    std::vector<long> x(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = static_cast<long>(idx % grid_side) - L;
      idx /= grid_side;
    }
    return x;
  };
  auto norm = [](const std::vector<long>& x) {
    long m = 0;
    for (long c : x) m = std::max(m, std::labs(c));
    return m;
  };

  // First vertex id and side of every box.
  std::vector<std::size_t> offset(box_count), side(box_count);
  std::size_t total = 0;
  for (std::size_t idx = 0; idx < box_count; ++idx) {
    side[idx] = 2 * static_cast<std::size_t>(norm(decode(idx))) + 1;
    std::size_t cells = 1;
    for (std::size_t k = 0; k < n; ++k) cells = detail::checked_mul(cells, side[idx], "build_znxn");
    offset[idx] = total;
    total = detail::checked_add(total, cells, "build_znxn");
  }

  GraphBuilder b(total);
  // Box interiors.
  for (std::size_t idx = 0; idx < box_count; ++idx) {
    std::size_t s = side[idx], cells = 1;
    for (std::size_t k = 0; k < n; ++k) cells *= s;
    std::vector<std::size_t> c(n, 0);
    for (std::size_t local = 0; local < cells; ++local) {
      std::size_t stride = 1;
      for (std::size_t k = 0; k < n; ++k) {
        if (c[k] + 1 < s) b.add_edge(offset[idx] + local, offset[idx] + local + stride);
        stride *= s;
      }
      for (std::size_t k = 0; k < n && ++c[k] == s; ++k) c[k] = 0;
    }
  }
  // Centre of the face of box idx in direction sign*e_j.
  auto face_centre = [&](std::size_t idx, std::size_t j, int sign) {
    std::size_t s = side[idx], m = s / 2, local = 0, stride = 1;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t c = (k == j) ? (sign > 0 ? s - 1 : 0) : m;
      local += c * stride;
      stride *= s;
    }
    return offset[idx] + local;
  };
  // Connectors along +e_j, and boundary marks where the connector leaves the truncation.
  for (std::size_t idx = 0; idx < box_count; ++idx) {
    auto x = decode(idx);
    std::size_t stride = 1;
    for (std::size_t j = 0; j < n; ++j, stride *= grid_side) {
      for (int sign : {+1, -1}) {
        long moved = x[j] + sign;
        if (moved > L || moved < -L) {
          b.mark_boundary(face_centre(idx, j, sign));
          continue;
        }
        if (sign < 0) continue;  // each connector is built once, from its lower box
        std::size_t nb = idx + stride;
        auto y = x;
        y[j] = moved;
        std::size_t length = static_cast<std::size_t>(std::max(norm(x), norm(y)));
        vertex_id prev = face_centre(idx, j, +1);
        for (std::size_t step = 1; step < length; ++step) {
          vertex_id fresh = b.add_vertex();
          b.add_edge(prev, fresh);
          prev = fresh;
        }
        b.add_edge(prev, face_centre(nb, j, -1));
      }
    }
  }
  std::size_t origin = 0;
  for (std::size_t k = 0, stride = 1; k < n; ++k, stride *= grid_side) origin += levels * stride;
  return std::move(b).finish(offset[origin]);
}

/// Id of the first vertex of the box at lattice point x in build_znxn(n, levels).
inline vertex_id znxn_box_offset(std::size_t n, std::size_t levels, const std::vector<long>& x) {
  const std::size_t grid_side = 2 * levels + 1;
  const long L = static_cast<long>(levels);
  std::size_t target = 0;
  for (std::size_t k = 0, stride = 1; k < n; ++k, stride *= grid_side) target += (x.at(k) + L) * stride;
  std::size_t total = 0;
  for (std::size_t idx = 0; idx < target; ++idx) {
    std::size_t r = idx;
    long m = 0;
    for (std::size_t k = 0; k < n; ++k) {
      m = std::max(m, std::labs(static_cast<long>(r % grid_side) - L));
      r /= grid_side;
    }
    std::size_t cells = 1;
    for (std::size_t k = 0; k < n; ++k) cells *= 2 * m + 1;
    total += cells;
  }
  return total;
}

/// Spherically homogeneous sparse tree with extra cycles.
///
/// Vertices at level L[i] - 1 have k[i] children, all others one child, so
/// the sphere sizes jump at the levels L[i]. The sphere at level C[i] (with
/// L[i] <= C[i] < L[i+1]) is closed into a cycle in the natural enumeration:
/// start at its smallest vertex and repeatedly move to the nearest unvisited
/// vertex in tree distance (ties by id). A two-vertex sphere gets a single
/// edge, a one-vertex sphere none.
inline RootedGraph build_sparse_tree_with_cycles(const std::vector<std::size_t>& k_values,
                                                 const std::vector<std::size_t>& branch_levels,
                                                 const std::vector<std::size_t>& cycle_levels,
                                                 std::size_t depth) {
  if (k_values.size() != branch_levels.size())
    throw parameter_error("build_sparse_tree_with_cycles: k_values and branch_levels differ in length");
  if (cycle_levels.size() > branch_levels.size())
    throw parameter_error("build_sparse_tree_with_cycles: more cycle levels than branch levels");
  for (std::size_t i = 0; i < branch_levels.size(); ++i) {
    if (branch_levels[i] < 1) throw parameter_error("build_sparse_tree_with_cycles: branch levels must be >= 1");
    if (i > 0 && branch_levels[i] <= branch_levels[i - 1])
      throw parameter_error("build_sparse_tree_with_cycles: branch levels must increase strictly");
    if (k_values[i] < 1) throw parameter_error("build_sparse_tree_with_cycles: k values must be >= 1");
  }
  for (std::size_t i = 0; i < cycle_levels.size(); ++i) {
    bool below = cycle_levels[i] >= branch_levels[i];
    bool above = i + 1 >= branch_levels.size() || cycle_levels[i] < branch_levels[i + 1];
    if (!below || !above)
      throw parameter_error("build_sparse_tree_with_cycles: cycle level " + std::to_string(cycle_levels[i]) +
                            " must lie in [L_i, L_{i+1})");
    if (cycle_levels[i] > depth) throw parameter_error("build_sparse_tree_with_cycles: cycle level beyond depth");
  }

  std::vector<std::size_t> children(depth + 1, 1);
  for (std::size_t i = 0; i < branch_levels.size(); ++i)
    if (branch_levels[i] >= 1 && branch_levels[i] - 1 < depth) children[branch_levels[i] - 1] = k_values[i];

  GraphBuilder b;
  std::vector<vertex_id> parent{unreached};
  std::vector<std::vector<vertex_id>> spheres{{b.add_vertex()}};
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<vertex_id> next;
    for (vertex_id v : spheres[level])
      for (std::size_t c = 0; c < children[level]; ++c) {
        if (b.vertex_count() >= max_generated_vertices) throw size_error("build_sparse_tree_with_cycles: too large");
        vertex_id w = b.add_vertex();
        parent.push_back(v);
        b.add_edge(v, w);
        next.push_back(w);
      }
    spheres.push_back(std::move(next));
  }

  // Tree distance between two vertices on the same level.
  auto tree_distance = [&](vertex_id u, vertex_id v) {
    std::size_t d = 0;
    while (u != v) {
      u = parent[u];
      v = parent[v];
      d += 2;
    }
    return d;
  };

  for (std::size_t c : cycle_levels) {
    const auto& sphere = spheres[c];
    if (sphere.size() < 2) continue;
    std::vector<vertex_id> order{sphere.front()};
    std::vector<char> used(sphere.size(), 0);
    used[0] = 1;
    for (std::size_t step = 1; step < sphere.size(); ++step) {
      std::size_t best = unreached, best_d = unreached;
      for (std::size_t i = 0; i < sphere.size(); ++i) {
        if (used[i]) continue;
        std::size_t d = tree_distance(order.back(), sphere[i]);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      used[best] = 1;
      order.push_back(sphere[best]);
    }
    for (std::size_t i = 0; i + 1 < order.size(); ++i) b.add_edge(order[i], order[i + 1]);
    if (order.size() >= 3) b.add_edge(order.back(), order.front());
  }
  for (vertex_id v : spheres[depth]) b.mark_boundary(v);
  return std::move(b).finish(0);
}

/// Truncated comb: spine {-spine..spine} x {0}, arms {k} x {-arm..arm}.
/// Vertex (k, l) has id comb_vertex(arm, spine, k, l) and label "(k,l)".
inline vertex_id comb_vertex(std::size_t arm, std::size_t spine, long k, long l) {
  long width = 2 * static_cast<long>(arm) + 1;
  if (std::labs(k) > static_cast<long>(spine) || std::labs(l) > static_cast<long>(arm))
    throw parameter_error("comb_vertex: coordinates out of range");
  return static_cast<vertex_id>((k + static_cast<long>(spine)) * width + (l + static_cast<long>(arm)));
}

inline RootedGraph build_comb(std::size_t arm_length, std::size_t spine_length) {
  const long A = static_cast<long>(arm_length), S = static_cast<long>(spine_length);
  std::size_t n = detail::checked_mul(2 * spine_length + 1, 2 * arm_length + 1, "build_comb");
  GraphBuilder b(n);
  for (long k = -S; k <= S; ++k)
    for (long l = -A; l <= A; ++l) {
      vertex_id v = comb_vertex(arm_length, spine_length, k, l);
      b.set_label(v, "(" + std::to_string(k) + "," + std::to_string(l) + ")");
      if (l < A) b.add_edge(v, comb_vertex(arm_length, spine_length, k, l + 1));
      if (l == 0 && k < S) b.add_edge(v, comb_vertex(arm_length, spine_length, k + 1, 0));
      bool end = (l == 0 && std::labs(k) == S) || (A > 0 && std::labs(l) == A);
      if (end) b.mark_boundary(v);
    }
  return std::move(b).finish(comb_vertex(arm_length, spine_length, 0, 0));
}

/// k rays of ray_length vertices glued at a common root (vertex 0). Ray j
/// occupies ids 1 + j*ray_length .. (j+1)*ray_length, ordered outward.
inline RootedGraph build_star(std::size_t k, std::size_t ray_length) {
  if (k < 2) throw parameter_error("build_star: need at least two rays");
  if (ray_length < 1) throw parameter_error("build_star: ray_length must be >= 1");
  std::size_t n = detail::checked_add(1, detail::checked_mul(k, ray_length, "build_star"), "build_star");
  GraphBuilder b(n);
  for (std::size_t j = 0; j < k; ++j) {
    vertex_id prev = 0;
    for (std::size_t i = 1; i <= ray_length; ++i) {
      vertex_id v = 1 + j * ray_length + (i - 1);
      b.add_edge(prev, v);
      prev = v;
    }
    b.mark_boundary(prev);
  }
  return std::move(b).finish(0);
}

/// Layout of a counterexample graph: which vertices belong to which block.
struct CounterexampleLayout {
  std::vector<std::vector<vertex_id>> blocks;          // vertex ids per block
  std::vector<std::pair<vertex_id, vertex_id>> marks;  // attachment vertices u1, u2 per block
  std::vector<std::pair<vertex_id, vertex_id>> spine_ends;  // spine vertices k_i, k_i + 1
  std::vector<int> block_girth;
};

/// Half-line whose edges (k_i, k_i + 1), k_i = n_1 + ... + n_i, are replaced
/// by d-regular blocks of size n_i and girth >= g_i. Block i is joined to the
/// spine by the edges k_i - u_i1 and u_i2 - (k_i + 1), where (u_i1, u_i2) is the
/// lexicographically first pair realising the block diameter. The spine runs
/// on past the last block for `tail_length` more vertices; the root is spine
/// vertex 1. Spine vertex j has id j - 1.
inline RootedGraph build_counterexample(std::size_t d, const std::vector<std::size_t>& block_sizes,
                                        const std::vector<int>& girth_floors, std::uint64_t seed,
                                        std::size_t tail_length = 0, CounterexampleLayout* layout = nullptr,
                                        const RandomRegularOptions& options = {}) {
  if (d < 3) throw parameter_error("build_counterexample: d must be >= 3");
  if (block_sizes.size() != girth_floors.size())
    throw parameter_error("build_counterexample: block_sizes and girth_floors differ in length");
  if (block_sizes.empty()) throw parameter_error("build_counterexample: need at least one block");
  for (std::size_t n : block_sizes)
    if ((n * d) % 2 != 0 || n <= d)
      throw parameter_error("build_counterexample: block size " + std::to_string(n) + " admits no d-regular graph");
  if (tail_length == 0) tail_length = block_sizes.back();

  std::size_t spine_len = std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0}) + 1 + tail_length;
  GraphBuilder b(spine_len);
  for (vertex_id v = 0; v + 1 < spine_len; ++v) b.add_edge(v, v + 1);  // replaced edges removed below

  std::mt19937_64 rng(seed);
  CounterexampleLayout lay;
  std::vector<std::pair<vertex_id, vertex_id>> cut;
  std::size_t k = 0;
  for (std::size_t i = 0; i < block_sizes.size(); ++i) {
    std::size_t n = block_sizes[i];
    k += n;
    edge_list edges = regular_graph_with_girth(n, d, girth_floors[i], rng, options);

    // Diameter pair by all-pairs BFS inside the block.
    GraphBuilder inner(n);
    for (auto [u, v] : edges) inner.add_edge(u, v);
    RootedGraph block = std::move(inner).finish(0);
    std::size_t diam = 0;
    std::pair<vertex_id, vertex_id> pair{0, 0};
    for (vertex_id u = 0; u < n; ++u) {
      auto dist = bfs_distances(block, u);
      for (vertex_id v = u + 1; v < n; ++v)
        if (dist[v] > diam) {
          diam = dist[v];
          pair = {u, v};
        }
    }

    std::vector<vertex_id> ids(n);
    for (std::size_t j = 0; j < n; ++j) ids[j] = b.add_vertex();
    for (auto [u, v] : edges) b.add_edge(ids[u], ids[v]);
    vertex_id spine_k = k - 1, spine_k1 = k;  // spine vertices k_i and k_i + 1
    cut.emplace_back(spine_k, spine_k1);
    b.add_edge(spine_k, ids[pair.first]);
    b.add_edge(ids[pair.second], spine_k1);
    lay.blocks.push_back(ids);
    lay.marks.emplace_back(ids[pair.first], ids[pair.second]);
    lay.spine_ends.emplace_back(spine_k, spine_k1);
    lay.block_girth.push_back(static_cast<int>(girth(block).value_or(0)));
  }

  // Rebuild without the replaced spine edges.
  GraphBuilder final_builder(b.vertex_count());
  std::sort(cut.begin(), cut.end());
  RootedGraph tmp = std::move(b).finish(0);
  for (auto [u, v] : tmp.edges())
    if (!std::binary_search(cut.begin(), cut.end(), std::make_pair(u, v))) final_builder.add_edge(u, v);
  final_builder.mark_boundary(spine_len - 1);
  if (layout) *layout = std::move(lay);
  return std::move(final_builder).finish(0);
}

}  // namespace spectra
