#include <gtest/gtest.h>

#include <map>
#include <queue>
#include <random>
#include <set>

#include "spectra/builders.hpp"
#include "spectra/graph.hpp"
#include "spectra/random_regular.hpp"

using namespace spectra;

namespace {

// Girth by deleting each edge in turn and measuring the detour.
std::optional<std::size_t> girth_by_edge_removal(const RootedGraph& g) {
  std::size_t best = unreached;
  for (auto [u, v] : g.edges()) {
    std::vector<std::size_t> dist(g.vertex_count(), unreached);
    std::queue<vertex_id> q;
    dist[u] = 0;
    q.push(u);
    while (!q.empty()) {
      vertex_id x = q.front();
      q.pop();
      for (vertex_id y : g.neighbors(x)) {
        if ((x == u && y == v) || (x == v && y == u)) continue;
        if (dist[y] == unreached) {
          dist[y] = dist[x] + 1;
          q.push(y);
        }
      }
    }
    if (dist[v] != unreached) best = std::min(best, dist[v] + 1);
  }
  if (best == unreached) return std::nullopt;
  return best;
}

std::vector<std::size_t> sphere_sizes(const RootedGraph& g, vertex_id base) {
  auto dist = bfs_distances(g, base);
  std::size_t far = 0;
  for (auto d : dist) far = std::max(far, d);
  std::vector<std::size_t> s(far + 1, 0);
  for (auto d : dist) ++s[d];
  return s;
}

}  // namespace

TEST(RegularTree, SmallCounts) {
  auto g = build_regular_tree(3, 2);
  EXPECT_EQ(g.vertex_count(), 10u);
  EXPECT_EQ(g.edge_count(), 9u);
  EXPECT_EQ(g.root(), 0u);
  EXPECT_EQ(g.degree(0), 3u);
  EXPECT_EQ(g.boundary().size(), 6u);
  EXPECT_FALSE(girth(g).has_value());
}

TEST(RegularTree, DegreeTwoIsAPath) {
  auto g = build_regular_tree(2, 5);
  EXPECT_EQ(g.vertex_count(), 11u);
  EXPECT_EQ(g.max_degree(), 2u);
  auto s = sphere_sizes(g, g.root());
  ASSERT_EQ(s.size(), 6u);
  for (std::size_t r = 1; r <= 5; ++r) EXPECT_EQ(s[r], 2u);
}

TEST(RegularTree, SphereSizes) {
  auto g = build_regular_tree(3, 8);
  auto p = growth_profile(g, g.root(), 8);
  for (std::size_t r = 1; r <= 8; ++r) EXPECT_EQ(p.sphere_sizes[r], 3u * (1u << (r - 1)));
  EXPECT_EQ(p.ball_sizes[8], g.vertex_count());
  // N(r)/S(r) climbs towards (d-1)/(d-2) = 2; the supremum sits at r = 8.
  EXPECT_NEAR(p.ratio_sup, 766.0 / 384.0, 1e-12);
}

TEST(RegularTree, RejectsBadDegree) {
  EXPECT_THROW(build_regular_tree(1, 3), parameter_error);
  EXPECT_THROW(build_regular_tree(3, 80), size_error);
}

TEST(Znxn, OneLevelInTwoDimensions) {
  auto g = build_znxn(2, 1);
  // The central box is a single vertex, the eight outer boxes are 3 x 3.
  EXPECT_EQ(g.vertex_count(), 1u + 8u * 9u);  // connectors of length 1 add no vertices
  EXPECT_EQ(znxn_box_offset(2, 1, {-1, -1}), 0u);
  EXPECT_EQ(znxn_box_offset(2, 1, {0, -1}), 9u);
  EXPECT_EQ(znxn_box_offset(2, 1, {0, 0}), 36u);
  EXPECT_EQ(znxn_box_offset(2, 1, {1, 0}), 37u);
  EXPECT_EQ(g.root(), 36u);
  EXPECT_EQ(g.degree(g.root()), 4u);
}

TEST(Znxn, ConnectorLengths) {
  // In one dimension the boxes are paths; the connector between boxes at
  // |x| = k - 1 and k has max(k-1, k) = k edges.
  auto g = build_znxn(1, 3);
  vertex_id c0 = znxn_box_offset(1, 3, {0});
  vertex_id b1 = znxn_box_offset(1, 3, {1});  // box of side 3, face centre is its first vertex
  auto dist = bfs_distances(g, c0);
  EXPECT_EQ(dist[b1], 1u);
  vertex_id b2 = znxn_box_offset(1, 3, {2});
  EXPECT_EQ(dist[b2], 1u + 2u + 2u);  // cross box 1 (2 edges), connector of length 2
}

TEST(Znxn, MaxDegreeFourInTheInterior) {
  auto g = build_znxn(2, 2);
  EXPECT_EQ(g.max_degree(), 4u);
  auto g3 = build_znxn(3, 1);
  EXPECT_EQ(g3.max_degree(), 6u);
  EXPECT_FALSE(g.boundary().empty());
}

TEST(Comb, Shape) {
  auto g = build_comb(1, 1);
  EXPECT_EQ(g.vertex_count(), 9u);
  EXPECT_EQ(g.edge_count(), 8u);
  EXPECT_EQ(g.root(), comb_vertex(1, 1, 0, 0));
  EXPECT_EQ(g.degree(g.root()), 4u);
  EXPECT_EQ(g.label(comb_vertex(1, 1, -1, 1)), "(-1,1)");
  auto big = build_comb(10, 10);
  EXPECT_EQ(big.max_degree(), 4u);
  EXPECT_FALSE(girth(big).has_value());
}

TEST(Star, Shape) {
  auto g = build_star(3, 5);
  EXPECT_EQ(g.vertex_count(), 16u);
  EXPECT_EQ(g.degree(0), 3u);
  EXPECT_EQ(g.boundary().size(), 3u);
  EXPECT_THROW(build_star(1, 4), parameter_error);
}

TEST(SparseCycles, SphereSizesJumpAtBranchLevels) {
  auto g = build_sparse_tree_with_cycles({2, 2}, {4, 8}, {6}, 9);
  auto s = sphere_sizes(g, g.root());
  std::vector<std::size_t> want{1, 1, 1, 1, 2, 2, 2, 2, 4, 4};
  EXPECT_EQ(s, want);
  // The sphere at level 6 has two vertices: the extra edge closes a cycle
  // through the branch point at level 3.
  EXPECT_EQ(girth(g), 7u);
  EXPECT_EQ(girth(g), girth_by_edge_removal(g));
}

TEST(SparseCycles, CycleClosesLargerSphere) {
  auto g = build_sparse_tree_with_cycles({2, 2}, {2, 6}, {3, 7}, 9);
  auto s = sphere_sizes(g, g.root());
  EXPECT_EQ(s[7], 4u);
  EXPECT_LE(g.max_degree(), 4u);
  ASSERT_TRUE(girth(g).has_value());
  EXPECT_EQ(girth(g), girth_by_edge_removal(g));
}

TEST(SparseCycles, RejectsCycleOutsideItsRange) {
  EXPECT_THROW(build_sparse_tree_with_cycles({2}, {4}, {3}, 8), parameter_error);
  EXPECT_THROW(build_sparse_tree_with_cycles({2, 2}, {4, 4}, {}, 8), parameter_error);
}

TEST(Ball, CoherentOrder) {
  auto g = build_regular_tree(3, 4);
  auto b = ball(g, 0, 3);
  EXPECT_EQ(b.size(), 1u + 3u + 6u + 12u);
  for (std::size_t i = 1; i < b.size(); ++i) {
    ASSERT_LE(b.distance[i - 1], b.distance[i]);
    if (b.distance[i - 1] == b.distance[i]) {
      ASSERT_LT(b.members[i - 1], b.members[i]);
    }
  }
  // Smaller radii are prefixes.
  auto small = ball(g, 0, 2);
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small.members[i], b.members[i]);
  EXPECT_EQ(b.prefix_size(2), small.size());
  EXPECT_THROW(ball(g, g.vertex_count(), 1), parameter_error);
}

TEST(Girth, MatchesEdgeRemovalOnSmallGraphs) {
  EXPECT_EQ(girth(build_cycle(7)), 7u);
  EXPECT_EQ(girth(build_lattice_box(2, 3)), 4u);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    GraphBuilder b(14);
    for (vertex_id v = 1; v < 14; ++v) b.add_edge(v, std::uniform_int_distribution<vertex_id>(0, v - 1)(rng));
    for (int e = 0; e < 4; ++e) {
      vertex_id u = std::uniform_int_distribution<vertex_id>(0, 13)(rng);
      vertex_id v = std::uniform_int_distribution<vertex_id>(0, 13)(rng);
      if (u != v) b.add_edge(u, v);
    }
    auto g = std::move(b).finish(0);
    EXPECT_EQ(girth(g), girth_by_edge_removal(g)) << "trial " << trial;
  }
}

TEST(Builder, Validation) {
  GraphBuilder b(3);
  EXPECT_THROW(b.add_edge(1, 1), parameter_error);
  EXPECT_THROW(b.add_edge(0, 3), parameter_error);
  b.add_edge(0, 1);
  EXPECT_THROW(std::move(b).finish(0), parameter_error);  // vertex 2 unreachable
}

TEST(Builder, RerootKeepsStructure) {
  auto g = build_path(5);
  auto h = g.rerooted(2);
  EXPECT_EQ(h.root(), 2u);
  EXPECT_EQ(h.edges(), g.edges());
}

TEST(Counterexample, BlocksAreRegularWithGirth) {
  CounterexampleLayout layout;
  auto g = build_counterexample(3, {20, 40}, {4, 5}, 7, 10, &layout);
  ASSERT_EQ(layout.blocks.size(), 2u);
  EXPECT_EQ(g.vertex_count(), (20u + 40u) + (20u + 40u + 1u) + 10u);  // blocks, spine, tail
  for (std::size_t i = 0; i < 2; ++i) {
    std::set<vertex_id> block(layout.blocks[i].begin(), layout.blocks[i].end());
    GraphBuilder sub(block.size());
    std::map<vertex_id, vertex_id> local;
    for (vertex_id v : block) local.emplace(v, local.size());
    for (vertex_id v : block) {
      std::size_t inside = 0;
      for (vertex_id w : g.neighbors(v))
        if (block.count(w)) {
          ++inside;
          if (v < w) sub.add_edge(local[v], local[w]);
        }
      EXPECT_EQ(inside, 3u);
    }
    auto bg = std::move(sub).finish(0);
    auto gg = girth_by_edge_removal(bg);
    ASSERT_TRUE(gg.has_value());
    EXPECT_GE(*gg, i == 0 ? 4u : 5u);
    EXPECT_EQ(static_cast<std::size_t>(layout.block_girth[i]), *gg);
    // The spine edge (k_i, k_i + 1) is replaced by the block.
    auto [a, c] = layout.spine_ends[i];
    EXPECT_FALSE(g.adjacent(a, c));
    EXPECT_TRUE(g.adjacent(a, layout.marks[i].first));
    EXPECT_TRUE(g.adjacent(layout.marks[i].second, c));
  }
  EXPECT_EQ(g.root(), 0u);
}

TEST(Counterexample, SeedDeterminism) {
  auto a = build_counterexample(3, {20, 40}, {4, 5}, 11);
  auto b = build_counterexample(3, {20, 40}, {4, 5}, 11);
  EXPECT_TRUE(a == b);
  EXPECT_THROW(build_counterexample(3, {21}, {4}, 1), parameter_error);
}
