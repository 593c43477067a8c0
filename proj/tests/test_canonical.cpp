#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "spectra/builders.hpp"
#include "spectra/canonical.hpp"
#include "spectra/operator.hpp"

using namespace spectra;

namespace {

struct Rooted {
  DenseMatrix m;
  std::vector<std::size_t> dist;
};

Rooted ball_of(const SchrodingerOperator& h, vertex_id v, std::size_t r) {
  auto bm = ball_matrix(h, v, r);
  return {bm.entries, bm.view.distance};
}

Rooted shuffled(const Rooted& x, std::mt19937_64& rng) {
  std::vector<std::size_t> p(x.dist.size());
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  Rooted y{permute(x.m, p), {}};
  for (std::size_t i = 0; i < p.size(); ++i) y.dist.push_back(x.dist[p[i]]);
  return y;
}

// Root-preserving isomorphism by trying every permutation.
bool brute_isomorphic(const Rooted& a, const Rooted& b, double quantum) {
  const std::size_t n = a.dist.size();
  if (b.dist.size() != n) return false;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  auto q = [&](double x) { return std::llround(x / quantum); };
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (a.dist[i] != b.dist[p[i]]) ok = false;
      for (std::size_t j = 0; j < n && ok; ++j)
        if (q(a.m(i, j)) != q(b.m(p[i], p[j]))) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

Rooted random_rooted(std::size_t n, double p_edge, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p_edge);
  GraphBuilder b(n);
  for (vertex_id v = 1; v < n; ++v) b.add_edge(v, std::uniform_int_distribution<vertex_id>(0, v - 1)(rng));
  for (vertex_id u = 0; u < n; ++u)
    for (vertex_id v = u + 1; v < n; ++v)
      if (coin(rng)) b.add_edge(u, v);
  std::vector<double> q(n);
  std::uniform_int_distribution<int> level(0, 1);
  for (double& x : q) x = level(rng);
  auto h = SchrodingerOperator(std::make_shared<const RootedGraph>(std::move(b).finish(0)), q);
  return ball_of(h, 0, n);
}

}  // namespace

TEST(Canonical, InvariantUnderRelabelling) {
  std::mt19937_64 rng(1);
  auto h = make_operator(build_znxn(2, 2), PotentialRule::sparse_squares(0.5));
  for (vertex_id v : {vertex_id{0}, h.graph().root(), vertex_id{17}}) {
    auto x = ball_of(h, v, 3);
    auto base = canonical_form(x.m, x.dist, 1e-10);
    for (int t = 0; t < 5; ++t) {
      auto y = shuffled(x, rng);
      auto f = canonical_form(y.m, y.dist, 1e-10);
      EXPECT_EQ(f.certificate, base.certificate);
      EXPECT_EQ(f.hash, base.hash);
      // The canonical matrices agree entry by entry.
      auto a = permute(x.m, base.order), b = permute(y.m, f.order);
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) ASSERT_EQ(a(i, j), b(i, j));
    }
  }
}

TEST(Canonical, DistinguishesRootPosition) {
  auto h = make_operator(build_path(9));
  auto end = ball_of(h, 0, 2), middle = ball_of(h, 4, 1);
  // Both are paths on three vertices, rooted at an end and at the middle.
  EXPECT_NE(canonical_form(end.m, end.dist, 1e-10).certificate,
            canonical_form(middle.m, middle.dist, 1e-10).certificate);
}

TEST(Canonical, QuantumDecidesPotentialDifferences) {
  auto g = std::make_shared<const RootedGraph>(build_path(5, 2));
  SchrodingerOperator a(g, {0, 0, 0, 0, 0}), b(g, {0, 0, 0, 0, 3e-12});
  auto x = ball_of(a, 2, 2), y = ball_of(b, 2, 2);
  EXPECT_EQ(canonical_form(x.m, x.dist, 1e-10).certificate, canonical_form(y.m, y.dist, 1e-10).certificate);
  EXPECT_NE(canonical_form(x.m, x.dist, 1e-13).certificate, canonical_form(y.m, y.dist, 1e-13).certificate);
}

TEST(Canonical, RegularGraphsWithManyAutomorphisms) {
  // Vertex-transitive: every vertex of a cycle sees the same ball.
  auto h = make_operator(build_cycle(30));
  auto first = ball_of(h, 0, 4);
  auto f0 = canonical_form(first.m, first.dist, 1e-10);
  for (vertex_id v = 1; v < 30; ++v) {
    auto x = ball_of(h, v, 4);
    EXPECT_EQ(canonical_form(x.m, x.dist, 1e-10).certificate, f0.certificate);
  }
  auto t = make_operator(build_regular_tree(4, 6));
  auto root = ball_of(t, 0, 3);
  auto fr = canonical_form(root.m, root.dist, 1e-10);
  std::mt19937_64 rng(9);
  auto y = shuffled(root, rng);
  EXPECT_EQ(canonical_form(y.m, y.dist, 1e-10).certificate, fr.certificate);
}

TEST(Canonical, AgreesWithBruteForceOnSmallGraphs) {
  std::mt19937_64 rng(2024);
  int agreements = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 3 + trial % 5;
    auto a = random_rooted(n, 0.3, rng);
    // Half the trials compare against a relabelled copy, half against a fresh graph.
    Rooted b = trial % 2 == 0 ? shuffled(a, rng) : random_rooted(n, 0.3, rng);
    bool iso = brute_isomorphic(a, b, 1e-10);
    bool same = canonical_form(a.m, a.dist, 1e-10).certificate == canonical_form(b.m, b.dist, 1e-10).certificate;
    EXPECT_EQ(iso, same) << "trial " << trial;
    agreements += iso == same;
  }
  EXPECT_EQ(agreements, 60);
}

TEST(Canonical, EmptyAndValidation) {
  auto f = canonical_form(DenseMatrix(0, 0), {}, 1.0);
  EXPECT_EQ(f.certificate, std::vector<std::int64_t>{0});
  EXPECT_THROW(canonical_form(DenseMatrix(2, 2), {0}, 1.0), dimension_error);
  EXPECT_THROW(canonical_form(DenseMatrix(1, 1), {0}, 0.0), parameter_error);
  EXPECT_EQ(f.hash_hex().size(), 16u);
}
