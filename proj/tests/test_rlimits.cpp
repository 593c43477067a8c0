#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "spectra/builders.hpp"
#include "spectra/rlimits.hpp"

using namespace spectra;

namespace {

std::shared_ptr<const SchrodingerOperator> shared_free(RootedGraph g) {
  return std::make_shared<const SchrodingerOperator>(make_operator(std::move(g)));
}

const RLimitCandidate* find_catalog(const RLimitReport& r, CatalogEntry::Kind kind, std::size_t parameter) {
  for (const auto& c : r.candidates)
    if (c.catalog.kind == kind && c.catalog.parameter == parameter) return &c;
  return nullptr;
}

}  // namespace

TEST(Paths, PathGraphHasOneGeodesic) {
  auto g = build_path(12);
  auto paths = sample_paths(g);
  ASSERT_EQ(paths.size(), 1u);
  ASSERT_EQ(paths[0].size(), 12u);
  for (vertex_id v = 0; v < 12; ++v) EXPECT_EQ(paths[0][v], v);
}

TEST(Paths, RandomGeodesicsOnATree) {
  auto g = build_regular_tree(3, 8);
  auto paths = sample_paths(g, {PathStrategy::random_geodesic, 7, 5});
  ASSERT_EQ(paths.size(), 5u);
  auto dist = bfs_distances(g, 0);
  for (const auto& p : paths) {
    ASSERT_EQ(p.size(), 9u);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(dist[p[i]], i);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) EXPECT_TRUE(g.adjacent(p[i], p[i + 1]));
  }
  auto again = sample_paths(g, {PathStrategy::random_geodesic, 7, 5});
  EXPECT_EQ(paths, again);
}

TEST(Paths, AllDistanceMaximalCoversTheGeodesicSet) {
  auto g = build_regular_tree(3, 5);
  auto paths = sample_paths(g);
  std::set<vertex_id> seen;
  for (const auto& p : paths) seen.insert(p.begin(), p.end());
  EXPECT_EQ(seen.size(), g.vertex_count());
  EXPECT_EQ(paths.size(), g.boundary().size());
}

TEST(Detect, FreePathGivesOneLinePattern) {
  auto h = shared_free(build_path(400));
  auto report = detect_rlimits(*h, sample_paths(h->graph()), 3, 1e-9, 10);
  ASSERT_EQ(report.candidates.size(), 1u);
  const auto& c = report.candidates[0];
  EXPECT_EQ(c.catalog.kind, CatalogEntry::Kind::lattice);
  EXPECT_EQ(c.catalog.parameter, 1u);
  EXPECT_EQ(c.radius(), 3u);
  EXPECT_GE(c.stability_count, 3u);
  for (std::size_t i = 0; i < c.witnesses.size(); ++i)
    for (std::size_t j = i + 1; j < c.witnesses.size(); ++j)
      EXPECT_GT(std::max(c.witnesses[i], c.witnesses[j]) - std::min(c.witnesses[i], c.witnesses[j]), 6u);
  // Both ends are boundary: vertices 10..389 are eligible.
  EXPECT_EQ(report.eligible, 380u);
}

TEST(Detect, LinePatternSpectrumFillsMinusTwoTwo) {
  auto h = shared_free(build_path(400));
  auto report = detect_rlimits(*h, sample_paths(h->graph()), 3, 1e-9, 10);
  std::vector<CandidateModel> models;
  auto s = union_spectrum(report.candidates, 300, 0.05, nullptr, &models);
  EXPECT_NEAR(s.lower(), -2.0, 0.01);
  EXPECT_NEAR(s.upper(), 2.0, 0.01);
  ASSERT_EQ(models.size(), 1u);
  EXPECT_EQ(models[0].model, "Z");
}

TEST(Detect, TreePatternSpectrum) {
  auto h = shared_free(build_regular_tree(3, 10));
  auto report = detect_rlimits(*h, sample_paths(h->graph()), 2, 1e-9, 3);
  const auto* t3 = find_catalog(report, CatalogEntry::Kind::tree, 3);
  ASSERT_NE(t3, nullptr);
  auto s = union_spectrum({*t3}, 9, 0.05);
  const double edge = 2.0 * std::sqrt(2.0);
  EXPECT_NEAR(s.lower(), -edge, 0.06);
  EXPECT_NEAR(s.upper(), edge, 0.06);
}

TEST(Detect, ZnxnPatternClasses) {
  auto h = shared_free(build_znxn(2, 4));
  auto report = detect_rlimits(*h, sample_paths(h->graph()), 2, 1e-9, 8);
  EXPECT_GE(report.candidates.size(), 4u);
  EXPECT_NE(find_catalog(report, CatalogEntry::Kind::lattice, 1), nullptr);
  EXPECT_NE(find_catalog(report, CatalogEntry::Kind::lattice, 2), nullptr);
  std::set<std::string> hashes;
  for (const auto& c : report.candidates) hashes.insert(c.hash_hex());
  EXPECT_EQ(hashes.size(), report.candidates.size());
}

TEST(Detect, PotentialSeparatesPatterns) {
  // Sparse squares on a long path: besides the free line, the line with one
  // bump recurs at the squares.
  auto g = std::make_shared<const RootedGraph>(build_path(600));
  auto h = make_operator(g, PotentialRule::sparse_squares(1.0));
  auto report = detect_rlimits(h, sample_paths(*g), 2, 1e-9, 4);
  ASSERT_GE(report.candidates.size(), 2u);
  std::size_t with_bump = 0;
  for (const auto& c : report.candidates) {
    const auto& m = c.patterns.back().matrix;
    bool bump = false;
    for (std::size_t i = 0; i < m.rows(); ++i) bump = bump || m(i, i) != 0.0;
    with_bump += bump;
  }
  EXPECT_GE(with_bump, 1u);
}

TEST(Detect, NoEligibleVertices) {
  auto h = shared_free(build_path(5));
  auto report = detect_rlimits(*h, sample_paths(h->graph()), 1, 1e-9, 10);
  EXPECT_TRUE(report.candidates.empty());
  EXPECT_FALSE(report.diagnostics.empty());
  EXPECT_EQ(report.eligible, 0u);
  EXPECT_THROW(detect_rlimits(*h, {}, 0, 1e-9, 3), parameter_error);
  EXPECT_THROW(detect_rlimits(*h, {}, 2, 0.0, 3), parameter_error);
  EXPECT_THROW(detect_rlimits(*h, {}, 3, 1e-9, 2), parameter_error);
}

TEST(Detect, IncoherentFamilyIsRejected) {
  auto tree = shared_free(build_regular_tree(3, 9));
  auto report = detect_rlimits(*tree, sample_paths(tree->graph()), 2, 1e-9, 3);
  ASSERT_GE(report.candidates.size(), 1u);
  auto line = shared_free(build_path(200));
  auto lr = detect_rlimits(*line, sample_paths(line->graph()), 2, 1e-9, 5);
  ASSERT_EQ(lr.candidates.size(), 1u);
  RLimitCandidate broken = report.candidates.front();
  broken.patterns[0] = lr.candidates[0].patterns[0];
  EXPECT_FALSE(detail::coherence_problem(broken).empty());
  std::vector<std::string> diag;
  auto s = union_spectrum({broken, lr.candidates[0]}, 20, 0.05, &diag);
  ASSERT_EQ(diag.size(), 1u);
  EXPECT_NE(diag[0].find("rejected"), std::string::npos);
  EXPECT_NEAR(s.upper(), 2.0, 0.05);
}

TEST(Transplant, ResidualMatchesDirectComputation) {
  auto h = std::make_shared<const SchrodingerOperator>(
      make_operator(build_regular_tree(3, 9), PotentialRule::radial({0.3, -0.2})));
  auto report = detect_rlimits(*h, sample_paths(h->graph()), 2, 1e-9, 3);
  const auto* t3 = find_catalog(report, CatalogEntry::Kind::tree, 3);
  ASSERT_NE(t3, nullptr);
  auto checks = transplant_residuals(*t3, 2);
  ASSERT_FALSE(checks.empty());
  // Oracle: eigenvectors of each witness's own ball matrix, extended by zero.
  for (vertex_id w : t3->witnesses) {
    auto bm = ball_matrix(*h, w, 2);
    auto dec = eig_sym_dense(bm.entries, true);
    for (std::size_t k = 0; k < dec.values.size(); ++k) {
      auto psi = extend_by_zero<double>(bm.view, dec.vectors->column(k), h->dimension());
      double direct = weyl_residual(*h, psi, dec.values[k]);
      // Each transplanted check for this witness at this eigenvalue.
      bool found = false;
      for (const auto& t : checks)
        if (t.witness == w && std::abs(t.lambda - dec.values[k]) < 1e-12 && std::abs(t.residual - direct) < 1e-9)
          found = true;
      EXPECT_TRUE(found) << "witness " << w << " eigenvalue " << dec.values[k];
    }
  }
  for (const auto& t : checks) EXPECT_LE(t.residual, t.bound + 1e-12);
}

TEST(Catalog, ModelsAndIdentification) {
  CatalogEntry z{CatalogEntry::Kind::lattice, 1, 0.0};
  auto e = catalog_model_eigenvalues(z, 10);
  EXPECT_EQ(e.size(), 22u);
  EXPECT_NEAR(e.front(), -2.0, 1e-12);
  EXPECT_NEAR(e.back(), 2.0, 1e-12);
  EXPECT_EQ(z.name(), "Z");
  CatalogEntry z3{CatalogEntry::Kind::lattice, 3, 0.5};
  EXPECT_EQ(z3.name(), "Z^3");
  auto e3 = catalog_model_eigenvalues(z3, 5);
  EXPECT_NEAR(e3.back(), 6.5, 1e-12);
  CatalogEntry t{CatalogEntry::Kind::tree, 4, 0.0};
  EXPECT_EQ(t.name(), "T_4");
  auto et = catalog_model_eigenvalues(t, 30);
  EXPECT_LE(et.back(), 2.0 * std::sqrt(3.0) + 1e-12);
  EXPECT_GT(et.back(), 2.0 * std::sqrt(3.0) - 0.05);

  auto lattice = make_operator(build_lattice_box(2, 9));
  auto bm = ball_matrix(lattice, 40, 3);
  auto p = make_pattern(bm.entries, bm.view.distance, 3, 1e-10);
  auto id = identify_catalog(p, 1e-10);
  EXPECT_EQ(id.kind, CatalogEntry::Kind::lattice);
  EXPECT_EQ(id.parameter, 2u);
  // A corner of the box is not vertex-transitive.
  auto corner = ball_matrix(lattice, 0, 3);
  EXPECT_EQ(identify_catalog(make_pattern(corner.entries, corner.view.distance, 3, 1e-10), 1e-10).kind,
            CatalogEntry::Kind::none);
}

TEST(Catalog, ConsistencyRadiusOfTheLine) {
  auto h = shared_free(build_path(200));
  auto report = detect_rlimits(*h, sample_paths(h->graph()), 2, 1e-9, 5);
  ASSERT_EQ(report.candidates.size(), 1u);
  std::size_t rho = consistency_radius(report.candidates[0], 20);
  EXPECT_GE(rho, 2u);
  EXPECT_LE(rho, 20u);
}
