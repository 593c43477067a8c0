#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "spectra/builders.hpp"
#include "spectra/eigensolve.hpp"
#include "spectra/spectrum.hpp"

using namespace spectra;

TEST(Tridiag, FreePathEigenvalues) {
  const std::size_t n = 2000;
  auto e = eig_sym_tridiag(std::vector<double>(n - 1, 1.0), std::vector<double>(n, 0.0));
  ASSERT_EQ(e.size(), n);
  EXPECT_NEAR(e.back(), 2.0 * std::cos(std::numbers::pi / 2001.0), 1e-12);
  for (std::size_t k = 1; k <= n; ++k)
    ASSERT_NEAR(e[n - k], 2.0 * std::cos(k * std::numbers::pi / (n + 1.0)), 1e-11) << k;
}

TEST(Tridiag, TwoByTwo) {
  auto e = eig_sym_tridiag(std::vector<double>{1.0}, std::vector<double>{0.0, 0.0});
  EXPECT_NEAR(e[0], -1.0, 1e-15);
  EXPECT_NEAR(e[1], 1.0, 1e-15);
  EXPECT_TRUE(eig_sym_tridiag(std::vector<double>{}, std::vector<double>{}).empty());
  EXPECT_THROW(eig_sym_tridiag(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 0.0}), dimension_error);
  EXPECT_THROW(eig_sym_tridiag(std::vector<double>{0.0}, std::vector<double>{0.0, 0.0}), parameter_error);
}

TEST(Dense, KnownMatrices) {
  DenseMatrix m(3, 3);
  m(0, 0) = 2;
  m(0, 1) = m(1, 0) = 1;
  m(1, 1) = 2;
  m(2, 2) = -1;
  auto e = eig_sym_dense(m).values;
  EXPECT_NEAR(e[0], -1.0, 1e-14);
  EXPECT_NEAR(e[1], 1.0, 1e-14);
  EXPECT_NEAR(e[2], 3.0, 1e-14);
  EXPECT_TRUE(eig_sym_dense(DenseMatrix(0, 0)).values.empty());
  DenseMatrix asym(2, 2);
  asym(0, 1) = 1.0;
  EXPECT_THROW(eig_sym_dense(asym), parameter_error);
  EXPECT_THROW(eig_sym_dense(DenseMatrix(2, 3)), dimension_error);
}

TEST(Dense, VectorsDiagonalise) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  const std::size_t n = 40;
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = gauss(rng);
  auto dec = eig_sym_dense(m, true);
  ASSERT_TRUE(dec.vectors.has_value());
  for (std::size_t k = 0; k < n; ++k) {
    auto v = dec.vectors->column(k);
    auto mv = m.multiply(v);
    double res = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      res += (mv[i] - dec.values[k] * v[i]) * (mv[i] - dec.values[k] * v[i]);
      nv += v[i] * v[i];
    }
    EXPECT_NEAR(nv, 1.0, 1e-12);
    EXPECT_LT(std::sqrt(res), 1e-11);
  }
  auto ref = oracle::jacobi_eigenvalues(std::vector<double>(m.row(0).data(), m.row(0).data() + n * n), n);
  for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(dec.values[k], ref[k], 1e-11);
}

TEST(Lanczos, ExtremesOfTheFreePath) {
  const std::size_t n = 500;
  auto op = [&](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = (i > 0 ? x[i - 1] : 0.0) + (i + 1 < n ? x[i + 1] : 0.0);
  };
  std::vector<double> start(n);
  for (std::size_t i = 0; i < n; ++i) start[i] = 1.0 + std::sin(0.37 * static_cast<double>(i * i));
  auto ritz = lanczos_ritz_values(n, op, start, n);
  EXPECT_NEAR(ritz.back(), 2.0 * std::cos(std::numbers::pi / (n + 1.0)), 1e-10);
  EXPECT_NEAR(ritz.front(), -2.0 * std::cos(std::numbers::pi / (n + 1.0)), 1e-10);
  EXPECT_THROW(lanczos_ritz_values(n, op, std::vector<double>(n, 0.0), 10), parameter_error);
}

TEST(Intervals, ClusteringAndHausdorff) {
  std::vector<double> x{-1.0, -0.9, 0.5, 0.55, 2.0};
  auto iv = cluster_intervals(x, 0.2);
  ASSERT_EQ(iv.size(), 3u);
  EXPECT_EQ(iv[0], (Interval{-1.0, -0.9}));
  EXPECT_EQ(iv[2], (Interval{2.0, 2.0}));
  std::vector<double> y{-1.0, 0.5, 2.5};
  EXPECT_NEAR(hausdorff_distance(std::span<const double>(x), std::span<const double>(y)), 0.5, 1e-15);
  auto merged = merge_intervals({{0.0, 1.0}, {0.5, 2.0}, {3.0, 4.0}});
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged[0], (Interval{0.0, 2.0}));
  auto approx = approximation_from({3.0, -3.0, 0.0}, 0.5);
  EXPECT_EQ(approx.lower(), -3.0);
  EXPECT_EQ(approx.upper(), 3.0);
  EXPECT_EQ(approx.distance_to(1.0), 1.0);
  EXPECT_EQ(approx.distance_to(0.0), 0.0);
}

TEST(SpectrumApprox, PathEdgesAndStability) {
  auto h = make_operator(build_path(401, 200));
  auto s = spectrum_approx(h, 200, {50, 100, 200});
  EXPECT_NEAR(s.upper(), 2.0 * std::cos(std::numbers::pi / 402.0), 1e-12);
  EXPECT_NEAR(s.lower(), -2.0 * std::cos(std::numbers::pi / 402.0), 1e-12);
  ASSERT_EQ(s.intervals.size(), 1u);
  ASSERT_EQ(s.stability.size(), 2u);
  EXPECT_GT(s.stability[0], s.stability[1]);
  EXPECT_EQ(s.truncation_radius, 200u);
}

TEST(SpectrumApprox, LatticeBoxFillsMinusFourToFour) {
  auto h = make_operator(build_lattice_box(2, 41));
  vertex_id centre = 20 * 41 + 20;
  auto s = spectrum_approx(h, centre, {20, 40});
  const double edge = 4.0 * std::cos(std::numbers::pi / 42.0);
  EXPECT_NEAR(s.upper(), edge, 1e-10);
  EXPECT_NEAR(s.lower(), -edge, 1e-10);
}

TEST(SpectrumApprox, SingleVertexAndErrors) {
  auto h = make_operator(build_path(3, 1), PotentialRule::constant(0.25));
  auto s = spectrum_approx(h, 1, {0});
  ASSERT_EQ(s.eigenvalues.size(), 1u);
  EXPECT_EQ(s.eigenvalues[0], 0.25);
  EXPECT_THROW(spectrum_approx(h, 1, {}), parameter_error);
  EXPECT_THROW(spectrum_approx(h, 1, {1, 1}), parameter_error);
  EXPECT_THROW(spectrum_approx(h, 1, {5}), parameter_error);
}

TEST(SpectrumApprox, ResidualCertificates) {
  auto h = make_operator(build_regular_tree(3, 6));
  SpectrumOptions opt;
  opt.residual_certificates = true;
  auto s = spectrum_approx(h, 0, {3}, opt);
  ASSERT_TRUE(s.residual_certificates.has_value());
  // Eigenvectors of the ball leak only through the sphere at radius 3.
  for (double c : *s.residual_certificates) EXPECT_LE(c, std::sqrt(2.0) + 1e-12);
}

TEST(SpectrumApprox, LanczosPathForLargeBalls) {
  auto h = make_operator(build_path(6001, 3000));
  auto s = spectrum_approx(h, 3000, {3000});
  EXPECT_NEAR(s.upper(), 2.0, 1e-5);
  EXPECT_NEAR(s.lower(), -2.0, 1e-5);
}
