#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spectra/builders.hpp"
#include "spectra/eigensolve.hpp"
#include "spectra/herglotz.hpp"
#include "spectra/operator.hpp"

using namespace spectra;

TEST(MFunctions, HalfLineValues) {
  EXPECT_NEAR(m_halfline_free(3.0).real(), (-3.0 + std::sqrt(5.0)) / 2.0, 1e-15);
  EXPECT_NEAR(m_halfline_free(3.0).real(), -0.3819660, 1e-7);
  EXPECT_NEAR(std::abs(m_halfline_free(3.0) - oracle::halfline(3.0)), 0.0, 1e-8);
  EXPECT_NEAR(m_halfline_free(100.0).real(), -0.0100010, 1e-7);
  EXPECT_GT(m_halfline_free(complex(0.0, 1.0)).imag(), 0.0);
  // Below the cut the branch still decays like -1/z.
  EXPECT_NEAR(m_halfline_free(-3.0).real(), (3.0 - std::sqrt(5.0)) / 2.0, 1e-15);
  EXPECT_THROW(m_halfline_free(1.0), std::domain_error);
}

TEST(MFunctions, LineAndTreeValues) {
  EXPECT_NEAR(m_line_free(3.0).real(), -1.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(std::abs(m_line_free(3.0) - oracle::line(3.0)), 0.0, 1e-8);
  EXPECT_NEAR(m_tree(6.0, 6).real(), -10.0 / 48.0, 1e-15);
  EXPECT_NEAR(std::abs(m_tree(6.0, 6) - oracle::tree_root(6.0, 6, 200)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(m_tree(1000.0, 3) + 1.0 / 1000.0), 0.0, 1e-5);
  EXPECT_THROW(m_tree(2.0, 3), std::domain_error);
  EXPECT_NEAR(std::abs(m_halfline_scaled(complex(0.5, 0.3), 2.0) -
                       oracle::halfline(complex(0.5, 0.3), 5000, 2.0)),
              0.0, 1e-8);
}

TEST(MFunctions, AgreeWithBandedOraclesOffTheAxis) {
  for (double re : {-3.0, -1.5, 0.0, 1.5, 3.0})
    for (double im : {0.1, 0.5, 1.0, 3.0}) {
      complex z(re, im);
      EXPECT_LT(std::abs(m_halfline_free(z) - oracle::halfline(z)), 1e-6) << z;
      EXPECT_LT(std::abs(m_line_free(z) - oracle::line(z)), 1e-6) << z;
      EXPECT_LT(std::abs(m_tree(z, 3) - oracle::tree_root(z, 3)), 1e-6) << z;
      EXPECT_LT(std::abs(m_tree(z, 4) - oracle::tree_root(z, 4)), 1e-6) << z;
    }
}

TEST(MFunctions, HerglotzAndNormalisation) {
  for (double im : {0.1, 1.0, 10.0})
    for (double re = -6.0; re <= 6.0; re += 0.25) {
      complex z(re, im);
      EXPECT_GT(m_halfline_free(z).imag(), 0.0) << z;
      EXPECT_GT(m_line_free(z).imag(), 0.0) << z;
      EXPECT_GT(m_tree(z, 3).imag(), 0.0) << z;
      EXPECT_GT(m_tree(z, 6).imag(), 0.0) << z;
    }
  for (double r : {1e2, 1e3, 1e4})
    for (double phase : {0.3, 1.2, 2.5}) {
      complex z = std::polar(r, phase);
      for (complex m : {m_halfline_free(z), m_line_free(z), m_tree(z, 3), m_tree(z, 5)})
        EXPECT_LE(std::abs(m + 1.0 / z), 10.0 / (r * r)) << z;
    }
}

TEST(RankOne, IdentityAndPoles) {
  MFunction f = m_halfline_free;
  auto same = rank_one_transform(f, 0.0);
  EXPECT_EQ(same(complex(0.3, 0.7)).value, f(complex(0.3, 0.7)));
  // Herglotz survives a real perturbation.
  auto pert = rank_one_transform(f, 1.7);
  EXPECT_GT(pert(complex(-0.4, 0.2)).value.imag(), 0.0);
  // Pole of F / (1 + alpha F) for the scaled line: sqrt(z^2 - 4(d-1)) = alpha.
  const int d = 3;
  const double alpha = 2.0, a = std::sqrt(d - 1.0);
  MFunction line = [a](complex z) { return m_line_scaled(z, a); };
  double z0 = rank_one_pole(line, alpha, 2.0 * a + 1e-9, 10.0);
  EXPECT_NEAR(z0, sparse_z0(d, alpha), 1e-10);
  EXPECT_TRUE(rank_one_transform(line, alpha)(complex(sparse_z0(d, alpha), 0.0)).pole);
  MFunction half = [a](complex z) { return m_halfline_scaled(z, a); };
  double z1 = rank_one_pole(half, alpha, 2.0 * a + 1e-9, 10.0);
  EXPECT_NEAR(z1, sparse_z1(d, alpha), 1e-10);
  EXPECT_THROW(rank_one_pole(half, 0.5, 3.0, 10.0), std::domain_error);
}

TEST(SparseTree, ClosedForms) {
  EXPECT_NEAR(sparse_z0(3, 2.0), std::sqrt(12.0), 1e-15);
  EXPECT_NEAR(sparse_z0(3, -2.0), -std::sqrt(12.0), 1e-15);
  EXPECT_EQ(sparse_z1(3, 2.0), 3.0);
  auto c1 = solve_zk(1, 3, 2.0);
  EXPECT_NEAR(c1.x, std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(c1.lambda, 3.0, 1e-14);
  EXPECT_LT(c1.witness, 1e-12);
  auto c10 = solve_zk(10, 3, 2.0);
  EXPECT_NEAR(c10.lambda, sparse_z0(3, 2.0), 0.05);
  EXPECT_LT(c10.witness, 1e-12);
  EXPECT_EQ(c10.kind, EigenvalueCertificate::Kind::isolated_point);
}

TEST(SparseTree, BoundStatesMatchTruncations) {
  const int d = 3;
  const double a = std::sqrt(d - 1.0);
  for (double alpha : {2.0, -2.0, 5.0})
    for (int k : {1, 2, 3, 6}) {
      auto c = solve_zk(k, d, alpha);
      std::vector<double> off(3999, a), diag(4000, 0.0);
      diag[k - 1] = alpha;
      auto e = eig_sym_tridiag(off, diag);
      double obs = alpha > 0 ? e.back() : e.front();
      EXPECT_NEAR(obs, c.lambda, 1e-6) << "alpha " << alpha << " k " << k;
      // The resolvent of the truncation blows up at z_k.
      complex z(c.lambda, 1e-9);
      EXPECT_GT(std::abs(oracle::banded_resolvent(off, diag, z, k - 1)), 1e3);
    }
}

TEST(SparseTree, MonotoneFk) {
  for (int k = 1; k <= 8; ++k) {
    double prev = f_k(k, -0.999);
    for (double x = -0.99; x < 1.0; x += 0.01) {
      double y = f_k(k, x);
      ASSERT_GT(y, prev) << k << " " << x;
      prev = y;
    }
    EXPECT_NEAR(f_k(k, 0.5), (std::pow(0.5, 2 * k) - 1.0) / (0.5 - 2.0), 1e-15);
  }
  // Weak coupling: no bound state below the threshold.
  EXPECT_THROW(solve_zk(1, 3, 1.0), std::domain_error);
  EXPECT_THROW(solve_zk(0, 3, 1.0), parameter_error);
}

TEST(Star, EigenvaluesAndTruncation) {
  EXPECT_NEAR(star_eigenvalue(3).lambda, 2.1213203, 1e-7);
  EXPECT_NEAR(star_eigenvalue(4).lambda, 2.3094011, 1e-7);
  EXPECT_LT(star_eigenvalue(3).witness, 1e-12);
  EXPECT_LT(star_eigenvalue(7).witness, 1e-12);
  EXPECT_THROW(star_eigenvalue(2), parameter_error);
  auto h = make_operator(build_star(3, 300));
  auto e = eig_sym_dense(ball_matrix(h, 0, 300).entries).values;
  EXPECT_NEAR(e.back(), 3.0 / std::sqrt(2.0), 1e-4);
  EXPECT_LT(e[e.size() - 2], 2.0);
}

TEST(Comb, EdgesAndSweep) {
  EXPECT_EQ(comb_edge(std::numbers::pi / 2), 2.0);
  EXPECT_NEAR(comb_edge(0.0), 2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(comb_edge(std::numbers::pi), -2.0 * std::sqrt(2.0), 1e-15);
  auto zero = comb_sweep({0.0}, 2001);
  EXPECT_NEAR(zero.edges[0].observed, 2.0 * std::sqrt(2.0), 1e-3);
  auto flat = comb_sweep({std::numbers::pi / 2}, 2001);
  EXPECT_LE(flat.spectrum.eigenvalues.back(), 2.0);
  EXPECT_GE(flat.spectrum.eigenvalues.front(), -2.0);
  std::vector<double> grid;
  for (int j = 0; j < 64; ++j) grid.push_back(2.0 * std::numbers::pi * j / 64.0);
  auto sweep = comb_sweep(grid, 2001);
  EXPECT_NEAR(sweep.spectrum.upper(), 2.0 * std::sqrt(2.0), 2e-3);
  EXPECT_NEAR(sweep.spectrum.lower(), -2.0 * std::sqrt(2.0), 2e-3);
  EXPECT_THROW(comb_sweep(grid, 2000), parameter_error);
}

TEST(Counterexample, GapCertificate) {
  for (int d = 3; d <= 12; ++d) {
    auto c = certify_counterexample_gap(d);
    EXPECT_EQ(c.kind, EigenvalueCertificate::Kind::not_in_spectrum);
    EXPECT_GT(c.witness, 0.0);
    EXPECT_GT(c.margin, 0.0);
    // 1 - m_T m_N at z = d from the two closed forms.
    complex z(static_cast<double>(d), 0.0);
    EXPECT_NEAR(c.witness, std::abs(1.0 - m_tree(z, d) * m_halfline_free(z)), 1e-12);
  }
  EXPECT_NEAR(certify_counterexample_gap(6).witness, 0.964255650989, 1e-11);
  EXPECT_THROW(certify_counterexample_gap(2), parameter_error);
  EXPECT_TRUE(is_perfect_square(49));
  EXPECT_FALSE(is_perfect_square(32));
}

TEST(Counterexample, WitnessAgainstGluedTreeResolvent) {
  // Root resolvent ratio m_T / m on the glued tree, with the tree and the
  // half-line replaced by their radial chains.
  const int d = 6;
  const std::size_t depth = 400;
  std::vector<double> a(2 * depth, 1.0), b(2 * depth + 1, 0.0);
  for (std::size_t l = 0; l < depth; ++l) a[depth + l] = l == 0 ? std::sqrt(6.0) : std::sqrt(5.0);
  std::vector<double> ta(a.begin() + depth, a.end()), tb(depth + 1, 0.0);
  const complex z(6.0, 0.0);
  complex ratio = oracle::banded_resolvent(ta, tb, z, 0) / oracle::banded_resolvent(a, b, z, depth);
  EXPECT_NEAR(ratio.real(), certify_counterexample_gap(d).witness, 1e-9);
}
