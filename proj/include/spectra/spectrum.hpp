#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "spectra/eigensolve.hpp"
#include "spectra/error.hpp"
#include "spectra/graph.hpp"
#include "spectra/operator.hpp"

namespace spectra {

/// Balls with more vertices than this are handled by Lanczos instead of the
/// dense solver.
inline constexpr std::size_t dense_limit = 4000;

struct SpectrumOptions {
  double gap_threshold = 0.0;        // <= 0 selects default_gap_threshold
  bool residual_certificates = false;  // dense path only
  std::size_t lanczos_steps = 1500;
};

/// Finite-section spectrum of H around `center`: eigenvalues of the largest
/// ball truncation, clustered into intervals, with the Hausdorff distance
/// between consecutive radii as a stability report.
inline SpectrumApproximation spectrum_approx(const SchrodingerOperator& h, vertex_id center,
                                             const std::vector<std::size_t>& radii,
                                             const SpectrumOptions& opt = {}) {
  if (radii.empty()) throw parameter_error("spectrum_approx: no radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw parameter_error("spectrum_approx: radii must increase");
  auto dist = bfs_distances(h.graph(), center);
  std::size_t ecc = *std::max_element(dist.begin(), dist.end());
  if (radii.back() > ecc)
    throw parameter_error("spectrum_approx: radius " + std::to_string(radii.back()) + " exceeds the graph (eccentricity " +
                          std::to_string(ecc) + ")");

  SpectrumApproximation out;
  std::vector<double> previous;
  for (std::size_t idx = 0; idx < radii.size(); ++idx) {
    BallView view = ball(h.graph(), center, radii[idx]);
    bool last = idx + 1 == radii.size();
    std::vector<double> eigs;
    if (view.size() <= dense_limit) {
      DenseMatrix m = h.restrict_to(view.members, view.index_of);
      bool vectors = last && opt.residual_certificates;
      auto dec = eig_sym_dense(m, vectors);
      eigs = dec.values;
      if (vectors) {
        std::vector<double> certs;
        for (std::size_t k = 0; k < eigs.size(); ++k) {
          auto col = dec.vectors->column(k);
          auto psi = extend_by_zero<double>(view, col, h.dimension());
          certs.push_back(weyl_residual(h, psi, eigs[k]));
        }
        out.residual_certificates = std::move(certs);
      }
    } else {
      // Matrix-free Lanczos on the restriction, started at the centre.
      std::vector<std::vector<std::size_t>> local(view.size());
      std::vector<double> diag(view.size());
      for (std::size_t i = 0; i < view.size(); ++i) {
        diag[i] = h.diagonal(view.members[i]);
        for (vertex_id u : h.graph().neighbors(view.members[i])) {
          auto it = view.index_of.find(u);
          if (it != view.index_of.end()) local[i].push_back(it->second);
        }
      }
      std::vector<double> start(view.size(), 0.0);
      start[0] = 1.0;
      eigs = lanczos_ritz_values(
          view.size(),
          [&](std::span<const double> x, std::span<double> y) {
            for (std::size_t i = 0; i < x.size(); ++i) {
              double s = diag[i] * x[i];
              for (std::size_t j : local[i]) s += x[j];
              y[i] = s;
            }
          },
          start, opt.lanczos_steps);
    }
    if (!previous.empty()) out.stability.push_back(hausdorff_distance(previous, eigs));
    previous = eigs;
    if (last) {
      out.eigenvalues = std::move(eigs);
      out.truncation_radius = radii[idx];
    }
  }
  out.gap_threshold = opt.gap_threshold > 0.0 ? opt.gap_threshold : default_gap_threshold(out.eigenvalues);
  out.intervals = cluster_intervals(out.eigenvalues, out.gap_threshold);
  return out;
}

/// Spectrum approximation from an explicit eigenvalue list.
inline SpectrumApproximation approximation_from(std::vector<double> eigenvalues, double gap_threshold = 0.0) {
  std::sort(eigenvalues.begin(), eigenvalues.end());
  SpectrumApproximation out;
  out.gap_threshold = gap_threshold > 0.0 ? gap_threshold : default_gap_threshold(eigenvalues);
  out.intervals = cluster_intervals(eigenvalues, out.gap_threshold);
  out.eigenvalues = std::move(eigenvalues);
  return out;
}

}  // namespace spectra
