#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "spectra/dense_matrix.hpp"
#include "spectra/error.hpp"

namespace spectra {

/// Canonical labelling of a rooted weighted graph given by a symmetric matrix
/// (off-diagonal nonzeros are edges) together with a distance-from-root
/// vector. Entries are quantised to multiples of `quantum` before comparison.
struct CanonicalForm {
  std::vector<std::size_t> order;       // order[p] = local index placed at canonical position p
  std::vector<std::int64_t> certificate;  // equal iff isomorphic (root-preserving, quantised entries)
  std::uint64_t hash = 0;

  std::string hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
  }
};

inline std::uint64_t fnv1a(const std::vector<std::int64_t>& words) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int64_t w : words) {
    auto u = static_cast<std::uint64_t>(w);
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

namespace detail {

class Canonicalizer {
 public:
  Canonicalizer(const DenseMatrix& m, const std::vector<std::size_t>& distance, double quantum)
      : n_(m.rows()), dist_(distance) {
    if (!m.square() || distance.size() != n_) throw dimension_error("canonical_form: size mismatch");
    if (!(quantum > 0.0)) throw parameter_error("canonical_form: quantum must be positive");
    diag_.resize(n_);
    adj_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      diag_[i] = std::llround(m(i, i) / quantum);
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j) continue;
        std::int64_t w = std::llround(m(i, j) / quantum);
        if (w != 0) adj_[i].push_back({j, w});
      }
    }
  }

  CanonicalForm run() {
    std::vector<std::size_t> colour(n_);
    {
      std::vector<std::vector<std::int64_t>> keys(n_);
      for (std::size_t i = 0; i < n_; ++i)
        keys[i] = {static_cast<std::int64_t>(dist_[i]), diag_[i], static_cast<std::int64_t>(adj_[i].size())};
      colour = rank(keys);
    }
    refine(colour);
    std::vector<std::size_t> prefix;
    search(colour, prefix, 0, true);
    CanonicalForm out;
    out.order = best_order_;
    out.certificate = best_cert_;
    out.hash = fnv1a(best_cert_);
    return out;
  }

 private:
  struct Edge {
    std::size_t to;
    std::int64_t w;
  };

  static std::vector<std::size_t> rank(const std::vector<std::vector<std::int64_t>>& keys) {
    std::vector<std::vector<std::int64_t>> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::size_t> out(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
      out[i] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
    return out;
  }

  static std::size_t count_colours(const std::vector<std::size_t>& c) {
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
  }

  // Colour refinement to the coarsest stable partition finer than `colour`.
  void refine(std::vector<std::size_t>& colour) const {
    std::size_t k = count_colours(colour);
    while (true) {
      std::vector<std::vector<std::int64_t>> keys(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        std::vector<std::pair<std::int64_t, std::int64_t>> nb;
        nb.reserve(adj_[i].size());
        for (const Edge& e : adj_[i]) nb.emplace_back(static_cast<std::int64_t>(colour[e.to]), e.w);
        std::sort(nb.begin(), nb.end());
        auto& key = keys[i];
        key.reserve(1 + 2 * nb.size());
        key.push_back(static_cast<std::int64_t>(colour[i]));
        for (auto [c, w] : nb) {
          key.push_back(c);
          key.push_back(w);
        }
      }
      colour = rank(keys);
      std::size_t k2 = count_colours(colour);
      if (k2 == k) return;
      k = k2;
    }
  }

  std::vector<std::int64_t> certificate(const std::vector<std::size_t>& colour, std::vector<std::size_t>& order) const {
    order.assign(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) order[colour[i]] = i;
    std::vector<std::int64_t> cert;
    cert.push_back(static_cast<std::int64_t>(n_));
    for (std::size_t p = 0; p < n_; ++p) {
      cert.push_back(static_cast<std::int64_t>(dist_[order[p]]));
      cert.push_back(diag_[order[p]]);
    }
    std::vector<std::array<std::int64_t, 3>> edges;
    for (std::size_t p = 0; p < n_; ++p)
      for (const Edge& e : adj_[order[p]]) {
        auto q = static_cast<std::int64_t>(colour[e.to]);
        if (static_cast<std::int64_t>(p) < q) edges.push_back({static_cast<std::int64_t>(p), q, e.w});
      }
    std::sort(edges.begin(), edges.end());
    for (const auto& e : edges) cert.insert(cert.end(), e.begin(), e.end());
    return cert;
  }

  // Orbit representatives of `cell` under the automorphisms fixing `prefix` pointwise.
  std::vector<std::size_t> orbit_find(const std::vector<std::size_t>& prefix) const {
    std::vector<std::size_t> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& g : automorphisms_) {
      bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](std::size_t v) { return g[v] == v; });
      if (!fixes) continue;
      for (std::size_t v = 0; v < n_; ++v) {
        std::size_t a = find(v), b = find(g[v]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
    for (std::size_t v = 0; v < n_; ++v) parent[v] = find(v);
    return parent;
  }

  // Returns the search level to jump back to, or SIZE_MAX to continue normally.
  std::size_t search(const std::vector<std::size_t>& colour, std::vector<std::size_t>& prefix,
                     std::size_t diverged_at, bool on_first_path) {
    std::size_t k = count_colours(colour);
    if (k == n_) {
      std::vector<std::size_t> order;
      auto cert = certificate(colour, order);
      if (first_order_.empty()) {
        first_order_ = order;
        first_cert_ = cert;
        best_order_ = order;
        best_cert_ = cert;
        return SIZE_MAX;
      }
      if (cert == first_cert_) {
        // order maps canonical positions to vertices; compose with the first leaf.
        std::vector<std::size_t> g(n_);
        for (std::size_t p = 0; p < n_; ++p) g[first_order_[p]] = order[p];
        automorphisms_.push_back(std::move(g));
        return diverged_at;
      }
      if (cert < best_cert_) {
        best_cert_ = cert;
        best_order_ = order;
      }
      return SIZE_MAX;
    }

    // Target cell: the first (lowest colour) non-singleton cell.
    std::vector<std::size_t> size(k, 0);
    for (std::size_t c : colour) ++size[c];
    std::size_t target = 0;
    while (size[target] < 2) ++target;
    std::vector<std::size_t> cell;
    for (std::size_t v = 0; v < n_; ++v)
      if (colour[v] == target) cell.push_back(v);

    const std::size_t level = prefix.size();
    std::vector<char> done(n_, 0);
    for (std::size_t idx = 0; idx < cell.size(); ++idx) {
      std::size_t v = cell[idx];
      auto orbit = orbit_find(prefix);
      bool redundant = false;
      for (std::size_t u : cell)
        if (done[u] && orbit[u] == orbit[v]) redundant = true;
      if (redundant) continue;
      done[v] = 1;

      std::vector<std::vector<std::int64_t>> keys(n_);
      for (std::size_t i = 0; i < n_; ++i)
        keys[i] = {static_cast<std::int64_t>(colour[i]), i == v ? 0 : 1};
      auto child = rank(keys);
      refine(child);
      prefix.push_back(v);
      bool first_child = on_first_path && idx == 0;
      std::size_t jump = search(child, prefix, first_child ? diverged_at : (on_first_path ? level : diverged_at),
                                first_child);
      prefix.pop_back();
      if (jump != SIZE_MAX && jump < level) return jump;
    }
    return SIZE_MAX;
  }

  std::size_t n_;
  std::vector<std::size_t> dist_;
  std::vector<std::int64_t> diag_;
  std::vector<std::vector<Edge>> adj_;
  std::vector<std::size_t> first_order_, best_order_;
  std::vector<std::int64_t> first_cert_, best_cert_;
  std::vector<std::vector<std::size_t>> automorphisms_;
};

}  // namespace detail

/// Canonical form of a rooted weighted graph (matrix + distances from the
/// root) by individualisation-refinement with automorphism pruning.
inline CanonicalForm canonical_form(const DenseMatrix& m, const std::vector<std::size_t>& distance, double quantum) {
  if (m.rows() == 0) {
    CanonicalForm out;
    out.certificate = {0};
    out.hash = fnv1a(out.certificate);
    return out;
  }
  return detail::Canonicalizer(m, distance, quantum).run();
}

/// The matrix permuted into canonical order.
inline DenseMatrix permute(const DenseMatrix& m, const std::vector<std::size_t>& order) {
  DenseMatrix out(order.size(), order.size());
  for (std::size_t p = 0; p < order.size(); ++p)
    for (std::size_t q = 0; q < order.size(); ++q) out(p, q) = m(order[p], order[q]);
  return out;
}

}  // namespace spectra
