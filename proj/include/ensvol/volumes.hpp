#pragma once

// Principal-minor volume invariants of overlap matrices: the determinant of
// the submatrix on a subset of states measures the squared volume spanned by
// those states, is invariant under phase changes of individual states, and
// assembles (with probability products) into the elementary symmetric
// polynomials of the gram spectrum.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ensvol/calculus.hpp"
#include "ensvol/common.hpp"
#include "ensvol/ensemble.hpp"
#include "ensvol/spectral.hpp"

namespace ensvol {

// A strictly increasing list of 1-based state labels, at least two of them
// (single-state volumes are identically 1).
struct SubsetIndex {
  std::vector<int> labels;

  explicit SubsetIndex(std::vector<int> in) : labels(std::move(in)) {
    if (labels.size() < 2) {
      throw std::invalid_argument("SubsetIndex: need at least two labels");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] < 1) {
        throw std::invalid_argument("SubsetIndex: labels are 1-based");
      }
      if (i > 0 && labels[i] <= labels[i - 1]) {
        throw std::invalid_argument("SubsetIndex: labels must strictly increase");
      }
    }
  }

  int size() const { return static_cast<int>(labels.size()); }

  bool operator<(const SubsetIndex& other) const {
    if (labels.size() != other.labels.size()) {
      return labels.size() < other.labels.size();
    }
    return labels < other.labels;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(labels[i]);
    }
    return s;
  }
};

// Volume invariant of one subset: the principal minor det A_u.  Real and
// nonnegative for admissible overlap matrices; equals the squared volume of
// the parallelepiped spanned by the subset's states.
inline double alpha(const OverlapMatrix& a, const SubsetIndex& u) {
  const int k = a.size();
  if (u.labels.back() > k) {
    throw std::invalid_argument("alpha: subset label " +
                                std::to_string(u.labels.back()) +
                                " exceeds the number of states " + std::to_string(k));
  }
  const int m = u.size();
  Eigen::MatrixXcd sub(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      sub(i, j) = a(u.labels[static_cast<std::size_t>(i)] - 1,
                    u.labels[static_cast<std::size_t>(j)] - 1);
    }
  }
  const std::complex<double> det = Eigen::FullPivLU<Eigen::MatrixXcd>(sub).determinant();
  if (std::abs(det.imag()) > tol::det_imag_reject) {
    throw std::runtime_error("alpha: determinant has imaginary part " +
                             std::to_string(det.imag()) +
                             " (numerical integrity failure)");
  }
  return det.real();
}

// All volume invariants of subsets of size 2..min(n, k); any subset larger
// than the ambient dimension n has volume exactly 0 and is not stored.
struct VolumeInvariants {
  int k = 0;  // number of states
  int n = 0;  // ambient dimension bound
  std::map<SubsetIndex, double> values;

  // Stored value, or the exact structural zero for oversized subsets.
  double value(const SubsetIndex& u) const {
    if (u.size() > n) return 0.0;
    auto it = values.find(u);
    if (it == values.end()) {
      throw std::invalid_argument("VolumeInvariants: subset {" + u.to_string() +
                                  "} not present for k=" + std::to_string(k));
    }
    return it->second;
  }
};

namespace detail {

// Enumerate strictly increasing label lists of the given size in [1, k],
// lexicographically.
template <class Visit>
void for_each_subset(int k, int size, Visit&& visit) {
  std::vector<int> labels(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) labels[static_cast<std::size_t>(i)] = i + 1;
  for (;;) {
    visit(labels);
    int pos = size - 1;
    while (pos >= 0 && labels[static_cast<std::size_t>(pos)] == k - (size - 1 - pos)) {
      --pos;
    }
    if (pos < 0) return;
    ++labels[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < size; ++j) {
      labels[static_cast<std::size_t>(j)] = labels[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace detail

// Computes every stored volume invariant of the overlap matrix, bounded by
// ambient dimension n.
inline VolumeInvariants all_alphas(const OverlapMatrix& a, int n) {
  if (n < 1) throw std::invalid_argument("all_alphas: dimension must be >= 1");
  VolumeInvariants out;
  out.k = a.size();
  out.n = n;
  const int max_size = std::min(n, out.k);
  for (int size = 2; size <= max_size; ++size) {
    detail::for_each_subset(out.k, size, [&](const std::vector<int>& labels) {
      SubsetIndex u{std::vector<int>(labels)};
      const double v = alpha(a, u);
      out.values.emplace(std::move(u), v);
    });
  }
  return out;
}

// Elementary symmetric polynomials of the gram spectrum assembled from
// volume invariants:  s_q = sum_{|u|=q} (prod_{i in u} p_i) alpha_u, with
// s_1 = sum p_i.  Returns s_0..s_min(n,k).
inline SymmetricPolys symmetric_polys_from_alphas(const VolumeInvariants& v,
                                                  const std::vector<double>& probs) {
  if (static_cast<int>(probs.size()) != v.k) {
    throw std::invalid_argument("symmetric_polys_from_alphas: probability count " +
                                std::to_string(probs.size()) +
                                " != state count " + std::to_string(v.k));
  }
  const int max_size = std::min(v.n, v.k);
  // Integrity: the invariant table must be complete for every stored size.
  std::vector<long long> counts(static_cast<std::size_t>(max_size) + 1, 0);
  for (const auto& [u, val] : v.values) {
    (void)val;
    if (u.size() <= max_size) ++counts[static_cast<std::size_t>(u.size())];
  }
  for (int size = 2; size <= max_size; ++size) {
    const long long expected = detail::binomial_ll(v.k, size);
    if (counts[static_cast<std::size_t>(size)] != expected) {
      throw std::invalid_argument(
          "symmetric_polys_from_alphas: invariant table incomplete at size " +
          std::to_string(size) + " (" +
          std::to_string(counts[static_cast<std::size_t>(size)]) + " of " +
          std::to_string(expected) + ")");
    }
  }

  std::vector<double> s(static_cast<std::size_t>(max_size) + 1, 0.0);
  s[0] = 1.0;
  for (double p : probs) s[1] += p;
  for (const auto& [u, val] : v.values) {
    if (u.size() > max_size) continue;
    double pprod = 1.0;
    for (int label : u.labels) pprod *= probs[static_cast<std::size_t>(label - 1)];
    s[static_cast<std::size_t>(u.size())] += pprod * val;
  }
  return SymmetricPolys(std::move(s));
}

// Entropy sensitivity to one volume invariant at fixed probabilities:
// dS/dalpha_u = (prod_{i in u} p_i) * dS/ds_q with q = |u|, evaluated on the
// positive part of the gram spectrum.  Eigenvalue pairs closer than
// gap_threshold are treated confluently (the derivative path) rather than
// risking a noisy difference quotient.
inline double dS_dalpha(const Ensemble& e, const SubsetIndex& u,
                        double gap_threshold = 1e-6) {
  if (u.labels.back() > e.size()) {
    throw std::invalid_argument("dS_dalpha: subset label exceeds state count");
  }
  if (!(gap_threshold >= 0.0)) {
    throw std::invalid_argument("dS_dalpha: negative gap threshold");
  }
  const std::vector<double> pos = gram_spectrum(e).positive_part();
  const int n_eff = static_cast<int>(pos.size());
  const int q = u.size();
  if (q > n_eff) {
    throw std::domain_error(
        "dS_dalpha: subset size " + std::to_string(q) +
        " exceeds the effective rank " + std::to_string(n_eff) +
        "; that coordinate is frozen at zero");
  }
  double pprod = 1.0;
  for (int label : u.labels) pprod *= e.prob(label - 1);
  return pprod * dS_ds(Spectrum(pos), q, std::max(gap_threshold, tol::confluence_gap));
}

}  // namespace ensvol
