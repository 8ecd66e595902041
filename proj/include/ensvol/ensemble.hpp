#pragma once

// Weighted families of pure states, their overlap/gram/density matrices, and
// reconstruction of a state family from a prescribed overlap matrix.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ensvol/common.hpp"
#include "ensvol/spectral.hpp"

namespace ensvol {

// A unit-norm vector in C^n.
class PureState {
 public:
  explicit PureState(Eigen::VectorXcd amplitudes)
      : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) {
      throw std::invalid_argument("PureState: empty amplitude vector");
    }
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > tol::state_norm) {
      throw std::invalid_argument("PureState: norm deviates from 1 by " +
                                  std::to_string(std::abs(norm - 1.0)));
    }
  }

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

  // <this|other>, conjugate-linear in the first slot.
  std::complex<double> inner(const PureState& other) const {
    return amplitudes_.dot(other.amplitudes_);
  }

 private:
  Eigen::VectorXcd amplitudes_;
};

// A finite family of pure states with strictly positive unit-sum weights.
class Ensemble {
 public:
  Ensemble(std::vector<PureState> states, std::vector<double> probs)
      : states_(std::move(states)), probs_(std::move(probs)) {
    if (states_.empty()) throw std::invalid_argument("Ensemble: no states");
    if (probs_.size() != states_.size()) {
      throw std::invalid_argument("Ensemble: " + std::to_string(states_.size()) +
                                  " states but " + std::to_string(probs_.size()) +
                                  " probabilities");
    }
    const int dim = states_.front().dim();
    for (std::size_t i = 1; i < states_.size(); ++i) {
      if (states_[i].dim() != dim) {
        throw std::invalid_argument("Ensemble: state " + std::to_string(i) +
                                    " has dimension " +
                                    std::to_string(states_[i].dim()) +
                                    ", expected " + std::to_string(dim));
      }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      if (!(probs_[i] >= tol::prob_floor)) {
        throw std::invalid_argument("Ensemble: probability " +
                                    std::to_string(probs_[i]) + " at index " +
                                    std::to_string(i) +
                                    " is below the strict positivity floor");
      }
      total += probs_[i];
    }
    if (std::abs(total - 1.0) > tol::prob_sum) {
      throw std::invalid_argument("Ensemble: probabilities sum to " +
                                  std::to_string(total) + ", expected 1");
    }
  }

  int size() const { return static_cast<int>(states_.size()); }
  int dim() const { return states_.front().dim(); }
  const std::vector<PureState>& states() const { return states_; }
  const std::vector<double>& probs() const { return probs_; }
  const PureState& state(int i) const { return states_[static_cast<std::size_t>(i)]; }
  double prob(int i) const { return probs_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<PureState> states_;
  std::vector<double> probs_;
};

namespace detail {

inline void check_overlap_shape(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument("overlap matrix: must be square and non-empty");
  }
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol::hermitian) {
    throw std::invalid_argument("overlap matrix: deviates from Hermitian by " +
                                std::to_string(asym));
  }
  for (int i = 0; i < m.rows(); ++i) {
    const std::complex<double> d = m(i, i);
    if (std::abs(d - std::complex<double>(1.0, 0.0)) > tol::unit_diagonal) {
      throw std::invalid_argument("overlap matrix: diagonal entry " +
                                  std::to_string(i) + " deviates from 1");
    }
  }
  const std::vector<double> eigs = hermitian_eigenvalues_raw(m, tol::hermitian);
  if (eigs.back() < tol::psd_slack) {
    throw std::invalid_argument(
        "overlap matrix: not positive semidefinite (min eigenvalue " +
        std::to_string(eigs.back()) + ")");
  }
}

}  // namespace detail

// Matrix of pairwise inner products a_ij = <psi_i|psi_j>: Hermitian, unit
// diagonal, positive semidefinite (within documented slack).
class OverlapMatrix {
 public:
  static OverlapMatrix from_matrix(Eigen::MatrixXcd m) {
    detail::check_overlap_shape(m);
    return OverlapMatrix(std::move(m));
  }

  int size() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXcd& mat() const { return mat_; }
  std::complex<double> operator()(int i, int j) const { return mat_(i, j); }

 private:
  explicit OverlapMatrix(Eigen::MatrixXcd m) : mat_(std::move(m)) {}
  Eigen::MatrixXcd mat_;
};

// Weighted overlap matrix g_ij = sqrt(p_i p_j) a_ij: Hermitian, PSD, unit
// trace.  Shares its nonzero spectrum with the ensemble's density matrix.
class GramMatrix {
 public:
  static GramMatrix from_matrix(Eigen::MatrixXcd m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
      throw std::invalid_argument("gram matrix: must be square and non-empty");
    }
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol::hermitian) {
      throw std::invalid_argument("gram matrix: deviates from Hermitian by " +
                                  std::to_string(asym));
    }
    const double trace_dev = std::abs(m.trace() - std::complex<double>(1.0, 0.0));
    if (trace_dev > tol::trace_one) {
      throw std::invalid_argument("gram matrix: trace deviates from 1 by " +
                                  std::to_string(trace_dev));
    }
    const std::vector<double> eigs = detail::hermitian_eigenvalues_raw(m, tol::hermitian);
    if (eigs.back() < tol::psd_slack) {
      throw std::invalid_argument(
          "gram matrix: not positive semidefinite (min eigenvalue " +
          std::to_string(eigs.back()) + ")");
    }
    return GramMatrix(std::move(m));
  }

  int size() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXcd& mat() const { return mat_; }
  std::complex<double> operator()(int i, int j) const { return mat_(i, j); }

 private:
  explicit GramMatrix(Eigen::MatrixXcd m) : mat_(std::move(m)) {}
  Eigen::MatrixXcd mat_;
};

// Pairwise overlap matrix of the ensemble's states.
inline OverlapMatrix overlap_matrix(const Ensemble& e) {
  const int k = e.size();
  Eigen::MatrixXcd m(k, k);
  for (int i = 0; i < k; ++i) {
    m(i, i) = 1.0;
    for (int j = i + 1; j < k; ++j) {
      const std::complex<double> a = e.state(i).inner(e.state(j));
      m(i, j) = a;
      m(j, i) = std::conj(a);
    }
  }
  return OverlapMatrix::from_matrix(std::move(m));
}

// Probability-weighted overlap matrix Q A Q with Q = diag(sqrt(p_i)).
inline GramMatrix gram_matrix(const Ensemble& e) {
  const OverlapMatrix a = overlap_matrix(e);
  const int k = e.size();
  Eigen::MatrixXcd g(k, k);
  for (int i = 0; i < k; ++i) {
    const double si = std::sqrt(e.prob(i));
    for (int j = 0; j < k; ++j) {
      g(i, j) = si * std::sqrt(e.prob(j)) * a(i, j);
    }
  }
  return GramMatrix::from_matrix(std::move(g));
}

// Mixture density operator sum_i p_i |psi_i><psi_i| on the ambient space.
inline Eigen::MatrixXcd density_matrix(const Ensemble& e) {
  const int n = e.dim();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < e.size(); ++i) {
    const Eigen::VectorXcd& v = e.state(i).amplitudes();
    rho.noalias() += e.prob(i) * (v * v.adjoint());
  }
  return rho;
}

// Eigenvalues of the gram matrix (descending); these are the mixture's
// nonzero density eigenvalues padded with structural zeros up to k.
inline Spectrum gram_spectrum(const Ensemble& e) {
  Spectrum x = eigenvalues_hermitian(gram_matrix(e).mat());
  if (std::abs(x.sum() - 1.0) > tol::spectrum_sum) {
    throw std::runtime_error("gram_spectrum: eigenvalue sum deviates from 1 by " +
                             std::to_string(std::abs(x.sum() - 1.0)));
  }
  return x;
}

// Eigenvalues of the density matrix (descending, length = ambient dimension).
inline Spectrum density_spectrum(const Ensemble& e) {
  Spectrum x = eigenvalues_hermitian(density_matrix(e));
  if (std::abs(x.sum() - 1.0) > tol::spectrum_sum) {
    throw std::runtime_error("density_spectrum: eigenvalue sum deviates from 1 by " +
                             std::to_string(std::abs(x.sum() - 1.0)));
  }
  return x;
}

// Number of gram eigenvalues above the structural-zero cutoff.
inline int effective_rank(const Ensemble& e) {
  return static_cast<int>(gram_spectrum(e).positive_part().size());
}

// Reconstructs a state family realizing the given overlap matrix, in
// dimension equal to the matrix rank.  Full-rank inputs use the plain
// lower-triangular factorization (which fixes the gauge); a pivot engages
// only when a diagonal update falls below 1e-12, handling rank-deficient
// input down to its numerical rank.
inline Ensemble ensemble_from_overlaps(const OverlapMatrix& a,
                                       std::vector<double> probs) {
  const int k = a.size();
  if (static_cast<int>(probs.size()) != k) {
    throw std::invalid_argument("ensemble_from_overlaps: probability count " +
                                std::to_string(probs.size()) + " != matrix size " +
                                std::to_string(k));
  }
  const Eigen::MatrixXcd& m = a.mat();

  Eigen::MatrixXcd factor = Eigen::MatrixXcd::Zero(k, k);
  int rank = k;
  bool deficient = false;

  // Plain lower-triangular pass (column j eliminates state j).
  for (int j = 0; j < k; ++j) {
    std::complex<double> acc = m(j, j);
    for (int c = 0; c < j; ++c) acc -= factor(j, c) * std::conj(factor(j, c));
    const double d = acc.real();
    if (d <= 1e-12) {
      deficient = true;
      break;
    }
    const double ljj = std::sqrt(d);
    factor(j, j) = ljj;
    for (int i = j + 1; i < k; ++i) {
      std::complex<double> s = m(i, j);
      for (int c = 0; c < j; ++c) s -= factor(i, c) * std::conj(factor(j, c));
      factor(i, j) = s / ljj;
    }
  }

  if (deficient) {
    // Diagonal-pivoted outer-product factorization; stops at numerical rank.
    factor.setZero();
    std::vector<double> diag(static_cast<std::size_t>(k));
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    std::vector<int> pivots;
    for (int i = 0; i < k; ++i) diag[static_cast<std::size_t>(i)] = m(i, i).real();
    for (int step = 0; step < k; ++step) {
      int best = -1;
      for (int i = 0; i < k; ++i) {
        if (!used[static_cast<std::size_t>(i)] &&
            (best < 0 || diag[static_cast<std::size_t>(i)] > diag[static_cast<std::size_t>(best)])) {
          best = i;
        }
      }
      if (best < 0 || diag[static_cast<std::size_t>(best)] <= 1e-12) {
        rank = step;
        break;
      }
      const double piv = std::sqrt(diag[static_cast<std::size_t>(best)]);
      factor(best, step) = piv;
      for (int i = 0; i < k; ++i) {
        if (used[static_cast<std::size_t>(i)] || i == best) continue;
        std::complex<double> s = m(i, best);
        for (int c = 0; c < step; ++c) {
          s -= factor(i, c) * std::conj(factor(best, c));
        }
        factor(i, step) = s / piv;
        diag[static_cast<std::size_t>(i)] -= std::norm(factor(i, step));
      }
      used[static_cast<std::size_t>(best)] = true;
      pivots.push_back(best);
    }
  }

  // States are the conjugated factor rows, renormalized to exact unit norm
  // (the residual deviation for admissible inputs is at the PSD slack scale).
  std::vector<PureState> states;
  states.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXcd v = factor.row(i).head(rank).conjugate().transpose();
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > 1e-6) {
      throw std::runtime_error(
          "ensemble_from_overlaps: reconstructed state norm " + std::to_string(norm) +
          " too far from 1; input is not an admissible overlap matrix");
    }
    v /= norm;
    states.emplace_back(std::move(v));
  }
  Ensemble result(std::move(states), std::move(probs));

  // Self-audit: the reconstruction must reproduce the input overlaps.
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const std::complex<double> back = result.state(i).inner(result.state(j));
      worst = std::max(worst, std::abs(back - m(i, j)));
    }
  }
  if (worst > tol::reconstruction) {
    throw std::runtime_error(
        "ensemble_from_overlaps: round-trip overlap error " + std::to_string(worst));
  }
  return result;
}

// A state drawn from the rotation-invariant (Haar) distribution on C^n.
inline PureState haar_state(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("haar_state: dimension must be >= 1");
  for (;;) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
    const double norm = v.norm();
    if (norm > 1e-6) {
      v /= norm;
      return PureState(std::move(v));
    }
  }
}

enum class ProbMode { uniform, dirichlet, fixed };

// Random ensemble of k Haar states in dimension n with weights chosen by
// mode: equal weights, a flat-Dirichlet draw, or caller-supplied values.
// Deterministic for a given seed.
inline Ensemble random_ensemble(int k, int n, ProbMode mode, std::uint64_t seed,
                                std::vector<double> fixed_probs = {}) {
  if (k < 1) throw std::invalid_argument("random_ensemble: need k >= 1 states");
  if (n < 1) throw std::invalid_argument("random_ensemble: need dimension n >= 1");
  Rng rng(seed);
  std::vector<PureState> states;
  states.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) states.push_back(haar_state(n, rng));

  std::vector<double> probs;
  switch (mode) {
    case ProbMode::uniform:
      probs.assign(static_cast<std::size_t>(k), 1.0 / k);
      break;
    case ProbMode::dirichlet:
      probs = rng.simplex_point(k);
      break;
    case ProbMode::fixed:
      if (static_cast<int>(fixed_probs.size()) != k) {
        throw std::invalid_argument(
            "random_ensemble: fixed mode needs exactly k probabilities");
      }
      probs = std::move(fixed_probs);
      break;
  }
  return Ensemble(std::move(states), std::move(probs));
}

}  // namespace ensvol
