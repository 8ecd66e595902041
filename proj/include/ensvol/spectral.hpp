#pragma once

// Spectra of unit-trace positive matrices, von Neumann entropy, elementary
// symmetric polynomials, and the return trip from symmetric-polynomial
// coordinates to eigenvalues via the companion matrix.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ensvol/common.hpp"

namespace ensvol {

// Descending list of eigenvalues of a unit-trace positive operator.  Values
// may touch 0 and 1 exactly; inputs outside [-1e-10, 1+1e-10] are rejected,
// and admissible slack is clamped onto [0, 1].
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
      throw std::invalid_argument("Spectrum: empty value list");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      double v = values_[i];
      if (!(v >= -tol::spectrum_window && v <= 1.0 + tol::spectrum_window)) {
        throw std::invalid_argument(
            "Spectrum: value " + std::to_string(v) + " at index " +
            std::to_string(i) + " is outside [0, 1] beyond tolerance");
      }
      values_[i] = std::min(1.0, std::max(0.0, v));
    }
    std::sort(values_.begin(), values_.end(), std::greater<double>());
  }

  int size() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

  double sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
  }

  double min_value() const { return values_.back(); }
  double max_value() const { return values_.front(); }

  // Smallest pairwise distance between eigenvalues (descending order makes
  // adjacent differences sufficient).  Returns +inf for a single value.
  double min_gap() const {
    if (values_.size() < 2) return std::numeric_limits<double>::infinity();
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
      g = std::min(g, values_[i] - values_[i + 1]);
    }
    return g;
  }

  // Values strictly above the structural-zero cutoff, still descending.
  std::vector<double> positive_part(double cutoff = tol::structural_zero) const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (double v : values_) {
      if (v > cutoff) out.push_back(v);
    }
    return out;
  }

 private:
  std::vector<double> values_;
};

// Elementary symmetric polynomial values s_0..s_n of a spectrum; s_0 == 1.
struct SymmetricPolys {
  std::vector<double> s;

  explicit SymmetricPolys(std::vector<double> values) : s(std::move(values)) {
    if (s.empty()) throw std::invalid_argument("SymmetricPolys: empty");
    if (std::abs(s[0] - 1.0) > tol::prob_sum) {
      throw std::invalid_argument("SymmetricPolys: s_0 must equal 1");
    }
    s[0] = 1.0;
  }

  int order() const { return static_cast<int>(s.size()) - 1; }
  double operator[](int q) const { return s[static_cast<std::size_t>(q)]; }
};

namespace detail {

// Eigenvalues of a Hermitian matrix with no range restriction (used for
// validating overlap matrices, whose eigenvalues may exceed 1).
inline std::vector<double> hermitian_eigenvalues_raw(const Eigen::MatrixXcd& m,
                                                     double gate = tol::hermitian_eigen) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian eigenvalues: matrix is not square");
  }
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > gate) {
    throw std::invalid_argument(
        "hermitian eigenvalues: input deviates from Hermitian by " +
        std::to_string(asym));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian eigenvalues: eigensolver failed");
  }
  std::vector<double> vals(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + m.rows());
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  return vals;
}

// -sum x ln x over arbitrary positive values (no unit-sum or [0,1]
// restriction; used on lifted root sets during finite differencing).
inline double shannon_like(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) {
    if (v > 0.0) s -= v * std::log(v);
  }
  return s;
}

// Elementary symmetric polynomials of arbitrary values (product recurrence).
inline std::vector<double> symmetric_polys_raw(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> s(n + 1, 0.0);
  s[0] = 1.0;
  std::size_t used = 0;
  for (double x : values) {
    ++used;
    for (std::size_t j = std::min(used, n); j >= 1; --j) {
      s[j] += x * s[j - 1];
    }
  }
  return s;
}

// Roots of the monic polynomial whose coefficients are given by elementary
// symmetric values: p(x) = sum_i (-1)^(n-i) s_{n-i} x^i.  Throws
// RealizabilityError when roots stray off the real nonnegative axis beyond
// the documented gates; residue inside the gates is cleaned up.
inline std::vector<double> roots_from_sympoly_raw(std::span<const double> s) {
  if (s.size() < 2) {
    throw std::invalid_argument("root extraction: need s_0..s_n with n >= 1");
  }
  const int n = static_cast<int>(s.size()) - 1;
  if (std::abs(s[0] - 1.0) > tol::prob_sum) {
    throw std::invalid_argument("root extraction: s_0 must equal 1");
  }
  if (n == 1) {
    if (s[1] < tol::root_negative) {
      throw RealizabilityError("root extraction: negative root " + std::to_string(s[1]));
    }
    return {std::max(0.0, s[1])};
  }
  // Companion matrix of x^n + c_{n-1} x^{n-1} + ... + c_0 with
  // c_i = (-1)^(n-i) s_{n-i}.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) companion(i + 1, i) = 1.0;
  for (int i = 0; i < n; ++i) {
    const double coeff = ((n - i) % 2 == 0 ? 1.0 : -1.0) * s[static_cast<std::size_t>(n - i)];
    companion(i, n - 1) = -coeff;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("root extraction: eigensolver failed");
  }
  std::vector<double> roots;
  roots.reserve(static_cast<std::size_t>(n));
  double worst_imag = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> r = solver.eigenvalues()(i);
    worst_imag = std::max(worst_imag, std::abs(r.imag()));
    roots.push_back(r.real());
  }
  if (worst_imag > tol::root_imag) {
    throw RealizabilityError(
        "root extraction: complex roots (max imaginary part " +
        std::to_string(worst_imag) +
        "); the symmetric-polynomial point has no real spectrum");
  }
  for (double& r : roots) {
    if (r < 0.0) {
      if (r < tol::root_negative) {
        throw RealizabilityError("root extraction: negative root " + std::to_string(r));
      }
      r = 0.0;
    }
  }
  std::sort(roots.begin(), roots.end(), std::greater<double>());
  return roots;
}

}  // namespace detail

// Eigenvalues of a Hermitian unit-trace positive matrix, descending.
inline Spectrum eigenvalues_hermitian(const Eigen::MatrixXcd& m) {
  return Spectrum(detail::hermitian_eigenvalues_raw(m));
}

struct EigenDecomposition {
  Spectrum spectrum;
  Eigen::MatrixXcd vectors;  // columns ordered to match the descending spectrum
};

// Full decomposition with a reconstruction-residual integrity check.
inline EigenDecomposition eigen_decomposition(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("eigen_decomposition: matrix is not square");
  }
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol::hermitian_eigen) {
    throw std::invalid_argument(
        "eigen_decomposition: input deviates from Hermitian by " + std::to_string(asym));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigen_decomposition: eigensolver failed");
  }
  const int n = static_cast<int>(m.rows());
  // Eigen returns ascending order; flip to descending.
  std::vector<double> vals(static_cast<std::size_t>(n));
  Eigen::MatrixXcd vecs(n, n);
  for (int i = 0; i < n; ++i) {
    vals[static_cast<std::size_t>(i)] = solver.eigenvalues()(n - 1 - i);
    vecs.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  Eigen::MatrixXcd reconstructed =
      vecs * Eigen::Map<const Eigen::VectorXd>(vals.data(), n).asDiagonal() * vecs.adjoint();
  const double scale = std::max(1e-30, m.norm());
  const double residual = (m - reconstructed).norm() / scale;
  if (residual > tol::decomposition_residual) {
    throw std::runtime_error(
        "eigen_decomposition: reconstruction residual " + std::to_string(residual));
  }
  return {Spectrum(std::move(vals)), std::move(vecs)};
}

// Von Neumann entropy -sum x ln x (natural log, 0 ln 0 = 0).  Nonnegative for
// any admissible spectrum and at most ln(size).
inline double von_neumann_entropy(const Spectrum& x) {
  return detail::shannon_like(x.values());
}

// Elementary symmetric polynomials s_0..s_n of the eigenvalues.
inline SymmetricPolys symmetric_polys(const Spectrum& x) {
  return SymmetricPolys(detail::symmetric_polys_raw(x.values()));
}

// Recovers the spectrum from its elementary symmetric values and verifies the
// round trip to 1e-8 relative.  Fails with RealizabilityError when the point
// admits no real nonnegative spectrum.
inline Spectrum roots_from_symmetric_polys(const SymmetricPolys& sp) {
  std::vector<double> roots = detail::roots_from_sympoly_raw(sp.s);
  Spectrum result{std::vector<double>(roots)};
  const std::vector<double> back = detail::symmetric_polys_raw(result.values());
  for (std::size_t q = 0; q < sp.s.size(); ++q) {
    const double scale = std::max(std::abs(sp.s[q]), 1e-12);
    if (std::abs(back[q] - sp.s[q]) > 1e-8 * scale) {
      throw RealizabilityError(
          "root extraction: round-trip mismatch at order " + std::to_string(q) +
          " (" + std::to_string(back[q]) + " vs " + std::to_string(sp.s[q]) + ")");
    }
  }
  return result;
}

// Random unit-sum spectrum (flat Dirichlet) subject to minimum pairwise gap
// and minimum eigenvalue constraints, via rejection.
inline Spectrum random_spectrum(int n, Rng& rng, double min_gap = 0.0,
                                double min_value = 0.0) {
  if (n < 1) throw std::invalid_argument("random_spectrum: n must be >= 1");
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<double> v = rng.simplex_point(n);
    std::sort(v.begin(), v.end(), std::greater<double>());
    bool ok = v.back() >= min_value;
    for (std::size_t i = 0; ok && i + 1 < v.size(); ++i) {
      if (v[i] - v[i + 1] < min_gap) ok = false;
    }
    if (ok) return Spectrum(std::move(v));
  }
  throw std::runtime_error("random_spectrum: rejection sampling exhausted");
}

}  // namespace ensvol
