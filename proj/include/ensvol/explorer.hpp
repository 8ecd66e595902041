#pragma once

// Constructive demonstrations.  Two live here: a search for pairs of 3-state
// ensembles where every pairwise overlap modulus grows yet the mixture
// entropy grows too, and a 4-state phase-curve construction along which the
// pair invariants are frozen (ds_2/dx = 0) while the entropy strictly
// decreases — both rendered as fully re-verifiable reports.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ensvol/calculus.hpp"
#include "ensvol/common.hpp"
#include "ensvol/ensemble.hpp"
#include "ensvol/spectral.hpp"
#include "ensvol/volumes.hpp"

namespace ensvol {

inline constexpr double kHalfPi = 1.57079632679489661923;

// Chart for 4-state families: six pair moduli, three triangle phases, four
// weights.  The gauge takes a_12, a_13, a_14 real nonnegative, which forces
// arg a_23 = u, arg a_24 = -v, arg a_34 = w for the gauge-invariant triangle
// phases u = arg(a12 a23 a31), v = arg(a14 a21 a42), w = arg(a13 a34 a41).
struct PhaseParams {
  // Pair moduli in the fixed order (1,2), (1,3), (1,4), (2,3), (2,4), (3,4).
  std::array<double, 6> r{};
  double u = 0.0, v = 0.0, w = 0.0;
  std::array<double, 4> probs{};

  static constexpr std::array<std::pair<int, int>, 6> pair_order() {
    return {{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};
  }

  // Modulus accessor by 1-based state labels (i < j).
  double modulus(int i, int j) const {
    const auto order = pair_order();
    for (std::size_t p = 0; p < order.size(); ++p) {
      if (order[p].first == i && order[p].second == j) return r[p];
    }
    throw std::invalid_argument("PhaseParams: bad pair (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
  }

  void validate() const {
    for (double m : r) {
      if (!(m >= 0.0 && m <= 1.0)) {
        throw std::invalid_argument("PhaseParams: modulus " + std::to_string(m) +
                                    " outside [0, 1]");
      }
    }
    double total = 0.0;
    for (double p : probs) {
      if (!(p >= tol::prob_floor)) {
        throw std::invalid_argument("PhaseParams: probability below the positivity floor");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > tol::prob_sum) {
      throw std::invalid_argument("PhaseParams: probabilities sum to " +
                                  std::to_string(total));
    }
  }
};

struct CurveDirection {
  double ux = 0.0, vx = 0.0, wx = 0.0;
};

// The 4x4 overlap matrix induced by the gauge.
inline Eigen::MatrixXcd overlap_from_phase_params(const PhaseParams& p) {
  p.validate();
  const std::complex<double> iu(0.0, 1.0);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(4, 4);
  a(0, 1) = p.modulus(1, 2);
  a(0, 2) = p.modulus(1, 3);
  a(0, 3) = p.modulus(1, 4);
  a(1, 2) = p.modulus(2, 3) * std::exp(iu * p.u);
  a(1, 3) = p.modulus(2, 4) * std::exp(-iu * p.v);
  a(2, 3) = p.modulus(3, 4) * std::exp(iu * p.w);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) a(j, i) = std::conj(a(i, j));
  }
  return a;
}

// Builds the ensemble realizing the chart point.  Unrealizable points (the
// induced overlap matrix fails positive semidefiniteness) raise
// RealizabilityError with the offending eigenvalue in the message.
inline Ensemble ensemble_from_phase_params(const PhaseParams& p) {
  Eigen::MatrixXcd a = overlap_from_phase_params(p);
  try {
    OverlapMatrix overlaps = OverlapMatrix::from_matrix(std::move(a));
    return ensemble_from_overlaps(overlaps,
                                  std::vector<double>(p.probs.begin(), p.probs.end()));
  } catch (const std::invalid_argument& err) {
    throw RealizabilityError(std::string("phase parameters are unrealizable: ") +
                             err.what());
  }
}

// Recovers the chart point from a 4-state ensemble via the gauge-invariant
// triangle phases.  Phases are reported in (-pi, pi]; moduli must be positive
// for the phases to be well defined.
inline PhaseParams phase_params_from_ensemble(const Ensemble& e) {
  if (e.size() != 4) {
    throw std::invalid_argument("phase_params_from_ensemble: need exactly 4 states");
  }
  const OverlapMatrix a = overlap_matrix(e);
  PhaseParams p;
  const auto order = PhaseParams::pair_order();
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    p.r[idx] = std::abs(a(order[idx].first - 1, order[idx].second - 1));
  }
  p.u = std::arg(a(0, 1) * a(1, 2) * a(2, 0));
  p.v = std::arg(a(0, 3) * a(1, 0) * a(3, 1));
  p.w = std::arg(a(0, 2) * a(2, 3) * a(3, 0));
  for (int i = 0; i < 4; ++i) p.probs[static_cast<std::size_t>(i)] = e.prob(i);
  return p;
}

// The chart point with phases advanced by t along a direction (moduli and
// weights fixed).
inline PhaseParams phase_params_along(const PhaseParams& p, const CurveDirection& d,
                                      double t) {
  PhaseParams shifted = p;
  shifted.u = p.u + t * d.ux;
  shifted.v = p.v + t * d.vx;
  shifted.w = p.w + t * d.wx;
  return shifted;
}

namespace detail {

// Elementary symmetric values s_0..s_4 of the gram spectrum, assembled from
// the principal minors of the induced overlap matrix (determinant route).
inline std::vector<double> sympoly_via_minors(const PhaseParams& p) {
  Eigen::MatrixXcd a = overlap_from_phase_params(p);
  OverlapMatrix overlaps = OverlapMatrix::from_matrix(std::move(a));
  VolumeInvariants vol = all_alphas(overlaps, 4);
  return symmetric_polys_from_alphas(vol, std::vector<double>(p.probs.begin(),
                                                              p.probs.end()))
      .s;
}

}  // namespace detail

// Closed form for ds_3/dx at the evaluation point u = v = w = pi/2 along a
// pure-phase direction:
//   -2 [ p1p2p3 r12 r13 r23 u_x + p1p2p4 r12 r14 r24 v_x
//        + p1p3p4 r13 r14 r34 w_x - p2p3p4 r23 r24 r34 (u_x + v_x + w_x) ].
inline double ds3_dx_formula(const PhaseParams& p, const CurveDirection& d) {
  p.validate();
  if (std::abs(p.u - kHalfPi) > 1e-9 || std::abs(p.v - kHalfPi) > 1e-9 ||
      std::abs(p.w - kHalfPi) > 1e-9) {
    throw std::invalid_argument(
        "ds3_dx_formula: the closed form holds only at u = v = w = pi/2");
  }
  for (double m : p.r) {
    if (!(m > 0.0)) {
      throw std::invalid_argument("ds3_dx_formula: all pair moduli must be positive");
    }
  }
  const double p1 = p.probs[0], p2 = p.probs[1], p3 = p.probs[2], p4 = p.probs[3];
  const double r12 = p.modulus(1, 2), r13 = p.modulus(1, 3), r14 = p.modulus(1, 4);
  const double r23 = p.modulus(2, 3), r24 = p.modulus(2, 4), r34 = p.modulus(3, 4);
  return -2.0 * (p1 * p2 * p3 * r12 * r13 * r23 * d.ux +
                 p1 * p2 * p4 * r12 * r14 * r24 * d.vx +
                 p1 * p3 * p4 * r13 * r14 * r34 * d.wx -
                 p2 * p3 * p4 * r23 * r24 * r34 * (d.ux + d.vx + d.wx));
}

// Central finite difference of s_q along the phase curve, through the
// determinant route (independent of the closed form above).
inline double sq_dx_finite_difference(const PhaseParams& p, const CurveDirection& d,
                                      int q, double h = 1e-4) {
  if (q < 0 || q > 4) throw std::invalid_argument("sq_dx_finite_difference: bad q");
  if (!(h > 0.0)) throw std::invalid_argument("sq_dx_finite_difference: bad step");
  const std::vector<double> plus = detail::sympoly_via_minors(phase_params_along(p, d, h));
  const std::vector<double> minus = detail::sympoly_via_minors(phase_params_along(p, d, -h));
  return (plus[static_cast<std::size_t>(q)] - minus[static_cast<std::size_t>(q)]) /
         (2.0 * h);
}

// ds_4/dx at the base point via the derivative of the determinant:
// s_4 = p1p2p3p4 det A and (det A)' = det A * Re tr(A^{-1} A').
inline double ds4_dx_jacobi(const PhaseParams& p, const CurveDirection& d) {
  Eigen::MatrixXcd a = overlap_from_phase_params(p);
  const std::complex<double> iu(0.0, 1.0);
  Eigen::MatrixXcd da = Eigen::MatrixXcd::Zero(4, 4);
  da(1, 2) = iu * d.ux * a(1, 2);
  da(1, 3) = -iu * d.vx * a(1, 3);
  da(2, 3) = iu * d.wx * a(2, 3);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) da(j, i) = std::conj(da(i, j));
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  const std::complex<double> det = lu.determinant();
  const std::complex<double> trace = (lu.solve(da)).trace();
  const double pprod = p.probs[0] * p.probs[1] * p.probs[2] * p.probs[3];
  return pprod * (det * trace).real();
}

// One fully cross-checked instance of entropy decreasing along a direction
// that freezes every pair invariant.
struct NonmonotonicityWitness {
  bool found = false;
  long long candidates_tried = 0;
  std::uint64_t seed = 0;
  PhaseParams params;
  CurveDirection direction;
  double ds2_dx_fd = 0.0;    // finite difference; analytically exactly 0
  double ds3_dx = 0.0;       // closed form at the evaluation point
  double ds3_dx_fd = 0.0;    // determinant-route finite difference
  double ds4_dx = 0.0;       // determinant-derivative route
  double dS_dx_chain = 0.0;  // sum_q dS/ds_q * ds_q/dx
  double dS_dx_fd = 0.0;     // central difference of S along reconstructed ensembles
};

namespace detail {

// Entropy of the reconstructed ensemble at a chart point.
inline double entropy_at_params(const PhaseParams& p) {
  return von_neumann_entropy(gram_spectrum(ensemble_from_phase_params(p)));
}

}  // namespace detail

// Searches for a realizable chart point (u = v = w = pi/2, one weight small)
// and a pure-phase direction along which s_2 is frozen and S strictly
// decreases, confirmed by the chain rule and by a direct finite difference.
// Deterministic per seed; never fabricates success on budget exhaustion.
inline NonmonotonicityWitness nonmonotonicity_demo(double p_small, std::uint64_t seed,
                                                   long long budget = 100000) {
  if (!(p_small > 0.0 && p_small <= 0.1)) {
    throw std::invalid_argument("nonmonotonicity_demo: p_small must lie in (0, 0.1]");
  }
  if (budget < 1) throw std::invalid_argument("nonmonotonicity_demo: budget must be >= 1");
  NonmonotonicityWitness report;
  report.seed = seed;
  Rng rng(seed);
  const double big = (1.0 - p_small) / 3.0;

  for (long long c = 0; c < budget; ++c) {
    report.candidates_tried = c + 1;
    PhaseParams p;
    for (auto& m : p.r) m = rng.uniform(0.15, 0.45);
    p.u = p.v = p.w = kHalfPi;
    CurveDirection d;
    // Alternate the two small-weight placements: a small p_1 isolates the
    // (2,3,4) triangle term, whose phase sum enters ds_3/dx with the opposite
    // sign, so an all-negative direction drives s_3 (and S) down; a small p_4
    // isolates the (1,2,3) term, handled with a positive u_x.
    if (c % 2 == 0) {
      p.probs = {p_small, big, big, big};
      d.ux = -rng.uniform(0.5, 1.5);
      d.vx = -rng.uniform(0.5, 1.5);
      d.wx = -rng.uniform(0.5, 1.5);
    } else {
      p.probs = {big, big, big, p_small};
      d.ux = rng.uniform(0.5, 1.5);
      d.vx = -rng.uniform(0.5, 1.5) - d.ux;
      d.wx = -rng.uniform(0.5, 1.5);
    }
    const double dnorm = std::sqrt(d.ux * d.ux + d.vx * d.vx + d.wx * d.wx);
    d.ux /= dnorm;
    d.vx /= dnorm;
    d.wx /= dnorm;

    // Realizability with margin: the overlap matrix must stay PD along the
    // +-1e-5 stencil, and the gram spectrum must be cleanly separated.
    Eigen::MatrixXcd a;
    try {
      a = overlap_from_phase_params(p);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const std::vector<double> a_eigs = detail::hermitian_eigenvalues_raw(a, tol::hermitian);
    if (a_eigs.back() < 1e-4) continue;

    Ensemble e = ensemble_from_phase_params(p);
    const Spectrum x = gram_spectrum(e);
    if (x.min_value() < 1e-4 || x.min_gap() < 1e-4) continue;

    const double ds3 = ds3_dx_formula(p, d);
    const double ds4 = ds4_dx_jacobi(p, d);
    const double chain = dS_ds(x, 3) * ds3 + dS_ds(x, 4) * ds4;
    if (!(chain < -1e-6)) continue;

    const double h = 1e-5;
    const double ds2_fd = sq_dx_finite_difference(p, d, 2, h);
    if (!(std::abs(ds2_fd) <= 1e-8)) continue;
    const double s_fd = (detail::entropy_at_params(phase_params_along(p, d, h)) -
                         detail::entropy_at_params(phase_params_along(p, d, -h))) /
                        (2.0 * h);
    if (!(s_fd < -1e-6)) continue;

    report.found = true;
    report.params = p;
    report.direction = d;
    report.ds2_dx_fd = ds2_fd;
    report.ds3_dx = ds3;
    report.ds3_dx_fd = sq_dx_finite_difference(p, d, 3, 1e-4);
    report.ds4_dx = ds4;
    report.dS_dx_chain = chain;
    report.dS_dx_fd = s_fd;
    return report;
  }
  report.candidates_tried = budget;
  return report;
}

// A verified pair of ensembles: the perturbed one has every pairwise overlap
// modulus at least as large (one strictly larger) yet strictly larger
// entropy.
struct CounterexampleReport {
  bool found = false;
  long long iterations = 0;
  std::uint64_t seed = 0;
  int n_states = 0;
  std::vector<double> probs;
  std::vector<double> overlaps_base;       // upper-triangle moduli, row-major
  std::vector<double> overlaps_perturbed;  // same order
  double entropy_base = 0.0;
  double entropy_perturbed = 0.0;
  double min_overlap_increase = 0.0;
  double max_overlap_increase = 0.0;
  double entropy_increase = 0.0;
  std::optional<Ensemble> base;
  std::optional<Ensemble> perturbed;
};

namespace detail {

// 3-state overlap matrix in the gauge a12, a13 real, arg a23 = u.
inline Eigen::MatrixXcd overlap_3state(double r12, double r13, double r23, double u) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(3, 3);
  a(0, 1) = r12;
  a(0, 2) = r13;
  a(1, 2) = r23 * std::exp(std::complex<double>(0.0, u));
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) a(j, i) = std::conj(a(i, j));
  }
  return a;
}

// Positive-definiteness of the 3-state overlap matrix with margin, via the
// leading principal minors (cheap and exact enough at these scales).
inline bool overlap_3state_pd(double r12, double r13, double r23, double u,
                              double margin) {
  const double m2 = 1.0 - r12 * r12;
  const double det = 1.0 - r12 * r12 - r13 * r13 - r23 * r23 +
                     2.0 * r12 * r13 * r23 * std::cos(u);
  return m2 > margin && det > margin;
}

inline double entropy_from_overlap(const Eigen::MatrixXcd& a,
                                   const std::vector<double>& probs) {
  const int k = static_cast<int>(a.rows());
  Eigen::MatrixXcd g(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      g(i, j) = std::sqrt(probs[static_cast<std::size_t>(i)] *
                          probs[static_cast<std::size_t>(j)]) *
                a(i, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(g, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < k; ++i) {
    const double x = solver.eigenvalues()(i);
    if (x > 0.0) s -= x * std::log(x);
  }
  return s;
}

struct ShardWitness {
  bool found = false;
  long long offset = 0;  // candidate index within the shard
  double r12 = 0, r13 = 0, r23 = 0, u0 = 0;
  double d12 = 0, d13 = 0, d23 = 0, u1 = 0;
};

// Scans one shard of candidates for the 3-state search.  Base point: random
// moduli and a triangle phase; perturbation: every modulus nudged up by at
// least 2e-6 while the triangle phase relaxes toward 0, which feeds the
// triple invariant faster than the pair invariants shrink the entropy.
inline ShardWitness scan_shard_3state(std::uint64_t shard_seed, long long count,
                                      const std::vector<double>& probs) {
  Rng rng(shard_seed);
  ShardWitness w;
  for (long long c = 0; c < count; ++c) {
    const double r12 = rng.uniform(0.15, 0.6);
    const double r13 = rng.uniform(0.15, 0.6);
    const double r23 = rng.uniform(0.15, 0.6);
    const double u0 = rng.uniform(0.7, 2.4);
    const double d12 = rng.uniform(2e-6, 5e-5);
    const double d13 = rng.uniform(2e-6, 5e-5);
    const double d23 = rng.uniform(2e-6, 5e-5);
    const double u1 = u0 * (1.0 - rng.uniform(0.02, 0.12));
    if (!overlap_3state_pd(r12, r13, r23, u0, 1e-7)) continue;
    if (!overlap_3state_pd(r12 + d12, r13 + d13, r23 + d23, u1, 1e-7)) continue;
    const double s0 = entropy_from_overlap(overlap_3state(r12, r13, r23, u0), probs);
    const double s1 = entropy_from_overlap(
        overlap_3state(r12 + d12, r13 + d13, r23 + d23, u1), probs);
    if (s1 >= s0 + 1e-6 + 1e-9) {
      w.found = true;
      w.offset = c;
      w.r12 = r12; w.r13 = r13; w.r23 = r23; w.u0 = u0;
      w.d12 = d12; w.d13 = d13; w.d23 = d23; w.u1 = u1;
      return w;
    }
  }
  w.offset = count;
  return w;
}

}  // namespace detail

// Re-scores a candidate pair from raw state vectors and enforces the full
// inequality set: every overlap modulus weakly increased (slack 1e-12), at
// least one strictly by the margin, entropy strictly up by the margin.
inline bool reverify_counterexample(const Ensemble& base, const Ensemble& perturbed,
                                    double margin = 1e-6) {
  if (base.size() != perturbed.size()) return false;
  const OverlapMatrix a0 = overlap_matrix(base);
  const OverlapMatrix a1 = overlap_matrix(perturbed);
  bool one_strict = false;
  for (int i = 0; i < base.size(); ++i) {
    for (int j = i + 1; j < base.size(); ++j) {
      const double inc = std::abs(a1(i, j)) - std::abs(a0(i, j));
      if (inc < -1e-12) return false;
      if (inc >= margin) one_strict = true;
    }
  }
  if (!one_strict) return false;
  const double s0 = von_neumann_entropy(gram_spectrum(base));
  const double s1 = von_neumann_entropy(gram_spectrum(perturbed));
  return s1 >= s0 + margin;
}

// Random search for the overlap/entropy counterexample over 3-state,
// 3-dimensional ensembles at uniform weights.  Parallel over fixed-size seed
// shards; the lowest-index witness wins, so the outcome is identical for any
// worker count.  On budget exhaustion the report says so honestly.
inline CounterexampleReport js_counterexample_search(std::uint64_t seed,
                                                     long long budget) {
  if (budget < 1) throw std::invalid_argument("js_counterexample_search: budget >= 1");
  const std::vector<double> probs = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  const long long shard_size = 2000;
  const long long nshards = (budget + shard_size - 1) / shard_size;

  CounterexampleReport report;
  report.seed = seed;
  report.n_states = 3;
  report.probs = probs;

  std::vector<detail::ShardWitness> results(static_cast<std::size_t>(nshards));
  const long long wave = 64;
  long long done = 0;
  long long winner = -1;
  while (done < nshards && winner < 0) {
    const long long until = std::min(nshards, done + wave);
    parallel_for_index(until - done, [&](std::int64_t idx) {
      const long long s = done + idx;
      const long long count = std::min(shard_size, budget - s * shard_size);
      results[static_cast<std::size_t>(s)] =
          detail::scan_shard_3state(derive_seed(seed, static_cast<std::uint64_t>(s)),
                                    count, probs);
    });
    for (long long s = done; s < until; ++s) {
      if (results[static_cast<std::size_t>(s)].found) {
        winner = s;
        break;
      }
    }
    done = until;
  }

  if (winner < 0) {
    report.found = false;
    report.iterations = budget;
    return report;
  }

  const detail::ShardWitness& w = results[static_cast<std::size_t>(winner)];
  report.iterations = winner * shard_size + w.offset + 1;

  OverlapMatrix a0 =
      OverlapMatrix::from_matrix(detail::overlap_3state(w.r12, w.r13, w.r23, w.u0));
  OverlapMatrix a1 = OverlapMatrix::from_matrix(detail::overlap_3state(
      w.r12 + w.d12, w.r13 + w.d13, w.r23 + w.d23, w.u1));
  Ensemble base = ensemble_from_overlaps(a0, probs);
  Ensemble perturbed = ensemble_from_overlaps(a1, probs);
  if (!reverify_counterexample(base, perturbed)) {
    // A shard hit that fails raw-state re-verification would indicate a
    // numerical-integrity problem; report honest failure rather than emit it.
    report.found = false;
    report.iterations = budget;
    return report;
  }

  const OverlapMatrix b0 = overlap_matrix(base);
  const OverlapMatrix b1 = overlap_matrix(perturbed);
  double min_inc = std::numeric_limits<double>::infinity();
  double max_inc = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      report.overlaps_base.push_back(std::abs(b0(i, j)));
      report.overlaps_perturbed.push_back(std::abs(b1(i, j)));
      const double inc = std::abs(b1(i, j)) - std::abs(b0(i, j));
      min_inc = std::min(min_inc, inc);
      max_inc = std::max(max_inc, inc);
    }
  }
  report.min_overlap_increase = min_inc;
  report.max_overlap_increase = max_inc;
  report.entropy_base = von_neumann_entropy(gram_spectrum(base));
  report.entropy_perturbed = von_neumann_entropy(gram_spectrum(perturbed));
  report.entropy_increase = report.entropy_perturbed - report.entropy_base;
  report.found = true;
  report.base = std::move(base);
  report.perturbed = std::move(perturbed);
  return report;
}

// Negative control: the same accept test over 2-state ensembles, where
// increasing the single overlap modulus provably decreases the entropy, so
// the search must come back empty.  Closed-form eigenvalues keep the million
// evaluations cheap.
inline CounterexampleReport js_two_state_control(std::uint64_t seed, long long budget) {
  if (budget < 1) throw std::invalid_argument("js_two_state_control: budget >= 1");
  CounterexampleReport report;
  report.seed = seed;
  report.n_states = 2;
  Rng rng(seed);
  auto entropy2 = [](double p1, double r) {
    const double p2 = 1.0 - p1;
    const double disc = std::sqrt((p1 - p2) * (p1 - p2) + 4.0 * p1 * p2 * r * r);
    double s = 0.0;
    for (double x : {0.5 * (1.0 + disc), 0.5 * (1.0 - disc)}) {
      if (x > 0.0) s -= x * std::log(x);
    }
    return s;
  };
  for (long long c = 0; c < budget; ++c) {
    const double p1 = rng.uniform(0.05, 0.95);
    const double r = rng.uniform(0.0, 0.95);
    const double delta = rng.uniform(2e-6, 5e-5);
    const double s0 = entropy2(p1, r);
    const double s1 = entropy2(p1, r + delta);
    if (s1 >= s0 + 1e-6) {
      // Mathematically unreachable; if it ever triggers, surface it loudly.
      report.found = true;
      report.iterations = c + 1;
      return report;
    }
  }
  report.found = false;
  report.iterations = budget;
  return report;
}

}  // namespace ensvol
