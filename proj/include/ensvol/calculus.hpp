#pragma once

// Entropy calculus on the symmetric-polynomial coordinates: divided
// differences (with a confluent path for coincident eigenvalues), the
// derivative family dS/ds_q, the deformation family W_q(a), subentropy, and
// the alternative coordinate charts.  One table-building kernel underlies
// every closed-form derivative here; the single exception is the large-a
// evaluation of W_q, which switches to an exact series because the table
// route cancels catastrophically there (the two routes are cross-validated
// in the test suite near the switchover).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ensvol/common.hpp"
#include "ensvol/spectral.hpp"

namespace ensvol {

// j-th derivative of x^m ln x at x > 0, by exact coefficient recurrence on
// the pair a x^p ln x + b x^p:  d/dx -> (a p) x^(p-1) ln x + (a + b p) x^(p-1).
// Valid for any j >= 0, including j > m (powers go negative).
inline double xm_logx_derivative(int m, int j, double x) {
  if (m < 0) throw std::invalid_argument("xm_logx_derivative: m must be >= 0");
  if (j < 0) throw std::invalid_argument("xm_logx_derivative: j must be >= 0");
  if (!(x > 0.0)) {
    throw std::domain_error("xm_logx_derivative: x must be positive");
  }
  double a = 1.0, b = 0.0;
  int p = m;
  for (int step = 0; step < j; ++step) {
    const double na = a * p;
    const double nb = a + b * p;
    a = na;
    b = nb;
    --p;
  }
  const double xp = std::pow(x, p);
  return (a == 0.0 ? 0.0 : a * xp * std::log(x)) + b * xp;
}

namespace detail {

// j-th derivative of x^n (plain power), zero once j exceeds n.
inline double power_derivative(int n, int j, double x) {
  if (j > n) return 0.0;
  double coeff = 1.0;
  for (int i = 0; i < j; ++i) coeff *= (n - i);
  double xp = 1.0;
  for (int i = 0; i < n - j; ++i) xp *= x;
  return coeff * xp;
}

// Integer power with 0^0 == 1 (used in single-term ratios).
inline double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace detail

// Newton divided-difference table over possibly repeated nodes.  Nodes closer
// than the merge gap are snapped to their cluster mean, and repeated nodes
// take derivative values f^(j)/j! instead of difference quotients, which
// keeps the table exact through eigenvalue collisions.
struct DividedDifferenceTable {
  std::vector<double> nodes;                // snapped, ascending, with repeats
  std::vector<std::vector<double>> levels;  // levels[j][i] = f[z_i .. z_{i+j}]

  double value() const { return levels.back().front(); }
};

// f is callable as f(order, x): the order-th derivative of the underlying
// function at x (order 0 = the function itself).
template <class F>
DividedDifferenceTable build_divided_difference_table(
    F&& f, std::span<const double> nodes_in,
    double merge_gap = tol::confluence_gap) {
  if (nodes_in.empty()) {
    throw std::invalid_argument("divided difference: no nodes");
  }
  if (merge_gap < 0.0) {
    throw std::invalid_argument("divided difference: negative merge gap");
  }
  const std::size_t n = nodes_in.size();
  std::vector<double> sorted(nodes_in.begin(), nodes_in.end());
  std::sort(sorted.begin(), sorted.end());

  // Chain-cluster nodes whose adjacent gaps are within the merge gap and snap
  // each cluster to its mean.
  std::vector<double> nodes(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && sorted[end] - sorted[end - 1] <= merge_gap) ++end;
    double mean = 0.0;
    for (std::size_t i = start; i < end; ++i) mean += sorted[i];
    mean /= static_cast<double>(end - start);
    for (std::size_t i = start; i < end; ++i) nodes[i] = mean;
    start = end;
  }

  DividedDifferenceTable table;
  table.nodes = nodes;
  table.levels.resize(n);
  table.levels[0].resize(n);
  for (std::size_t i = 0; i < n; ++i) table.levels[0][i] = f(0, nodes[i]);

  double factorial = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    factorial *= static_cast<double>(j);
    table.levels[j].resize(n - j);
    for (std::size_t i = 0; i + j < n; ++i) {
      const double lo = nodes[i];
      const double hi = nodes[i + j];
      if (hi == lo) {
        table.levels[j][i] = f(static_cast<int>(j), lo) / factorial;
      } else {
        table.levels[j][i] =
            (table.levels[j - 1][i + 1] - table.levels[j - 1][i]) / (hi - lo);
      }
    }
  }
  return table;
}

template <class F>
double divided_difference(F&& f, std::span<const double> nodes,
                          double merge_gap = tol::confluence_gap) {
  return build_divided_difference_table(std::forward<F>(f), nodes, merge_gap)
      .value();
}

namespace detail {

// Complete homogeneous symmetric polynomials h_0..h_max of the given values.
inline std::vector<double> complete_homogeneous(std::span<const double> values,
                                                int max_degree) {
  std::vector<double> h(static_cast<std::size_t>(max_degree) + 1, 0.0);
  h[0] = 1.0;
  for (double x : values) {
    for (int d = 1; d <= max_degree; ++d) {
      h[static_cast<std::size_t>(d)] += x * h[static_cast<std::size_t>(d - 1)];
    }
  }
  return h;
}

inline void check_derivative_order(const Spectrum& x, int q,
                                   const char* caller) {
  const int n = x.size();
  if (q < 2 || q > n) {
    throw std::invalid_argument(std::string(caller) +
                                ": order q must satisfy 2 <= q <= n (q=" +
                                std::to_string(q) + ", n=" + std::to_string(n) +
                                ")");
  }
}

inline void check_positive_nodes(const Spectrum& x, int q, const char* caller) {
  if (!(x.min_value() > 0.0)) {
    throw std::domain_error(std::string(caller) +
                            ": spectrum has a zero eigenvalue; reduce to the "
                            "positive part first");
  }
  if (q == x.size() && x.min_value() < tol::prob_floor) {
    throw std::domain_error(std::string(caller) +
                            ": top-order derivative needs min eigenvalue >= 1e-12");
  }
}

}  // namespace detail

// dS/ds_q: the derivative of the von Neumann entropy with respect to the
// q-th elementary symmetric polynomial of the spectrum, holding the others
// fixed.  Equal to the (n-1)-st divided difference of
// g_q(y) = (-1)^q y^(n-q) ln y over the eigenvalues; strictly positive on
// the interior of the simplex.
inline double dS_ds(const Spectrum& x, int q,
                    double merge_gap = tol::confluence_gap) {
  detail::check_derivative_order(x, q, "dS_ds");
  detail::check_positive_nodes(x, q, "dS_ds");
  const int n = x.size();
  const int m = n - q;
  const double sign = (q % 2 == 0) ? 1.0 : -1.0;
  auto f = [m, sign](int order, double y) {
    return sign * xm_logx_derivative(m, order, y);
  };
  return divided_difference(f, x.values(), merge_gap);
}

// Sensitivity of one eigenvalue to one symmetric-polynomial coordinate:
// dx_k/ds_q = (-1)^(q+1) x_k^(n-q) / prod_{i != k}(x_k - x_i).  k is 1-based
// over the descending spectrum.  Requires pairwise-distinct eigenvalues.
inline double dx_ds(const Spectrum& x, int k, int q) {
  const int n = x.size();
  if (k < 1 || k > n) throw std::invalid_argument("dx_ds: k out of range");
  if (q < 1 || q > n) throw std::invalid_argument("dx_ds: q out of range");
  if (!(x.min_gap() > 0.0)) {
    throw std::domain_error("dx_ds: coincident eigenvalues (gap 0); the map is singular");
  }
  const double xk = x[k - 1];
  double denom = 1.0;
  for (int i = 0; i < n; ++i) {
    if (i != k - 1) denom *= (xk - x[i]);
  }
  const double sign = (q % 2 == 0) ? -1.0 : 1.0;  // (-1)^(q+1)
  return sign * detail::ipow(xk, n - q) / denom;
}

// The alternating kernel sum  sum_k x_k^(n-q) / prod_{i != k}(x_k - x_i),
// which vanishes identically for 2 <= q <= n and equals 1 for q = 1.
// Returns the computed sum; *term_scale (if given) receives the magnitude of
// the largest term, the natural scale for residual comparisons.
inline double power_identity_residual(const Spectrum& x, int q,
                                      double* term_scale = nullptr) {
  const int n = x.size();
  if (q < 1 || q > n) {
    throw std::invalid_argument("power_identity_residual: q out of range");
  }
  if (!(x.min_gap() > 0.0)) {
    throw std::domain_error("power_identity_residual: coincident eigenvalues");
  }
  double sum = 0.0;
  double scale = 0.0;
  for (int k = 0; k < n; ++k) {
    double denom = 1.0;
    for (int i = 0; i < n; ++i) {
      if (i != k) denom *= (x[k] - x[i]);
    }
    const double term = detail::ipow(x[k], n - q) / denom;
    sum += term;
    scale = std::max(scale, std::abs(term));
  }
  if (term_scale) *term_scale = std::max(scale, 1.0);
  return sum;
}

// Central finite difference of the entropy with respect to s_q, computed by
// perturbing the symmetric-polynomial point and re-extracting eigenvalues.
// Throws RealizabilityError when the perturbed point leaves the region that
// supports a real nonnegative spectrum (callers treat that as boundary
// proximity and retry with a smaller step).
inline double finite_diff_dS_ds(const Spectrum& x, int q, double h) {
  detail::check_derivative_order(x, q, "finite_diff_dS_ds");
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_dS_ds: h must be positive");
  std::vector<double> s = detail::symmetric_polys_raw(x.values());
  std::vector<double> splus = s, sminus = s;
  splus[static_cast<std::size_t>(q)] += h;
  sminus[static_cast<std::size_t>(q)] -= h;
  const std::vector<double> rplus = detail::roots_from_sympoly_raw(splus);
  const std::vector<double> rminus = detail::roots_from_sympoly_raw(sminus);
  return (detail::shannon_like(rplus) - detail::shannon_like(rminus)) / (2.0 * h);
}

namespace detail {

// Series route for W_q at large shift: using DD[poly of degree < n-1] == 0,
//   W_q(a) = (-1)^q DD[(y+a)^(n-q) ln1p(y/a)]
//          = (-1)^q sum_{m>=1} ((-1)^(m+1)/(m a^m))
//                   sum_{j=0}^{n-q} C(n-q, j) a^(n-q-j) h_{m+j-n+1},
// where h_d are complete homogeneous symmetric polynomials of the
// eigenvalues (h_d = DD[y^(d+n-1)]) and h_d = 0 for d < 0.  Converges for
// a > max x; callers require a comfortably above that.
inline double w_series(std::span<const double> x, int q, double a) {
  const int n = static_cast<int>(x.size());
  const int p = n - q;
  double max_abs = 0.0;
  for (double v : x) max_abs = std::max(max_abs, std::abs(v));
  if (!(a > 2.0 * max_abs)) {
    throw std::invalid_argument("w_series: shift too small for the series route");
  }
  const int max_m = 400;
  const std::vector<double> h = complete_homogeneous(x, max_m + p - n + 2);
  const double sign_q = (q % 2 == 0) ? 1.0 : -1.0;
  double acc = 0.0;
  double abs_acc = 0.0;
  double inv_am = 1.0;  // a^-m, updated per term
  for (int m = 1; m <= max_m; ++m) {
    inv_am /= a;
    if (m < q - 1) continue;  // all h indices negative: term vanishes
    double inner = 0.0;
    for (int j = 0; j <= p; ++j) {
      const int d = m + j - n + 1;
      if (d < 0) continue;
      inner += static_cast<double>(binomial_ll(p, j)) * ipow(a, p - j) *
               h[static_cast<std::size_t>(d)];
    }
    const double term =
        sign_q * ((m % 2 == 1) ? 1.0 : -1.0) * inner * inv_am / m;
    acc += term;
    abs_acc += std::abs(term);
    if (m > q + 2 && std::abs(term) <= 1e-18 * std::max(abs_acc, 1e-300)) {
      break;
    }
  }
  return acc;
}

}  // namespace detail

// The shifted derivative family W_q(a) = (-1)^q sum_k (x_k + a)^(n-q)
// ln(x_k + a) / prod_{i != k}(x_k - x_i); W_q(0) = dS/ds_q.  Evaluated as a
// divided difference for small shifts and by the exact large-shift series
// once a clears max(1, 4 max x), where the table route loses all precision.
inline double w_function(const Spectrum& x, int q, double a,
                         double merge_gap = tol::confluence_gap) {
  detail::check_derivative_order(x, q, "w_function");
  if (!(a >= 0.0)) throw std::invalid_argument("w_function: shift a must be >= 0");
  if (!(x.min_value() + a > 0.0)) {
    throw std::domain_error("w_function: x_min + a must be positive");
  }
  if (a == 0.0) detail::check_positive_nodes(x, q, "w_function");
  const double switch_point = std::max(1.0, 4.0 * x.max_value());
  if (a >= switch_point) {
    return detail::w_series(x.values(), q, a);
  }
  const int n = x.size();
  const int m = n - q;
  const double sign = (q % 2 == 0) ? 1.0 : -1.0;
  auto f = [m, sign, a](int order, double y) {
    return sign * xm_logx_derivative(m, order, y + a);
  };
  return divided_difference(f, x.values(), merge_gap);
}

// Sharp positive lower bound for dS/ds_q over unit-trace spectra:
//   n^(q-1) / ((n-q+1) C(n-1, n-q+1)).
inline double lower_bound_dS_ds(int n, int q) {
  if (n < 2 || q < 2 || q > n) {
    throw std::invalid_argument("lower_bound_dS_ds: need 2 <= q <= n");
  }
  double npow = 1.0;
  for (int i = 0; i < q - 1; ++i) npow *= n;
  const double denom = static_cast<double>(n - q + 1) *
                       static_cast<double>(detail::binomial_ll(n - 1, n - q + 1));
  return npow / denom;
}

// Exact Beta(i, j) for positive integers: (i-1)! (j-1)! / (i+j-1)!.
inline double beta_integer(int i, int j) {
  if (i < 1 || j < 1) throw std::invalid_argument("beta_integer: need positive args");
  return detail::factorial_d(i - 1) * detail::factorial_d(j - 1) /
         detail::factorial_d(i + j - 1);
}

struct WAsymptoticPoint {
  double a;
  double product;  // W_q(a) * a^(q-1)
  double ratio;    // product / Beta(q-1, n-q+1)
};

struct WAsymptoticReport {
  int n = 0;
  int q = 0;
  double beta = 0.0;
  std::vector<WAsymptoticPoint> points;
};

// Tail behaviour of the deformation family: W_q(a) a^(q-1) approaches
// Beta(q-1, n-q+1) as the shift grows.  Shifts must be >= 10 so the series
// route is in force and the limit regime is meaningful.
inline WAsymptoticReport w_asymptotic_check(const Spectrum& x, int q,
                                            std::span<const double> a_values) {
  detail::check_derivative_order(x, q, "w_asymptotic_check");
  const int n = x.size();
  WAsymptoticReport report;
  report.n = n;
  report.q = q;
  report.beta = beta_integer(q - 1, n - q + 1);
  for (double a : a_values) {
    if (a < 10.0) {
      throw std::invalid_argument("w_asymptotic_check: shifts must be >= 10");
    }
    double apow = 1.0;
    for (int i = 0; i < q - 1; ++i) apow *= a;
    const double product = w_function(x, q, a) * apow;
    report.points.push_back({a, product, product / report.beta});
  }
  return report;
}

// Subentropy Q = -sum_k x_k^n ln x_k / prod_{i != k}(x_k - x_i), i.e. the
// (n-1)-st divided difference of -y^n ln y.  Requires strictly positive
// eigenvalues (reduce rank-deficient spectra to their positive part first);
// coincident eigenvalues ride the confluent path.
inline double subentropy(const Spectrum& x,
                         double merge_gap = tol::confluence_gap) {
  if (!(x.min_value() > 0.0)) {
    throw std::domain_error(
        "subentropy: zero eigenvalue; evaluate the positive part instead");
  }
  const int n = x.size();
  auto f = [n](int order, double y) {
    return -xm_logx_derivative(n, order, y);
  };
  return divided_difference(f, x.values(), merge_gap);
}

namespace detail {

// Shared kernel for the chart derivatives: the (n-1)-st divided difference of
// y^n (1 + ln y), an independent route to s_1 - Q.
inline double chart_derivative_core(const Spectrum& x, double merge_gap) {
  if (!(x.min_value() > 0.0)) {
    throw std::domain_error(
        "chart derivative: zero eigenvalue; evaluate the positive part instead");
  }
  const int n = x.size();
  auto f = [n](int order, double y) {
    return power_derivative(n, order, y) + xm_logx_derivative(n, order, y);
  };
  return divided_difference(f, x.values(), merge_gap);
}

}  // namespace detail

// Entropy derivative along the first coordinate of the reciprocal chart
// (t_1 = 1/s_1, t_q = s_q/s_1): dS/dt_1 = s_1 * DD[y^n (1 + ln y)].  On
// unit-sum spectra this equals 1 - Q.
inline double dS_dt1(const Spectrum& x, double merge_gap = tol::confluence_gap) {
  return x.sum() * detail::chart_derivative_core(x, merge_gap);
}

// Entropy derivative along the top coordinate of the reversed chart
// (r_q = s_{n-q}/s_n): dS/dr_n = s_n * DD[y^n (1 + ln y)].  On unit-sum
// spectra this equals s_n (1 - Q).
inline double dS_drn(const Spectrum& x, double merge_gap = tol::confluence_gap) {
  double sn = 1.0;
  for (double v : x.values()) sn *= v;
  return sn * detail::chart_derivative_core(x, merge_gap);
}

// --- Coordinate charts -----------------------------------------------------
//
// Vectors are indexed like SymmetricPolys: entry [q] is the q-th coordinate,
// entry [0] is the constant 1.

inline std::vector<double> t_chart_from_s(std::span<const double> s) {
  if (s.size() < 2 || !(s[1] > 0.0)) {
    throw std::invalid_argument("t_chart_from_s: need s_1 > 0");
  }
  std::vector<double> t(s.size());
  t[0] = 1.0;
  t[1] = 1.0 / s[1];
  for (std::size_t q = 2; q < s.size(); ++q) t[q] = s[q] / s[1];
  return t;
}

inline std::vector<double> s_from_t_chart(std::span<const double> t) {
  if (t.size() < 2 || !(t[1] > 0.0)) {
    throw std::invalid_argument("s_from_t_chart: need t_1 > 0");
  }
  std::vector<double> s(t.size());
  s[0] = 1.0;
  s[1] = 1.0 / t[1];
  for (std::size_t q = 2; q < t.size(); ++q) s[q] = t[q] / t[1];
  return s;
}

inline std::vector<double> r_chart_from_s(std::span<const double> s) {
  const std::size_t n = s.size() - 1;
  if (n < 1 || !(s[n] > 0.0)) {
    throw std::invalid_argument("r_chart_from_s: need s_n > 0");
  }
  std::vector<double> r(s.size());
  r[0] = 1.0;
  for (std::size_t q = 1; q <= n; ++q) r[q] = s[n - q] / s[n];
  return r;
}

inline std::vector<double> s_from_r_chart(std::span<const double> r) {
  const std::size_t n = r.size() - 1;
  if (n < 1 || !(r[n] > 0.0)) {
    throw std::invalid_argument("s_from_r_chart: need r_n > 0");
  }
  std::vector<double> s(r.size());
  s[0] = 1.0;
  s[n] = 1.0 / r[n];
  for (std::size_t j = 1; j < n; ++j) s[j] = r[n - j] / r[n];
  return s;
}

// Central finite difference of S along t_1 (other t coordinates held fixed),
// through the chart inverse and root re-extraction.
inline double finite_diff_dS_dt1(const Spectrum& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_dS_dt1: h must be positive");
  const std::vector<double> s = detail::symmetric_polys_raw(x.values());
  std::vector<double> t = t_chart_from_s(s);
  auto entropy_at = [&t](double t1) {
    std::vector<double> shifted = t;
    shifted[1] = t1;
    const std::vector<double> s_back = s_from_t_chart(shifted);
    return detail::shannon_like(detail::roots_from_sympoly_raw(s_back));
  };
  return (entropy_at(t[1] + h) - entropy_at(t[1] - h)) / (2.0 * h);
}

// Central finite difference of S along r_n (other r coordinates held fixed).
inline double finite_diff_dS_drn(const Spectrum& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_dS_drn: h must be positive");
  const std::vector<double> s = detail::symmetric_polys_raw(x.values());
  std::vector<double> r = r_chart_from_s(s);
  const std::size_t n = s.size() - 1;
  auto entropy_at = [&r, n](double rn) {
    std::vector<double> shifted = r;
    shifted[n] = rn;
    const std::vector<double> s_back = s_from_r_chart(shifted);
    return detail::shannon_like(detail::roots_from_sympoly_raw(s_back));
  };
  return (entropy_at(r[n] + h) - entropy_at(r[n] - h)) / (2.0 * h);
}

// --- Simplex-average representation ---------------------------------------

struct SimplexAverageEstimate {
  double mean = 0.0;    // Monte Carlo estimate of the divided difference
  double stderr_ = 0.0; // standard error of the mean
  long long samples = 0;
};

// Monte Carlo evaluation of dS/ds_q through its simplex-integral
// representation: the divided difference equals the average of
// g_q^(n-1)(p . x) over the uniform simplex, divided by (n-1)!.
// Deterministic for a given seed, independent of worker count.
inline SimplexAverageEstimate hermite_genocchi_estimate(const Spectrum& x, int q,
                                                        long long samples,
                                                        std::uint64_t seed) {
  detail::check_derivative_order(x, q, "hermite_genocchi_estimate");
  detail::check_positive_nodes(x, q, "hermite_genocchi_estimate");
  if (samples < 2) {
    throw std::invalid_argument("hermite_genocchi_estimate: need at least 2 samples");
  }
  const int n = x.size();
  const int m = n - q;
  const double sign = (q % 2 == 0) ? 1.0 : -1.0;
  const std::vector<double>& nodes = x.values();

  const long long chunk = 4096;
  const long long nchunks = (samples + chunk - 1) / chunk;
  std::vector<double> sums(static_cast<std::size_t>(nchunks), 0.0);
  std::vector<double> sq_sums(static_cast<std::size_t>(nchunks), 0.0);

  parallel_for_index(nchunks, [&](std::int64_t c) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    const long long begin = c * chunk;
    const long long end = std::min(samples, begin + chunk);
    double local_sum = 0.0, local_sq = 0.0;
    std::vector<double> w(static_cast<std::size_t>(n));
    for (long long s = begin; s < end; ++s) {
      double total = 0.0;
      for (auto& wi : w) {
        wi = rng.exponential();
        total += wi;
      }
      double arg = 0.0;
      for (int i = 0; i < n; ++i) arg += (w[static_cast<std::size_t>(i)] / total) * nodes[static_cast<std::size_t>(i)];
      const double v = sign * xm_logx_derivative(m, n - 1, arg);
      local_sum += v;
      local_sq += v * v;
    }
    sums[static_cast<std::size_t>(c)] = local_sum;
    sq_sums[static_cast<std::size_t>(c)] = local_sq;
  });

  double sum = 0.0, sq = 0.0;
  for (long long c = 0; c < nchunks; ++c) {
    sum += sums[static_cast<std::size_t>(c)];
    sq += sq_sums[static_cast<std::size_t>(c)];
  }
  const double mean_raw = sum / static_cast<double>(samples);
  double var_raw = (sq - static_cast<double>(samples) * mean_raw * mean_raw) /
                   static_cast<double>(samples - 1);
  var_raw = std::max(var_raw, 0.0);
  const double stderr_raw = std::sqrt(var_raw / static_cast<double>(samples));
  const double norm = detail::factorial_d(n - 1);
  return {mean_raw / norm, stderr_raw / norm, samples};
}

}  // namespace ensvol
