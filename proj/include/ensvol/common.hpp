#pragma once

// Shared numeric policy, deterministic random streams, and the thread pool
// used by the verification harnesses.  Everything downstream routes its
// tolerances and randomness through this header so that a given seed produces
// the same artifacts on every run, regardless of worker count.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ensvol {

// Central tolerance table.  Each constant is named for the contract it
// enforces; tests reference these instead of re-typing literals.
namespace tol {
inline constexpr double hermitian = 1e-12;        // overlap/gram Hermiticity gate
inline constexpr double hermitian_eigen = 1e-10;  // eigensolver input gate
inline constexpr double unit_diagonal = 1e-12;    // overlap diagonal == 1
inline constexpr double psd_slack = -1e-10;       // smallest admissible eigenvalue
inline constexpr double trace_one = 1e-12;        // gram/density trace == 1
inline constexpr double state_norm = 1e-12;       // pure-state normalization
inline constexpr double prob_floor = 1e-12;       // strict positivity of weights
inline constexpr double prob_sum = 1e-12;         // weight normalization
inline constexpr double spectrum_window = 1e-10;  // admissible eigenvalue range slack
inline constexpr double spectrum_sum = 1e-10;     // eigenvalue sum == 1 (unit trace)
inline constexpr double structural_zero = 1e-10;  // rank cutoff for gram spectra
inline constexpr double confluence_gap = 1e-8;    // node-merge threshold in divided differences
inline constexpr double det_imag_reject = 1e-8;   // principal minor imaginary-part error gate
inline constexpr double root_imag = 1e-8;         // companion-root imaginary-part gate
inline constexpr double root_negative = -1e-8;    // companion-root negativity gate
inline constexpr double reconstruction = 1e-9;    // overlap round-trip fidelity
inline constexpr double decomposition_residual = 1e-9;  // ||M - V D V^H|| gate
}  // namespace tol

// Thrown when a coordinate point (elementary symmetric values or a chart
// image of them) does not correspond to any real nonnegative spectrum.
class RealizabilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Derives an independent stream seed from a base seed and a stream index.
// Used to hand each trial / shard its own generator so results do not depend
// on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (0xa0761d6478bd642fULL + stream * 0xe7037ed1a0b428dbULL);
  std::uint64_t a = detail::splitmix64_next(state);
  std::uint64_t b = detail::splitmix64_next(state);
  return a ^ (b >> 1);
}

// Deterministic random source.  All variates are produced from raw 64-bit
// draws with fixed arithmetic (no std::distribution objects, whose outputs
// vary across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi] (inclusive); rejection-free modulo is fine
  // for the small ranges used here.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
  }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * 3.14159265358979323846 * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  // Unit-mean exponential, floored away from zero so that normalized simplex
  // coordinates can never violate the strict-positivity contracts downstream.
  double exponential() {
    double u = uniform01();
    double e = -std::log1p(-u);
    return e < 1e-9 ? 1e-9 : e;
  }

  // Standard complex normal (real and imaginary parts N(0, 1/2)).
  std::complex<double> complex_normal() {
    const double inv_sqrt2 = 0.70710678118654752440;
    return {normal() * inv_sqrt2, normal() * inv_sqrt2};
  }

  // Uniform point on the probability simplex (flat Dirichlet), strictly
  // positive coordinates.
  std::vector<double> simplex_point(int n) {
    std::vector<double> p(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& v : p) {
      v = exponential();
      total += v;
    }
    for (auto& v : p) v /= total;
    return p;
  }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Worker budget: ENSEMBLE_VOL_THREADS if set (0 means "auto"), otherwise the
// hardware concurrency.
inline unsigned thread_budget() {
  unsigned requested = 0;
  if (const char* env = std::getenv("ENSEMBLE_VOL_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) requested = static_cast<unsigned>(v);
  }
  if (requested == 0) {
    requested = std::thread::hardware_concurrency();
    if (requested == 0) requested = 1;
  }
  return requested;
}

// Runs fn(i) for i in [0, n).  Work items write into caller-owned slots
// indexed by i, so results are identical for any worker count; the first
// exception (by arbitrary schedule, but there should be none in healthy runs)
// is rethrown on the calling thread.
template <class Fn>
void parallel_for_index(std::int64_t n, Fn&& fn) {
  if (n <= 0) return;
  const unsigned budget = thread_budget();
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(budget, n));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::int64_t chunk = std::max<std::int64_t>(1, n / (workers * 8));
  auto worker = [&] {
    for (;;) {
      const std::int64_t begin = next.fetch_add(chunk);
      if (begin >= n) return;
      const std::int64_t end = std::min(begin + chunk, n);
      try {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace detail {

// Exact binomial coefficient in 64-bit; the running product is integral after
// every division.  Safe through k = 60 for all i.
inline long long binomial_ll(int k, int i) {
  if (i < 0 || i > k) return 0;
  if (i > k - i) i = k - i;
  long long result = 1;
  for (int step = 1; step <= i; ++step) {
    result = result * (k - i + step) / step;
  }
  return result;
}

inline double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace detail

}  // namespace ensvol
