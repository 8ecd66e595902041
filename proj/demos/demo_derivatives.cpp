// Walk the derivative toolkit on one spectrum: entropy sensitivities with
// respect to the characteristic-polynomial coefficients, their sharp lower
// bounds, the shifted-kernel family, the two boundary charts, and a Monte
// Carlo cross-check of the divided-difference representation.
//
//   ./demo_derivatives                 # default spectrum 0.55 0.30 0.15
//   ./demo_derivatives 0.4 0.3 0.2 0.1 # any positive list; it is normalized

#include <ensvol/ensvol.hpp>

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <vector>

int main(int argc, char** argv) {
  try {
    std::vector<double> vals = {0.55, 0.30, 0.15};
    if (argc > 1) {
      vals.clear();
      for (int i = 1; i < argc; ++i) vals.push_back(std::atof(argv[i]));
      const double total = std::accumulate(vals.begin(), vals.end(), 0.0);
      for (double& v : vals) v /= total;
    }
    const ensvol::Spectrum x(vals);
    const int n = x.size();

    std::printf("spectrum (descending):");
    for (int i = 0; i < n; ++i) std::printf(" %.6f", x[i]);
    std::printf("\n\n");

    const double entropy = ensvol::von_neumann_entropy(x);
    const double q_sub = ensvol::subentropy(x);
    std::printf("entropy     S = %.12f nats\n", entropy);
    std::printf("subentropy  Q = %.12f nats  (0 <= Q <= S)\n\n", q_sub);

    std::printf("coefficient sensitivities dS/ds_q vs their sharp bounds:\n");
    std::printf("  q    dS/ds_q           lower bound       finite diff\n");
    for (int q = 2; q <= n; ++q) {
      const double exact = ensvol::dS_ds(x, q);
      const double bound = ensvol::lower_bound_dS_ds(n, q);
      const double fd = ensvol::finite_diff_dS_ds(x, q, 1e-7);
      std::printf("  %d    %-16.10f  %-16.10f  %-16.10f\n", q, exact, bound, fd);
    }

    std::printf("\nshifted kernels W_q(a) (W_q(0) = dS/ds_q; decay ~ a^{1-q}):\n");
    std::printf("  q    a=0               a=1               a=10\n");
    for (int q = 2; q <= n; ++q) {
      std::printf("  %d    %-16.10f  %-16.10f  %-16.10f\n", q,
                  ensvol::w_function(x, q, 0.0), ensvol::w_function(x, q, 1.0),
                  ensvol::w_function(x, q, 10.0));
    }

    std::printf("\nboundary charts (complement identities at unit trace):\n");
    const double dt1 = ensvol::dS_dt1(x);
    const double drn = ensvol::dS_drn(x);
    double s_n = 1.0;
    for (double v : x.values()) s_n *= v;
    std::printf("  dS/dt_1 = %.12f   1 - Q        = %.12f\n", dt1, 1.0 - q_sub);
    std::printf("  dS/dr_n = %.12f   s_n (1 - Q)  = %.12f\n", drn, s_n * (1.0 - q_sub));

    std::printf("\nsimplex-average route (Monte Carlo, 200000 samples, q = 2):\n");
    const auto mc = ensvol::hermite_genocchi_estimate(x, 2, 200000, 42);
    std::printf("  estimate %.10f +- %.2e   exact %.10f\n", mc.mean, mc.stderr_,
                ensvol::dS_ds(x, 2));
    return 0;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "demo_derivatives: %s\n", ex.what());
    return 1;
  }
}
