#include <catch2/catch_amalgamated.hpp>

#include <ensvol/calculus.hpp>
#include <ensvol/spectral.hpp>

#include "oracles.hpp"

#include <cmath>
#include <vector>

using ensvol::Rng;
using ensvol::Spectrum;

namespace {

Spectrum uniform_spectrum(int n) {
  return Spectrum(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

}  // namespace

TEST_CASE("derivatives of x^m ln x", "[calculus]") {
  SECTION("hand-checked values") {
    // d/dx [x ln x] = ln x + 1, so the value at e is 2.
    REQUIRE(ensvol::xm_logx_derivative(1, 1, std::exp(1.0)) == Catch::Approx(2.0).epsilon(1e-14));
    // d2/dx2 [x^2 ln x] = 2 ln x + 3, so the value at 1 is 3.
    REQUIRE(ensvol::xm_logx_derivative(2, 2, 1.0) == Catch::Approx(3.0).epsilon(1e-14));
    // Order zero is the function itself.
    REQUIRE(ensvol::xm_logx_derivative(0, 0, 2.0) == Catch::Approx(std::log(2.0)).epsilon(1e-14));
    // Beyond the polynomial degree the powers go negative:
    // d3/dx3 [x ln x] = -1/x^2, so the value at 0.5 is -4.
    REQUIRE(ensvol::xm_logx_derivative(1, 3, 0.5) == Catch::Approx(-4.0).epsilon(1e-13));
  }
  SECTION("each order is the derivative of the previous order") {
    Rng rng(911);
    for (int trial = 0; trial < 100; ++trial) {
      const int m = static_cast<int>(rng.uniform_int(0, 4));
      const int j = 1 + static_cast<int>(rng.uniform_int(0, 5));
      const double x = rng.uniform(0.3, 2.0);
      const double h = 1e-6 * x;
      const double fd = (ensvol::xm_logx_derivative(m, j - 1, x + h) -
                         ensvol::xm_logx_derivative(m, j - 1, x - h)) /
                        (2.0 * h);
      const double exact = ensvol::xm_logx_derivative(m, j, x);
      REQUIRE(exact == Catch::Approx(fd).epsilon(1e-6).margin(1e-8));
    }
  }
  SECTION("nonpositive evaluation points are rejected") {
    REQUIRE_THROWS_AS(ensvol::xm_logx_derivative(1, 1, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(ensvol::xm_logx_derivative(1, 1, -1.0), std::domain_error);
  }
}

TEST_CASE("plain power derivatives", "[calculus]") {
  REQUIRE(ensvol::detail::power_derivative(3, 0, 2.0) == Catch::Approx(8.0));
  REQUIRE(ensvol::detail::power_derivative(3, 2, 2.0) == Catch::Approx(12.0));
  REQUIRE(ensvol::detail::power_derivative(3, 3, 5.0) == Catch::Approx(6.0));
  REQUIRE(ensvol::detail::power_derivative(3, 4, 5.0) == 0.0);
  REQUIRE(ensvol::detail::ipow(0.0, 0) == 1.0);
  REQUIRE(ensvol::detail::ipow(2.0, 10) == Catch::Approx(1024.0));
}

TEST_CASE("divided differences over general node sets", "[calculus]") {
  auto cubic = [](int order, double y) { return ensvol::detail::power_derivative(3, order, y); };
  SECTION("leading coefficient of a cubic") {
    const std::vector<double> nodes{0.1, 0.4, 0.7, 1.3};
    REQUIRE(ensvol::divided_difference(cubic, nodes) == Catch::Approx(1.0).epsilon(1e-12));
  }
  SECTION("one more node than the degree gives zero") {
    const std::vector<double> nodes{0.1, 0.4, 0.7, 1.3, 2.0};
    REQUIRE(ensvol::divided_difference(cubic, nodes) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("a doubled node evaluates the first derivative") {
    auto f = [](int order, double y) { return ensvol::xm_logx_derivative(2, order, y); };
    const double a = 0.7;
    const std::vector<double> nodes{a, a};
    // d/dx [x^2 ln x] = 2 x ln x + x.
    REQUIRE(ensvol::divided_difference(f, nodes)
            == Catch::Approx(2.0 * a * std::log(a) + a).epsilon(1e-14));
  }
  SECTION("nodes inside the merge gap snap to the confluent value") {
    auto f = [](int order, double y) { return ensvol::xm_logx_derivative(2, order, y); };
    const double a = 0.7;
    const std::vector<double> close{a, a + 1e-12};
    const std::vector<double> equal{a + 0.5e-12, a + 0.5e-12};
    REQUIRE(ensvol::divided_difference(f, close)
            == Catch::Approx(ensvol::divided_difference(f, equal)).epsilon(1e-9));
  }
  SECTION("distinct nodes agree with the 50-digit direct sum") {
    Rng rng(912);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      const auto x = ensvol::random_spectrum(n, rng, 1e-2, 1e-2);
      auto f = [](int order, double y) { return ensvol::xm_logx_derivative(2, order, y); };
      const double table_value = ensvol::divided_difference(f, x.values());
      const double direct = oracle::lagrange_dd(x.values(), [](const oracle::mp& y) {
        return oracle::mp_ipow(y, 2) * boost::multiprecision::log(y);
      });
      REQUIRE(table_value == Catch::Approx(direct).epsilon(1e-10).margin(1e-12));
    }
  }
}

TEST_CASE("entropy derivative with respect to the symmetric polynomials", "[calculus]") {
  SECTION("two-level closed form") {
    const Spectrum x(std::vector<double>{0.6, 0.4});
    REQUIRE(ensvol::dS_ds(x, 2) == Catch::Approx(std::log(1.5) / 0.2).epsilon(1e-13));
    REQUIRE(ensvol::dS_ds(x, 2) == Catch::Approx(2.027325540540822).epsilon(1e-12));
    REQUIRE(ensvol::dS_ds(x, 2) == Catch::Approx(oracle::dS_ds(x.values(), 2)).epsilon(1e-13));
  }
  SECTION("matches the 50-digit evaluation on random separated spectra") {
    Rng rng(913);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      const auto x = ensvol::random_spectrum(n, rng, 1e-3, 1e-3);
      for (int q = 2; q <= n; ++q) {
        const double ref = oracle::dS_ds(x.values(), q);
        REQUIRE(ensvol::dS_ds(x, q) == Catch::Approx(ref).epsilon(1e-9).margin(1e-12));
      }
    }
  }
  SECTION("the uniform spectrum attains the lower bound exactly") {
    for (int n = 2; n <= 6; ++n) {
      const Spectrum x = uniform_spectrum(n);
      for (int q = 2; q <= n; ++q) {
        REQUIRE(ensvol::dS_ds(x, q)
                == Catch::Approx(ensvol::lower_bound_dS_ds(n, q)).epsilon(1e-11));
      }
    }
  }
  SECTION("order outside 2..n is rejected") {
    const Spectrum x(std::vector<double>{0.6, 0.4});
    REQUIRE_THROWS_AS(ensvol::dS_ds(x, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(ensvol::dS_ds(x, 3), std::invalid_argument);
  }
  SECTION("zero eigenvalues are rejected") {
    const Spectrum x(std::vector<double>{1.0, 0.0});
    REQUIRE_THROWS_AS(ensvol::dS_ds(x, 2), std::domain_error);
  }
  SECTION("finite differences confirm the closed form") {
    Rng rng(914);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));
      const auto x = ensvol::random_spectrum(n, rng, 5e-3, 5e-2);
      const auto s = ensvol::symmetric_polys(x);
      for (int q = 2; q <= n; ++q) {
        const double h = 1e-6 * std::max(std::abs(s[q]), 1e-4);
        const double fd = ensvol::finite_diff_dS_ds(x, q, h);
        REQUIRE(ensvol::dS_ds(x, q) == Catch::Approx(fd).epsilon(1e-5).margin(1e-9));
      }
    }
  }
}

TEST_CASE("lower bound values", "[calculus]") {
  REQUIRE(ensvol::lower_bound_dS_ds(2, 2) == Catch::Approx(2.0));
  REQUIRE(ensvol::lower_bound_dS_ds(3, 2) == Catch::Approx(1.5));
  REQUIRE(ensvol::lower_bound_dS_ds(3, 3) == Catch::Approx(4.5));
  REQUIRE(ensvol::lower_bound_dS_ds(6, 2) == Catch::Approx(1.2));
  REQUIRE_THROWS_AS(ensvol::lower_bound_dS_ds(3, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(ensvol::lower_bound_dS_ds(3, 4), std::invalid_argument);
}

TEST_CASE("eigenvalue sensitivities to the symmetric polynomials", "[calculus]") {
  SECTION("two-level hand value") {
    const Spectrum x(std::vector<double>{0.6, 0.4});
    // dx_1/ds_2 = -x_1^0 / (x_1 - x_2) = -5.
    REQUIRE(ensvol::dx_ds(x, 1, 2) == Catch::Approx(-5.0).epsilon(1e-13));
    REQUIRE(ensvol::dx_ds(x, 2, 2) == Catch::Approx(5.0).epsilon(1e-13));
  }
  SECTION("chain rule: entropy derivative assembles from eigenvalue sensitivities") {
    Rng rng(915);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      const auto x = ensvol::random_spectrum(n, rng, 1e-2, 1e-2);
      for (int q = 2; q <= n; ++q) {
        double chain = 0.0;
        for (int k = 1; k <= n; ++k) {
          chain += -(1.0 + std::log(x[k - 1])) * ensvol::dx_ds(x, k, q);
        }
        REQUIRE(chain == Catch::Approx(ensvol::dS_ds(x, q)).epsilon(1e-9).margin(1e-11));
      }
    }
  }
  SECTION("coincident eigenvalues are rejected") {
    const Spectrum x(std::vector<double>{0.5, 0.5});
    REQUIRE_THROWS_AS(ensvol::dx_ds(x, 1, 2), std::domain_error);
  }
  SECTION("alternating kernel sums vanish for q >= 2 and give s_1 at q = 1") {
    Rng rng(916);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      const auto x = ensvol::random_spectrum(n, rng, 1e-2, 1e-3);
      double scale = 0.0;
      for (int q = 2; q <= n; ++q) {
        const double r = ensvol::power_identity_residual(x, q, &scale);
        REQUIRE(std::abs(r) / scale < 1e-10);
      }
      const double top = ensvol::power_identity_residual(x, 1, &scale);
      REQUIRE(std::abs(top - 1.0) / scale < 1e-10);
    }
  }
}

TEST_CASE("shifted derivative family", "[calculus]") {
  SECTION("zero shift reproduces the entropy derivative") {
    Rng rng(917);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));
      const auto x = ensvol::random_spectrum(n, rng, 1e-2, 1e-2);
      for (int q = 2; q <= n; ++q) {
        REQUIRE(ensvol::w_function(x, q, 0.0)
                == Catch::Approx(ensvol::dS_ds(x, q)).epsilon(1e-12));
      }
    }
  }
  SECTION("two-level closed form across shift scales") {
    const Spectrum x(std::vector<double>{0.6, 0.4});
    for (double a : {0.0, 0.1, 0.9, 3.9, 4.1, 50.0, 1e4}) {
      const double exact = std::log((0.6 + a) / (0.4 + a)) / 0.2;
      REQUIRE(ensvol::w_function(x, 2, a) == Catch::Approx(exact).epsilon(1e-11));
    }
  }
  SECTION("table and series routes agree with the 50-digit referee near the switch") {
    Rng rng(918);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));
      const auto x = ensvol::random_spectrum(n, rng, 5e-2, 5e-2);
      const double switch_point = std::max(1.0, 4.0 * x[0]);
      for (int q = 2; q <= n; ++q) {
        // Just below the switch the table route is in force.
        const double below = switch_point * (1.0 - 1e-6);
        REQUIRE(ensvol::w_function(x, q, below)
                == Catch::Approx(oracle::w_function(x.values(), q, below)).epsilon(1e-8));
        // Just above it the series route takes over.
        const double above = switch_point * (1.0 + 1e-6);
        REQUIRE(ensvol::w_function(x, q, above)
                == Catch::Approx(oracle::w_function(x.values(), q, above)).epsilon(1e-10));
        // The two production routes agree with each other at the same shift
        // inside the series' convergence region.
        const double mid = 2.5 * x[0] + 0.1;
        if (mid < switch_point) {
          const double via_series = ensvol::detail::w_series(x.values(), q, mid);
          REQUIRE(ensvol::w_function(x, q, mid)
                  == Catch::Approx(via_series).epsilon(1e-8));
        }
      }
    }
  }
  SECTION("negative shifts are rejected") {
    const Spectrum x(std::vector<double>{0.6, 0.4});
    REQUIRE_THROWS_AS(ensvol::w_function(x, 2, -0.1), std::invalid_argument);
  }
  SECTION("scaled tail approaches the exact Beta limit") {
    Rng rng(919);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      const auto x = ensvol::random_spectrum(n, rng, 1e-3, 1e-3);
      for (int q = 2; q <= n; ++q) {
        const std::vector<double> shifts{1e3 * std::max(1.0, x[0])};
        const auto report = ensvol::w_asymptotic_check(x, q, shifts);
        REQUIRE(report.beta == Catch::Approx(ensvol::beta_integer(q - 1, n - q + 1)));
        REQUIRE(report.points.size() == 1);
        REQUIRE(std::abs(report.points[0].ratio - 1.0) < 0.02);
      }
    }
  }
  SECTION("small shifts are refused by the tail check") {
    const Spectrum x(std::vector<double>{0.6, 0.4});
    const std::vector<double> shifts{5.0};
    REQUIRE_THROWS_AS(ensvol::w_asymptotic_check(x, 2, shifts), std::invalid_argument);
  }
}

TEST_CASE("exact integer Beta values", "[calculus]") {
  REQUIRE(ensvol::beta_integer(1, 1) == Catch::Approx(1.0));
  REQUIRE(ensvol::beta_integer(2, 3) == Catch::Approx(1.0 / 12.0));
  REQUIRE(ensvol::beta_integer(3, 3) == Catch::Approx(1.0 / 30.0));
  REQUIRE_THROWS_AS(ensvol::beta_integer(0, 1), std::invalid_argument);
}

TEST_CASE("subentropy", "[calculus]") {
  SECTION("two-level hand value") {
    const Spectrum x(std::vector<double>{0.6, 0.4});
    const double exact = -(0.36 * std::log(0.6) - 0.16 * std::log(0.4)) / 0.2;
    REQUIRE(ensvol::subentropy(x) == Catch::Approx(exact).epsilon(1e-13));
    REQUIRE(ensvol::subentropy(x)
            == Catch::Approx(oracle::subentropy(x.values())).epsilon(1e-13));
  }
  SECTION("nearly deterministic spectra have nearly zero subentropy") {
    const Spectrum x(std::vector<double>{1.0 - 1e-6, 1e-6});
    REQUIRE(std::abs(ensvol::subentropy(x)) < 1e-4);
  }
  SECTION("bounded between zero and the entropy") {
    Rng rng(920);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      const auto x = ensvol::random_spectrum(n, rng, 1e-4, 1e-4);
      const double q = ensvol::subentropy(x);
      REQUIRE(q >= -1e-12);
      REQUIRE(q <= ensvol::von_neumann_entropy(x) + 1e-9);
    }
  }
  SECTION("the confluent path continues the distinct-node values") {
    // Richardson-extrapolate the distinct-node evaluation toward the tie and
    // compare with the direct confluent evaluation.
    const double gap1 = 1e-3, gap2 = 5e-4;
    auto split = [](double gap) {
      return Spectrum(std::vector<double>{0.5 + gap / 2, 0.5 - gap / 2});
    };
    const double v1 = ensvol::subentropy(split(gap1));
    const double v2 = ensvol::subentropy(split(gap2));
    const double tied = ensvol::subentropy(Spectrum(std::vector<double>{0.5, 0.5}));
    // The gap enters quadratically, so use gap^2 as the Richardson variable.
    const double extrapolated = (4.0 * v2 - v1) / 3.0;
    REQUIRE(tied == Catch::Approx(extrapolated).epsilon(1e-6));
  }
  SECTION("zero eigenvalues are rejected") {
    const Spectrum x(std::vector<double>{1.0, 0.0});
    REQUIRE_THROWS_AS(ensvol::subentropy(x), std::domain_error);
  }
}

TEST_CASE("coordinate charts", "[calculus]") {
  SECTION("round trips are exact") {
    Rng rng(921);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      const auto x = ensvol::random_spectrum(n, rng, 1e-3, 1e-3);
      const auto s = ensvol::symmetric_polys(x).s;
      const auto t = ensvol::t_chart_from_s(s);
      const auto s_back = ensvol::s_from_t_chart(t);
      const auto r = ensvol::r_chart_from_s(s);
      const auto s_back2 = ensvol::s_from_r_chart(r);
      for (std::size_t i = 0; i < s.size(); ++i) {
        REQUIRE(s_back[i] == Catch::Approx(s[i]).epsilon(1e-14).margin(1e-300));
        REQUIRE(s_back2[i] == Catch::Approx(s[i]).epsilon(1e-13).margin(1e-300));
      }
    }
  }
  SECTION("reciprocal-chart derivative complements the subentropy") {
    Rng rng(922);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      const auto x = ensvol::random_spectrum(n, rng, 1e-3, 1e-3);
      REQUIRE(ensvol::dS_dt1(x)
              == Catch::Approx(1.0 - ensvol::subentropy(x)).epsilon(1e-10));
      const double ref = oracle::chart_core(x.values());
      REQUIRE(ensvol::dS_dt1(x) == Catch::Approx(ref).epsilon(1e-9).margin(1e-12));
    }
  }
  SECTION("reversed-chart derivative carries the top coordinate weight") {
    Rng rng(923);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      const auto x = ensvol::random_spectrum(n, rng, 1e-3, 1e-3);
      double sn = 1.0;
      for (double v : x.values()) sn *= v;
      REQUIRE(ensvol::dS_drn(x)
              == Catch::Approx(sn * (1.0 - ensvol::subentropy(x))).epsilon(1e-10));
    }
  }
  SECTION("finite differences along the chart coordinates") {
    Rng rng(924);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));
      const auto x = ensvol::random_spectrum(n, rng, 5e-3, 5e-2);
      const double fd_t = ensvol::finite_diff_dS_dt1(x, 1e-6);
      REQUIRE(ensvol::dS_dt1(x) == Catch::Approx(fd_t).epsilon(1e-5).margin(1e-8));
      double sn = 1.0;
      for (double v : x.values()) sn *= v;
      const double fd_r = ensvol::finite_diff_dS_drn(x, 1e-6 / sn);
      REQUIRE(ensvol::dS_drn(x) == Catch::Approx(fd_r).epsilon(1e-5).margin(1e-8));
    }
  }
}

TEST_CASE("simplex-average representation of the entropy derivative", "[calculus]") {
  SECTION("two-level value is recovered within statistical error") {
    const Spectrum x(std::vector<double>{0.6, 0.4});
    const auto est = ensvol::hermite_genocchi_estimate(x, 2, 200000, 42);
    const double exact = std::log(1.5) / 0.2;
    REQUIRE(std::abs(est.mean - exact) < 4.0 * est.stderr_);
    REQUIRE(est.mean > 0.0);
    REQUIRE(est.samples == 200000);
  }
  SECTION("same seed reproduces the estimate bit for bit") {
    const Spectrum x(std::vector<double>{0.5, 0.3, 0.2});
    const auto a = ensvol::hermite_genocchi_estimate(x, 3, 50000, 7);
    const auto b = ensvol::hermite_genocchi_estimate(x, 3, 50000, 7);
    REQUIRE(a.mean == b.mean);
    REQUIRE(a.stderr_ == b.stderr_);
  }
  SECTION("standard error shrinks like the square root of the sample count") {
    const Spectrum x(std::vector<double>{0.5, 0.3, 0.2});
    const auto small = ensvol::hermite_genocchi_estimate(x, 2, 50000, 11);
    const auto large = ensvol::hermite_genocchi_estimate(x, 2, 200000, 13);
    const double ratio = small.stderr_ / large.stderr_;
    REQUIRE(ratio > 1.6);
    REQUIRE(ratio < 2.6);
  }
  SECTION("the integrand seen by the average is positive") {
    // The sampled integrand is (sign) g_q^(n-1) at interior points; spot-check
    // the sign over a grid of evaluation points and orders.
    for (int n = 2; n <= 8; ++n) {
      for (int q = 2; q <= n; ++q) {
        const double sign = (q % 2 == 0) ? 1.0 : -1.0;
        for (int g = 0; g < 100; ++g) {
          const double y = (g + 0.5) / 100.0;
          REQUIRE(sign * ensvol::xm_logx_derivative(n - q, n - 1, y) > 0.0);
        }
      }
    }
  }
}
