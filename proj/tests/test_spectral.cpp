#include <catch2/catch_amalgamated.hpp>

#include <ensvol/spectral.hpp>

#include "oracles.hpp"

#include <cmath>
#include <vector>

using ensvol::RealizabilityError;
using ensvol::Rng;
using ensvol::Spectrum;

TEST_CASE("spectrum validates, sorts, and clamps", "[spectral]") {
  SECTION("values are sorted descending") {
    Spectrum s(std::vector<double>{0.2, 0.5, 0.3});
    REQUIRE(s[0] == Catch::Approx(0.5));
    REQUIRE(s[1] == Catch::Approx(0.3));
    REQUIRE(s[2] == Catch::Approx(0.2));
  }
  SECTION("tiny negatives from rounding are clamped to zero") {
    Spectrum s(std::vector<double>{1.0 + 5e-11, -5e-11});
    REQUIRE(s[1] == 0.0);
    REQUIRE(s[0] <= 1.0);
  }
  SECTION("genuinely negative values are rejected") {
    REQUIRE_THROWS_AS(Spectrum(std::vector<double>{1.1, -0.1}), std::invalid_argument);
  }
  SECTION("the trace is a live coordinate, not a validation gate") {
    // Sub-unit sums are legitimate (the trace s_1 varies along the charts);
    // unit trace is enforced only where it is structural (Gram matrices).
    Spectrum s(std::vector<double>{0.6, 0.3});
    REQUIRE(s.sum() == Catch::Approx(0.9).margin(1e-15));
  }
  SECTION("empty input is rejected") {
    REQUIRE_THROWS_AS(Spectrum(std::vector<double>{}), std::invalid_argument);
  }
  SECTION("positive_part drops structural zeros") {
    Spectrum s(std::vector<double>{0.7, 0.3, 0.0});
    const auto pos = s.positive_part();
    REQUIRE(pos.size() == 2);
    REQUIRE(pos[0] == Catch::Approx(0.7));
  }
  SECTION("min_gap reports the smallest spacing") {
    Spectrum s(std::vector<double>{0.5, 0.3, 0.2});
    REQUIRE(s.min_gap() == Catch::Approx(0.1));
  }
}

TEST_CASE("entropy of basic spectra", "[spectral]") {
  SECTION("uniform spectrum gives ln n") {
    for (int n = 2; n <= 8; ++n) {
      std::vector<double> v(static_cast<std::size_t>(n), 1.0 / n);
      REQUIRE(ensvol::von_neumann_entropy(Spectrum(v))
              == Catch::Approx(std::log(static_cast<double>(n))).epsilon(1e-12));
    }
  }
  SECTION("a deterministic spectrum gives zero") {
    REQUIRE(ensvol::von_neumann_entropy(Spectrum(std::vector<double>{1.0}))
            == 0.0);
    REQUIRE(ensvol::von_neumann_entropy(Spectrum(std::vector<double>{1.0, 0.0}))
            == 0.0);
  }
  SECTION("matches the 50-digit evaluation on random spectra") {
    Rng rng(901);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 5));
      const auto x = ensvol::random_spectrum(n, rng);
      const double ref = oracle::entropy(x.values());
      REQUIRE(ensvol::von_neumann_entropy(x) == Catch::Approx(ref).margin(1e-13));
    }
  }
  SECTION("entropy lies in [0, ln n]") {
    Rng rng(902);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 6));
      const auto x = ensvol::random_spectrum(n, rng);
      const double h = ensvol::von_neumann_entropy(x);
      REQUIRE(h >= 0.0);
      REQUIRE(h <= std::log(static_cast<double>(n)) + 1e-12);
    }
  }
}

TEST_CASE("elementary symmetric polynomials", "[spectral]") {
  SECTION("hand-checked cubic case") {
    const auto s = ensvol::symmetric_polys(Spectrum(std::vector<double>{0.5, 0.3, 0.2}));
    REQUIRE(s.order() == 3);
    REQUIRE(s[0] == 1.0);
    REQUIRE(s[1] == Catch::Approx(1.0).epsilon(1e-14));
    REQUIRE(s[2] == Catch::Approx(0.31).epsilon(1e-14));
    REQUIRE(s[3] == Catch::Approx(0.03).epsilon(1e-14));
  }
  SECTION("agrees with the Faddeev-LeVerrier recurrence on random Hermitian spectra") {
    Rng rng(903);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      const auto x = ensvol::random_spectrum(n, rng, 1e-6, 1e-6);
      // Conjugate the diagonal spectrum by a random unitary-ish rotation so the
      // trace recurrence sees a dense matrix.
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
      for (int i = 0; i < n; ++i) g(i, i) = x[static_cast<std::size_t>(i)];
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(n, n);
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
      Eigen::MatrixXcd qfull = qr.householderQ();
      g = qfull * g * qfull.adjoint();
      const auto via_trace = oracle::sympoly_faddeev_leverrier(g);
      const auto via_roots = ensvol::symmetric_polys(x);
      for (int q = 0; q <= n; ++q) {
        REQUIRE(via_roots[q] == Catch::Approx(via_trace[static_cast<std::size_t>(q)]).margin(1e-11));
      }
    }
  }
}

TEST_CASE("roots recovered from symmetric polynomials", "[spectral]") {
  SECTION("round trip on well-separated random spectra") {
    Rng rng(904);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      const auto x = ensvol::random_spectrum(n, rng, 1e-3, 1e-3);
      const auto s = ensvol::symmetric_polys(x);
      const auto back = ensvol::roots_from_symmetric_polys(s);
      for (int i = 0; i < n; ++i) {
        REQUIRE(back[static_cast<std::size_t>(i)]
                == Catch::Approx(x[static_cast<std::size_t>(i)]).margin(1e-9));
      }
    }
  }
  SECTION("coefficient sets with complex roots are rejected") {
    // y^2 - y + 0.4 has discriminant 1 - 1.6 < 0.
    const ensvol::SymmetricPolys s(std::vector<double>{1.0, 1.0, 0.4});
    REQUIRE_THROWS_AS(ensvol::roots_from_symmetric_polys(s), RealizabilityError);
  }
  SECTION("coefficient sets with a negative root are rejected") {
    // y^2 - 0.8 y - 0.09 has roots 0.9 and -0.1.
    const ensvol::SymmetricPolys s(std::vector<double>{1.0, 0.8, -0.09});
    REQUIRE_THROWS_AS(ensvol::roots_from_symmetric_polys(s), RealizabilityError);
  }
}

TEST_CASE("hermitian eigenvalue helpers", "[spectral]") {
  SECTION("non-hermitian input is rejected") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = {0.5, 0.0};
    m(1, 0) = {0.2, 0.0};
    m(0, 0) = m(1, 1) = 0.5;
    REQUIRE_THROWS_AS(ensvol::eigenvalues_hermitian(m), std::invalid_argument);
  }
  SECTION("decomposition reconstructs the matrix with descending eigenvalues") {
    Rng rng(905);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(n, n);
      Eigen::MatrixXcd h = m * m.adjoint();
      h /= h.trace().real();
      const auto dec = ensvol::eigen_decomposition(h);
      const auto& vals = dec.spectrum.values();
      Eigen::MatrixXcd rebuilt =
          dec.vectors *
          Eigen::Map<const Eigen::VectorXd>(vals.data(), n).asDiagonal() *
          dec.vectors.adjoint();
      REQUIRE((rebuilt - h).cwiseAbs().maxCoeff() < 1e-9);
      for (int i = 0; i + 1 < n; ++i) {
        REQUIRE(dec.spectrum[i] >= dec.spectrum[i + 1] - 1e-12);
      }
    }
  }
}

TEST_CASE("random spectra respect their floors and are reproducible", "[spectral]") {
  SECTION("floors hold") {
    Rng rng(906);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_int(0, 5));
      const auto x = ensvol::random_spectrum(n, rng, 1e-3, 1e-2);
      REQUIRE(x.min_gap() >= 1e-3 - 1e-12);
      REQUIRE(x[static_cast<std::size_t>(n - 1)] >= 1e-2 - 1e-12);
    }
  }
  SECTION("same seed draws the same spectrum") {
    Rng a(907);
    Rng b(907);
    const auto xa = ensvol::random_spectrum(5, a, 1e-4, 1e-4);
    const auto xb = ensvol::random_spectrum(5, b, 1e-4, 1e-4);
    for (int i = 0; i < 5; ++i) {
      REQUIRE(xa[static_cast<std::size_t>(i)] == xb[static_cast<std::size_t>(i)]);
    }
  }
}
