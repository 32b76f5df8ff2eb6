#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "phononbus/chain.hpp"
#include "phononbus/constants.hpp"
#include "phononbus/errors.hpp"

using namespace phononbus;

TEST_CASE("small chains match the analytic equilibria") {
  const Eigen::VectorXd u1 = equilibrium_positions(1);
  REQUIRE(u1.size() == 1);
  REQUIRE(u1(0) == 0.0);

  // Two ions: 2u = 1/(2u)^2, so u = (1/4)^{1/3}.
  const double u2 = std::cbrt(0.25);
  const Eigen::VectorXd pos2 = equilibrium_positions(2);
  REQUIRE(std::abs(pos2(0) + u2) < 1e-12);
  REQUIRE(std::abs(pos2(1) - u2) < 1e-12);

  // Three ions: outer ion at d solves d = 1/d^2 + 1/(2d)^2, so d = (5/4)^{1/3}.
  const double u3 = std::cbrt(1.25);
  const Eigen::VectorXd pos3 = equilibrium_positions(3);
  REQUIRE(std::abs(pos3(0) + u3) < 1e-12);
  REQUIRE(std::abs(pos3(1)) < 1e-13);
  REQUIRE(std::abs(pos3(2) - u3) < 1e-12);
}

TEST_CASE("equilibria satisfy force balance and antisymmetry for long chains") {
  for (int n : {5, 10, 30, 60, 100}) {
    const Eigen::VectorXd u = equilibrium_positions(n);

    // Independent residual: trap force vs pairwise Coulomb forces.
    for (int m = 0; m < n; ++m) {
      double coul = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == m) continue;
        const double d = u(m) - u(k);
        coul += (d > 0 ? 1.0 : -1.0) / (d * d);
      }
      REQUIRE(std::abs(u(m) - coul) < 1e-12);
    }

    for (int i = 1; i < n; ++i) REQUIRE(u(i) > u(i - 1));
    for (int i = 0; i < n; ++i) REQUIRE(u(i) == -u(n - 1 - i));
  }
}

TEST_CASE("three-ion coupling matrix matches the hand-computed Hessian") {
  const Eigen::VectorXd u = equilibrium_positions(3);
  const Eigen::MatrixXd a = mode_coupling_matrix(u);

  // With d = (5/4)^{1/3}: 1/d^3 = 0.8 and 1/(2d)^3 = 0.1.
  Eigen::MatrixXd expected(3, 3);
  expected << 2.8, -1.6, -0.2,
             -1.6,  4.2, -1.6,
             -0.2, -1.6,  2.8;
  REQUIRE((a - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mode frequencies follow the analytic ratios") {
  const IonChain two = IonChain::natural(2);
  const auto m2 = normal_modes(two);
  REQUIRE(m2.size() == 2);
  REQUIRE(m2[0].omega == two.omega_x);  // exact by construction
  REQUIRE(std::abs(m2[1].omega - std::sqrt(3.0)) < 1e-10);

  const IonChain three = IonChain::natural(3);
  const auto m3 = normal_modes(three);
  REQUIRE(m3[0].omega == three.omega_x);
  REQUIRE(std::abs(m3[1].omega - std::sqrt(3.0)) < 1e-10);
  REQUIRE(std::abs(m3[2].omega - std::sqrt(29.0 / 5.0)) < 1e-10);

  // Frequencies scale linearly with the trap frequency.
  IonChain scaled = IonChain::natural(3);
  scaled.omega_x = 7.5;
  const auto ms = normal_modes(scaled);
  for (int p = 0; p < 3; ++p)
    REQUIRE(std::abs(ms[p].omega - 7.5 * m3[p].omega) < 1e-9);
}

TEST_CASE("mode vectors are orthonormal with the documented sign conventions") {
  const IonChain chain = IonChain::natural(10);
  const auto modes = normal_modes(chain);
  const int n = chain.count;

  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double dot = modes[p].b.dot(modes[q].b);
      REQUIRE(std::abs(dot - (p == q ? 1.0 : 0.0)) < 1e-10);
    }
  }

  // Center of mass: every component +1/sqrt(N), so the sum is sqrt(N).
  for (int i = 0; i < n; ++i)
    REQUIRE(std::abs(modes[0].b(i) - 1.0 / std::sqrt(double(n))) < 1e-10);
  REQUIRE(std::abs(modes[0].b.sum() - std::sqrt(double(n))) < 1e-10);

  // Higher modes: components sum to zero and lead with a positive entry.
  for (int p = 1; p < n; ++p) {
    REQUIRE(std::abs(modes[p].b.sum()) < 1e-10);
    for (int i = 0; i < n; ++i) {
      if (std::abs(modes[p].b(i)) > 1e-12) {
        REQUIRE(modes[p].b(i) > 0.0);
        break;
      }
    }
    REQUIRE(modes[p].omega > modes[p - 1].omega);
  }
}

TEST_CASE("Lamb-Dicke parameters follow the zero-point-length formula") {
  const IonChain chain = IonChain::natural(4);
  auto modes = normal_modes(chain);
  const double k_eff = 0.37;

  // Center of mass: equal couplings k sqrt(hbar/(2 N M omega_x)).
  const Eigen::VectorXd eta1 = lamb_dicke(chain, modes[0], k_eff);
  const double expected =
      k_eff * std::sqrt(1.0 / (2.0 * chain.count * chain.omega_x));
  for (int i = 0; i < chain.count; ++i)
    REQUIRE(std::abs(eta1(i) - expected) < 1e-12);

  for (std::size_t p = 1; p < modes.size(); ++p) {
    const Eigen::VectorXd eta = lamb_dicke(chain, modes[p], k_eff);
    REQUIRE(std::abs(eta.sum()) < 1e-10);
    // eta / b scales as 1/sqrt(omega_p) at fixed k_eff.
    const double ratio = eta(0) / modes[p].b(0);
    REQUIRE(std::abs(ratio - k_eff / std::sqrt(2.0 * modes[p].omega)) < 1e-12);
  }

  attach_lamb_dicke(chain, modes, k_eff);
  REQUIRE(modes[0].eta.size() == chain.count);
  REQUIRE((modes[0].eta - eta1).cwiseAbs().maxCoeff() == 0.0);

  REQUIRE_THROWS_AS(lamb_dicke(chain, modes[0], 0.0), InvalidArgument);
}

TEST_CASE("SI chains reproduce plain-double Lamb-Dicke arithmetic") {
  const double mass = 9.012 * si::atomic_mass_unit;
  const double omega_x = 2.0 * pi * 500e3;
  const IonChain chain = IonChain::si(2, mass, omega_x);
  const auto modes = normal_modes(chain);
  const double k_eff = 2.0 * pi / 313e-9;

  const Eigen::VectorXd eta = lamb_dicke(chain, modes[0], k_eff);
  const double expected = k_eff * std::sqrt(si::hbar / (2.0 * 2.0 * mass * omega_x));
  REQUIRE(std::abs(eta(0) / expected - 1.0) < 1e-12);
  REQUIRE(eta(0) > 0.01);
  REQUIRE(eta(0) < 1.0);

  // The Coulomb length scale for this trap is micrometre sized.
  REQUIRE(chain.length_scale() > 1e-6);
  REQUIRE(chain.length_scale() < 1e-4);
}

TEST_CASE("minimum ion spacing shrinks as a power law in chain length") {
  const PowerLawFit fit = spacing_exponent(2, 60);
  REQUIRE(fit.exponent < -0.53);
  REQUIRE(fit.exponent > -0.59);
  REQUIRE(fit.residual_rms < 0.05);

  // Spacing decreases monotonically for the smallest chains.
  const Eigen::VectorXd u2 = equilibrium_positions(2);
  const Eigen::VectorXd u3 = equilibrium_positions(3);
  REQUIRE(u3(1) - u3(0) < u2(1) - u2(0));

  REQUIRE_THROWS_AS(spacing_exponent(3, 60), InvalidArgument);
  REQUIRE_THROWS_AS(spacing_exponent(2, 30), InvalidArgument);
}

TEST_CASE("chain parameter validation rejects unphysical inputs") {
  REQUIRE_THROWS_AS(IonChain::natural(0), InvalidArgument);
  REQUIRE_THROWS_AS(IonChain::si(2, -1.0, 1.0e6), InvalidArgument);
  REQUIRE_THROWS_AS(equilibrium_positions(0), InvalidArgument);
}
