#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "phononbus/schemes/heating.hpp"

using namespace phononbus;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

NoiseField slow_noise(double e_rms, double coherence_time,
                      std::uint64_t seed = 11) {
  NoiseField noise;
  noise.e_rms = e_rms;
  noise.coherence_time = coherence_time;
  noise.model = NoiseModel::OrnsteinUhlenbeck;
  noise.seed = seed;
  return noise;
}

}  // namespace

TEST_CASE("heating time closed form and its scalings") {
  const IonChain chain = IonChain::natural(1);
  const double T = 20.0 * pi;  // ten trap periods
  const double e_rms = 0.01;

  Warnings warnings;
  const double tau = heating_time(chain, slow_noise(e_rms, T), &warnings);
  // Natural units (M = hbar = omega_x = e = 1): tau = 1 / (E^2 T).
  CHECK_THAT(tau, WithinRel(1.0 / (e_rms * e_rms * T), 1e-14));
  CHECK(warnings.empty());

  // One quantum arrives N times faster with N ions in a uniform field.
  for (int n : {2, 3, 7}) {
    const double tau_n = heating_time(IonChain::natural(n), slow_noise(e_rms, T));
    CHECK_THAT(tau_n, WithinRel(tau / n, 1e-14));
  }

  // Quadratic in field strength, inverse in coherence time, linear in
  // trap frequency and mass.
  CHECK_THAT(heating_time(chain, slow_noise(2.0 * e_rms, T)),
             WithinRel(tau / 4.0, 1e-14));
  CHECK_THAT(heating_time(chain, slow_noise(e_rms, 3.0 * T)),
             WithinRel(tau / 3.0, 1e-14));
  IonChain stiffer = chain;
  stiffer.omega_x = 2.0;
  CHECK_THAT(heating_time(stiffer, slow_noise(e_rms, T)),
             WithinRel(2.0 * tau, 1e-13));
  IonChain heavier = chain;
  heavier.mass = 5.0;
  CHECK_THAT(heating_time(heavier, slow_noise(e_rms, T)),
             WithinRel(5.0 * tau, 1e-13));
}

TEST_CASE("heating time in SI units matches direct arithmetic") {
  const double mass = 9.012182 * si::atomic_mass_unit;
  const double omega_x = 2.0 * pi * 500.0e3;
  const IonChain chain = IonChain::si(2, mass, omega_x);

  const double e_rms = 2.0e-6;         // V/m
  const double coherence = 1.0e-3;     // s, far above the trap period
  const double tau = heating_time(chain, slow_noise(e_rms, coherence));

  const double expected =
      mass * si::hbar * omega_x /
      (2.0 * si::elementary_charge * si::elementary_charge * e_rms * e_rms *
       coherence);
  CHECK_THAT(tau, WithinRel(expected, 1e-12));
}

TEST_CASE("zero field never heats") {
  const IonChain chain = IonChain::natural(2);
  CHECK(heating_time(chain, slow_noise(0.0, 100.0)) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("fast noise triggers the slow-field warning") {
  const IonChain chain = IonChain::natural(1);
  const double trap_period = 2.0 * pi / chain.omega_x;

  Warnings warnings;
  heating_time(chain, slow_noise(0.01, 9.0 * trap_period), &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK_THAT(warnings.messages[0], ContainsSubstring("coherence"));

  Warnings quiet;
  heating_time(chain, slow_noise(0.01, 10.0 * trap_period), &quiet);
  CHECK(quiet.empty());
}

TEST_CASE("uniform field couples to the center of mass only") {
  const IonChain chain = IonChain::natural(3);
  const std::vector<ModeSpec> modes = normal_modes(chain);

  // Center of mass: b = (1,1,1)/sqrt(3), so kappa = e sqrt(3) / sqrt(2 M hbar w).
  const double kappa_com = uniform_field_mode_coupling(chain, modes[0]);
  CHECK_THAT(kappa_com, WithinRel(std::sqrt(3.0) / std::sqrt(2.0), 1e-12));

  // The other patterns sum to zero, so a uniform push cannot excite them.
  CHECK(std::abs(uniform_field_mode_coupling(chain, modes[1])) < 1e-12);
  CHECK(std::abs(uniform_field_mode_coupling(chain, modes[2])) < 1e-12);
}

TEST_CASE("fit_slope recovers an exact line and validates its window") {
  const std::vector<double> t = {0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y = {1.0, 4.0, 7.0, 10.0, 13.0};
  CHECK_THAT(fit_slope(t, y, -1.0), WithinRel(3.0, 1e-13));

  // Window filtering: slope of the tail of a kinked curve.
  const std::vector<double> y2 = {5.0, 5.0, 7.0, 9.0, 11.0};
  CHECK_THAT(fit_slope(t, y2, 1.5), WithinRel(2.0, 1e-13));

  CHECK_THROWS_AS(fit_slope(t, y, 4.5), InvalidArgument);
  CHECK_THROWS_WITH(fit_slope(t, y, 3.5),
                    ContainsSubstring("fewer than two samples"));
}

TEST_CASE("simulated heating rate reproduces the closed form") {
  const double T = 20.0 * pi;
  const double e_rms = 0.01;
  const double duration = 12.0 * T;
  HeatingSimOptions opts;
  opts.samples = 50;

  for (int n : {1, 2, 3}) {
    const IonChain chain = IonChain::natural(n);
    const NoiseField noise = slow_noise(e_rms, T, 211 + n);
    const HeatingResult result =
        simulate_heating(chain, noise, {1}, duration, 2000, opts);

    REQUIRE(result.times.size() == 51);
    REQUIRE(result.mean_n.size() == 1);
    CHECK(result.mean_n[0][0] == 0.0);

    // After a few coherence times the occupation grows linearly with the
    // closed-form rate 1/tau_N.
    const double slope =
        fit_slope(result.times, result.mean_n[0], 4.0 * T);
    const double expected = 1.0 / heating_time(chain, noise);
    CHECK_THAT(slope, WithinRel(expected, 0.15));

    // The spread across trajectories of an exponential-like occupation is
    // of order the mean, so the standard error is roughly mean/sqrt(trials).
    const double mean_final = result.mean_n[0].back();
    const double se_final = result.std_error[0].back();
    CHECK(se_final > 0.0);
    CHECK(se_final < 3.0 * mean_final / std::sqrt(2000.0));
    CHECK(se_final > mean_final / std::sqrt(2000.0) / 3.0);
  }
}

TEST_CASE("only the center of mass heats in a uniform field") {
  const IonChain chain = IonChain::natural(3);
  const double T = 20.0 * pi;
  HeatingSimOptions opts;
  opts.samples = 20;
  const HeatingResult result = simulate_heating(
      chain, slow_noise(0.02, T, 77), {1, 2, 3}, 4.0 * T, 40, opts);

  CHECK(result.mean_n[0].back() > 1e-3);
  for (std::size_t m : {std::size_t{1}, std::size_t{2}})
    for (double v : result.mean_n[m]) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("quiet field leaves occupations at their initial values") {
  const IonChain chain = IonChain::natural(2);
  HeatingSimOptions opts;
  opts.samples = 10;
  opts.initial_occupations = {0.5, 0.25};
  const HeatingResult result = simulate_heating(
      chain, slow_noise(0.0, 50.0), {1, 2}, 100.0, 5, opts);

  for (double v : result.mean_n[0]) CHECK(v == 0.5);
  for (double v : result.mean_n[1]) CHECK(v == 0.25);
  for (std::size_t m : {std::size_t{0}, std::size_t{1}})
    for (double v : result.std_error[m]) CHECK(v == 0.0);
}

TEST_CASE("simulated trajectories match the per-realization coherent label") {
  // Two trajectories, reconstructed independently from the same field
  // streams the simulation draws, must average to the reported mean.
  const IonChain chain = IonChain::natural(1);
  const double T = 20.0 * pi;
  const double duration = 12.0 * T;
  const NoiseField noise = slow_noise(0.01, T, 421);
  HeatingSimOptions opts;
  opts.samples = 50;

  const HeatingResult result =
      simulate_heating(chain, noise, {1}, duration, 2, opts);

  const long n_steps = 250;  // ceil(duration/samples / (T/20)) = 5 per sample
  const double dt = duration / static_cast<double>(n_steps);
  const double kappa =
      uniform_field_mode_coupling(chain, normal_modes(chain)[0]);

  std::vector<double> finals;
  for (std::uint64_t idx : {std::uint64_t{0}, std::uint64_t{1}}) {
    const std::vector<double> field = sample_field(noise, dt, duration, idx);
    Complex alpha{0.0, 0.0};
    for (long k = 0; k < n_steps; ++k)
      alpha += imag_unit * kappa * field[static_cast<std::size_t>(k)] * dt;
    finals.push_back(std::norm(alpha));
  }
  CHECK_THAT(result.mean_n[0].back(),
             WithinRel(0.5 * (finals[0] + finals[1]), 1e-12));
}

TEST_CASE("coherent-label model agrees with full Hilbert-space integration") {
  // One noise realization, zero-order held, drives a displacement
  // Hamiltonian H = i hbar (u adag - conj(u) a) with u = i kappa E.  The
  // truncated matrix evolution must land on the same occupation the label
  // algebra predicts.
  const IonChain chain = IonChain::natural(1);
  const double T = 20.0 * pi;
  const double duration = 4.0 * T;
  const long n_steps = 80;
  const double dt = duration / static_cast<double>(n_steps);
  const NoiseField noise = slow_noise(0.02, T, 99);

  const std::vector<double> field = sample_field(noise, dt, duration, 0);
  const double kappa =
      uniform_field_mode_coupling(chain, normal_modes(chain)[0]);

  Complex alpha{0.0, 0.0};
  for (long k = 0; k < n_steps; ++k)
    alpha += imag_unit * kappa * field[static_cast<std::size_t>(k)] * dt;

  const int cutoff = 40;
  const SpaceDescriptor space{mode(cutoff)};
  const Matrix a = mode_annihilator(space, 0);
  const auto h = [&](double t) -> Matrix {
    long k = static_cast<long>(std::floor(t / dt));
    k = std::min(k, n_steps - 1);
    const Complex u =
        imag_unit * kappa * field[static_cast<std::size_t>(k)];
    return imag_unit * (u * a.adjoint() - std::conj(u) * a);
  };

  EvolveOptions opts;
  opts.convergence_check = false;
  const EvolutionResult evo =
      evolve_timedep(h, basis_state(space, {0}), TimeGrid{0.0, duration, n_steps},
                     0.01, opts);
  require_low_leakage(evo.state, 1e-6, "heating cross-check");

  const double n_matrix =
      expectation(Operator(space, number_op(cutoff)), evo.state).real();
  CHECK_THAT(n_matrix, WithinAbs(std::norm(alpha), 1e-8));
}

TEST_CASE("heating simulation is reproducible and thread independent") {
  const IonChain chain = IonChain::natural(2);
  const NoiseField noise = slow_noise(0.02, 20.0 * pi, 5);
  HeatingSimOptions opts;
  opts.samples = 8;

  const HeatingResult a = simulate_heating(chain, noise, {1}, 200.0, 8, opts);
  opts.threads = 3;
  const HeatingResult b = simulate_heating(chain, noise, {1}, 200.0, 8, opts);
  for (std::size_t s = 0; s < a.mean_n[0].size(); ++s) {
    CHECK(a.mean_n[0][s] == b.mean_n[0][s]);
    CHECK(a.std_error[0][s] == b.std_error[0][s]);
  }
}

TEST_CASE("heating simulation validates its arguments") {
  const IonChain chain = IonChain::natural(2);
  const NoiseField noise = slow_noise(0.01, 100.0);
  HeatingSimOptions opts;

  CHECK_THROWS_AS(simulate_heating(chain, noise, {}, 10.0, 4, opts),
                  InvalidArgument);
  CHECK_THROWS_AS(simulate_heating(chain, noise, {0}, 10.0, 4, opts),
                  InvalidArgument);
  CHECK_THROWS_AS(simulate_heating(chain, noise, {3}, 10.0, 4, opts),
                  InvalidArgument);
  CHECK_THROWS_AS(simulate_heating(chain, noise, {1}, -1.0, 4, opts),
                  InvalidArgument);

  HeatingSimOptions bad = opts;
  bad.samples = 1;
  CHECK_THROWS_AS(simulate_heating(chain, noise, {1}, 10.0, 4, bad),
                  InvalidArgument);

  HeatingSimOptions mismatched = opts;
  mismatched.initial_occupations = {0.1};
  CHECK_THROWS_AS(simulate_heating(chain, noise, {1, 2}, 10.0, 4, mismatched),
                  InvalidArgument);

  Warnings warnings;
  HeatingSimOptions small = opts;
  small.samples = 4;
  simulate_heating(chain, slow_noise(0.01, 2.0), {1}, 10.0, 4, small,
                   &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK_THAT(warnings.messages[0], ContainsSubstring("coherence"));
}
