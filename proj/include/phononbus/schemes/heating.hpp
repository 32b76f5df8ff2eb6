#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "phononbus/chain.hpp"
#include "phononbus/dynamics.hpp"
#include "phononbus/schemes/types.hpp"

namespace phononbus {

// Closed-form mean time for a fluctuating uniform field to add one quantum
// to the center-of-mass mode:
//   tau_N = M hbar omega_x / (N e^2 E_rms^2 T).
// Zero field strength means no heating; that is reported as +infinity.
inline double heating_time(const IonChain& chain, const NoiseField& noise,
                           Warnings* warnings = nullptr) {
  chain.validate();
  noise.validate();
  if (noise.e_rms == 0.0) return std::numeric_limits<double>::infinity();

  const double trap_period = 2.0 * pi / chain.omega_x;
  if (noise.coherence_time < 10.0 * trap_period)
    warn(warnings,
         "heating_time: coherence time is only " +
             detail::fmt_g(noise.coherence_time / trap_period) +
             " trap periods; the closed form assumes slow noise "
             "(coherence time well above the trap period)");

  return chain.mass * chain.hbar * chain.omega_x /
         (static_cast<double>(chain.count) * chain.charge * chain.charge *
          noise.e_rms * noise.e_rms * noise.coherence_time);
}

// A spatially uniform field pushes on the mode-p ladder operator with
// coupling kappa_p = e (sum_n b_n^(p)) / sqrt(2 M hbar omega_p): the field
// couples through the summed displacement pattern, so only the center of
// mass (whose pattern does not sum to zero) is driven.
inline double uniform_field_mode_coupling(const IonChain& chain,
                                          const ModeSpec& m) {
  return chain.charge * m.b.sum() /
         std::sqrt(2.0 * chain.mass * chain.hbar * m.omega);
}

struct HeatingSimOptions {
  int samples = 60;           // time-series resolution of the report
  int threads = 1;
  std::vector<double> initial_occupations;  // per requested mode; default 0
};

struct HeatingResult {
  std::vector<int> modes;            // 1-based mode indices, as requested
  std::vector<double> times;
  std::vector<std::vector<double>> mean_n;     // [mode][sample]
  std::vector<std::vector<double>> std_error;  // [mode][sample]
};

// Least-squares slope of values(t) over the window t >= t_min; used to
// extract a late-time heating rate from a simulated occupation curve.
inline double fit_slope(const std::vector<double>& times,
                        const std::vector<double>& values, double t_min) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_min) continue;
    sx += times[i];
    sy += values[i];
    sxx += times[i] * times[i];
    sxy += times[i] * values[i];
    ++count;
  }
  if (count < 2)
    throw InvalidArgument("fit_slope: fewer than two samples past t_min");
  const double n = static_cast<double>(count);
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InvalidArgument("fit_slope: degenerate time window");
  return (n * sxy - sx * sy) / denom;
}

// Monte Carlo of stochastic-field heating.  Each trajectory drives every
// requested mode with H = i hbar sum_p (u_p adag_p - conj(u_p) a_p), where
// u_p(t) = i kappa_p E(t) and E(t) is one realization of the noise field
// taken as the resonant envelope at the mode frequency.  A classical drive
// only displaces, so the trajectory is solved exactly by the coherent label
// alpha_p(t) = integral of u_p; occupations follow as
// <n_p>(t) = n_p(0) + |alpha_p(t)|^2.
//
// Field realizations are drawn from (noise.seed, trajectory index), so runs
// are reproducible for any thread count.
inline HeatingResult simulate_heating(const IonChain& chain,
                                      const NoiseField& noise,
                                      const std::vector<int>& modes_in_space,
                                      double duration, std::size_t trials,
                                      const HeatingSimOptions& opts = {},
                                      Warnings* warnings = nullptr) {
  chain.validate();
  noise.validate();
  if (modes_in_space.empty())
    throw InvalidArgument("simulate_heating: no modes requested");
  for (int p : modes_in_space)
    if (p < 1 || p > chain.count)
      throw InvalidArgument("simulate_heating: mode index " +
                            std::to_string(p) + " outside 1.." +
                            std::to_string(chain.count));
  if (!(duration > 0.0))
    throw InvalidArgument("simulate_heating: duration must be positive");
  if (opts.samples < 2)
    throw InvalidArgument("simulate_heating: need at least 2 samples");
  if (!opts.initial_occupations.empty() &&
      opts.initial_occupations.size() != modes_in_space.size())
    throw InvalidArgument(
        "simulate_heating: initial_occupations must match requested modes");

  const double trap_period = 2.0 * pi / chain.omega_x;
  if (noise.coherence_time < 10.0 * trap_period)
    warn(warnings, "simulate_heating: coherence time below 10 trap periods; "
                   "the envelope noise model is marginal there");

  const std::vector<ModeSpec> all_modes = normal_modes(chain);
  const std::size_t n_modes = modes_in_space.size();
  std::vector<double> kappa(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i)
    kappa[i] = uniform_field_mode_coupling(
        chain, all_modes[static_cast<std::size_t>(modes_in_space[i] - 1)]);

  // Integration grid: resolve the field's coherence time; align an integer
  // number of steps with each report sample.
  long steps_per_sample = std::max(
      1L, static_cast<long>(std::ceil(duration / opts.samples /
                                      (noise.coherence_time / 20.0))));
  // Rounding in duration / n_steps can land one ulp above the field
  // sampler's dt ceiling; one extra step per sample keeps us safely under.
  if (duration / static_cast<double>(steps_per_sample * opts.samples) >
      noise.coherence_time / 20.0)
    ++steps_per_sample;
  const long n_steps = steps_per_sample * opts.samples;
  const double dt = duration / static_cast<double>(n_steps);
  const std::size_t n_report = static_cast<std::size_t>(opts.samples) + 1;

  auto experiment = [&](std::uint64_t, std::size_t idx) {
    const std::vector<double> field =
        sample_field(noise, dt, duration, idx);
    std::vector<double> obs(n_modes * n_report, 0.0);
    std::vector<Complex> alpha(n_modes, Complex{0.0, 0.0});
    for (long k = 0; k < n_steps; ++k) {
      const double e = field[static_cast<std::size_t>(k)];
      for (std::size_t m = 0; m < n_modes; ++m)
        alpha[m] += imag_unit * kappa[m] * e * dt;
      if ((k + 1) % steps_per_sample == 0) {
        const std::size_t s = static_cast<std::size_t>((k + 1) / steps_per_sample);
        for (std::size_t m = 0; m < n_modes; ++m)
          obs[m * n_report + s] = std::norm(alpha[m]);
      }
    }
    return obs;
  };

  const MonteCarloResult mc =
      monte_carlo(experiment, trials, noise.seed, opts.threads);

  HeatingResult out;
  out.modes = modes_in_space;
  out.times.resize(n_report);
  for (std::size_t s = 0; s < n_report; ++s)
    out.times[s] = duration * static_cast<double>(s) /
                   static_cast<double>(opts.samples);
  out.mean_n.assign(n_modes, std::vector<double>(n_report, 0.0));
  out.std_error.assign(n_modes, std::vector<double>(n_report, 0.0));
  for (std::size_t m = 0; m < n_modes; ++m) {
    const double n0 =
        opts.initial_occupations.empty() ? 0.0 : opts.initial_occupations[m];
    for (std::size_t s = 0; s < n_report; ++s) {
      out.mean_n[m][s] = n0 + mc.mean[m * n_report + s];
      out.std_error[m][s] = mc.std_error[m * n_report + s];
    }
  }
  return out;
}

}  // namespace phononbus
