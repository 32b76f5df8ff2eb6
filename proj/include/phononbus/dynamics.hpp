#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "phononbus/effham.hpp"
#include "phononbus/hilbert.hpp"
#include "phononbus/rng.hpp"

namespace phononbus {

// --- Time evolution ---------------------------------------------------------

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 0.0;
  long steps = 1;

  double dt() const { return (t1 - t0) / static_cast<double>(steps); }

  void validate() const {
    if (steps < 1) throw InvalidArgument("TimeGrid: steps must be >= 1");
    if (!(t1 > t0)) throw InvalidArgument("TimeGrid: need t1 > t0");
  }
};

struct EvolveOptions {
  double hbar = 1.0;
  // Integrate again with half the step and report the final-state fidelity
  // gap.  Doubles the cost; heavy callers that manage their own grids can
  // turn it off.
  bool convergence_check = true;
  // Record <psi|O|psi> for these operators every sample_stride steps
  // (0 disables the time series).
  std::vector<Operator> observables;
  long sample_stride = 0;
};

struct EvolutionResult {
  StateVector state;
  std::vector<double> times;
  std::vector<std::vector<Complex>> observable_series;  // [observable][sample]
  double truncation_leakage = 0.0;
  long steps = 0;
  double norm_drift = 0.0;
  // 1 - fidelity between the full-step and half-step integrations; NaN when
  // the check is disabled.
  double convergence_estimate = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void check_norm(const StateVector& psi, const std::string& who) {
  const double drift = std::abs(psi.norm() - 1.0);
  if (drift > 1e-8)
    throw NumericalContract(who + ": norm drift " + fmt_g(drift) +
                            " exceeds 1e-8; the evolution is not trustworthy");
}

// Steps needed so each midpoint-exponential step resolves omega_max.
inline long resolved_steps(double span, double omega_max) {
  return std::max(1L, static_cast<long>(std::ceil(span * omega_max / 0.0499)));
}

}  // namespace detail

// exp(-i H t / hbar) psi0 for a static Hermitian H, by eigendecomposition.
inline EvolutionResult evolve_static(const Operator& h, const StateVector& psi0,
                                     double t, double hbar = 1.0) {
  if (!(h.space == psi0.space))
    throw InvalidArgument("evolve_static: operator and state spaces differ");
  if (!is_hermitian(h.mat, 1e-10))
    throw InvalidArgument("evolve_static: Hamiltonian is not Hermitian");
  if (!(hbar > 0.0)) throw InvalidArgument("evolve_static: hbar must be positive");

  EvolutionResult out;
  out.state = StateVector(psi0.space, expi_hermitian(-h.mat * (t / hbar)) * psi0.amp);
  out.steps = 1;
  out.norm_drift = std::abs(out.state.norm() - psi0.norm());
  detail::check_norm(out.state, "evolve_static");
  out.truncation_leakage = truncation_leakage(out.state);
  return out;
}

// Composed midpoint-sampled piecewise-constant propagator over [t0, t1].
// Each factor is unitary by construction, so the composition cannot leak
// norm; accuracy is O(dt^2) in the step size.
inline Matrix propagator(const std::function<Matrix(double)>& h_fn,
                         const TimeGrid& grid, double hbar = 1.0) {
  grid.validate();
  const double dt = grid.dt();
  const Index dim = h_fn(grid.t0).rows();
  Matrix u = Matrix::Identity(dim, dim);
  for (long k = 0; k < grid.steps; ++k) {
    const double t_mid = grid.t0 + (static_cast<double>(k) + 0.5) * dt;
    u = expi_hermitian(h_fn(t_mid) * (-dt / hbar)) * u;
  }
  return u;
}

// u^n by binary powering; n can be large (long gates composed from one
// drive-period propagator).
inline Matrix matrix_power_unitary(Matrix u, std::uint64_t n) {
  Matrix result = Matrix::Identity(u.rows(), u.cols());
  while (n > 0) {
    if (n & 1ULL) result = u * result;
    u = u * u;
    n >>= 1;
  }
  return result;
}

// Time-dependent evolution on a uniform grid.  The caller declares the
// fastest angular frequency in H(t); the grid must resolve it.
inline EvolutionResult evolve_timedep(const std::function<Matrix(double)>& h_fn,
                                      const StateVector& psi0,
                                      const TimeGrid& grid, double omega_max,
                                      const EvolveOptions& opts = {}) {
  grid.validate();
  if (!(opts.hbar > 0.0))
    throw InvalidArgument("evolve_timedep: hbar must be positive");
  if (!(omega_max > 0.0))
    throw InvalidArgument("evolve_timedep: omega_max must be positive");
  const double dt = grid.dt();
  if (dt * omega_max >= 0.05)
    throw InvalidArgument(
        "evolve_timedep: dt * omega_max = " + detail::fmt_g(dt * omega_max) +
        " >= 0.05; the grid does not resolve omega_max = " +
        detail::fmt_g(omega_max) + " (need at least " +
        std::to_string(
            static_cast<long>(std::ceil((grid.t1 - grid.t0) * omega_max / 0.05))) +
        " steps)");
  for (const Operator& obs : opts.observables)
    if (!(obs.space == psi0.space))
      throw InvalidArgument("evolve_timedep: observable space differs from state");

  auto integrate = [&](long steps) {
    StateVector psi = psi0;
    EvolutionResult res;
    const double h = (grid.t1 - grid.t0) / static_cast<double>(steps);
    const bool sampling = opts.sample_stride > 0 && !opts.observables.empty();
    if (sampling) {
      res.observable_series.resize(opts.observables.size());
      res.times.push_back(grid.t0);
      for (std::size_t i = 0; i < opts.observables.size(); ++i)
        res.observable_series[i].push_back(expectation(opts.observables[i], psi));
    }
    for (long k = 0; k < steps; ++k) {
      const double t_mid = grid.t0 + (static_cast<double>(k) + 0.5) * h;
      psi.amp = expi_hermitian(h_fn(t_mid) * (-h / opts.hbar)) * psi.amp;
      if (sampling && ((k + 1) % opts.sample_stride == 0 || k + 1 == steps)) {
        res.times.push_back(grid.t0 + static_cast<double>(k + 1) * h);
        for (std::size_t i = 0; i < opts.observables.size(); ++i)
          res.observable_series[i].push_back(
              expectation(opts.observables[i], psi));
      }
    }
    res.state = std::move(psi);
    res.steps = steps;
    return res;
  };

  EvolutionResult out = integrate(grid.steps);
  out.norm_drift = std::abs(out.state.norm() - psi0.norm());
  detail::check_norm(out.state, "evolve_timedep");
  out.truncation_leakage = truncation_leakage(out.state);

  if (opts.convergence_check) {
    const EvolutionResult fine = integrate(2 * grid.steps);
    out.convergence_estimate =
        std::abs(1.0 - fidelity(normalized(out.state), normalized(fine.state)));
  }
  return out;
}

// --- Stochastic fields ------------------------------------------------------

enum class NoiseModel { OrnsteinUhlenbeck, PiecewiseConstant };

// Stationary random field with RMS amplitude e_rms and coherence time T.
// OrnsteinUhlenbeck: exponential autocorrelation e_rms^2 exp(-|tau|/T).
// PiecewiseConstant: independent Gaussian value held fixed on each
// consecutive window of duration T.
struct NoiseField {
  double e_rms = 0.0;
  double coherence_time = 1.0;
  NoiseModel model = NoiseModel::OrnsteinUhlenbeck;
  std::uint64_t seed = 0;

  void validate() const {
    if (e_rms < 0.0) throw InvalidArgument("NoiseField: e_rms must be >= 0");
    if (!(coherence_time > 0.0))
      throw InvalidArgument("NoiseField: coherence_time must be positive");
  }
};

// Samples the field at times k*dt for k = 0 .. floor(duration/dt).  The
// series is fully determined by (noise.seed, stream_id).
inline std::vector<double> sample_field(const NoiseField& noise, double dt,
                                        double duration,
                                        std::uint64_t stream_id) {
  noise.validate();
  if (!(dt > 0.0)) throw InvalidArgument("sample_field: dt must be positive");
  if (!(duration >= 0.0))
    throw InvalidArgument("sample_field: duration must be >= 0");
  if (dt > noise.coherence_time / 20.0)
    throw InvalidArgument(
        "sample_field: dt = " + detail::fmt_g(dt) +
        " is too coarse; need dt <= coherence_time/20 = " +
        detail::fmt_g(noise.coherence_time / 20.0));

  const std::size_t count =
      static_cast<std::size_t>(std::floor(duration / dt)) + 1;
  std::vector<double> series(count, 0.0);
  if (noise.e_rms == 0.0) return series;

  GaussianSampler gauss(derive_stream_seed(noise.seed, stream_id));
  const double sigma = noise.e_rms;

  if (noise.model == NoiseModel::OrnsteinUhlenbeck) {
    // Exact transition kernel of the OU process: stationary at every step.
    const double rho = std::exp(-dt / noise.coherence_time);
    const double kick = sigma * std::sqrt(1.0 - rho * rho);
    double x = sigma * gauss();
    series[0] = x;
    for (std::size_t k = 1; k < count; ++k) {
      x = rho * x + kick * gauss();
      series[k] = x;
    }
  } else {
    const std::size_t hold = static_cast<std::size_t>(
        std::llround(noise.coherence_time / dt));
    double x = sigma * gauss();
    for (std::size_t k = 0; k < count; ++k) {
      if (k > 0 && k % hold == 0) x = sigma * gauss();
      series[k] = x;
    }
  }
  return series;
}

// --- Monte Carlo ------------------------------------------------------------

struct MonteCarloResult {
  std::vector<double> mean;
  std::vector<double> std_error;
  std::size_t trials = 0;
};

namespace detail {

// Pairwise summation in index order: the result depends only on the trial
// order, never on which thread produced which entry.
inline double pairwise_sum(const std::vector<double>& v, std::size_t lo,
                           std::size_t hi) {
  if (hi - lo <= 16) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace detail

// Runs `experiment` for trial indices 0..trials-1, each with its own RNG
// seed derived from (master_seed, trial index), and averages the returned
// observable vectors.  Trials may run on several threads; means and errors
// are bit-identical for any thread count because every trial writes to its
// own slot and the reduction is a fixed-shape pairwise sum.
inline MonteCarloResult monte_carlo(
    const std::function<std::vector<double>(std::uint64_t trial_seed,
                                            std::size_t trial_index)>& experiment,
    std::size_t trials, std::uint64_t master_seed, int threads = 1) {
  if (trials < 2)
    throw InvalidArgument("monte_carlo: need at least 2 trials");
  if (threads < 1) threads = 1;
  threads = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(threads), trials));

  std::vector<std::vector<double>> results(trials);
  std::exception_ptr first_error = nullptr;
  std::mutex error_guard;

  auto run_block = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      try {
        results[i] = experiment(derive_stream_seed(master_seed, i), i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_guard);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (threads == 1) {
    run_block(0, trials);
  } else {
    std::vector<std::thread> pool;
    const std::size_t per =
        (trials + static_cast<std::size_t>(threads) - 1) /
        static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      const std::size_t lo = static_cast<std::size_t>(t) * per;
      const std::size_t hi = std::min(trials, lo + per);
      if (lo >= hi) break;
      pool.emplace_back(run_block, lo, hi);
    }
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  const std::size_t width = results[0].size();
  for (const auto& r : results)
    if (r.size() != width)
      throw InvalidArgument(
          "monte_carlo: experiment returned inconsistent observable counts");

  MonteCarloResult out;
  out.trials = trials;
  out.mean.resize(width);
  out.std_error.resize(width);
  std::vector<double> column(trials);
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t i = 0; i < trials; ++i) column[i] = results[i][j];
    const double mean = detail::pairwise_sum(column, 0, trials) /
                        static_cast<double>(trials);
    for (std::size_t i = 0; i < trials; ++i) {
      const double d = results[i][j] - mean;
      column[i] = d * d;
    }
    const double var = detail::pairwise_sum(column, 0, trials) /
                       static_cast<double>(trials - 1);
    out.mean[j] = mean;
    out.std_error[j] = std::sqrt(var / static_cast<double>(trials));
  }
  return out;
}

// --- Pulse envelopes --------------------------------------------------------

enum class PulseShape { Sin2Ramp, Gaussian, Constant };

// Scalar drive envelope.  Sin2Ramp rises from zero at `start` to `peak` in
// the middle of the window and returns to zero at `end`; Gaussian is centred
// on the window with the given sigma; Constant is `peak` everywhere.
struct PulseEnvelope {
  PulseShape shape = PulseShape::Constant;
  double peak = 0.0;
  double start = 0.0;
  double end = 1.0;
  double sigma = 1.0;  // Gaussian only

  void validate() const {
    if (peak < 0.0) throw InvalidArgument("PulseEnvelope: peak must be >= 0");
    if (shape != PulseShape::Constant && !(end > start))
      throw InvalidArgument("PulseEnvelope: need end > start");
    if (shape == PulseShape::Gaussian && !(sigma > 0.0))
      throw InvalidArgument("PulseEnvelope: need sigma > 0");
  }

  double value(double t) const {
    switch (shape) {
      case PulseShape::Constant:
        return peak;
      case PulseShape::Sin2Ramp: {
        if (t <= start || t >= end) return 0.0;
        const double x = std::sin(pi * (t - start) / (end - start));
        return peak * x * x;
      }
      case PulseShape::Gaussian: {
        const double c = 0.5 * (start + end);
        const double z = (t - c) / sigma;
        return peak * std::exp(-0.5 * z * z);
      }
    }
    return 0.0;
  }
};

}  // namespace phononbus
