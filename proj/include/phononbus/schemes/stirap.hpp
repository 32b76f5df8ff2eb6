#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "phononbus/dynamics.hpp"
#include "phononbus/schemes/types.hpp"

namespace phononbus {

// Adiabatic passage between the qubit level |1> and the storage level |2>
// of a four-level ion {0, 1: qubit, 2: storage, 3: optically excited},
// mediated by the bus mode.  Both legs share the one-photon detuning Delta:
//   pump:   |1>|n> <-> |3>|n>      (carrier),
//   Stokes: |2>|n+1> <-> |3>|n>    (red sideband, coupling sqrt(n+1) Omega_S),
// so the two-photon resonance |1>|n> <-> |2>|n+1> survives for every n.  With
// the counter-intuitive pulse order the state rides the dark superposition
// of |1>|n> and |2>|n+1>, which never populates the lossy level |3>, and the
// transfer works regardless of the phonon number.

enum class TransferDirection { Raise, Lower };  // Raise: |1>|n> -> |2>|n+1>

struct PulsePair {
  PulseEnvelope pump;
  PulseEnvelope stokes;
};

namespace detail {

inline double pulse_center(const PulseEnvelope& p) {
  return 0.5 * (p.start + p.end);
}

}  // namespace detail

// Canonical counter-intuitive sin^2 pair over [0, t_total]: the leading
// pulse occupies [0, 0.7 t_total], the trailing one [0.3 t_total, t_total].
// Raising leads with the Stokes leg, lowering with the pump leg.
inline PulsePair stirap_pulses(double peak, double t_total,
                               TransferDirection direction) {
  if (!(peak > 0.0))
    throw InvalidArgument("stirap_pulses: peak must be positive");
  if (!(t_total > 0.0))
    throw InvalidArgument("stirap_pulses: t_total must be positive");
  PulseEnvelope first;
  first.shape = PulseShape::Sin2Ramp;
  first.peak = peak;
  first.start = 0.0;
  first.end = 0.7 * t_total;
  PulseEnvelope second = first;
  second.start = 0.3 * t_total;
  second.end = t_total;
  if (direction == TransferDirection::Raise) return {second, first};
  return {first, second};
}

namespace detail {

inline void require_transfer_factors(const SpaceDescriptor& space,
                                     int ion_factor, int mode_factor,
                                     const std::string& who) {
  if (ion_factor < 0 || ion_factor >= space.num_factors() ||
      is_mode(space.factors[static_cast<std::size_t>(ion_factor)]) ||
      space.dim_of(ion_factor) != 4)
    throw InvalidArgument(who + ": ion_factor must name a four-level ion");
  if (mode_factor < 0 || mode_factor >= space.num_factors() ||
      !is_mode(space.factors[static_cast<std::size_t>(mode_factor)]))
    throw InvalidArgument(who + ": mode_factor must name a mode");
}

// Static operator content of the two-leg drive, lifted to the full space.
struct TransferSystem {
  Matrix p3;        // projector on the optically excited level
  Matrix pump_x;    // |3><1| + h.c. at every Fock number
  Matrix stokes_x;  // sqrt(n+1) (|3, n><2, n+1| + h.c.)
};

inline TransferSystem transfer_system(const SpaceDescriptor& space,
                                      int ion_factor, int mode_factor) {
  const Index dim = space.dim();
  TransferSystem sys;
  sys.p3 = Matrix::Zero(dim, dim);
  sys.pump_x = Matrix::Zero(dim, dim);
  sys.stokes_x = Matrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    std::vector<int> d = space.unrank(i);
    const int level = d[static_cast<std::size_t>(ion_factor)];
    const int n = d[static_cast<std::size_t>(mode_factor)];
    if (level == 3) sys.p3(i, i) = 1.0;
    if (level == 1) {
      d[static_cast<std::size_t>(ion_factor)] = 3;
      sys.pump_x(space.index_of(d), i) = 1.0;
    } else if (level == 2 && n > 0) {
      d[static_cast<std::size_t>(ion_factor)] = 3;
      d[static_cast<std::size_t>(mode_factor)] = n - 1;
      sys.stokes_x(space.index_of(d), i) = std::sqrt(static_cast<double>(n));
    }
  }
  sys.pump_x = Matrix(sys.pump_x + sys.pump_x.adjoint());
  sys.stokes_x = Matrix(sys.stokes_x + sys.stokes_x.adjoint());
  return sys;
}

}  // namespace detail

// Ideal transfer on an arbitrary product space: the permutation swapping
// |1>|n> with |2>|n+1>, identity on levels 0 and 3, on |2>|0>, and on the
// top Fock component |1>|cutoff> whose partner falls outside the truncation.
// Self-inverse, so the same matrix serves as A+ and A-.
inline Matrix stirap_ideal_matrix(const SpaceDescriptor& space, int ion_factor,
                                  int mode_factor) {
  detail::require_transfer_factors(space, ion_factor, mode_factor,
                                   "stirap_ideal_matrix");
  const int cutoff = space.dim_of(mode_factor) - 1;
  Matrix out = Matrix::Zero(space.dim(), space.dim());
  for (Index i = 0; i < space.dim(); ++i) {
    std::vector<int> d = space.unrank(i);
    const int level = d[static_cast<std::size_t>(ion_factor)];
    const int n = d[static_cast<std::size_t>(mode_factor)];
    if (level == 1 && n < cutoff) {
      d[static_cast<std::size_t>(ion_factor)] = 2;
      d[static_cast<std::size_t>(mode_factor)] = n + 1;
      out(space.index_of(d), i) = 1.0;
    } else if (level == 2 && n > 0) {
      d[static_cast<std::size_t>(ion_factor)] = 1;
      d[static_cast<std::size_t>(mode_factor)] = n - 1;
      out(space.index_of(d), i) = 1.0;
    } else {
      out(i, i) = 1.0;
    }
  }
  return out;
}

struct StirapOptions {
  double detuning = 1.0;  // common one-photon detuning of both legs
};

inline GateReport stirap_transfer(const PulseEnvelope& pump,
                                  const PulseEnvelope& stokes,
                                  TransferDirection direction,
                                  const StateVector& psi0,
                                  const StirapOptions& opts = {}) {
  pump.validate();
  stokes.validate();
  if (!(pump.peak > 0.0) || !(stokes.peak > 0.0))
    throw InvalidArgument("stirap_transfer: pulse peaks must be positive");
  const SpaceDescriptor& space = psi0.space;
  if (space.num_factors() != 2 || space.dim_of(0) != 4 ||
      is_mode(space.factors[0]) || !is_mode(space.factors[1]))
    throw InvalidArgument(
        "stirap_transfer: state must live on {four-level ion, mode}");

  GateReport report;

  if (direction == TransferDirection::Raise
          ? detail::pulse_center(stokes) >= detail::pulse_center(pump)
          : detail::pulse_center(pump) >= detail::pulse_center(stokes))
    warn(&report.warnings,
         "stirap_transfer: pulse order is not counter-intuitive for this "
         "direction; the dark state will not carry the population");

  const double t0 = std::min(pump.start, stokes.start);
  const double t1 = std::max(pump.end, stokes.end);
  if (!(t1 > t0))
    throw InvalidArgument("stirap_transfer: pulse windows span no time");
  const double span = t1 - t0;
  const double adiabaticity = span * std::min(pump.peak, stokes.peak);
  if (adiabaticity < 30.0)
    warn(&report.warnings,
         "stirap_transfer: adiabaticity parameter T Omega = " +
             detail::fmt_g(adiabaticity) +
             " is small; the transfer may be diabatic (want > 30)");

  const int cutoff = space.dim_of(1) - 1;
  if (direction == TransferDirection::Raise) {
    // |1>|cutoff> has no |2>|cutoff+1> partner inside the truncation.
    const double top = std::norm(psi0.amp(space.index_of({1, cutoff})));
    if (top > 1e-9)
      warn(&report.warnings,
           "stirap_transfer: population " + detail::fmt_g(top) +
               " in the top Fock sector cannot complete the transfer within "
               "the truncation");
  }

  const double delta = opts.detuning;
  const detail::TransferSystem sys = detail::transfer_system(space, 0, 1);
  const auto h_fn = [&](double t) -> Matrix {
    return delta * sys.p3 + 0.5 * pump.value(t) * sys.pump_x +
           0.5 * stokes.value(t) * sys.stokes_x;
  };
  const double omega_max =
      std::abs(delta) + 0.5 * pump.peak +
      0.5 * stokes.peak * std::sqrt(static_cast<double>(cutoff));
  const long steps = detail::resolved_steps(span, omega_max);

  EvolveOptions eopts;
  eopts.convergence_check = false;
  eopts.observables = {Operator(space, sys.p3)};
  eopts.sample_stride = std::max(1L, steps / 400);
  const EvolutionResult evo =
      evolve_timedep(h_fn, psi0, TimeGrid{t0, t1, steps}, omega_max, eopts);

  double max_excited = 0.0;
  for (const Complex& v : evo.observable_series[0])
    max_excited = std::max(max_excited, v.real());

  const Matrix ideal = stirap_ideal_matrix(space, 0, 1);
  const Vector target = ideal * psi0.amp;

  report.state = evo.state;
  report.fidelity =
      checked_fidelity(std::norm(target.dot(evo.state.amp)), "stirap_transfer");
  report.duration = span;
  report.leakage = evo.truncation_leakage;
  report.set_metric("max_excited_population", max_excited);
  report.set_metric("adiabaticity", adiabaticity);
  report.set_metric("steps", static_cast<double>(steps));
  return report;
}

// Full-span unitary of the two-leg drive on an arbitrary product space
// holding a four-level ion at ion_factor and the bus at mode_factor.
// Spectator factors evolve trivially, so the matrix can sit inside a larger
// register (the two-ion gate composes it with steps on other factors).
inline Matrix stirap_propagator(const PulseEnvelope& pump,
                                const PulseEnvelope& stokes,
                                const SpaceDescriptor& space, int ion_factor,
                                int mode_factor, double detuning = 1.0) {
  pump.validate();
  stokes.validate();
  if (!(pump.peak > 0.0) || !(stokes.peak > 0.0))
    throw InvalidArgument("stirap_propagator: pulse peaks must be positive");
  detail::require_transfer_factors(space, ion_factor, mode_factor,
                                   "stirap_propagator");
  const double t0 = std::min(pump.start, stokes.start);
  const double t1 = std::max(pump.end, stokes.end);
  if (!(t1 > t0))
    throw InvalidArgument("stirap_propagator: pulse windows span no time");

  const int cutoff = space.dim_of(mode_factor) - 1;
  const detail::TransferSystem sys =
      detail::transfer_system(space, ion_factor, mode_factor);
  const auto h_fn = [&](double t) -> Matrix {
    return detuning * sys.p3 + 0.5 * pump.value(t) * sys.pump_x +
           0.5 * stokes.value(t) * sys.stokes_x;
  };
  const double omega_max =
      std::abs(detuning) + 0.5 * pump.peak +
      0.5 * stokes.peak * std::sqrt(static_cast<double>(cutoff));
  const long steps = detail::resolved_steps(t1 - t0, omega_max);
  return propagator(h_fn, TimeGrid{t0, t1, steps});
}

}  // namespace phononbus
