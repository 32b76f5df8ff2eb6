#pragma once

#include <cmath>
#include <vector>

#include "phononbus/chain.hpp"
#include "phononbus/hilbert.hpp"

namespace phononbus {

// Phase error inflicted on the standing-wave controlled-Z by the modes the
// gate does not use.  The dispersive shift (Omega^2/2 Delta) sum_p eta_p^2
// (2 n_p + 1) sigma_z runs over every mode, but the laser retune only
// compensates the bus term, so each of the two phase-gate applications in
// the sequence leaves pi (eta_p/eta_bus)^2 n_p of uncompensated qubit phase
// per spectator mode:
//   Delta phi = pi sum_{p != bus} (eta_p/eta_bus)^2 2 n_p.
// Ground-state spectators contribute nothing (their constant offsets cancel
// in the relative phase), and a hot spectator is harmless only when its
// ratio conspires to a multiple of 2 pi.

struct SpectatorContribution {
  int mode = 0;            // as indexed by the caller (chain: 1-based p)
  double eta_ratio = 0.0;  // (eta_p / eta_bus)^2
  int population = 0;
  double phase = 0.0;      // 2 pi * eta_ratio * population
};

struct SpectatorReport {
  double phase_error = 0.0;    // net spurious phase Delta phi
  double fidelity_loss = 0.0;  // sin^2(Delta phi / 2) on an equator state
  std::vector<SpectatorContribution> contributions;
};

// Core form: Lamb-Dicke parameters given directly, one per mode, with the
// bus picked out by index.  populations is indexed like etas; the bus entry
// is ignored (the gate handles the bus phonons by design).
inline SpectatorReport spectator_phase_error(const Eigen::VectorXd& etas,
                                             int bus,
                                             const std::vector<int>& populations) {
  if (bus < 0 || bus >= etas.size())
    throw InvalidArgument("spectator_phase_error: bus index out of range");
  if (static_cast<Eigen::Index>(populations.size()) != etas.size())
    throw InvalidArgument(
        "spectator_phase_error: need one population per mode, got " +
        std::to_string(populations.size()) + " for " +
        std::to_string(etas.size()) + " modes");
  const double eta_bus = etas(bus);
  if (eta_bus == 0.0)
    throw InvalidArgument(
        "spectator_phase_error: bus Lamb-Dicke parameter is zero");
  for (int n : populations)
    if (n < 0)
      throw InvalidArgument(
          "spectator_phase_error: populations must be non-negative");

  SpectatorReport report;
  for (Eigen::Index p = 0; p < etas.size(); ++p) {
    if (p == bus) continue;
    SpectatorContribution c;
    c.mode = static_cast<int>(p);
    c.eta_ratio = (etas(p) / eta_bus) * (etas(p) / eta_bus);
    c.population = populations[static_cast<std::size_t>(p)];
    c.phase = 2.0 * pi * c.eta_ratio * c.population;
    report.phase_error += c.phase;
    report.contributions.push_back(c);
  }
  const double half = 0.5 * report.phase_error;
  report.fidelity_loss = std::sin(half) * std::sin(half);
  return report;
}

// Chain form: Lamb-Dicke parameters taken from the chain's normal modes at
// the addressed ion.  bus_mode is the 1-based mode number (1 = center of
// mass); populations is indexed by mode number - 1, bus entry ignored.  The
// laser wavevector drops out of the ratios, so none is asked for.
inline SpectatorReport spectator_phase_error(const IonChain& chain,
                                             int bus_mode,
                                             const std::vector<int>& populations,
                                             int addressed_ion = 0) {
  if (addressed_ion < 0 || addressed_ion >= chain.count)
    throw InvalidArgument(
        "spectator_phase_error: addressed_ion out of range");
  if (bus_mode < 1 || bus_mode > chain.count)
    throw InvalidArgument(
        "spectator_phase_error: bus_mode must be in 1.." +
        std::to_string(chain.count));

  const std::vector<ModeSpec> modes = normal_modes(chain);
  Eigen::VectorXd etas(chain.count);
  for (int p = 0; p < chain.count; ++p)
    etas(p) =
        lamb_dicke(chain, modes[static_cast<std::size_t>(p)], 1.0)(addressed_ion);

  // Eigenvector components that vanish analytically come back as rounding
  // noise, so the node test is relative to the largest coupling.
  if (std::abs(etas(bus_mode - 1)) < 1e-9 * etas.cwiseAbs().maxCoeff())
    throw InvalidArgument(
        "spectator_phase_error: the addressed ion sits on a node of the bus "
        "mode");

  SpectatorReport report = spectator_phase_error(etas, bus_mode - 1, populations);
  for (SpectatorContribution& c : report.contributions) c.mode += 1;
  return report;
}

// The shift written as an operator on {two-level ion, mode, mode, ...} with
// every mode retained, for checking the closed form against exp(-i H t).
inline Operator spectator_dispersive_hamiltonian(const SpaceDescriptor& space,
                                                 double rabi, double detuning,
                                                 const Eigen::VectorXd& etas) {
  if (space.num_factors() < 2 || is_mode(space.factors[0]) ||
      space.dim_of(0) != 2)
    throw InvalidArgument(
        "spectator_dispersive_hamiltonian: factor 0 must be a two-level ion");
  for (int k = 1; k < space.num_factors(); ++k)
    if (!is_mode(space.factors[static_cast<std::size_t>(k)]))
      throw InvalidArgument(
          "spectator_dispersive_hamiltonian: factors after the ion must be "
          "modes");
  if (etas.size() != space.num_factors() - 1)
    throw InvalidArgument(
        "spectator_dispersive_hamiltonian: need one Lamb-Dicke parameter per "
        "mode");
  if (!(rabi > 0.0))
    throw InvalidArgument(
        "spectator_dispersive_hamiltonian: rabi must be positive");
  if (detuning == 0.0)
    throw InvalidArgument(
        "spectator_dispersive_hamiltonian: detuning must be nonzero");

  const double scale = rabi * rabi / (2.0 * detuning);
  Matrix h = Matrix::Zero(space.dim(), space.dim());
  for (Index i = 0; i < space.dim(); ++i) {
    const std::vector<int> d = space.unrank(i);
    const double sz = d[0] == 0 ? 0.5 : -0.5;
    double shift = 0.0;
    for (int k = 1; k < space.num_factors(); ++k)
      shift += etas(k - 1) * etas(k - 1) *
               (2.0 * d[static_cast<std::size_t>(k)] + 1.0);
    h(i, i) = scale * shift * sz;
  }
  return Operator(space, h);
}

}  // namespace phononbus
