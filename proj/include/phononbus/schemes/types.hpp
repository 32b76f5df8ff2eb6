#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phononbus/hilbert.hpp"
#include "phononbus/warnings.hpp"

namespace phononbus {

enum class DriveKind { TravelingWave, StandingWaveNode, Bichromatic };

// A laser drive acting on one or more ions.  `eta` holds the Lamb-Dicke
// parameter per participating mode (a single entry for one-mode schemes).
struct LaserDrive {
  double rabi = 0.0;
  double detuning = 0.0;
  Eigen::VectorXd eta;
  DriveKind kind = DriveKind::TravelingWave;

  void validate() const {
    if (!(rabi > 0.0)) throw InvalidArgument("LaserDrive: rabi must be positive");
    if (eta.size() < 1)
      throw InvalidArgument("LaserDrive: need at least one Lamb-Dicke entry");
  }
};

// Detuned-regime guard shared by the effective-Hamiltonian gates: the
// second-order reduction needs the detuning well above the trap frequency.
inline void require_detuned_regime(const LaserDrive& drive, double omega_x,
                                   const std::string& who,
                                   Warnings* warnings = nullptr) {
  const double ratio = std::abs(drive.detuning) / omega_x;
  if (ratio <= 3.0)
    throw InvalidArgument(who + ": |detuning| = " + detail::fmt_g(ratio) +
                          " omega_x is too small for the time-averaged "
                          "description (need > 3 omega_x)");
  if (ratio < 10.0)
    warn(warnings, who + ": |detuning| = " + detail::fmt_g(ratio) +
                       " omega_x is marginal; the time-averaged description "
                       "is reliable above 10 omega_x");
}

struct SectorFidelity {
  int n = 0;  // bus Fock number of the sector
  double value = 0.0;
};

// Guards against fidelities drifting outside [0, 1]: round-off slightly
// beyond the ends is clamped, anything worse is a genuine bug.
inline double checked_fidelity(double f, const std::string& who) {
  if (f < -1e-9 || f > 1.0 + 1e-9)
    throw NumericalContract(who + ": fidelity " + detail::fmt_g(f) +
                            " is outside [0, 1]");
  return std::min(1.0, std::max(0.0, f));
}

// Common gate-run summary.  Scheme-specific numbers (effective coupling,
// revival time, residual excitation, ...) are carried as named metrics so
// reports stay uniform for the CLI.
struct GateReport {
  StateVector state;   // final state of the evolved input
  Matrix realized;     // realized/effective unitary when the scheme builds one
  double fidelity = 0.0;
  double duration = 0.0;
  std::vector<SectorFidelity> sector_fidelities;
  double leakage = 0.0;
  std::vector<std::pair<std::string, double>> metrics;
  Warnings warnings;

  void set_metric(const std::string& name, double value) {
    for (auto& kv : metrics)
      if (kv.first == name) {
        kv.second = value;
        return;
      }
    metrics.emplace_back(name, value);
  }

  double metric(const std::string& name) const {
    for (const auto& kv : metrics)
      if (kv.first == name) return kv.second;
    throw InvalidArgument("GateReport: no metric named '" + name + "'");
  }

  bool has_metric(const std::string& name) const {
    for (const auto& kv : metrics)
      if (kv.first == name) return true;
    return false;
  }
};

}  // namespace phononbus
