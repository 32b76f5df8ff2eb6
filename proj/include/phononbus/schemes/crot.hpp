#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "phononbus/schemes/dhm.hpp"
#include "phononbus/schemes/stirap.hpp"

namespace phononbus {

// Controlled-Z between two ions that share one bus mode, built from steps
// that each touch only one ion:
//   S_t   standing-wave phase gate on the target qubit, (-1)^n on |e>,
//   A+    adiabatic raise on the control, |1>|n> -> |2>|n+1>,
//   A-    its inverse.
// The default program [S_t, A+, S_t, A-] shifts the bus by one quantum
// between the two phase gates exactly when the control holds |1>, so the
// two (-1)^n factors cancel on the control-|0> branch and multiply to an
// extra -1 on |1>_c |e>_t.  The phonon number drops out for every n, which
// is the point: the gate works on an uncooled bus.  Register layout:
// {four-level control ion, two-level target ion, mode}.

struct CrotStep {
  std::string name;         // "S_t", "A+", "A-"
  bool integrated = false;  // integrate the step's dynamics instead of
                            // applying the ideal matrix
  CrotStep(const char* step_name) : name(step_name) {}
  CrotStep(std::string step_name) : name(std::move(step_name)) {}
  CrotStep(std::string step_name, bool integrate)
      : name(std::move(step_name)), integrated(integrate) {}
};

using CrotProgram = std::vector<CrotStep>;

inline CrotProgram crot_default_program() {
  return {"S_t", "A+", "S_t", "A-"};
}

// Standing-wave drive used for integrated S_t steps (and for the reported
// step duration): deep in the dispersive regime, tau = 12.5 pi / omega_x.
inline LaserDrive crot_default_drive() {
  LaserDrive drive;
  drive.rabi = 10.0;
  drive.detuning = 50.0;
  drive.eta = Eigen::VectorXd::Constant(1, 0.2);
  drive.kind = DriveKind::StandingWaveNode;
  return drive;
}

struct CrotOptions {
  int report_sectors = 6;  // Fock sectors compared against the ideal gate
  LaserDrive phase_drive = crot_default_drive();
  double transfer_peak = 2.0;      // peak Rabi rate of both transfer legs
  double transfer_time = 50.0;     // transfer window length
  double transfer_detuning = 1.0;  // one-photon detuning of both legs
};

namespace detail {

inline void require_crot_space(const SpaceDescriptor& space,
                               const std::string& who) {
  if (space.num_factors() != 3 ||
      is_mode(space.factors[0]) || space.dim_of(0) != 4 ||
      is_mode(space.factors[1]) || space.dim_of(1) != 2 ||
      !is_mode(space.factors[2]))
    throw InvalidArgument(who +
                          ": state must live on {four-level control ion, "
                          "two-level target ion, mode}");
}

}  // namespace detail

// The gate the sequence should realize: -1 exactly on |1>_c |e>_t, identity
// elsewhere, including the bus and the control's auxiliary levels.
inline Matrix crot_ideal_matrix(const SpaceDescriptor& space) {
  detail::require_crot_space(space, "crot_ideal_matrix");
  Matrix out = Matrix::Zero(space.dim(), space.dim());
  for (Index i = 0; i < space.dim(); ++i) {
    const std::vector<int> d = space.unrank(i);
    out(i, i) = (d[0] == 1 && d[1] == 0) ? -1.0 : 1.0;
  }
  return out;
}

inline GateReport crot_sequence(const CrotProgram& program,
                                const StateVector& psi0,
                                const CrotOptions& opts = {}) {
  const SpaceDescriptor& space = psi0.space;
  detail::require_crot_space(space, "crot_sequence");
  if (program.empty())
    throw InvalidArgument("crot_sequence: program is empty");
  opts.phase_drive.validate();
  if (opts.phase_drive.eta.size() != 1)
    throw InvalidArgument(
        "crot_sequence: phase_drive must address exactly one bus mode");
  if (!(opts.transfer_time > 0.0))
    throw InvalidArgument("crot_sequence: transfer_time must be positive");

  const int cutoff = space.dim_of(2) - 1;
  const double st_tau =
      pi * opts.phase_drive.detuning /
      (opts.phase_drive.rabi * opts.phase_drive.rabi *
       opts.phase_drive.eta(0) * opts.phase_drive.eta(0));

  GateReport report;

  // Each distinct (name, integrated) pair is built once; the default
  // program reuses its S_t matrix and A+ doubles as A- in ideal form.
  std::map<std::string, Matrix> built;
  const auto step_matrix = [&](const CrotStep& step) -> const Matrix& {
    if (step.name != "S_t" && step.name != "A+" && step.name != "A-")
      throw InvalidArgument("crot_sequence: undefined step name '" +
                            step.name + "' (known steps: S_t, A+, A-)");
    std::string key = step.integrated ? step.name + "#int" : step.name + "#id";
    if (!step.integrated && step.name != "S_t") key = "A#id";
    const auto it = built.find(key);
    if (it != built.end()) return it->second;

    Matrix m;
    if (step.name == "S_t") {
      if (step.integrated) {
        DhmOptions dopts;
        dopts.cutoff = cutoff;
        const PhaseGateResult res = dhm_phase_gate(
            opts.phase_drive, PhaseGateMode::Integrated, dopts);
        for (const std::string& msg : res.report.warnings.messages)
          warn(&report.warnings, msg);
        m = embed_on(space, {1, 2}, res.report.realized);
      } else {
        m = s_t_matrix(space, 1, 2);
      }
    } else if (step.integrated) {
      const double adiabaticity = opts.transfer_time * opts.transfer_peak;
      if (adiabaticity < 30.0)
        warn(&report.warnings,
             "crot_sequence: transfer adiabaticity T Omega = " +
                 detail::fmt_g(adiabaticity) +
                 " is small; the passage may be diabatic (want > 30)");
      const TransferDirection direction = step.name == "A+"
                                              ? TransferDirection::Raise
                                              : TransferDirection::Lower;
      const PulsePair pulses =
          stirap_pulses(opts.transfer_peak, opts.transfer_time, direction);
      m = stirap_propagator(pulses.pump, pulses.stokes, space, 0, 2,
                            opts.transfer_detuning);
    } else {
      m = stirap_ideal_matrix(space, 0, 2);
    }
    return built.emplace(std::move(key), std::move(m)).first->second;
  };

  Matrix u = Matrix::Identity(space.dim(), space.dim());
  double duration = 0.0;
  for (const CrotStep& step : program) {
    u = step_matrix(step) * u;
    duration += step.name == "S_t" ? st_tau : opts.transfer_time;
  }

  const Matrix ideal = crot_ideal_matrix(space);
  const Vector target = ideal * psi0.amp;

  report.state = StateVector(space, u * psi0.amp);
  report.realized = u;
  report.fidelity = checked_fidelity(std::norm(target.dot(report.state.amp)),
                                     "crot_sequence");
  report.duration = duration;
  report.leakage = truncation_leakage(report.state);
  report.set_metric("program_length", static_cast<double>(program.size()));
  report.set_metric("st_tau", st_tau);

  // Per-Fock-sector process fidelity of the realized unitary against
  // controlled-Z on the qubit pair, basis {0g, 0e, 1g, 1e}; the target's
  // excited state is its level 0.
  const std::array<std::array<int, 2>, 4> qubit_basis = {
      {{0, 1}, {0, 0}, {1, 1}, {1, 0}}};
  const int sectors = std::min(opts.report_sectors, cutoff + 1);
  for (int n = 0; n < sectors; ++n) {
    Complex tr = 0.0;
    for (int k = 0; k < 4; ++k) {
      const Index idx =
          space.index_of({qubit_basis[static_cast<std::size_t>(k)][0],
                          qubit_basis[static_cast<std::size_t>(k)][1], n});
      tr += (k == 3 ? -1.0 : 1.0) * u(idx, idx);
    }
    report.sector_fidelities.push_back({n, std::norm(tr) / 16.0});
  }
  return report;
}

}  // namespace phononbus
