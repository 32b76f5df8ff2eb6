#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "phononbus/chain.hpp"
#include "phononbus/schemes/types.hpp"

namespace phononbus {

// --- Matrix route -----------------------------------------------------------

// Branch-dependent momentum kick on one ion:
//   U = sigma^+ prod_p D_p(i eta_p) + sigma^- prod_p D_p(-i eta_p).
// U is Hermitian and squares to the identity (the displacements cancel
// pairwise), so a kick is its own inverse.
inline Matrix kick_operator(const SpaceDescriptor& space, int ion_index,
                            const Eigen::VectorXd& etas,
                            Warnings* warnings = nullptr) {
  const std::vector<int> ions = space.ion_factor_indices();
  const std::vector<int> modes = space.mode_factor_indices();
  if (ion_index < 0 || ion_index >= static_cast<int>(ions.size()))
    throw InvalidArgument("kick_operator: ion index out of range");
  if (etas.size() != static_cast<Index>(modes.size()))
    throw InvalidArgument("kick_operator: need one eta per mode factor (" +
                          std::to_string(modes.size()) + ")");

  const int k_ion = ions[static_cast<std::size_t>(ion_index)];
  if (space.dim_of(k_ion) != 2)
    throw InvalidArgument("kick_operator: kicked ion must be a 2-level ion");

  const SingleSpin s = spin_ops(2);
  Matrix up = embed(space, k_ion, s.sp);
  Matrix down = embed(space, k_ion, s.sm);
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const int k = modes[m];
    const int cutoff = space.dim_of(k) - 1;
    const Complex d = imag_unit * etas(static_cast<Index>(m));
    up = up * embed(space, k, displacement(cutoff, d, warnings));
    down = down * embed(space, k, displacement(cutoff, -d));
  }
  return up + down;
}

inline StateVector kick(const StateVector& psi, int ion_index,
                        const Eigen::VectorXd& etas,
                        Warnings* warnings = nullptr) {
  return StateVector(psi.space,
                     kick_operator(psi.space, ion_index, etas, warnings) * psi.amp);
}

// --- Exact coherent-branch algebra ------------------------------------------

// One branch of a kicked state: an internal basis configuration carrying a
// coherent amplitude per mode.  Kicks, free evolution, and overlaps are all
// closed operations on this form, so the gate sequence needs no Fock cutoff.
struct CoherentBranch {
  Complex weight{0.0, 0.0};
  std::vector<int> levels;     // internal level per ion (0 = excited)
  std::vector<Complex> alpha;  // coherent label per mode
};

struct BranchState {
  std::vector<CoherentBranch> branches;
  int n_ions = 0;
  int n_modes = 0;
};

// Starts branch tracking from an internal state (ion factors only); every
// mode begins in its vacuum.
inline BranchState branch_init(const StateVector& internal, int n_modes) {
  if (!internal.space.mode_factor_indices().empty())
    throw InvalidArgument("branch_init: initial state must be internal-only");
  if (n_modes < 1) throw InvalidArgument("branch_init: need n_modes >= 1");

  BranchState out;
  out.n_ions = internal.space.num_factors();
  out.n_modes = n_modes;
  for (Index i = 0; i < internal.amp.size(); ++i) {
    if (internal.amp(i) == Complex{0.0, 0.0}) continue;
    CoherentBranch b;
    b.weight = internal.amp(i);
    b.levels = internal.space.unrank(i);
    b.alpha.assign(static_cast<std::size_t>(n_modes), Complex{0.0, 0.0});
    out.branches.push_back(std::move(b));
  }
  return out;
}

// Kick on one ion in branch form.  Each branch maps to exactly one branch:
// a ground ion rises and displaces every mode by +i eta_p, an excited ion
// falls and displaces by -i eta_p; the displacement acting on a coherent
// state contributes the symplectic phase exp(i Im(d conj(alpha))).
inline BranchState branch_kick(BranchState state, int ion,
                               const Eigen::VectorXd& etas) {
  if (ion < 0 || ion >= state.n_ions)
    throw InvalidArgument("branch_kick: ion index out of range");
  if (etas.size() != state.n_modes)
    throw InvalidArgument("branch_kick: need one eta per tracked mode");
  for (CoherentBranch& b : state.branches) {
    int& level = b.levels[static_cast<std::size_t>(ion)];
    if (level != 0 && level != 1)
      throw InvalidArgument("branch_kick: kicked ion is outside the qubit manifold");
    const double sign = (level == 1) ? +1.0 : -1.0;
    level = 1 - level;
    for (int p = 0; p < state.n_modes; ++p) {
      const Complex d = sign * imag_unit * etas(p);
      Complex& a = b.alpha[static_cast<std::size_t>(p)];
      b.weight *= std::exp(imag_unit * std::imag(d * std::conj(a)));
      a += d;
    }
  }
  return state;
}

// Free harmonic evolution rotates each coherent label; the n+1/2 zero-point
// phases are common to all branches and dropped.
inline BranchState branch_free_evolve(BranchState state,
                                      const std::vector<double>& omegas,
                                      double t) {
  if (static_cast<int>(omegas.size()) != state.n_modes)
    throw InvalidArgument("branch_free_evolve: need one frequency per mode");
  for (CoherentBranch& b : state.branches)
    for (int p = 0; p < state.n_modes; ++p)
      b.alpha[static_cast<std::size_t>(p)] *=
          std::exp(-imag_unit * omegas[static_cast<std::size_t>(p)] * t);
  return state;
}

// Flips `target_ion` in every branch whose `control_ion` sits at
// `control_level` (the idealized branch-selective laser).
inline BranchState branch_flip_if(BranchState state, int target_ion,
                                  int control_ion, int control_level) {
  for (CoherentBranch& b : state.branches) {
    if (b.levels[static_cast<std::size_t>(control_ion)] != control_level)
      continue;
    int& level = b.levels[static_cast<std::size_t>(target_ion)];
    if (level != 0 && level != 1)
      throw InvalidArgument("branch_flip_if: target ion is outside the qubit manifold");
    level = 1 - level;
  }
  return state;
}

// <a|b> with coherent-state overlaps <alpha|beta> =
// exp(-|alpha|^2/2 - |beta|^2/2 + conj(alpha) beta).
inline Complex branch_inner(const BranchState& a, const BranchState& b) {
  if (a.n_ions != b.n_ions || a.n_modes != b.n_modes)
    throw InvalidArgument("branch_inner: mismatched branch structures");
  Complex sum{0.0, 0.0};
  for (const CoherentBranch& x : a.branches) {
    for (const CoherentBranch& y : b.branches) {
      if (x.levels != y.levels) continue;
      Complex term = std::conj(x.weight) * y.weight;
      for (int p = 0; p < a.n_modes; ++p) {
        const Complex ax = x.alpha[static_cast<std::size_t>(p)];
        const Complex ay = y.alpha[static_cast<std::size_t>(p)];
        term *= std::exp(-0.5 * std::norm(ax) - 0.5 * std::norm(ay) +
                         std::conj(ax) * ay);
      }
      sum += term;
    }
  }
  return sum;
}

// Mean total excitation left in the modes.
inline double branch_bus_excitation(const BranchState& state) {
  double sum = 0.0;
  for (const CoherentBranch& b : state.branches) {
    double n = 0.0;
    for (const Complex& a : b.alpha) n += std::norm(a);
    sum += std::norm(b.weight) * n;
  }
  return sum;
}

// Renders the branch state on a concrete truncated space (all ions first,
// then one mode factor per tracked mode).  Only used for reports and
// cross-checks; the algebra itself never truncates.
inline StateVector branch_to_state(const BranchState& state, int cutoff) {
  std::vector<Factor> factors;
  for (int i = 0; i < state.n_ions; ++i) factors.push_back(ion(2));
  for (int p = 0; p < state.n_modes; ++p) factors.push_back(mode(cutoff));
  SpaceDescriptor space(std::move(factors));

  Vector amp = Vector::Zero(space.dim());
  std::vector<int> digits(static_cast<std::size_t>(space.num_factors()), 0);
  for (const CoherentBranch& b : state.branches) {
    for (int i = 0; i < state.n_ions; ++i)
      digits[static_cast<std::size_t>(i)] = b.levels[static_cast<std::size_t>(i)];
    // Tensor product of truncated coherent expansions, weighted by the
    // exact (untruncated) normalization so weights stay faithful.
    std::vector<Vector> mode_amps;
    for (int p = 0; p < state.n_modes; ++p) {
      const Complex a = b.alpha[static_cast<std::size_t>(p)];
      Vector c(cutoff + 1);
      c(0) = std::exp(-0.5 * std::norm(a));
      for (int n = 1; n <= cutoff; ++n)
        c(n) = c(n - 1) * a / std::sqrt(static_cast<double>(n));
      mode_amps.push_back(std::move(c));
    }
    std::vector<int> ns(static_cast<std::size_t>(state.n_modes), 0);
    bool done = false;
    while (!done) {
      Complex coeff = b.weight;
      for (int p = 0; p < state.n_modes; ++p) {
        digits[static_cast<std::size_t>(state.n_ions + p)] =
            ns[static_cast<std::size_t>(p)];
        coeff *= mode_amps[static_cast<std::size_t>(p)](
            ns[static_cast<std::size_t>(p)]);
      }
      amp(space.index_of(digits)) += coeff;
      done = true;
      for (int p = state.n_modes - 1; p >= 0; --p) {
        if (++ns[static_cast<std::size_t>(p)] <= cutoff) {
          done = false;
          break;
        }
        ns[static_cast<std::size_t>(p)] = 0;
      }
    }
  }
  return StateVector(space, std::move(amp));
}

// --- Observables of the kicked state ----------------------------------------

// Distance between the two branch centroids at each ion's position, after
// free evolution for time t:
//   dx_n(t) = | sum_p b_n^(p) x0_p 2 Re(alpha+_p(t) - alpha-_p(t)) |.
inline Eigen::VectorXd branch_separation(const IonChain& chain,
                                         const BranchState& state, double t) {
  if (state.branches.size() != 2)
    throw InvalidArgument(
        "branch_separation: state is not in two-branch form (" +
        std::to_string(state.branches.size()) + " branches)");
  const std::vector<ModeSpec> modes = normal_modes(chain);
  if (state.n_modes > chain.count)
    throw InvalidArgument("branch_separation: more tracked modes than the chain has");
  if (state.n_ions > chain.count)
    throw InvalidArgument("branch_separation: more ions than the chain has");

  Eigen::VectorXd dx = Eigen::VectorXd::Zero(state.n_ions);
  for (int n = 0; n < state.n_ions; ++n) {
    double sep = 0.0;
    for (int p = 0; p < state.n_modes; ++p) {
      const ModeSpec& m = modes[static_cast<std::size_t>(p)];
      const Complex rot = std::exp(-imag_unit * m.omega * t);
      const Complex diff = state.branches[0].alpha[static_cast<std::size_t>(p)] * rot -
                           state.branches[1].alpha[static_cast<std::size_t>(p)] * rot;
      sep += m.b(n) * chain.zero_point_length(m.omega) * 2.0 * diff.real();
    }
    dx(n) = std::abs(sep);
  }
  return dx;
}

// Overlap of the post-sequence state with a perfectly recombined one, as a
// function of the recombination time: each branch leaves the residue
// alpha_res = +-i eta_p (e^{-i w_p t} - 1) behind, so
//   F(t) = exp(-4 sum_p eta_p^2 sin^2(w_p t / 2)).
inline double revival_fidelity(const Eigen::VectorXd& etas,
                               const std::vector<double>& omegas, double t) {
  if (etas.size() != static_cast<Index>(omegas.size()))
    throw InvalidArgument("revival_fidelity: eta/omega size mismatch");
  double expo = 0.0;
  for (Index p = 0; p < etas.size(); ++p) {
    const double s = std::sin(0.5 * omegas[static_cast<std::size_t>(p)] * t);
    expo += etas(p) * etas(p) * s * s;
  }
  return std::exp(-4.0 * expo);
}

struct RevivalSearch {
  double time = 0.0;
  double fidelity = 0.0;
};

// Best recombination time in [t_min, t_max]: grid scan of the closed form
// plus a golden-section refinement around the best grid point.  t_min must
// exclude the trivial near-zero overlap where the branches have not yet
// separated, which would otherwise always win the scan.
inline RevivalSearch find_best_revival(const Eigen::VectorXd& etas,
                                       const std::vector<double>& omegas,
                                       double t_min, double t_max,
                                       long grid_points = 20000) {
  if (!(t_min > 0.0) || !(t_max > t_min))
    throw InvalidArgument("find_best_revival: need 0 < t_min < t_max");

  RevivalSearch best;
  const double dt = (t_max - t_min) / static_cast<double>(grid_points);
  for (long k = 0; k <= grid_points; ++k) {
    const double t = t_min + dt * static_cast<double>(k);
    const double f = revival_fidelity(etas, omegas, t);
    if (f > best.fidelity) {
      best.fidelity = f;
      best.time = t;
    }
  }
  // Local refinement around the best grid point.
  double lo = std::max(t_min, best.time - dt), hi = std::min(t_max, best.time + dt);
  for (int it = 0; it < 60; ++it) {
    const double m1 = lo + 0.381966 * (hi - lo);
    const double m2 = hi - 0.381966 * (hi - lo);
    if (revival_fidelity(etas, omegas, m1) > revival_fidelity(etas, omegas, m2))
      hi = m2;
    else
      lo = m1;
  }
  const double t_ref = 0.5 * (lo + hi);
  const double f_ref = revival_fidelity(etas, omegas, t_ref);
  if (f_ref > best.fidelity) {
    best.fidelity = f_ref;
    best.time = t_ref;
  }
  return best;
}

// --- The conditional gate ----------------------------------------------------

// Kick-based conditional flip:
//   kick(ion 0) -> wait to flip_time -> flip ion 1 in the branch whose
//   first ion is excited -> wait until recombination -> kick(ion 0).
// The second kick undoes the first exactly when every mode has completed a
// whole period; otherwise the residues reduce the fidelity, which is the
// closed-form revival_fidelity above.  Ideal sequence realizes a flip of
// ion 1 conditioned on ion 0 being in the ground state.
inline GateReport kick_gate(const IonChain& chain, const LaserDrive& drive,
                            double flip_time, const StateVector& psi0,
                            int report_cutoff = 12) {
  drive.validate();
  if (chain.count < 2)
    throw InvalidArgument("kick_gate: need at least two ions");
  if (psi0.space.num_factors() != 2 || psi0.space.dim() != 4)
    throw InvalidArgument("kick_gate: psi0 must be a two-qubit internal state");
  const int n_modes = static_cast<int>(drive.eta.size());
  if (n_modes > chain.count)
    throw InvalidArgument("kick_gate: more kick modes than chain modes");

  const std::vector<ModeSpec> mode_specs = normal_modes(chain);
  std::vector<double> omegas;
  for (int p = 0; p < n_modes; ++p)
    omegas.push_back(mode_specs[static_cast<std::size_t>(p)].omega);

  GateReport report;

  // Recombination time: one trap period closes every tracked mode exactly
  // when only the center of mass is kicked; with more modes the frequencies
  // are incommensurate and only partial revivals exist.
  double t_revival = 2.0 * pi / chain.omega_x;
  double f_revival = 1.0;
  if (n_modes > 1) {
    // Skip the first half trap period, where the branches have not yet
    // separated and the overlap is trivially high.
    const RevivalSearch best = find_best_revival(
        drive.eta, omegas, pi / chain.omega_x, 20.0 * 2.0 * pi / chain.omega_x);
    t_revival = best.time;
    f_revival = best.fidelity;
    if (f_revival < 0.999)
      report.warnings.add(
          "kick_gate: no clean recombination within 20 trap periods; best "
          "branch overlap is " + detail::fmt_g(f_revival) + " at t = " +
          detail::fmt_g(t_revival));
  }
  if (!(flip_time > 0.0) || flip_time >= t_revival)
    throw InvalidArgument("kick_gate: flip_time must lie inside (0, revival time)");

  BranchState state = branch_init(psi0, n_modes);
  state = branch_kick(std::move(state), 0, drive.eta);
  state = branch_free_evolve(std::move(state), omegas, flip_time);
  // The spatially resolved laser addresses the branch whose first ion was
  // ground before the kick, i.e. is excited now.
  state = branch_flip_if(std::move(state), 1, 0, 0);
  state = branch_free_evolve(std::move(state), omegas, t_revival - flip_time);
  state = branch_kick(std::move(state), 0, drive.eta);

  // Ideal conditional flip on the internal state: ion 1 flips where ion 0
  // is in the ground level.
  Vector target_amp = Vector::Zero(4);
  for (Index i = 0; i < 4; ++i) {
    if (psi0.amp(i) == Complex{0.0, 0.0}) continue;
    std::vector<int> digits = psi0.space.unrank(i);
    if (digits[0] == 1) digits[1] = 1 - digits[1];
    target_amp(psi0.space.index_of(digits)) += psi0.amp(i);
  }
  BranchState target = branch_init(StateVector(psi0.space, target_amp), n_modes);

  report.fidelity = checked_fidelity(std::norm(branch_inner(target, state)),
                                     "kick_gate");
  report.duration = t_revival;
  report.set_metric("revival_time", t_revival);
  report.set_metric("revival_overlap", f_revival);
  report.set_metric("residual_bus_excitation", branch_bus_excitation(state));
  report.set_metric("flip_time", flip_time);

  if (report_cutoff > 0) {
    report.state = branch_to_state(state, report_cutoff);
    report.leakage = truncation_leakage(report.state);
  }
  return report;
}

}  // namespace phononbus
