#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "phononbus/hilbert.hpp"

namespace phononbus {

// One harmonic piece of an interaction Hamiltonian
//   H_I(t) = sum_m h_m exp(-i omega_m t) + h.c.
// The amplitude operator h_m need not be Hermitian.  The phase convention
// matters for the sign of the average: h_m rotates at -omega_m, its
// adjoint at +omega_m.  (A two-level cross-check against exact integration
// lives in the test suite.)
struct HarmonicTerm {
  Operator h;
  double omega = 0.0;

  HarmonicTerm(Operator op, double w) : h(std::move(op)), omega(w) {}
};

struct ReduceOptions {
  double hbar = 1.0;
  // Frequencies closer than this (relative to the largest |omega|) are
  // treated as equal: the averaged cross terms would then be secular and
  // the second-order formula invalid.
  double collision_rel_tol = 1e-9;
  // |omega| below this fraction of the largest |omega| makes 1/omega
  // blow up; reject instead of returning a huge operator.
  double frequency_floor_rel = 1e-6;
};

struct EffectiveHamiltonian {
  Operator op;
  std::vector<double> term_frequencies;  // which oscillation frequencies entered
  // Smallest |omega_m - omega_n| (m != n) or |omega_m + omega_n| in the set;
  // time averaging is valid for dynamics slow compared to this scale.
  double min_frequency_gap = std::numeric_limits<double>::infinity();
};

// Second-order time average of a detuned interaction Hamiltonian:
//   H_eff = sum_m [h_m^dag, h_m] / (hbar omega_m).
// Valid when every beat frequency |omega_m +- omega_n| is fast compared to
// the effective dynamics it generates.
inline EffectiveHamiltonian reduce(const SpaceDescriptor& space,
                                   const std::vector<HarmonicTerm>& terms,
                                   const ReduceOptions& opts = {},
                                   Warnings* warnings = nullptr) {
  if (!(opts.hbar > 0.0))
    throw InvalidArgument("reduce: hbar must be positive");

  EffectiveHamiltonian out;
  out.op = Operator(space, Matrix::Zero(space.dim(), space.dim()));
  if (terms.empty()) {
    warn(warnings, "reduce: empty term list; returning the zero operator");
    return out;
  }

  double max_abs_omega = 0.0;
  for (const HarmonicTerm& t : terms) {
    if (!(t.h.space == space))
      throw InvalidArgument("reduce: term lives on a different space");
    max_abs_omega = std::max(max_abs_omega, std::abs(t.omega));
  }
  if (max_abs_omega == 0.0)
    throw InvalidArgument("reduce: all oscillation frequencies are zero");

  const double floor = opts.frequency_floor_rel * max_abs_omega;
  for (std::size_t m = 0; m < terms.size(); ++m) {
    if (std::abs(terms[m].omega) < floor)
      throw InvalidArgument("reduce: term " + std::to_string(m) +
                            " oscillates at " + detail::fmt_g(terms[m].omega) +
                            ", below the frequency floor " +
                            detail::fmt_g(floor));
  }

  const double collision = opts.collision_rel_tol * max_abs_omega;
  for (std::size_t m = 0; m < terms.size(); ++m) {
    for (std::size_t n = m + 1; n < terms.size(); ++n) {
      const double diff = std::abs(terms[m].omega - terms[n].omega);
      const double sum = std::abs(terms[m].omega + terms[n].omega);
      if (diff <= collision)
        throw InvalidArgument(
            "reduce: terms " + std::to_string(m) + " and " + std::to_string(n) +
            " share the frequency " + detail::fmt_g(terms[m].omega) +
            "; their cross terms would be secular");
      if (sum <= collision)
        throw InvalidArgument(
            "reduce: terms " + std::to_string(m) + " and " + std::to_string(n) +
            " have opposite frequencies " + detail::fmt_g(terms[m].omega) +
            " and " + detail::fmt_g(terms[n].omega) +
            "; their cross terms would be secular");
      out.min_frequency_gap = std::min(out.min_frequency_gap, diff);
      out.min_frequency_gap = std::min(out.min_frequency_gap, sum);
    }
    // The term beats against its own conjugate at 2|omega|.
    out.min_frequency_gap =
        std::min(out.min_frequency_gap, 2.0 * std::abs(terms[m].omega));
  }

  for (const HarmonicTerm& t : terms) {
    const Matrix& h = t.h.mat;
    out.op.mat += (h.adjoint() * h - h * h.adjoint()) / (opts.hbar * t.omega);
    out.term_frequencies.push_back(t.omega);
  }

  if (!is_hermitian(out.op.mat, 1e-10))
    throw NumericalContract("reduce: effective Hamiltonian lost hermiticity");
  return out;
}

// Numerical regression check of the commutator identities behind the
// two-term bus reductions.  All three identities hold exactly below the
// Fock-space edge; the report carries the max deviation there.
struct CommutatorReport {
  // [J_y a, a^dag J_y] = J_y^2
  double collective_error = 0.0;
  // [s^- a^dag, s^+ a] = s^- s^+ n - s^+ s^- (n+1)
  double exchange_error = 0.0;
  // [s^- a, s^+ a^dag] = s^- s^+ (n+1) - s^+ s^- n
  double exchange_reversed_error = 0.0;

  double max_error() const {
    return std::max({collective_error, exchange_error, exchange_reversed_error});
  }
  bool pass(double tol = 1e-12) const { return max_error() <= tol; }
};

inline CommutatorReport commutator_identities_check(int cutoff = 6) {
  if (cutoff < 2)
    throw InvalidArgument("commutator_identities_check: cutoff must be >= 2");

  auto commutator = [](const Matrix& x, const Matrix& y) -> Matrix {
    return x * y - y * x;
  };

  CommutatorReport report;
  {
    SpaceDescriptor space{ion(2), ion(2), mode(cutoff)};
    const CollectiveSpin j = collective_spin(space);
    const Matrix a = mode_annihilator(space, 2);
    // Interior projector: drop the top Fock level, where aa^dag deviates
    // from n+1 on the truncated space.
    Matrix psub = Matrix::Identity(cutoff + 1, cutoff + 1);
    psub(cutoff, cutoff) = 0.0;
    const Matrix p = embed(space, 2, psub);

    const Matrix lhs = commutator(j.jy * a, a.adjoint() * j.jy);
    report.collective_error =
        (p * (lhs - j.jy * j.jy) * p).cwiseAbs().maxCoeff();
  }
  {
    SpaceDescriptor space{ion(2), mode(cutoff)};
    const SingleSpin s = spin_ops(2);
    const Matrix sp = embed(space, 0, s.sp);
    const Matrix sm = embed(space, 0, s.sm);
    const Matrix a = mode_annihilator(space, 1);
    const Matrix n = mode_number(space, 1);
    const Matrix eye = Matrix::Identity(space.dim(), space.dim());
    Matrix psub = Matrix::Identity(cutoff + 1, cutoff + 1);
    psub(cutoff, cutoff) = 0.0;
    const Matrix p = embed(space, 1, psub);

    const Matrix lhs1 = commutator(sm * a.adjoint(), sp * a);
    const Matrix rhs1 = sm * sp * n - sp * sm * (n + eye);
    report.exchange_error = (p * (lhs1 - rhs1) * p).cwiseAbs().maxCoeff();

    const Matrix lhs2 = commutator(sm * a, sp * a.adjoint());
    const Matrix rhs2 = sm * sp * (n + eye) - sp * sm * n;
    report.exchange_reversed_error =
        (p * (lhs2 - rhs2) * p).cwiseAbs().maxCoeff();
  }
  return report;
}

}  // namespace phononbus
