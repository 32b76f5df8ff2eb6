#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "phononbus/effham.hpp"
#include "phononbus/schemes/dhm.hpp"

using namespace phononbus;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

LaserDrive node_drive(double rabi = 10.0, double detuning = 50.0,
                      double eta = 0.2) {
  LaserDrive d;
  d.rabi = rabi;
  d.detuning = detuning;
  d.eta = Eigen::VectorXd::Constant(1, eta);
  d.kind = DriveKind::StandingWaveNode;
  return d;
}

// Undoes the laser-retune compensation, recovering the bare interaction
// propagator from the gate's realized matrix.
Matrix strip_compensation(const SpaceDescriptor& space, const Matrix& realized) {
  Vector comp(space.dim());
  for (Index i = 0; i < space.dim(); ++i) {
    const std::vector<int> d = space.unrank(i);
    comp(i) = std::exp(imag_unit * (0.5 * pi) *
                       ((d[0] == 0 ? 0.5 : -0.5) - d[1]));
  }
  return realized * comp.conjugate().asDiagonal().toDenseMatrix();
}

Vector low_fock_probe(const SpaceDescriptor& space) {
  Vector probe = Vector::Zero(space.dim());
  for (int q = 0; q < 2; ++q)
    for (int n = 0; n < 4; ++n) probe(space.index_of({q, n})) = 1.0;
  probe.normalize();
  return probe;
}

}  // namespace

TEST_CASE("ideal gate flips the phase of odd Fock states on the excited level") {
  const SpaceDescriptor space{ion(2), mode(6)};
  const Matrix st = s_t_matrix(space, 0, 1);

  const StateVector e1 = basis_state(space, {0, 1});
  REQUIRE((st * e1.amp + e1.amp).norm() == 0.0);

  for (int n = 0; n <= 6; ++n) {
    const StateVector gn = basis_state(space, {1, n});
    REQUIRE((st * gn.amp - gn.amp).norm() == 0.0);
    const StateVector en = basis_state(space, {0, n});
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    REQUIRE((st * en.amp - sign * en.amp).norm() == 0.0);
  }

  // Diagonal involution with unit-modulus entries.
  const Matrix eye = Matrix::Identity(space.dim(), space.dim());
  REQUIRE(max_abs(st * st - eye) == 0.0);
  REQUIRE(max_abs(st - st.adjoint()) == 0.0);
}

TEST_CASE("ideal gate on a composite space leaves other factors alone") {
  const SpaceDescriptor space{ion(4), ion(2), mode(4)};
  const Matrix st = s_t_matrix(space, 1, 2);
  for (Index i = 0; i < space.dim(); ++i) {
    const std::vector<int> d = space.unrank(i);
    const double expected = (d[1] == 0 && d[2] % 2 == 1) ? -1.0 : 1.0;
    REQUIRE(st(i, i) == Complex(expected, 0.0));
  }

  // Auxiliary levels of the addressed ion pick up no phase.
  const Matrix st_ctrl = s_t_matrix(space, 0, 2);
  for (Index i = 0; i < space.dim(); ++i) {
    const std::vector<int> d = space.unrank(i);
    const double expected = (d[0] == 0 && d[2] % 2 == 1) ? -1.0 : 1.0;
    REQUIRE(st_ctrl(i, i) == Complex(expected, 0.0));
  }

  REQUIRE_THROWS_WITH(s_t_matrix(space, 2, 2),
                      ContainsSubstring("ion factor"));
  REQUIRE_THROWS_WITH(s_t_matrix(space, 0, 1),
                      ContainsSubstring("mode factor"));
}

TEST_CASE("analytic mode returns the ideal operator and duration") {
  const auto res = dhm_phase_gate(node_drive(), PhaseGateMode::Analytic);
  const SpaceDescriptor space{ion(2), mode(10)};
  REQUIRE(res.s_t.space == space);
  REQUIRE(max_abs(res.s_t.mat - s_t_matrix(space, 0, 1)) == 0.0);
  REQUIRE(res.report.fidelity == 1.0);
  // tau = pi Delta / (Omega^2 eta^2) = pi 50 / 4
  REQUIRE_THAT(res.report.duration, WithinRel(12.5 * pi, 1e-14));
  REQUIRE(res.report.sector_fidelities.size() == 4);
  for (const auto& sf : res.report.sector_fidelities) REQUIRE(sf.value == 1.0);
}

TEST_CASE("integrated evolution matches the static-frame oracle") {
  const LaserDrive drive = node_drive();
  const auto res = dhm_phase_gate(drive, PhaseGateMode::Integrated);
  const SpaceDescriptor& space = res.s_t.space;

  // The gate's interaction-picture Hamiltonian is e^{iH0 t}(H0+V)e^{-iH0 t}-H0
  // for static H0 = Delta sz + nhat, V = (Omega eta/2)(s^+ + s^-)(a + adag),
  // so the exact propagator is U(tau) = e^{+i H0 tau} e^{-i (H0+V) tau} with
  // no time stepping at all.
  const SingleSpin s = spin_ops(2);
  const Matrix sz = embed(space, 0, s.sz);
  const Matrix sx2 = embed(space, 0, s.sp + s.sm);
  const Matrix a = mode_annihilator(space, 1);
  const Matrix nhat = mode_number(space, 1);
  const double g = 0.5 * drive.rabi * drive.eta(0);
  const Matrix h0 = drive.detuning * sz + nhat;
  const Matrix v = g * sx2 * (a + a.adjoint());
  const double tau = res.report.duration;
  const Matrix u_oracle =
      expi_hermitian(h0 * tau) * expi_hermitian(-(h0 + v) * tau);

  const Matrix u_bare = strip_compensation(space, res.s_t.mat);
  const Vector probe = low_fock_probe(space);
  const Complex overlap = (u_oracle * probe).dot(u_bare * probe);
  REQUIRE(std::norm(overlap) > 1.0 - 1e-6);
  // Whole-matrix closeness; the worst elements sit at the truncation edge.
  REQUIRE(max_abs(u_bare - u_oracle) < 5e-3);
}

TEST_CASE("integrated gate approximates the ideal flip above 0.99") {
  const auto res = dhm_phase_gate(node_drive(), PhaseGateMode::Integrated);

  INFO("probe fidelity " << res.report.fidelity);
  REQUIRE(res.report.fidelity > 0.99);
  REQUIRE_THAT(res.report.fidelity, WithinAbs(0.99766, 5e-4));
  REQUIRE_THAT(res.report.duration, WithinRel(12.5 * pi, 1e-12));

  REQUIRE(res.report.sector_fidelities.size() == 4);
  for (const auto& sf : res.report.sector_fidelities) {
    INFO("sector " << sf.n << " fidelity " << sf.value);
    REQUIRE(sf.value > 0.99);
  }
  REQUIRE_THAT(res.report.sector_fidelities[0].value, WithinAbs(0.99923, 5e-4));
  REQUIRE_THAT(res.report.sector_fidelities[3].value, WithinAbs(0.99413, 5e-4));

  // Integer detuning rides the periodic route: tau = 6.25 drive periods.
  REQUIRE(res.report.metric("periods") == 6.0);
  REQUIRE(res.report.metric("steps_per_period") > 1000.0);
  REQUIRE(res.report.leakage < 1e-6);
}

TEST_CASE("incommensurate detuning integrates the whole span directly") {
  LaserDrive drive = node_drive(10.0, 50.5, 0.2);
  DhmOptions opts;
  opts.cutoff = 4;
  const auto res = dhm_phase_gate(drive, PhaseGateMode::Integrated, opts);
  REQUIRE(res.report.metric("periods") == 1.0);
  REQUIRE(res.report.fidelity > 0.99);
}

TEST_CASE("sideband pair reduces to the dispersive number-dependent shift") {
  const int cutoff = 7;
  SpaceDescriptor space{ion(2), mode(cutoff)};
  const SingleSpin s = spin_ops(2);
  const Matrix sp = embed(space, 0, s.sp);
  const Matrix sm = embed(space, 0, s.sm);
  const Matrix sz = embed(space, 0, s.sz);
  const Matrix a = mode_annihilator(space, 1);
  const Matrix n = mode_number(space, 1);
  const Matrix eye = Matrix::Identity(space.dim(), space.dim());

  const double rabi = 10.0, eta = 0.2, delta = 50.0;
  const double g = 0.5 * rabi * eta;
  // Amplitudes rotating at -(delta -+ 1) are s^- a^dag and s^- a.
  const EffectiveHamiltonian eff = reduce(
      space, {HarmonicTerm(Operator(space, g * sm * a.adjoint()), delta - 1.0),
              HarmonicTerm(Operator(space, g * sm * a), delta + 1.0)});

  const Matrix pe = sp * sm;
  const Matrix pg = sm * sp;
  const Matrix exact = g * g *
                       ((pe * (n + eye) - pg * n) / (delta - 1.0) +
                        (pe * n - pg * (n + eye)) / (delta + 1.0));

  Matrix psub = Matrix::Identity(cutoff + 1, cutoff + 1);
  psub(cutoff, cutoff) = 0.0;
  const Matrix p = embed(space, 1, psub);
  REQUIRE(max_abs(p * (eff.op.mat - exact) * p) < 1e-13);

  // Large-detuning form the gate duration is built on.
  const Matrix dispersive =
      (rabi * rabi * eta * eta / (2.0 * delta)) * (2.0 * n + eye) * sz;
  REQUIRE(max_abs(p * (exact - dispersive) * p) < 1e-2);
}

TEST_CASE("phase gate rejects drives outside its regime") {
  LaserDrive wrong_kind = node_drive();
  wrong_kind.kind = DriveKind::TravelingWave;
  REQUIRE_THROWS_WITH(dhm_phase_gate(wrong_kind, PhaseGateMode::Analytic),
                      ContainsSubstring("StandingWaveNode"));

  const LaserDrive low = node_drive(10.0, 5.0, 0.2);
  REQUIRE_THROWS_WITH(dhm_phase_gate(low, PhaseGateMode::Integrated),
                      ContainsSubstring("10 omega_x"));
  // The analytic construction has no regime to violate.
  REQUIRE_NOTHROW(dhm_phase_gate(low, PhaseGateMode::Analytic));

  const LaserDrive red = node_drive(10.0, -50.0, 0.2);
  REQUIRE_THROWS_WITH(dhm_phase_gate(red, PhaseGateMode::Analytic),
                      ContainsSubstring("positive"));

  LaserDrive two = node_drive();
  two.eta = Eigen::VectorXd::Constant(2, 0.2);
  REQUIRE_THROWS_WITH(dhm_phase_gate(two, PhaseGateMode::Analytic),
                      ContainsSubstring("one bus mode"));

  DhmOptions tiny;
  tiny.cutoff = 1;
  REQUIRE_THROWS_WITH(
      dhm_phase_gate(node_drive(), PhaseGateMode::Analytic, tiny),
      ContainsSubstring("cutoff"));
}
