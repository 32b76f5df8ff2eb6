#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "phononbus/schemes/crot.hpp"

using namespace phononbus;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

SpaceDescriptor gate_space(int cutoff = 8) {
  return SpaceDescriptor{ion(4), ion(2), mode(cutoff)};
}

// 4x4 block of u over the qubit pair at fixed bus number n, rows/columns
// ordered {0g, 0e, 1g, 1e} (target excited = level 0).
Eigen::Matrix4cd qubit_block(const SpaceDescriptor& space, const Matrix& u,
                             int n) {
  const std::vector<std::vector<int>> basis = {
      {0, 1, n}, {0, 0, n}, {1, 1, n}, {1, 0, n}};
  Eigen::Matrix4cd block;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      block(r, c) = u(space.index_of(basis[static_cast<std::size_t>(r)]),
                      space.index_of(basis[static_cast<std::size_t>(c)]));
  return block;
}

// Equal superposition of the four qubit-pair states at bus number n.
StateVector pair_probe(const SpaceDescriptor& space, int n) {
  Vector amp = Vector::Zero(space.dim());
  amp(space.index_of({0, 1, n})) = 0.5;
  amp(space.index_of({0, 0, n})) = 0.5;
  amp(space.index_of({1, 1, n})) = 0.5;
  amp(space.index_of({1, 0, n})) = 0.5;
  return StateVector(space, amp);
}

}  // namespace

TEST_CASE("default crot program is controlled-Z on every Fock sector") {
  const SpaceDescriptor space = gate_space(8);
  const GateReport report =
      crot_sequence(crot_default_program(), pair_probe(space, 2));

  Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
  cz(3, 3) = -1.0;
  for (int n = 0; n <= 5; ++n) {
    const Eigen::Matrix4cd block = qubit_block(space, report.realized, n);
    INFO("bus sector n = " << n);
    REQUIRE((block - cz).cwiseAbs().maxCoeff() == 0.0);
  }

  REQUIRE(report.sector_fidelities.size() == 6);
  for (const SectorFidelity& s : report.sector_fidelities)
    REQUIRE(s.value == 1.0);

  // The probe picks up the -1 on |1>_c |e>_t and nothing else.
  REQUIRE(report.fidelity == 1.0);
  REQUIRE(report.leakage == 0.0);
  REQUIRE_THAT(report.duration, WithinAbs(2.0 * 12.5 * pi + 100.0, 1e-12));
  REQUIRE(report.warnings.empty());
}

TEST_CASE("control in |0> with ground target is left untouched") {
  const SpaceDescriptor space = gate_space(6);
  for (int n : {0, 3}) {
    const StateVector psi0 = basis_state(space, {0, 1, n});
    const GateReport report = crot_sequence(crot_default_program(), psi0);
    REQUIRE((report.state.amp - psi0.amp).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("single phase gate between the transfers stays Fock dependent") {
  const SpaceDescriptor space = gate_space(8);
  const CrotProgram single_s = {"A+", "S_t", "A-"};
  const GateReport report = crot_sequence(single_s, pair_probe(space, 1));

  for (int n = 0; n <= 5; ++n) {
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    Eigen::Matrix4cd expected = Eigen::Matrix4cd::Identity();
    expected(1, 1) = sign;   // (-1)^n on |0>_c |e>_t
    expected(3, 3) = -sign;  // (-1)^{n+1} on |1>_c |e>_t
    const Eigen::Matrix4cd block = qubit_block(space, report.realized, n);
    INFO("bus sector n = " << n);
    REQUIRE((block - expected).cwiseAbs().maxCoeff() == 0.0);
  }

  // Adjacent sectors disagree, so the shortened program has no
  // Fock-independent action; the sector report shows the alternation.
  const Eigen::Matrix4cd even = qubit_block(space, report.realized, 0);
  const Eigen::Matrix4cd odd = qubit_block(space, report.realized, 1);
  REQUIRE((even - odd).cwiseAbs().maxCoeff() == 2.0);
  REQUIRE(report.sector_fidelities[0].value == 1.0);
  REQUIRE(report.sector_fidelities[1].value == 0.0);
}

TEST_CASE("crot rejects malformed programs and spaces") {
  const SpaceDescriptor space = gate_space(4);
  const StateVector psi0 = basis_state(space, {1, 0, 0});

  REQUIRE_THROWS_WITH(crot_sequence({"S_t", "B+"}, psi0),
                      ContainsSubstring("undefined step name 'B+'"));
  REQUIRE_THROWS_WITH(crot_sequence({}, psi0),
                      ContainsSubstring("program is empty"));

  const SpaceDescriptor swapped{ion(2), ion(4), mode(4)};
  REQUIRE_THROWS_WITH(
      crot_sequence(crot_default_program(), basis_state(swapped, {0, 0, 0})),
      ContainsSubstring("four-level control ion"));
  REQUIRE_THROWS_WITH(crot_ideal_matrix(swapped),
                      ContainsSubstring("four-level control ion"));

  CrotOptions bad;
  bad.transfer_time = 0.0;
  REQUIRE_THROWS_WITH(crot_sequence(crot_default_program(), psi0, bad),
                      ContainsSubstring("transfer_time"));
}

TEST_CASE("integrated steps reproduce the ideal sequence") {
  const SpaceDescriptor space = gate_space(6);
  const CrotProgram integrated = {{"S_t", true},
                                  {"A+", true},
                                  {"S_t", true},
                                  {"A-", true}};
  const GateReport report = crot_sequence(integrated, pair_probe(space, 0));

  INFO("fidelity " << report.fidelity);
  REQUIRE(report.fidelity > 0.9);
  REQUIRE(report.sector_fidelities[0].value > 0.9);
  REQUIRE(report.leakage < 1e-3);
  REQUIRE(report.warnings.empty());
}

TEST_CASE("diabatic integrated transfers are flagged") {
  const SpaceDescriptor space = gate_space(3);
  CrotOptions opts;
  opts.transfer_time = 5.0;  // T Omega = 10, far from adiabatic
  const GateReport report = crot_sequence({{"A+", true}},
                                          basis_state(space, {0, 1, 0}), opts);
  REQUIRE(report.warnings.size() == 1);
  REQUIRE_THAT(report.warnings.messages[0], ContainsSubstring("adiabaticity"));
}
