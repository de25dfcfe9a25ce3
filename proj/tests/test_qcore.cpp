/// Core quantum engine: state preparation, gates, collapse identities,
/// measurement semantics, and deterministic RNG substreams.
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdsim/codes.hpp"
#include "qdsim/gates.hpp"
#include "qdsim/labels.hpp"
#include "qdsim/measurement.hpp"
#include "qdsim/rng.hpp"
#include "qdsim/statevector.hpp"
#include "qdsim/states.hpp"

using namespace qdsim;

namespace {

const ParticleLabel qa{0, Role::a, Purpose::message};
const ParticleLabel qb{0, Role::b, Purpose::message};
const ParticleLabel qc{0, Role::c, Purpose::message};
const ParticleLabel qd{0, Role::d, Purpose::message};

const std::vector<BellKind> kBellKinds = {BellKind::PhiPlus, BellKind::PhiMinus,
                                          BellKind::PsiPlus, BellKind::PsiMinus};
const std::vector<GhzKind> kGhzKinds = {GhzKind::G1, GhzKind::G2, GhzKind::G3,
                                        GhzKind::G4};
const std::vector<GateKind> kEncodingGates = {GateKind::I, GateKind::SigmaX,
                                              GateKind::SigmaZ, GateKind::ISigmaY};

// Encoding gates shift a Bell state's code bits by a fixed XOR mask,
// independent of which half of the pair they act on.
std::uint8_t pauli_mask(GateKind g) {
  switch (g) {
    case GateKind::I: return 0b00;
    case GateKind::SigmaX: return 0b11;
    case GateKind::SigmaZ: return 0b10;
    case GateKind::ISigmaY: return 0b01;
    default: throw std::invalid_argument("not an encoding gate");
  }
}

}  // namespace

TEST_CASE("bell state amplitudes") {
  const double s = 1.0 / std::sqrt(2.0);
  const StateVector phi_plus = prepare_bell(BellKind::PhiPlus, qa, qb);
  CHECK(std::abs(phi_plus.amplitude("00") - cplx{s, 0}) < 1e-12);
  CHECK(std::abs(phi_plus.amplitude("11") - cplx{s, 0}) < 1e-12);
  CHECK(std::abs(phi_plus.amplitude("01")) < 1e-12);

  const StateVector phi_minus = prepare_bell(BellKind::PhiMinus, qa, qb);
  CHECK(std::abs(phi_minus.amplitude("11") - cplx{-s, 0}) < 1e-12);

  const StateVector psi_plus = prepare_bell(BellKind::PsiPlus, qa, qb);
  CHECK(std::abs(psi_plus.amplitude("01") - cplx{s, 0}) < 1e-12);
  CHECK(std::abs(psi_plus.amplitude("10") - cplx{s, 0}) < 1e-12);

  const StateVector psi_minus = prepare_bell(BellKind::PsiMinus, qa, qb);
  CHECK(std::abs(psi_minus.amplitude("10") - cplx{-s, 0}) < 1e-12);
}

TEST_CASE("w state branch decomposition") {
  const StateVector w = prepare_w(qa, qb, qc);
  const double s = 1.0 / std::sqrt(2.0);

  // <0_a, psi+_bc | W> = 1/sqrt(2)
  const StateVector b0 =
      StateVector::basis_state({qa}, "0").tensor(prepare_bell(BellKind::PsiPlus, qb, qc));
  CHECK(std::abs(b0.inner(w) - cplx{s, 0}) < 1e-12);

  // <1_a, phi-_bc | W> = -1/sqrt(2)
  const StateVector b1 =
      StateVector::basis_state({qa}, "1").tensor(prepare_bell(BellKind::PhiMinus, qb, qc));
  CHECK(std::abs(b1.inner(w) - cplx{-s, 0}) < 1e-12);

  CHECK(std::abs(w.norm() - 1.0) < 1e-12);
}

TEST_CASE("ghz state amplitudes") {
  const double s = 1.0 / std::sqrt(2.0);
  const StateVector g1 = prepare_ghz4(GhzKind::G1, qa, qb, qc, qd);
  CHECK(std::abs(g1.amplitude("0000") - cplx{s, 0}) < 1e-12);
  CHECK(std::abs(g1.amplitude("1111") - cplx{s, 0}) < 1e-12);

  const StateVector g2 = prepare_ghz4(GhzKind::G2, qa, qb, qc, qd);
  CHECK(std::abs(g2.amplitude("0001") - cplx{s, 0}) < 1e-12);
  CHECK(std::abs(g2.amplitude("1110") - cplx{-s, 0}) < 1e-12);

  const StateVector g3 = prepare_ghz4(GhzKind::G3, qa, qb, qc, qd);
  CHECK(std::abs(g3.amplitude("0101") - cplx{s, 0}) < 1e-12);
  CHECK(std::abs(g3.amplitude("1010") - cplx{s, 0}) < 1e-12);

  const StateVector g4 = prepare_ghz4(GhzKind::G4, qa, qb, qc, qd);
  CHECK(std::abs(g4.amplitude("0100") - cplx{s, 0}) < 1e-12);
  CHECK(std::abs(g4.amplitude("1011") - cplx{-s, 0}) < 1e-12);
}

TEST_CASE("all gates are unitary") {
  for (const GateKind k : {GateKind::I, GateKind::SigmaX, GateKind::SigmaZ,
                           GateKind::ISigmaY, GateKind::Cnot, GateKind::Uex}) {
    CAPTURE(to_string(k));
    CHECK(is_unitary(Gate::make(k)));
  }
}

TEST_CASE("i sigma_y matrix convention") {
  // i*sigma_y = |0><1| - |1><0|: maps |0> -> -|1>, |1> -> |0>.
  const Gate g = Gate::make(GateKind::ISigmaY);
  StateVector zero = StateVector::basis_state({qa}, "0");
  zero = apply_gate(std::move(zero), g, {qa});
  CHECK(std::abs(zero.amplitude("1") - cplx{-1, 0}) < 1e-12);

  StateVector one = StateVector::basis_state({qa}, "1");
  one = apply_gate(std::move(one), g, {qa});
  CHECK(std::abs(one.amplitude("0") - cplx{1, 0}) < 1e-12);

  // On the X basis it swaps |+> and |-> (up to phase).
  StateVector plus = prepare_qubit(qa, "+");
  plus = apply_gate(std::move(plus), g, {qa});
  CHECK(equal_up_to_global_phase(plus, prepare_qubit(qa, "-")));
}

TEST_CASE("cnot collapses bell pairs to product eigenstates") {
  // control a, target b: phi+ -> |+>|0>, phi- -> |->|0>,
  //                      psi+ -> |+>|1>, psi- -> |->|1>.
  const Gate cnot = Gate::make(GateKind::Cnot);
  const std::vector<std::pair<std::string, std::string>> expect = {
      {"+", "0"}, {"-", "0"}, {"+", "1"}, {"-", "1"}};
  for (std::size_t i = 0; i < kBellKinds.size(); ++i) {
    CAPTURE(to_string(kBellKinds[i]));
    StateVector s = prepare_bell(kBellKinds[i], qa, qb);
    s = apply_gate(std::move(s), cnot, {qa, qb});
    const StateVector product =
        prepare_qubit(qa, expect[i].first).tensor(prepare_qubit(qb, expect[i].second));
    CHECK(equal_up_to_global_phase(s, product, 1e-9));
  }
}

TEST_CASE("double cnot collapses ghz states to bell pair times bits") {
  // CNOT(b->c), CNOT(b->d): G1 -> phi+ (x) |00>, G2 -> phi- (x) |01>,
  //                         G3 -> psi+ (x) |10>, G4 -> psi- (x) |11>.
  const Gate cnot = Gate::make(GateKind::Cnot);
  const std::vector<std::pair<BellKind, std::string>> expect = {
      {BellKind::PhiPlus, "00"},
      {BellKind::PhiMinus, "01"},
      {BellKind::PsiPlus, "10"},
      {BellKind::PsiMinus, "11"}};
  for (std::size_t i = 0; i < kGhzKinds.size(); ++i) {
    CAPTURE(to_string(kGhzKinds[i]));
    StateVector s = prepare_ghz4(kGhzKinds[i], qa, qb, qc, qd);
    s = apply_gate(std::move(s), cnot, {qb, qc});
    s = apply_gate(std::move(s), cnot, {qb, qd});
    const StateVector product = prepare_bell(expect[i].first, qa, qb)
                                    .tensor(StateVector::basis_state({qc, qd}, expect[i].second));
    CHECK(equal_up_to_global_phase(s, product, 1e-9));
  }
}

TEST_CASE("u_ex exchanges the w state branches") {
  StateVector w = prepare_w(qa, qb, qc);
  w = apply_gate(std::move(w), Gate::make(GateKind::Uex), {qa, qb});

  // (1/2)(|001> + |100> - |010> + |111>): a=0 now pairs with psi-, a=1 with phi+.
  std::vector<cplx> amps(8, cplx{0, 0});
  amps[0b001] = 0.5;
  amps[0b100] = 0.5;
  amps[0b010] = -0.5;
  amps[0b111] = 0.5;
  const StateVector expected({qa, qb, qc}, amps);
  CHECK(equal_up_to_global_phase(w, expected, 1e-9));

  // U_ex is an involution.
  StateVector back = apply_gate(std::move(w), Gate::make(GateKind::Uex), {qa, qb});
  CHECK(equal_up_to_global_phase(back, prepare_w(qa, qb, qc), 1e-9));
}

TEST_CASE("encoding gates act on bell codes by a fixed xor mask") {
  for (const BellKind kind : kBellKinds) {
    for (const GateKind g : kEncodingGates) {
      const BellKind expected =
          BellBitCode::kind(BellBitCode::bits(kind) ^ pauli_mask(g));
      for (const int slot : {0, 1}) {
        CAPTURE(to_string(kind), to_string(g), slot);
        StateVector s = prepare_bell(kind, qa, qb);
        s = apply_gate(std::move(s), Gate::make(g), {slot == 0 ? qa : qb});
        CHECK(equal_up_to_global_phase(s, prepare_bell(expected, qa, qb), 1e-9));
      }
    }
  }
}

TEST_CASE("measurement removes the measured qubits") {
  Rng rng(42);
  const StateVector phi_plus = prepare_bell(BellKind::PhiPlus, qa, qb);
  const MeasurementOutcome out =
      measure(phi_plus, {qa}, MeasurementBasis::make(BasisKind::Z), rng);
  REQUIRE(out.collapsed.labels() == std::vector<ParticleLabel>{qb});
  CHECK(out.probability == Catch::Approx(0.5).margin(1e-12));
  // Perfect Z correlation: b collapses to the same bit.
  CHECK(equal_up_to_global_phase(out.collapsed,
                                 StateVector::basis_state({qb}, out.label)));

  // Measuring everything leaves an empty register.
  Rng rng2(43);
  const MeasurementOutcome all =
      measure(phi_plus, {qa, qb}, MeasurementBasis::make(BasisKind::Bell), rng2);
  CHECK(all.collapsed.num_qubits() == 0);
  CHECK(all.label == "phi+");
  CHECK(all.probability == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("bell basis measurement identifies each bell state") {
  Rng rng(7);
  const MeasurementBasis bell = MeasurementBasis::make(BasisKind::Bell);
  for (const BellKind kind : kBellKinds) {
    const MeasurementOutcome out = measure(prepare_bell(kind, qa, qb), {qa, qb}, bell, rng);
    CHECK(out.label == to_string(kind));
    CHECK(out.probability == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("project forces a branch and rejects impossible outcomes") {
  const StateVector phi_plus = prepare_bell(BellKind::PhiPlus, qa, qb);
  const MeasurementBasis z = MeasurementBasis::make(BasisKind::Z);

  const MeasurementOutcome forced = project(phi_plus, {qa}, z, 1);
  CHECK(forced.label == "1");
  CHECK(forced.probability == Catch::Approx(0.5).margin(1e-12));
  CHECK(equal_up_to_global_phase(forced.collapsed, StateVector::basis_state({qb}, "1")));

  // |00> has zero weight on a=1.
  const StateVector product = StateVector::basis_state({qa, qb}, "00");
  CHECK_THROWS_AS(project(product, {qa}, z, 1), std::logic_error);
}

TEST_CASE("born rule frequencies for an unbiased qubit") {
  Rng rng(2026);
  const StateVector plus = prepare_qubit(qa, "+");
  const MeasurementBasis z = MeasurementBasis::make(BasisKind::Z);
  const std::size_t trials = 100000;
  std::size_t zeros = 0;
  for (std::size_t t = 0; t < trials; ++t)
    if (measure(plus, {qa}, z, rng).label == "0") ++zeros;
  const double rate = static_cast<double>(zeros) / static_cast<double>(trials);
  // 3 sigma for p=0.5 at 1e5 trials.
  CHECK(rate == Catch::Approx(0.5).margin(0.00474));
}

TEST_CASE("statevector validation") {
  // More than five qubits is out of scope.
  std::vector<ParticleLabel> many;
  for (std::uint32_t i = 0; i < 6; ++i) many.push_back({i, Role::a, Purpose::message});
  CHECK_THROWS_AS(StateVector::basis_state(many, "000000"), std::invalid_argument);

  // Duplicate labels are rejected.
  CHECK_THROWS_AS(StateVector::basis_state({qa, qa}, "00"), std::invalid_argument);

  // Comparing states over different registers is a usage error.
  CHECK_THROWS_AS(
      equal_up_to_global_phase(prepare_qubit(qa, "0"), prepare_qubit(qb, "0")),
      std::invalid_argument);
}

TEST_CASE("reordering relabels amplitudes consistently") {
  const StateVector psi_plus = prepare_bell(BellKind::PsiPlus, qa, qb);
  const StateVector swapped = psi_plus.reordered({qb, qa});
  CHECK(swapped.labels() == std::vector<ParticleLabel>{qb, qa});
  // psi+ is symmetric under qubit exchange.
  CHECK(std::abs(swapped.amplitude("01") - psi_plus.amplitude("01")) < 1e-12);

  const StateVector ten = StateVector::basis_state({qa, qb}, "10");
  CHECK(std::abs(ten.reordered({qb, qa}).amplitude("01") - cplx{1, 0}) < 1e-12);
}

TEST_CASE("particle label formatting") {
  CHECK(ParticleLabel{3, Role::a, Purpose::message}.str() == "P3(a)");
  CHECK(ParticleLabel{1, Role::b, Purpose::check}.str() == "P1(b)*");
  CHECK(ParticleLabel{9, Role::c, Purpose::decoy}.str() == "D9");
}

TEST_CASE("rng substreams are deterministic and purpose-separated") {
  Rng r1 = Rng::substream(99, "measure");
  Rng r2 = Rng::substream(99, "measure");
  for (int i = 0; i < 16; ++i) REQUIRE(r1.u64() == r2.u64());

  Rng r3 = Rng::substream(99, "measure");
  Rng r4 = Rng::substream(99, "decoy");
  bool differs = false;
  for (int i = 0; i < 16; ++i)
    if (r3.u64() != r4.u64()) differs = true;
  CHECK(differs);

  // below() stays in range; shuffle produces a permutation.
  Rng r5(5);
  for (int i = 0; i < 100; ++i) CHECK(r5.below(7) < 7);
  std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7};
  r5.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}
