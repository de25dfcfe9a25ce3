#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "qdsim/codes.hpp"
#include "qdsim/protocol_common.hpp"

namespace qdsim {

struct GhzRunParams {
  std::uint64_t seed = 0;
  AdversaryModel adversary{};
  bool checks_enabled = true;
  std::size_t decoys_per_send = 4;
  int forced_kind = -1;  // enumeration/test hook: force the prepared state
};

using GhzRunOutcome = RunOutcome;

struct GhzCollapse {
  BellKind bell = BellKind::PhiPlus;  // (a, b) state after the double CNOT
  std::string cd;                     // deterministic (c, d) readout
};

inline BellKind cd_bits_to_bell(std::string_view cd) {
  if (cd == "00") return BellKind::PhiPlus;
  if (cd == "01") return BellKind::PhiMinus;
  if (cd == "10") return BellKind::PsiPlus;
  if (cd == "11") return BellKind::PsiMinus;
  throw std::invalid_argument("cd_bits_to_bell: bad readout " + std::string(cd));
}

// CNOTs from b onto c and d turn each four-particle state into a Bell state
// of (a, b) and a product readout on (c, d).
inline GhzCollapse ghz_collapse(GhzKind k) {
  switch (k) {
    case GhzKind::G1: return {BellKind::PhiPlus, "00"};
    case GhzKind::G2: return {BellKind::PhiMinus, "01"};
    case GhzKind::G3: return {BellKind::PsiPlus, "10"};
    default: return {BellKind::PsiMinus, "11"};  // G4
  }
}

// Bob's readout of c and d after his double CNOT; tells him which Bell state
// (a, b) is left in.
inline GhzCollapse readout_cd(Register& reg, ParticleLabel c, ParticleLabel d,
                              Rng& measure_rng) {
  const MeasurementOutcome out =
      reg.measure({c, d}, MeasurementBasis::make(BasisKind::ZZ), measure_rng);
  return {cd_bits_to_bell(out.label), out.label};
}

// Either party recovers the other's bits: the unique Pauli on the other
// particle that, together with one's own, maps the shared initial Bell state
// to the announced result.  Roles: "alice" owns a, "bob" owns b.
inline std::uint8_t decode_ghz(std::string_view role, BellKind initial,
                               GateKind own, BellKind announced) {
  if (role != "alice" && role != "bob")
    throw std::invalid_argument("decode_ghz: unknown role");
  const ParticleLabel a{0, Role::a, Purpose::message};
  const ParticleLabel b{0, Role::b, Purpose::message};
  const ParticleLabel own_label = role == "alice" ? a : b;
  const ParticleLabel other_label = role == "alice" ? b : a;
  const StateVector target = prepare_bell(announced, a, b);
  const StateVector base =
      apply_gate(prepare_bell(initial, a, b), Gate::make(own), {own_label});
  int found = -1;
  for (std::uint8_t bits = 0; bits <= 0b11; ++bits) {
    StateVector cand = apply_gate(base, PauliBitCode::gate(bits), {other_label});
    if (equal_up_to_global_phase(cand, target)) {
      if (found >= 0) throw IntegrityError("decode_ghz: ambiguous result");
      found = bits;
    }
  }
  if (found < 0)
    throw IntegrityError("decode_ghz: announced result is inconsistent");
  return static_cast<std::uint8_t>(found);
}

inline json ghz_params_json(const GhzRunParams& p) {
  return {{"adversary", to_string(p.adversary.kind)},
          {"checks_enabled", p.checks_enabled},
          {"decoys_per_send", p.decoys_per_send},
          {"forced_kind", p.forced_kind}};
}

inline GhzRunOutcome run_ghz(const std::string& alice_bits,
                             const std::string& bob_bits,
                             const GhzRunParams& p) {
  require_bits(alice_bits, 2, "alice_bits");
  require_bits(bob_bits, 2, "bob_bits");
  if (p.forced_kind > 3)
    throw std::invalid_argument("run_ghz: forced_kind out of range");
  const std::uint8_t ab = bits2_parse(alice_bits);
  const std::uint8_t bb = bits2_parse(bob_bits);

  Rng state_rng = Rng::substream(p.seed, "state");
  Rng measure_rng = Rng::substream(p.seed, "measure");
  Rng eve_rng = Rng::substream(p.seed, "eve");
  Rng decoy_rng = Rng::substream(p.seed, "decoy");

  Transcript tr("ghz", p.seed, ghz_params_json(p));
  const ParticleLabel a{0, Role::a, Purpose::message};
  const ParticleLabel b{0, Role::b, Purpose::message};
  const ParticleLabel c{0, Role::c, Purpose::message};
  const ParticleLabel d{0, Role::d, Purpose::message};

  const GhzKind kind = p.forced_kind >= 0
                           ? static_cast<GhzKind>(p.forced_kind)
                           : static_cast<GhzKind>(state_rng.below(4));
  Register reg;
  reg.add(prepare_ghz4(kind, a, b, c, d));

  auto abort_with = [&]() {
    tr.record_abort("decoy");
    tr.finish({{"status", "aborted"}, {"abort_check", "decoy"}});
    GhzRunOutcome out{RunStatus::Aborted, "decoy", "", "", {}, std::move(tr)};
    return out;
  };
  const std::size_t decoys = p.checks_enabled ? p.decoys_per_send : 0;
  const auto decoys32 = static_cast<std::uint32_t>(p.decoys_per_send);

  // Alice keeps a and transmits b, c, d one block at a time.
  if (!decoy_check(reg, {b}, decoys, 0, "alice", "bob", p.adversary, tr,
                   decoy_rng, measure_rng, eve_rng))
    return abort_with();
  if (!decoy_check(reg, {c}, decoys, decoys32, "alice", "bob", p.adversary, tr,
                   decoy_rng, measure_rng, eve_rng))
    return abort_with();
  if (!decoy_check(reg, {d}, decoys, 2 * decoys32, "alice", "bob", p.adversary,
                   tr, decoy_rng, measure_rng, eve_rng))
    return abort_with();

  // Bob condenses the state onto (a, b), learns which Bell state it is,
  // encodes on b, and returns b.
  const Gate cnot = Gate::make(GateKind::Cnot);
  reg.apply(cnot, {b, c});
  reg.apply(cnot, {b, d});
  const GhzCollapse col = readout_cd(reg, c, d, measure_rng);
  reg.apply(PauliBitCode::gate(bb), {b});
  if (!decoy_check(reg, {b}, decoys, 3 * decoys32, "bob", "alice", p.adversary,
                   tr, decoy_rng, measure_rng, eve_rng))
    return abort_with();

  // Alice encodes on a and announces her Bell readout of (a, b).
  reg.apply(PauliBitCode::gate(ab), {a});
  const MeasurementOutcome out =
      reg.measure({a, b}, MeasurementBasis::make(BasisKind::Bell), measure_rng);
  announce("alice", "bell_result", out.label, tr);

  const BellKind initial = ghz_collapse(kind).bell;
  const BellKind announced = bell_kind_from(out.label);
  const std::string alice_decoded = bits2_str(
      decode_ghz("alice", initial, PauliBitCode::kind(ab), announced));
  const std::string bob_decoded =
      bits2_str(decode_ghz("bob", col.bell, PauliBitCode::kind(bb), announced));

  tr.finish({{"status", "completed"},
             {"alice_decoded", alice_decoded},
             {"bob_decoded", bob_decoded}});
  return {RunStatus::Completed, "", alice_decoded, bob_decoded,
          {4, 4, 2},           std::move(tr)};
}

}  // namespace qdsim
