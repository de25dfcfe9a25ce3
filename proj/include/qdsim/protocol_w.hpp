#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "qdsim/codes.hpp"
#include "qdsim/protocol_common.hpp"

namespace qdsim {

struct WRunParams {
  std::uint64_t seed = 0;
  AdversaryModel adversary{};
  bool checks_enabled = true;
  std::size_t decoys_per_send = 4;
  int forced_a_branch = -1;  // enumeration/test hook: force the a outcome
};

using WRunOutcome = RunOutcome;

struct WEncodeRecord {
  bool uex_applied = false;
  std::string a_result;                      // "0" or "1"
  BellKind collapsed = BellKind::PsiMinus;   // (b, c) state after the a readout
  bool u11_applied = false;
  BellKind encoded = BellKind::PsiMinus;     // (b, c) state carrying Bob's bits
};

// The states reachable by (exchange?, a readout) form the four-element code:
// with the exchange 0 -> psi-, 1 -> phi+; without it 0 -> psi+, 1 -> phi-.
inline BellKind w_branch_state(bool uex_applied, bool a_is_one) {
  if (uex_applied)
    return a_is_one ? BellKind::PhiPlus : BellKind::PsiMinus;
  return a_is_one ? BellKind::PhiMinus : BellKind::PsiPlus;
}

// Flipping particle b toggles phi+ <-> psi- and phi- <-> psi+, i.e. the low
// code bit.
inline BellKind w_u11_partner(BellKind k) {
  return BellBitCode::kind(BellBitCode::bits(k) ^ 0b01);
}

// Bob's two-bit encoding: choose the exchange by his high bit, read out a,
// and correct with a flip of b when the collapsed state's code differs from
// his bits.  The resulting (b, c) state always encodes bob_bits exactly.
inline WEncodeRecord bob_encode_w(std::uint8_t bob_bits, Register& reg,
                                  ParticleLabel a, ParticleLabel b,
                                  Rng& measure_rng, int forced_a_branch = -1) {
  if (bob_bits > 0b11)
    throw std::invalid_argument("bob_encode_w: bits out of range");
  WEncodeRecord rec;
  rec.uex_applied = (bob_bits >> 1) == 0;
  if (rec.uex_applied) reg.apply(Gate::make(GateKind::Uex), {a, b});

  const auto basis = MeasurementBasis::make(BasisKind::Z);
  const MeasurementOutcome out =
      forced_a_branch < 0
          ? reg.measure({a}, basis, measure_rng)
          : reg.project({a}, basis, static_cast<std::size_t>(forced_a_branch));
  rec.a_result = out.label;
  rec.collapsed = w_branch_state(rec.uex_applied, rec.a_result == "1");
  rec.u11_applied = BellBitCode::bits(rec.collapsed) != bob_bits;
  if (rec.u11_applied) reg.apply(Gate::make(GateKind::ISigmaY), {b});
  rec.encoded = rec.u11_applied ? w_u11_partner(rec.collapsed) : rec.collapsed;
  return rec;
}

// Alice recovers Bob's bits: the unique pre-image state that her own Pauli
// maps to the announced Bell result.
inline std::uint8_t decode_w_alice(GateKind own, BellKind announced) {
  const ParticleLabel b{0, Role::b, Purpose::message};
  const ParticleLabel c{0, Role::c, Purpose::message};
  const Gate u = Gate::make(own);
  int found = -1;
  for (std::uint8_t bits = 0; bits <= 0b11; ++bits) {
    StateVector cand =
        apply_gate(prepare_bell(BellBitCode::kind(bits), b, c), u, {b});
    if (equal_up_to_global_phase(cand, prepare_bell(announced, b, c))) {
      if (found >= 0) throw IntegrityError("decode_w_alice: ambiguous result");
      found = bits;
    }
  }
  if (found < 0)
    throw IntegrityError("decode_w_alice: announced result is inconsistent");
  return static_cast<std::uint8_t>(found);
}

// Bob recovers Alice's bits: the unique Pauli taking his encoded state to the
// announced Bell result.
inline std::uint8_t decode_w_bob(BellKind encoded, BellKind announced) {
  const ParticleLabel b{0, Role::b, Purpose::message};
  const ParticleLabel c{0, Role::c, Purpose::message};
  const StateVector target = prepare_bell(announced, b, c);
  int found = -1;
  for (std::uint8_t bits = 0; bits <= 0b11; ++bits) {
    StateVector cand = apply_gate(prepare_bell(encoded, b, c),
                                  PauliBitCode::gate(bits), {b});
    if (equal_up_to_global_phase(cand, target)) {
      if (found >= 0) throw IntegrityError("decode_w_bob: ambiguous result");
      found = bits;
    }
  }
  if (found < 0)
    throw IntegrityError("decode_w_bob: announced result is inconsistent");
  return static_cast<std::uint8_t>(found);
}

inline json w_params_json(const WRunParams& p) {
  return {{"adversary", to_string(p.adversary.kind)},
          {"checks_enabled", p.checks_enabled},
          {"decoys_per_send", p.decoys_per_send},
          {"forced_a_branch", p.forced_a_branch}};
}

inline WRunOutcome run_w(const std::string& alice_bits,
                         const std::string& bob_bits, const WRunParams& p) {
  require_bits(alice_bits, 2, "alice_bits");
  require_bits(bob_bits, 2, "bob_bits");
  const std::uint8_t ab = bits2_parse(alice_bits);
  const std::uint8_t bb = bits2_parse(bob_bits);

  Rng measure_rng = Rng::substream(p.seed, "measure");
  Rng eve_rng = Rng::substream(p.seed, "eve");
  Rng decoy_rng = Rng::substream(p.seed, "decoy");

  Transcript tr("w", p.seed, w_params_json(p));
  const ParticleLabel a{0, Role::a, Purpose::message};
  const ParticleLabel b{0, Role::b, Purpose::message};
  const ParticleLabel c{0, Role::c, Purpose::message};

  Register reg;
  reg.add(prepare_w(a, b, c));

  auto abort_with = [&]() {
    tr.record_abort("decoy");
    tr.finish({{"status", "aborted"}, {"abort_check", "decoy"}});
    WRunOutcome out{RunStatus::Aborted, "decoy", "", "", {}, std::move(tr)};
    return out;
  };
  const std::size_t decoys = p.checks_enabled ? p.decoys_per_send : 0;
  const auto decoys32 = static_cast<std::uint32_t>(p.decoys_per_send);

  // Alice keeps c and transmits a and b under decoy protection.
  if (!decoy_check(reg, {a, b}, decoys, 0, "alice", "bob", p.adversary, tr,
                   decoy_rng, measure_rng, eve_rng))
    return abort_with();

  // Bob encodes, then returns b.
  const WEncodeRecord rec =
      bob_encode_w(bb, reg, a, b, measure_rng, p.forced_a_branch);
  if (!decoy_check(reg, {b}, decoys, decoys32, "bob", "alice", p.adversary, tr,
                   decoy_rng, measure_rng, eve_rng))
    return abort_with();

  // Alice encodes on b and announces her Bell readout of (b, c).
  reg.apply(PauliBitCode::gate(ab), {b});
  const MeasurementOutcome out =
      reg.measure({b, c}, MeasurementBasis::make(BasisKind::Bell), measure_rng);
  announce("alice", "bell_result", out.label, tr);

  const BellKind announced = bell_kind_from(out.label);
  const std::string alice_decoded =
      bits2_str(decode_w_alice(PauliBitCode::kind(ab), announced));
  const std::string bob_decoded = bits2_str(decode_w_bob(rec.encoded, announced));

  tr.finish({{"status", "completed"},
             {"alice_decoded", alice_decoded},
             {"bob_decoded", bob_decoded}});
  return {RunStatus::Completed, "", alice_decoded, bob_decoded,
          {4, 3, 2},           std::move(tr)};
}

}  // namespace qdsim
