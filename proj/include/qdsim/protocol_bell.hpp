#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qdsim/codes.hpp"
#include "qdsim/protocol_common.hpp"

namespace qdsim {

struct BellRunParams {
  std::size_t n = 4;
  std::size_t delta1 = 4;
  std::size_t delta2 = 4;
  std::size_t delta3 = 4;
  std::uint64_t seed = 0;
  AdversaryModel adversary{};
  // Enumeration/test hooks (leave empty for normal runs):
  std::vector<BellKind> forced_kinds;      // kinds of the n message pairs
  std::vector<std::size_t> forced_c_perm;  // fixed sequence-C permutation
  bool announce_prepared_states = false;   // deliberately leaky control variant
};

using BellRunOutcome = RunOutcome;

struct BellPair {
  std::uint32_t index = 0;
  BellKind kind = BellKind::PhiPlus;
  ParticleLabel a, b;
};

struct SequenceCEntry {
  ParticleLabel label;
  char origin = 'a';               // which particle of the pair this replaces
  std::uint32_t pair = 0;          // pair label index
  std::string prepared_state;      // "+"/"-" for origin a, "0"/"1" for origin b
};

struct SequenceC {
  std::vector<SequenceCEntry> entries;        // transmission order
  std::vector<std::size_t> position_record;   // private: position -> base slot
};

// Z/X eigenstates each particle of a pair lands in after CNOT(a -> b).
inline std::pair<std::string, std::string> post_cnot_eigenstates(BellKind k) {
  switch (k) {
    case BellKind::PhiPlus: return {"+", "0"};
    case BellKind::PhiMinus: return {"-", "0"};
    case BellKind::PsiPlus: return {"+", "1"};
    default: return {"-", "1"};  // psi-
  }
}

// Whether the two single-particle results of a pair must be equal in the
// given basis (false = must be opposite).
inline bool bell_correlation_equal(BellKind k, BasisKind basis) {
  if (basis == BasisKind::Z)
    return k == BellKind::PhiPlus || k == BellKind::PhiMinus;
  if (basis == BasisKind::X)
    return k == BellKind::PhiPlus || k == BellKind::PsiPlus;
  throw std::invalid_argument("bell_correlation_equal: need a Z or X basis");
}

// First security check: Bob measures each checking particle a in a random
// Z/X basis, Alice measures the partner b in the same basis, and results are
// compared against the deterministic correlation of the prepared state.
inline bool security_check_1(Register& reg, const std::vector<BellPair>& pairs,
                             Transcript& tr, Rng& basis_rng, Rng& measure_rng) {
  if (pairs.empty()) {
    tr.record_check("check1", true);
    return true;
  }
  json positions = json::array();
  for (const auto& pr : pairs) positions.push_back(pr.index);
  announce("alice", "check1_positions", positions, tr);

  std::vector<BasisKind> bases;
  json bob_items = json::array();
  for (const auto& pr : pairs) {
    const BasisKind bk = basis_rng.coin() ? BasisKind::X : BasisKind::Z;
    bases.push_back(bk);
    const auto out = reg.measure({pr.a}, MeasurementBasis::make(bk), measure_rng);
    bob_items.push_back({{"pair", pr.index},
                         {"basis", to_string(bk)},
                         {"result", out.label}});
  }
  announce("bob", "check1_results", bob_items, tr);

  json alice_items = json::array();
  bool pass = true;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto out = reg.measure({pairs[i].b}, MeasurementBasis::make(bases[i]),
                                 measure_rng);
    alice_items.push_back({{"pair", pairs[i].index},
                           {"basis", to_string(bases[i])},
                           {"result", out.label}});
    const bool equal = bob_items[i]["result"] == out.label;
    if (equal != bell_correlation_equal(pairs[i].kind, bases[i])) pass = false;
  }
  announce("alice", "check1_results", alice_items, tr);
  tr.record_check("check1", pass);
  return pass;
}

// Second security check: Bob Bell-measures each checking pair and announces;
// Alice compares against the prepared states.
inline bool security_check_2(Register& reg, const std::vector<BellPair>& pairs,
                             Transcript& tr, Rng& measure_rng) {
  if (pairs.empty()) {
    tr.record_check("check2", true);
    return true;
  }
  json positions = json::array();
  for (const auto& pr : pairs) positions.push_back(pr.index);
  announce("alice", "check2_positions", positions, tr);

  json bob_items = json::array();
  bool pass = true;
  for (const auto& pr : pairs) {
    const auto out = reg.measure({pr.a, pr.b},
                                 MeasurementBasis::make(BasisKind::Bell),
                                 measure_rng);
    bob_items.push_back({{"pair", pr.index}, {"result", out.label}});
    if (out.label != to_string(pr.kind)) pass = false;
  }
  announce("bob", "check2_results", bob_items, tr);
  tr.record_check("check2", pass);
  return pass;
}

// Bob's auxiliary operation: CNOT each message pair (a control, b target),
// learn both collapsed eigenstates by X/Z measurement, reproduce fresh
// measurement-free particles in those states, and mix them into sequence C
// under a privately recorded permutation.
inline SequenceC bob_cnot_measure_reproduce(
    Register& reg, const std::vector<BellPair>& message_pairs, Rng& measure_rng,
    Rng& shuffle_rng, const std::vector<std::size_t>& forced_perm = {}) {
  const Gate cnot = Gate::make(GateKind::Cnot);
  std::vector<SequenceCEntry> base;
  base.reserve(2 * message_pairs.size());
  for (const auto& pr : message_pairs) {
    reg.apply(cnot, {pr.a, pr.b});
    const auto oa =
        reg.measure({pr.a}, MeasurementBasis::make(BasisKind::X), measure_rng);
    const auto ob =
        reg.measure({pr.b}, MeasurementBasis::make(BasisKind::Z), measure_rng);
    reg.add(prepare_qubit(pr.a, oa.label));
    reg.add(prepare_qubit(pr.b, ob.label));
    base.push_back({pr.a, 'a', pr.index, oa.label});
    base.push_back({pr.b, 'b', pr.index, ob.label});
  }
  std::vector<std::size_t> perm(base.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (!forced_perm.empty()) {
    if (forced_perm.size() != base.size())
      throw std::invalid_argument("forced_c_perm: wrong length");
    auto check = forced_perm;
    std::sort(check.begin(), check.end());
    if (check != perm)
      throw std::invalid_argument("forced_c_perm: not a permutation");
    perm = forced_perm;
  } else {
    shuffle_rng.shuffle(perm);
  }
  SequenceC c;
  c.position_record = perm;
  c.entries.reserve(base.size());
  for (const std::size_t slot : perm) c.entries.push_back(base[slot]);
  return c;
}

// One-bit dialogue encoding: bit 0 keeps the eigenstate, bit 1 flips it
// within its basis (i*sigma_y does exactly that, up to global phase).
inline StateVector encode_bit(StateVector qubit, bool bit) {
  if (qubit.num_qubits() != 1)
    throw std::invalid_argument("encode_bit: expected a single qubit");
  if (!bit) return qubit;
  const ParticleLabel q = qubit.labels()[0];
  return apply_gate(std::move(qubit), Gate::make(GateKind::ISigmaY), {q});
}

// Symmetric decoder: per particle, the other party's bit is whether the
// announced eigenstate differs from the known initial one, minus one's own
// flip.  Throws IntegrityError when an announced result is not in the
// expected basis.
inline std::string decode(const std::string& own_bits,
                          const std::vector<std::string>& known_initial_states,
                          const std::vector<std::string>& announced_results) {
  if (own_bits.size() != known_initial_states.size() ||
      own_bits.size() != announced_results.size())
    throw std::invalid_argument("decode: length mismatch");
  auto z_basis = [](const std::string& s) {
    if (s == "0" || s == "1") return true;
    if (s == "+" || s == "-") return false;
    throw IntegrityError("decode: unknown symbol '" + s + "'");
  };
  std::string out(own_bits.size(), '0');
  for (std::size_t i = 0; i < own_bits.size(); ++i) {
    const std::string& s = known_initial_states[i];
    const std::string& r = announced_results[i];
    if (z_basis(s) != z_basis(r))
      throw IntegrityError("decode: announced result '" + r +
                           "' is not in the basis of '" + s + "'");
    const bool flip = (s != r);
    out[i] = (flip ^ (own_bits[i] == '1')) ? '1' : '0';
  }
  return out;
}

inline json bell_params_json(const BellRunParams& p) {
  json forced_kinds = json::array();
  for (const auto& k : p.forced_kinds) forced_kinds.push_back(to_string(k));
  return {{"n", p.n},
          {"delta1", p.delta1},
          {"delta2", p.delta2},
          {"delta3", p.delta3},
          {"adversary", to_string(p.adversary.kind)},
          {"forced_kinds", forced_kinds},
          {"forced_c_perm", p.forced_c_perm},
          {"leaky_variant", p.announce_prepared_states}};
}

// The full six-step run.  Message bit i of either party rides on sequence-C
// position i.
inline BellRunOutcome run_bell(const std::string& alice_bits,
                               const std::string& bob_bits,
                               const BellRunParams& p) {
  if (p.n < 1) throw std::invalid_argument("run_bell: need n >= 1");
  require_bits(alice_bits, 2 * p.n, "alice_bits");
  require_bits(bob_bits, 2 * p.n, "bob_bits");
  if (!p.forced_kinds.empty() && p.forced_kinds.size() != p.n)
    throw std::invalid_argument("run_bell: forced_kinds must cover all n pairs");

  Rng state_rng = Rng::substream(p.seed, "state");
  Rng basis_rng = Rng::substream(p.seed, "basis");
  Rng positions_rng = Rng::substream(p.seed, "positions");
  Rng shuffle_rng = Rng::substream(p.seed, "shuffle");
  Rng measure_rng = Rng::substream(p.seed, "measure");
  Rng eve_rng = Rng::substream(p.seed, "eve");
  Rng decoy_rng = Rng::substream(p.seed, "decoy");

  Transcript tr("bell", p.seed, bell_params_json(p));
  const std::size_t total = p.n + p.delta1 + p.delta2;

  // Step 1: preparation.  Alice picks check positions up front.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  positions_rng.shuffle(order);
  std::vector<bool> is_check1(total, false), is_check2(total, false);
  for (std::size_t i = 0; i < p.delta1; ++i) is_check1[order[i]] = true;
  for (std::size_t i = 0; i < p.delta2; ++i) is_check2[order[p.delta1 + i]] = true;

  std::vector<BellPair> pairs(total);
  std::vector<BellPair*> check1_pairs, check2_pairs, message_pairs;
  std::size_t msg_seen = 0;
  Register reg;
  for (std::size_t i = 0; i < total; ++i) {
    const bool chk = is_check1[i] || is_check2[i];
    const Purpose purpose = chk ? Purpose::check : Purpose::message;
    BellPair& pr = pairs[i];
    pr.index = static_cast<std::uint32_t>(i);
    pr.a = {pr.index, Role::a, purpose};
    pr.b = {pr.index, Role::b, purpose};
    if (!chk && !p.forced_kinds.empty())
      pr.kind = p.forced_kinds[msg_seen];
    else
      pr.kind = static_cast<BellKind>(state_rng.below(4));
    if (is_check1[i])
      check1_pairs.push_back(&pr);
    else if (is_check2[i])
      check2_pairs.push_back(&pr);
    else {
      message_pairs.push_back(&pr);
      ++msg_seen;
    }
    reg.add(prepare_bell(pr.kind, pr.a, pr.b));
  }
  if (p.announce_prepared_states) {
    json kinds = json::array();
    for (const auto& pr : pairs) kinds.push_back(to_string(pr.kind));
    announce("alice", "prepared_states", kinds, tr);
  }

  auto abort_with = [&](const char* check) {
    tr.record_abort(check);
    tr.finish({{"status", "aborted"}, {"abort_check", check}});
    BellRunOutcome out{RunStatus::Aborted, check, "", "", {}, std::move(tr)};
    return out;
  };
  auto deref = [](const std::vector<BellPair*>& v) {
    std::vector<BellPair> out;
    out.reserve(v.size());
    for (const auto* pr : v) out.push_back(*pr);
    return out;
  };

  // Step 2: first transmission (sequence A) and first security check.
  std::vector<ParticleLabel> seq_a;
  for (const auto& pr : pairs) seq_a.push_back(pr.a);
  send_quantum(reg, seq_a, "alice", "bob", p.adversary, eve_rng, tr);
  announce("bob", "received", {{"sequence", "A"}}, tr);
  if (!security_check_1(reg, deref(check1_pairs), tr, basis_rng, measure_rng))
    return abort_with("check1");

  // Step 3: second transmission (sequence B, check-1 positions discarded) and
  // second security check.
  std::vector<ParticleLabel> seq_b;
  for (const auto& pr : pairs)
    if (!is_check1[pr.index]) seq_b.push_back(pr.b);
  send_quantum(reg, seq_b, "alice", "bob", p.adversary, eve_rng, tr);
  announce("bob", "received", {{"sequence", "B"}}, tr);
  if (!security_check_2(reg, deref(check2_pairs), tr, measure_rng))
    return abort_with("check2");

  // Step 4: Bob's CNOT + measure + reproduce + mix, then his encoding.
  SequenceC c = bob_cnot_measure_reproduce(reg, deref(message_pairs),
                                           measure_rng, shuffle_rng,
                                           p.forced_c_perm);
  const Gate flip = Gate::make(GateKind::ISigmaY);
  for (std::size_t i = 0; i < c.entries.size(); ++i)
    if (bob_bits[i] == '1') reg.apply(flip, {c.entries[i].label});

  // Step 5: third transmission (sequence C') under decoy protection.
  std::vector<ParticleLabel> seq_c;
  for (const auto& e : c.entries) seq_c.push_back(e.label);
  if (!decoy_check(reg, seq_c, p.delta3, 0, "bob", "alice", p.adversary, tr,
                   decoy_rng, measure_rng, eve_rng, "C'"))
    return abort_with("decoy");

  // Step 6: Alice's encoding, Bob's position disclosure, Alice's
  // measurements and announcement, then both decodes.
  for (std::size_t i = 0; i < c.entries.size(); ++i)
    if (alice_bits[i] == '1') reg.apply(flip, {c.entries[i].label});

  json record = json::array();
  for (std::size_t i = 0; i < c.entries.size(); ++i)
    record.push_back({{"pos", i},
                      {"pair", c.entries[i].pair},
                      {"origin", std::string(1, c.entries[i].origin)}});
  announce("bob", "c_position_record", record, tr);

  std::vector<std::string> results;
  json result_items = json::array();
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    const BasisKind bk =
        c.entries[i].origin == 'a' ? BasisKind::X : BasisKind::Z;
    const auto out =
        reg.measure({c.entries[i].label}, MeasurementBasis::make(bk),
                    measure_rng);
    results.push_back(out.label);
    result_items.push_back({{"pos", i}, {"result", out.label}});
  }
  announce("alice", "final_results", result_items, tr);

  std::vector<std::string> bob_known, alice_known;
  for (const auto& e : c.entries) {
    bob_known.push_back(e.prepared_state);
    const auto [ea, eb] = post_cnot_eigenstates(pairs[e.pair].kind);
    alice_known.push_back(e.origin == 'a' ? ea : eb);
  }
  const std::string bob_decoded = decode(bob_bits, bob_known, results);
  const std::string alice_decoded = decode(alice_bits, alice_known, results);

  tr.finish({{"status", "completed"},
             {"alice_decoded", alice_decoded},
             {"bob_decoded", bob_decoded}});
  return {RunStatus::Completed,
          "",
          alice_decoded,
          bob_decoded,
          {4 * p.n, 2 * p.n, 2 * p.n},
          std::move(tr)};
}

}  // namespace qdsim
