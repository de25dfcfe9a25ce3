#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdsim/channel.hpp"

namespace qdsim {

enum class Protocol { Bell, W, Ghz };

inline std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Bell: return "bell";
    case Protocol::W: return "w";
    default: return "ghz";
  }
}

inline Protocol protocol_from(std::string_view s) {
  if (s == "bell") return Protocol::Bell;
  if (s == "w") return Protocol::W;
  if (s == "ghz" || s == "ghz4") return Protocol::Ghz;
  throw std::invalid_argument("unknown protocol: " + std::string(s));
}

// A classical announcement that cannot be reconciled with the announcer's
// claimed basis/state knowledge.
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RunStatus { Completed, Aborted };

// Counting inputs for information-theoretical efficiency: expected secret
// bits, qubits used, and classical bits exchanged (check traffic excluded).
struct EfficiencyInputs {
  std::size_t b_s = 0;
  std::size_t q_t = 0;
  std::size_t b_t = 0;
};

struct RunOutcome {
  RunStatus status = RunStatus::Completed;
  std::string abort_check;    // check id when aborted, else empty
  std::string alice_decoded;  // what Alice read out (Bob's message)
  std::string bob_decoded;    // what Bob read out (Alice's message)
  EfficiencyInputs efficiency_inputs;
  Transcript transcript;
};

inline void require_bits(std::string_view bits, std::size_t len,
                         std::string_view who) {
  if (bits.size() != len)
    throw std::invalid_argument(std::string(who) + ": expected " +
                                std::to_string(len) + " bits, got " +
                                std::to_string(bits.size()));
  for (char c : bits)
    if (c != '0' && c != '1')
      throw std::invalid_argument(std::string(who) + ": bits must be 0/1");
}

// --- decoy photon machinery (third security check style) ---

struct Decoy {
  ParticleLabel label;
  std::string state;  // one of "0", "1", "+", "-"
};

inline BasisKind decoy_basis(const std::string& state) {
  return (state == "0" || state == "1") ? BasisKind::Z : BasisKind::X;
}

inline std::vector<Decoy> make_decoys(std::size_t count,
                                      std::uint32_t first_index, Rng& rng) {
  static const char* kStates[4] = {"0", "1", "+", "-"};
  std::vector<Decoy> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ParticleLabel lab{first_index + static_cast<std::uint32_t>(i), Role::a,
                      Purpose::decoy};
    out.push_back({lab, kStates[rng.below(4)]});
  }
  return out;
}

// Block transmission protected by decoy photons: the sender interleaves
// `count` fresh decoys into `payload` at random positions, the block is sent
// (adversary-interposable), positions and bases are then disclosed, the
// receiver measures the decoys and announces results, and the sender verifies
// them against preparation.  Returns pass/fail and records the check; the
// caller decides how to abort.  When `receipt_sequence` is non-empty the
// receiver announces receipt of that sequence before any disclosure.
inline bool decoy_check(Register& reg,
                        const std::vector<ParticleLabel>& payload,
                        std::size_t count, std::uint32_t first_decoy_index,
                        std::string_view from, std::string_view to,
                        const AdversaryModel& adversary, Transcript& tr,
                        Rng& decoy_rng, Rng& measure_rng, Rng& eve_rng,
                        std::string_view receipt_sequence = {}) {
  const std::vector<Decoy> decoys = make_decoys(count, first_decoy_index, decoy_rng);
  for (const auto& d : decoys) reg.add(prepare_qubit(d.label, d.state));

  std::vector<ParticleLabel> block = payload;
  for (const auto& d : decoys) {
    const auto pos = static_cast<std::size_t>(decoy_rng.below(block.size() + 1));
    block.insert(block.begin() + static_cast<std::ptrdiff_t>(pos), d.label);
  }
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < block.size(); ++i)
    if (block[i].purpose == Purpose::decoy) positions.push_back(i);

  send_quantum(reg, block, from, to, adversary, eve_rng, tr);
  if (!receipt_sequence.empty())
    announce(to, "received", {{"sequence", receipt_sequence}}, tr);
  if (count == 0) return true;

  std::vector<std::string> bases;
  for (const auto& d : decoys) bases.push_back(to_string(decoy_basis(d.state)));
  announce(from, "decoy_positions", positions, tr);
  announce(from, "decoy_bases", bases, tr);

  std::vector<std::string> results;
  for (const auto& d : decoys) {
    const auto out = reg.measure({d.label},
                                 MeasurementBasis::make(decoy_basis(d.state)),
                                 measure_rng);
    results.push_back(out.label);
  }
  announce(to, "decoy_results", results, tr);

  bool pass = true;
  for (std::size_t i = 0; i < decoys.size(); ++i)
    if (results[i] != decoys[i].state) pass = false;
  tr.record_check("decoy", pass);
  return pass;
}

}  // namespace qdsim
