#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdsim/gates.hpp"
#include "qdsim/measurement.hpp"
#include "qdsim/states.hpp"
#include "qdsim/transcript.hpp"

namespace qdsim {

enum class AdversaryKind { None, InterceptResend, MeasureResend, Passive };

// Eve's basis rule for resend-style attacks.  AlwaysZ/AlwaysX exist so tests
// can pin her behavior; the protocols use UniformZX.
enum class EveBasisPolicy { UniformZX, AlwaysZ, AlwaysX };

inline std::string to_string(AdversaryKind k) {
  switch (k) {
    case AdversaryKind::None: return "none";
    case AdversaryKind::InterceptResend: return "intercept-resend";
    case AdversaryKind::MeasureResend: return "measure-resend";
    default: return "passive";
  }
}

inline AdversaryKind adversary_kind_from(std::string_view s) {
  if (s == "none") return AdversaryKind::None;
  if (s == "intercept-resend") return AdversaryKind::InterceptResend;
  if (s == "measure-resend") return AdversaryKind::MeasureResend;
  if (s == "passive") return AdversaryKind::Passive;
  throw std::invalid_argument("unknown adversary: " + std::string(s));
}

struct AdversaryModel {
  AdversaryKind kind = AdversaryKind::None;
  EveBasisPolicy basis_policy = EveBasisPolicy::UniformZX;

  bool attacks() const {
    return kind == AdversaryKind::InterceptResend ||
           kind == AdversaryKind::MeasureResend;
  }
};

// The joint quantum state of a run, held as independent entanglement islands
// so separate groups never inflate each other's dimension.  Gates and
// measurements route by label; islands merge on demand.
class Register {
 public:
  void add(StateVector st) {
    for (const auto& q : st.labels())
      if (has(q))
        throw std::invalid_argument("Register: label already present " + q.str());
    islands_.push_back(std::move(st));
  }

  bool has(const ParticleLabel& q) const {
    for (const auto& s : islands_)
      if (s.has_label(q)) return true;
    return false;
  }

  // Copy of the island containing q (for inspection in tests).
  const StateVector& island_of(const ParticleLabel& q) const {
    for (const auto& s : islands_)
      if (s.has_label(q)) return s;
    throw std::invalid_argument("Register: unknown label " + q.str());
  }

  void apply(const Gate& g, const std::vector<ParticleLabel>& targets) {
    StateVector& isl = merged(targets);
    isl = apply_gate(std::move(isl), g, targets);
  }

  MeasurementOutcome measure(const std::vector<ParticleLabel>& targets,
                             const MeasurementBasis& basis, Rng& rng) {
    StateVector& isl = merged(targets);
    MeasurementOutcome out = qdsim::measure(isl, targets, basis, rng);
    settle(isl, out);
    return out;
  }

  MeasurementOutcome project(const std::vector<ParticleLabel>& targets,
                             const MeasurementBasis& basis,
                             std::size_t outcome_index) {
    StateVector& isl = merged(targets);
    MeasurementOutcome out = qdsim::project(isl, targets, basis, outcome_index);
    settle(isl, out);
    return out;
  }

  std::size_t num_islands() const { return islands_.size(); }

 private:
  std::size_t index_of(const ParticleLabel& q) const {
    for (std::size_t i = 0; i < islands_.size(); ++i)
      if (islands_[i].has_label(q)) return i;
    throw std::invalid_argument("Register: unknown label " + q.str());
  }

  // Bring all targets into one island; returns it.
  StateVector& merged(const std::vector<ParticleLabel>& targets) {
    if (targets.empty())
      throw std::invalid_argument("Register: no targets");
    std::size_t home = index_of(targets[0]);
    for (std::size_t t = 1; t < targets.size(); ++t) {
      const std::size_t other = index_of(targets[t]);
      if (other == home) continue;
      islands_[home] = islands_[home].tensor(islands_[other]);
      islands_.erase(islands_.begin() +
                     static_cast<std::ptrdiff_t>(other));
      home = index_of(targets[0]);
    }
    return islands_[home];
  }

  void settle(StateVector& isl, const MeasurementOutcome& out) {
    if (out.collapsed.num_qubits() == 0) {
      const auto it =
          std::find_if(islands_.begin(), islands_.end(),
                       [&](const StateVector& s) { return &s == &isl; });
      islands_.erase(it);
    } else {
      isl = out.collapsed;
    }
  }

  std::vector<StateVector> islands_;
};

// One block transmission.  Logs a single send event; an active Eve measures
// each transiting qubit in a basis drawn from her policy and forwards a fresh
// qubit prepared in the observed eigenstate.  Her actions land only in the
// private audit log.
inline void send_quantum(Register& reg,
                         const std::vector<ParticleLabel>& sequence,
                         std::string_view from, std::string_view to,
                         const AdversaryModel& adversary, Rng& eve_rng,
                         Transcript& transcript) {
  std::vector<std::string> names;
  names.reserve(sequence.size());
  for (const auto& q : sequence) {
    if (!reg.has(q))
      throw std::invalid_argument("send_quantum: unknown label " + q.str());
    names.push_back(q.str());
  }
  transcript.record_send(from, to, names);
  if (adversary.kind == AdversaryKind::Passive) {
    transcript.record_eve({{"action", "observe"}, {"labels", names}});
    return;
  }
  if (!adversary.attacks()) return;
  for (const auto& q : sequence) {
    BasisKind bk;
    switch (adversary.basis_policy) {
      case EveBasisPolicy::AlwaysZ: bk = BasisKind::Z; break;
      case EveBasisPolicy::AlwaysX: bk = BasisKind::X; break;
      default: bk = eve_rng.coin() ? BasisKind::X : BasisKind::Z; break;
    }
    const MeasurementOutcome out =
        reg.measure({q}, MeasurementBasis::make(bk), eve_rng);
    reg.add(prepare_qubit(q, out.label));
    transcript.record_eve({{"action", "measure_resend"},
                           {"label", q.str()},
                           {"basis", to_string(bk)},
                           {"outcome", out.label}});
  }
}

// Convenience form over a single state value: runs the same channel against a
// one-island register and returns the (possibly collapsed) joint state with
// the original label order.
inline StateVector send_quantum(const std::vector<ParticleLabel>& qubits,
                                const StateVector& state,
                                const AdversaryModel& adversary, Rng& rng,
                                Transcript& transcript) {
  Register reg;
  reg.add(state);
  send_quantum(reg, qubits, "sender", "receiver", adversary, rng, transcript);
  // Stitch the islands back into one state in the original label order.
  StateVector merged;
  bool first = true;
  for (const auto& q : state.labels()) {
    if (!first && merged.has_label(q)) continue;
    const StateVector& isl = reg.island_of(q);
    merged = first ? isl : merged.tensor(isl);
    first = false;
  }
  return merged.reordered(state.labels());
}

inline void announce(std::string_view party, std::string_view topic,
                     json payload, Transcript& transcript) {
  transcript.record_announce(party, topic, std::move(payload));
}

}  // namespace qdsim
