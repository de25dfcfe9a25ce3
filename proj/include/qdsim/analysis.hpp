#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdsim/protocol_bell.hpp"
#include "qdsim/protocol_ghz.hpp"
#include "qdsim/protocol_w.hpp"

namespace qdsim {

// ---------------------------------------------------------------------------
// Report types
// ---------------------------------------------------------------------------

struct LeakageReport {
  Protocol protocol = Protocol::Bell;
  double per_announcement_entropy_bits = 0.0;
  double mutual_information_bits = 0.0;
  std::size_t consistent_assignments = 0;

  json to_json() const {
    return {{"protocol", to_string(protocol)},
            {"per_announcement_entropy_bits", per_announcement_entropy_bits},
            {"mutual_information_bits", mutual_information_bits},
            {"consistent_assignments", consistent_assignments}};
  }
};

struct EfficiencyReport {
  std::size_t b_s = 0;  // expected secret bits
  std::size_t q_t = 0;  // qubits used
  std::size_t b_t = 0;  // classical bits exchanged
  double eta = 0.0;     // b_s / (q_t + b_t)

  json to_json() const {
    return {{"b_s", b_s}, {"q_t", q_t}, {"b_t", b_t}, {"eta", eta}};
  }
};

struct RateEstimate {
  std::size_t hits = 0;
  std::size_t trials = 0;
  double rate = 0.0;
  double std_err = 0.0;
  double ci3_lo = 0.0;  // rate - 3 sigma, clamped to [0, 1]
  double ci3_hi = 0.0;  // rate + 3 sigma, clamped to [0, 1]

  static RateEstimate from_counts(std::size_t hits, std::size_t trials) {
    RateEstimate r;
    r.hits = hits;
    r.trials = trials;
    r.rate = static_cast<double>(hits) / static_cast<double>(trials);
    r.std_err = std::sqrt(r.rate * (1.0 - r.rate) /
                          static_cast<double>(trials));
    r.ci3_lo = std::max(0.0, r.rate - 3.0 * r.std_err);
    r.ci3_hi = std::min(1.0, r.rate + 3.0 * r.std_err);
    return r;
  }

  json to_json() const {
    return {{"hits", hits},       {"trials", trials}, {"rate", rate},
            {"stderr", std_err},  {"ci3_lo", ci3_lo}, {"ci3_hi", ci3_hi}};
  }
};

struct DetectionStats {
  Protocol protocol = Protocol::Bell;
  AdversaryKind adversary = AdversaryKind::None;
  std::size_t trials = 0;
  RateEstimate per_decoy;        // one tampered decoy caught
  RateEstimate per_check_pair;   // one correlation-check pair caught
  RateEstimate abort_delta3_8;   // an 8-decoy block send aborted
  bool has_check_pair = false;

  json to_json() const {
    json j = {{"protocol", to_string(protocol)},
              {"adversary", to_string(adversary)},
              {"trials", trials},
              {"per_decoy", per_decoy.to_json()},
              {"abort_delta3_8", abort_delta3_8.to_json()}};
    if (has_check_pair) j["per_check_pair"] = per_check_pair.to_json();
    return j;
  }
};

// ---------------------------------------------------------------------------
// World replays for exact enumeration
//
// With every hidden choice pinned (prepared kinds, orderings, collapse
// branches), no security-check randomness, and a passive channel, every
// remaining measurement has a probability-one outcome, so the public view of
// a replay does not depend on the seed.  That lets an auditor who only holds
// a public view reproduce each candidate world exactly.
// ---------------------------------------------------------------------------

inline json bell_world_view(const std::vector<BellKind>& kinds,
                            const std::vector<std::size_t>& perm,
                            const std::string& alice_bits,
                            const std::string& bob_bits,
                            bool announce_prepared_states = false) {
  BellRunParams p;
  p.n = kinds.size();
  p.delta1 = p.delta2 = p.delta3 = 0;
  p.seed = 0;
  p.forced_kinds = kinds;
  p.forced_c_perm = perm;
  p.announce_prepared_states = announce_prepared_states;
  return run_bell(alice_bits, bob_bits, p).transcript.public_view();
}

inline json w_world_view(int branch, std::uint8_t alice, std::uint8_t bob) {
  WRunParams p;
  p.seed = 0;
  p.checks_enabled = false;
  p.forced_a_branch = branch;
  return run_w(bits2_str(alice), bits2_str(bob), p).transcript.public_view();
}

inline json ghz_world_view(int kind, std::uint8_t alice, std::uint8_t bob) {
  GhzRunParams p;
  p.seed = 0;
  p.checks_enabled = false;
  p.forced_kind = kind;
  return run_ghz(bits2_str(alice), bits2_str(bob), p).transcript.public_view();
}

namespace detail {

inline double entropy_bits(const std::size_t* counts, std::size_t len) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < len; ++i) total += counts[i];
  double h = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    if (counts[i] == 0) continue;
    const double p = static_cast<double>(counts[i]) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

inline std::string bit_string(std::size_t value, std::size_t len) {
  std::string s(len, '0');
  for (std::size_t j = 0; j < len; ++j)
    if (value >> (len - 1 - j) & 1) s[j] = '1';
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Whole-run mutual information between the secret pair and the public view,
// by exact enumeration of every world under uniform priors.
// ---------------------------------------------------------------------------

inline double mutual_information(Protocol protocol,
                                 bool announce_prepared_states = false) {
  if (announce_prepared_states && protocol != Protocol::Bell)
    throw std::invalid_argument(
        "mutual_information: the leaky control variant only exists for the "
        "bell protocol");

  // joint[view][secret] as integer counts; secret = alice two-bit * 4 + bob
  // two-bit (per message unit for bell with one pair; whole message for all).
  std::map<std::string, std::array<std::size_t, 16>> joint;
  std::array<std::size_t, 16> secret_count{};
  std::size_t total = 0;
  auto tally = [&](const json& view, std::uint8_t a, std::uint8_t b) {
    auto [it, fresh] = joint.try_emplace(view.dump());
    if (fresh) it->second.fill(0);
    ++it->second[4 * a + b];
    ++secret_count[4 * a + b];
    ++total;
  };

  if (protocol == Protocol::Bell) {
    const std::vector<std::size_t> perms[2] = {{0, 1}, {1, 0}};
    for (int kind = 0; kind < 4; ++kind)
      for (const auto& perm : perms)
        for (std::uint8_t a = 0; a < 4; ++a)
          for (std::uint8_t b = 0; b < 4; ++b)
            tally(bell_world_view({static_cast<BellKind>(kind)}, perm,
                                  bits2_str(a), bits2_str(b),
                                  announce_prepared_states),
                  a, b);
  } else if (protocol == Protocol::W) {
    for (int branch = 0; branch < 2; ++branch)
      for (std::uint8_t a = 0; a < 4; ++a)
        for (std::uint8_t b = 0; b < 4; ++b)
          tally(w_world_view(branch, a, b), a, b);
  } else {
    for (int kind = 0; kind < 4; ++kind)
      for (std::uint8_t a = 0; a < 4; ++a)
        for (std::uint8_t b = 0; b < 4; ++b)
          tally(ghz_world_view(kind, a, b), a, b);
  }

  double info = 0.0;
  const auto t = static_cast<double>(total);
  for (const auto& [view, cells] : joint) {
    std::size_t view_count = 0;
    for (const std::size_t c : cells) view_count += c;
    for (std::size_t s = 0; s < cells.size(); ++s) {
      if (cells[s] == 0) continue;
      const auto c = static_cast<double>(cells[s]);
      info += (c / t) * std::log2(c * t /
                                  (static_cast<double>(view_count) *
                                   static_cast<double>(secret_count[s])));
    }
  }
  return info;
}

// ---------------------------------------------------------------------------
// Eve's entropy over the secret bits given only a public view: enumerate all
// (hidden preparation choices x both secret messages) whose replay reproduces
// the view verbatim, then report the entropy of the induced distribution per
// announcement unit (one announced particle result for bell, the one
// announced Bell result otherwise).
// ---------------------------------------------------------------------------

inline LeakageReport eve_entropy(Protocol protocol, const json& public_view) {
  const json& pv = public_view.is_object() && public_view.contains("events")
                       ? public_view.at("events")
                       : public_view;
  if (!pv.is_array())
    throw std::invalid_argument("eve_entropy: expected an event array");
  for (const auto& e : pv)
    if (e.value("type", "") == "abort")
      throw std::invalid_argument(
          "eve_entropy: an aborted run carries no dialogue to audit");

  LeakageReport rep;
  rep.protocol = protocol;

  if (protocol == Protocol::Bell) {
    const json* record = nullptr;
    bool leaky = false;
    for (const auto& e : pv) {
      if (e.value("type", "") != "announce") continue;
      if (e.value("topic", "") == "c_position_record") record = &e.at("payload");
      if (e.value("topic", "") == "prepared_states") leaky = true;
    }
    if (record == nullptr)
      throw std::invalid_argument(
          "eve_entropy: public view lacks the position-record announcement");
    const std::size_t slots = record->size();
    if (slots == 0 || slots % 2 != 0)
      throw std::invalid_argument("eve_entropy: malformed position record");
    const std::size_t n = slots / 2;
    if (n > 2)
      throw std::invalid_argument(
          "eve_entropy: exact enumeration is supported for up to 2 message "
          "pairs");

    // The disclosed ordering is public; reconstruct it exactly.
    std::vector<std::uint32_t> ids;
    for (const auto& item : *record)
      ids.push_back(item.at("pair").get<std::uint32_t>());
    std::vector<std::uint32_t> ranked = ids;
    std::sort(ranked.begin(), ranked.end());
    ranked.erase(std::unique(ranked.begin(), ranked.end()), ranked.end());
    if (ranked.size() != n)
      throw std::invalid_argument("eve_entropy: malformed position record");
    std::vector<std::size_t> perm(slots);
    for (const auto& item : *record) {
      const auto pos = item.at("pos").get<std::size_t>();
      const auto pair = item.at("pair").get<std::uint32_t>();
      const std::size_t rank = static_cast<std::size_t>(
          std::lower_bound(ranked.begin(), ranked.end(), pair) -
          ranked.begin());
      if (pos >= slots)
        throw std::invalid_argument("eve_entropy: malformed position record");
      perm[pos] = 2 * rank + (item.at("origin").get<std::string>() == "b");
    }

    const std::size_t kind_worlds = std::size_t{1} << (2 * n);  // 4^n
    const std::size_t bit_worlds = std::size_t{1} << (2 * n);   // 2^(2n)
    std::vector<std::array<std::size_t, 4>> unit(slots);
    for (auto& u : unit) u.fill(0);
    std::size_t consistent = 0;
    for (std::size_t kw = 0; kw < kind_worlds; ++kw) {
      std::vector<BellKind> kinds(n);
      for (std::size_t i = 0; i < n; ++i)
        kinds[i] = static_cast<BellKind>(kw >> (2 * i) & 3);
      for (std::size_t aw = 0; aw < bit_worlds; ++aw) {
        const std::string a_bits = detail::bit_string(aw, slots);
        for (std::size_t bw = 0; bw < bit_worlds; ++bw) {
          const std::string b_bits = detail::bit_string(bw, slots);
          if (bell_world_view(kinds, perm, a_bits, b_bits, leaky) != pv)
            continue;
          ++consistent;
          for (std::size_t s = 0; s < slots; ++s)
            ++unit[s][2 * (a_bits[s] == '1') + (b_bits[s] == '1')];
        }
      }
    }
    if (consistent == 0)
      throw IntegrityError(
          "eve_entropy: no enumerable world reproduces this public view "
          "(audit check-free runs)");
    double h = 0.0;
    for (const auto& u : unit) h += detail::entropy_bits(u.data(), u.size());
    rep.per_announcement_entropy_bits = h / static_cast<double>(slots);
    rep.consistent_assignments = consistent;
    rep.mutual_information_bits = mutual_information(protocol, leaky);
    return rep;
  }

  std::array<std::size_t, 16> joint{};
  std::size_t consistent = 0;
  const int hidden_count = protocol == Protocol::W ? 2 : 4;
  for (int hidden = 0; hidden < hidden_count; ++hidden)
    for (std::uint8_t a = 0; a < 4; ++a)
      for (std::uint8_t b = 0; b < 4; ++b) {
        const json view = protocol == Protocol::W ? w_world_view(hidden, a, b)
                                                  : ghz_world_view(hidden, a, b);
        if (view != pv) continue;
        ++consistent;
        ++joint[4 * a + b];
      }
  if (consistent == 0)
    throw IntegrityError(
        "eve_entropy: no enumerable world reproduces this public view "
        "(audit check-free runs)");
  rep.per_announcement_entropy_bits =
      detail::entropy_bits(joint.data(), joint.size());
  rep.consistent_assignments = consistent;
  rep.mutual_information_bits = mutual_information(protocol);
  return rep;
}

// ---------------------------------------------------------------------------
// Monte-Carlo attack-detection statistics over real protocol machinery with
// one independent sub-stream per trial.
// ---------------------------------------------------------------------------

inline DetectionStats detection_stats(Protocol protocol,
                                      const AdversaryModel& adversary,
                                      std::size_t trials, std::uint64_t seed) {
  if (trials < 1)
    throw std::invalid_argument("detection_stats: need trials >= 1");
  const std::string name = to_string(protocol);
  std::size_t decoy_hits = 0, pair_hits = 0, abort_hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t tseed = mix64(seed ^ mix64(t + 1));
    {
      // One decoy in flight, as inside any protected transmission.
      Rng decoy_rng = Rng::substream(tseed, "decoy");
      Rng measure_rng = Rng::substream(tseed, "measure");
      Rng eve_rng = Rng::substream(tseed, "eve");
      Register reg;
      Transcript tr(name, tseed, json::object());
      if (!decoy_check(reg, {}, 1, 0, "alice", "bob", adversary, tr, decoy_rng,
                       measure_rng, eve_rng))
        ++decoy_hits;
    }
    {
      // A whole 8-decoy protected block.
      Rng decoy_rng = Rng::substream(tseed, "decoy8");
      Rng measure_rng = Rng::substream(tseed, "measure8");
      Rng eve_rng = Rng::substream(tseed, "eve8");
      Register reg;
      Transcript tr(name, tseed, json::object());
      if (!decoy_check(reg, {}, 8, 0, "alice", "bob", adversary, tr, decoy_rng,
                       measure_rng, eve_rng))
        ++abort_hits;
    }
    if (protocol == Protocol::Bell) {
      // One correlation-check pair whose travelling particle is exposed.
      Rng state_rng = Rng::substream(tseed, "state");
      Rng basis_rng = Rng::substream(tseed, "basis");
      Rng measure_rng = Rng::substream(tseed, "measurep");
      Rng eve_rng = Rng::substream(tseed, "evep");
      Register reg;
      Transcript tr(name, tseed, json::object());
      BellPair pr;
      pr.index = 0;
      pr.kind = static_cast<BellKind>(state_rng.below(4));
      pr.a = {0, Role::a, Purpose::check};
      pr.b = {0, Role::b, Purpose::check};
      reg.add(prepare_bell(pr.kind, pr.a, pr.b));
      send_quantum(reg, {pr.a}, "alice", "bob", adversary, eve_rng, tr);
      if (!security_check_1(reg, {pr}, tr, basis_rng, measure_rng)) ++pair_hits;
    }
  }
  DetectionStats stats;
  stats.protocol = protocol;
  stats.adversary = adversary.kind;
  stats.trials = trials;
  stats.per_decoy = RateEstimate::from_counts(decoy_hits, trials);
  stats.abort_delta3_8 = RateEstimate::from_counts(abort_hits, trials);
  stats.has_check_pair = protocol == Protocol::Bell;
  if (stats.has_check_pair)
    stats.per_check_pair = RateEstimate::from_counts(pair_hits, trials);
  return stats;
}

// ---------------------------------------------------------------------------
// Cabello information-theoretical efficiency from a clean check-free run.
// ---------------------------------------------------------------------------

inline EfficiencyReport cabello_efficiency(Protocol protocol) {
  EfficiencyInputs in;
  if (protocol == Protocol::Bell) {
    BellRunParams p;
    p.n = 1;
    p.delta1 = p.delta2 = p.delta3 = 0;
    in = run_bell("00", "00", p).efficiency_inputs;
  } else if (protocol == Protocol::W) {
    WRunParams p;
    p.checks_enabled = false;
    in = run_w("00", "00", p).efficiency_inputs;
  } else {
    GhzRunParams p;
    p.checks_enabled = false;
    in = run_ghz("00", "00", p).efficiency_inputs;
  }
  EfficiencyReport rep;
  rep.b_s = in.b_s;
  rep.q_t = in.q_t;
  rep.b_t = in.b_t;
  rep.eta = static_cast<double>(in.b_s) / static_cast<double>(in.q_t + in.b_t);
  return rep;
}

// ---------------------------------------------------------------------------
// Comparison table: seven static literature rows plus three simulated rows.
// ---------------------------------------------------------------------------

struct Table1Row {
  std::string work;
  std::string resource;
  std::string measurements;
  std::string efficiency_display;
  double efficiency_percent = -1.0;  // < 0 means not numeric (cited text)
  std::string source;                // "literature" or "simulated"

  json to_json() const {
    json j = {{"work", work},
              {"initial_quantum_resource", resource},
              {"quantum_measurement", measurements},
              {"efficiency", efficiency_display},
              {"source", source}};
    if (efficiency_percent >= 0.0) j["efficiency_percent"] = efficiency_percent;
    return j;
  }
};

inline std::string format_percent(double eta) {
  const double pct = std::round(eta * 1000.0) / 10.0;
  char buf[32];
  if (std::abs(pct - std::round(pct)) < 1e-9)
    std::snprintf(buf, sizeof buf, "%.0f%%", pct);
  else
    std::snprintf(buf, sizeof buf, "%.1f%%", pct);
  return buf;
}

inline Table1Row table1_row(Protocol protocol) {
  const EfficiencyReport eff = cabello_efficiency(protocol);
  Table1Row row;
  if (protocol == Protocol::Bell) {
    row.work = "simulated (Bell state)";
    row.resource = "Bell states";
    row.measurements = "single-particle measurements";
  } else if (protocol == Protocol::W) {
    row.work = "simulated (W state)";
    row.resource = "W states";
    row.measurements = "single-particle measurements and Bell-basis measurements";
  } else {
    row.work = "simulated (four-particle GHZ state)";
    row.resource = "four-particle GHZ states";
    row.measurements = "single-particle measurements and Bell-basis measurements";
  }
  row.efficiency_display = format_percent(eff.eta);
  row.efficiency_percent = std::round(eff.eta * 1000.0) / 10.0;
  row.source = "simulated";
  return row;
}

inline std::vector<Table1Row> table1_rows() {
  std::vector<Table1Row> rows = {
      {"Shi et al. (2009)", "Bell states", "Bell-basis measurements", "66.7%",
       -1.0, "literature"},
      {"Shi et al. (2010)", "single particles", "single-particle measurements",
       "66.7%", -1.0, "literature"},
      {"Shi (2010)", "Bell states and single particles",
       "single-particle measurements and Bell-basis measurements", "75%", -1.0,
       "literature"},
      {"Gao (2010)", "Bell states", "Bell-basis measurements", "66.7%", -1.0,
       "literature"},
      {"Ye (2013)", "GHZ states", "GHZ-basis measurements", "66.7%", -1.0,
       "literature"},
      {"Ye and Jiang (2014)", "Bell states", "Bell-basis measurements",
       "66.7%", -1.0, "literature"},
      {"Ye (2014)", "Nearly single particles", "single-particle measurements",
       "Nearly 100%", -1.0, "literature"},
  };
  rows.push_back(table1_row(Protocol::Bell));
  rows.push_back(table1_row(Protocol::W));
  rows.push_back(table1_row(Protocol::Ghz));
  return rows;
}

inline json table1_json() {
  json rows = json::array();
  for (const auto& row : table1_rows()) rows.push_back(row.to_json());
  return {{"rows", rows}};
}

inline std::string table1_text() {
  const std::vector<Table1Row> rows = table1_rows();
  const std::array<std::string, 4> header = {
      "Work", "Initial quantum resource", "Quantum measurement", "Efficiency"};
  std::array<std::size_t, 4> width;
  for (std::size_t c = 0; c < 4; ++c) width[c] = header[c].size();
  auto cells = [](const Table1Row& r) {
    return std::array<std::string, 4>{r.work, r.resource, r.measurements,
                                      r.efficiency_display};
  };
  for (const auto& r : rows)
    for (std::size_t c = 0; c < 4; ++c)
      width[c] = std::max(width[c], cells(r)[c].size());

  std::string out;
  auto emit = [&](const std::array<std::string, 4>& line) {
    for (std::size_t c = 0; c < 4; ++c) {
      out += line[c];
      if (c + 1 < 4) out += std::string(width[c] - line[c].size() + 2, ' ');
    }
    out += '\n';
  };
  emit(header);
  std::array<std::string, 4> rule;
  for (std::size_t c = 0; c < 4; ++c) rule[c] = std::string(width[c], '-');
  emit(rule);
  for (const auto& r : rows) emit(cells(r));
  return out;
}

}  // namespace qdsim
