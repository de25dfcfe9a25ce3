#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qdsim {

using json = nlohmann::json;

// Ordered record of one protocol run: quantum send events and classical
// announcements, plus the final outcome.  public_view() is the projection an
// eavesdropper sees — classical announcements and send metadata only, never
// amplitudes, secret bits, or the private audit log.
class Transcript {
 public:
  Transcript(std::string protocol, std::uint64_t seed, json params)
      : protocol_(std::move(protocol)), seed_(seed), params_(std::move(params)) {
    events_ = json::array();
    eve_audit_ = json::array();
  }

  const std::string& protocol() const { return protocol_; }
  std::uint64_t seed() const { return seed_; }
  bool aborted() const { return aborted_; }
  bool finished() const { return finished_; }

  void record_send(std::string_view from, std::string_view to,
                   const std::vector<std::string>& labels) {
    require_open("quantum send");
    events_.push_back(
        {{"type", "quantum_send"}, {"from", from}, {"to", to}, {"labels", labels}});
  }

  void record_announce(std::string_view party, std::string_view topic,
                       json payload) {
    if (aborted_) throw std::logic_error("Transcript: announce after abort");
    require_open("announce");
    events_.push_back({{"type", "announce"},
                       {"party", party},
                       {"topic", topic},
                       {"payload", std::move(payload)}});
  }

  void record_check(std::string_view check_id, bool pass) {
    require_open("check result");
    events_.push_back(
        {{"type", "check_result"}, {"check", check_id}, {"pass", pass}});
  }

  void record_abort(std::string_view reason) {
    require_open("abort");
    events_.push_back({{"type", "abort"}, {"reason", reason}});
    aborted_ = true;
  }

  // Private side channel for the adversary model; never part of public_view
  // or the serialized transcript.
  void record_eve(json entry) {
    require_open("eve audit");
    eve_audit_.push_back(std::move(entry));
  }

  void finish(json outcome) {
    if (finished_) throw std::logic_error("Transcript: already finished");
    outcome_ = std::move(outcome);
    finished_ = true;
  }

  // Serialized form; field names are a stable contract.
  json to_json() const {
    return {{"protocol", protocol_},
            {"seed", seed_},
            {"params", params_},
            {"events", events_},
            {"outcome", outcome_}};
  }

  // Everything Eve can see.
  json public_view() const { return events_; }

  const json& eve_audit() const { return eve_audit_; }

 private:
  void require_open(const char* what) const {
    if (finished_)
      throw std::logic_error(std::string("Transcript: ") + what +
                             " after finish");
  }

  std::string protocol_;
  std::uint64_t seed_ = 0;
  json params_;
  json events_;
  json eve_audit_;
  json outcome_;
  bool aborted_ = false;
  bool finished_ = false;
};

}  // namespace qdsim
