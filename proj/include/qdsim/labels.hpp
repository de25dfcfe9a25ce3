#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace qdsim {

// Which particle of an entangled group a qubit is.
enum class Role : std::uint8_t { a, b, c, d };

// What a qubit is used for within a run.
enum class Purpose : std::uint8_t { message, check, decoy };

inline char role_char(Role r) {
  switch (r) {
    case Role::a: return 'a';
    case Role::b: return 'b';
    case Role::c: return 'c';
    default: return 'd';
  }
}

struct ParticleLabel {
  std::uint32_t index = 0;  // group number within the run
  Role role = Role::a;
  Purpose purpose = Purpose::message;

  friend auto operator<=>(const ParticleLabel&, const ParticleLabel&) = default;

  std::string str() const {
    if (purpose == Purpose::decoy) return "D" + std::to_string(index);
    std::string s = "P" + std::to_string(index) + "(";
    s += role_char(role);
    s += ')';
    if (purpose == Purpose::check) s += '*';
    return s;
  }
};

}  // namespace qdsim
