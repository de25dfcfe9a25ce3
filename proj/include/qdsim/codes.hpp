#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qdsim/gates.hpp"

namespace qdsim {

enum class BellKind : std::uint8_t { PhiPlus, PhiMinus, PsiPlus, PsiMinus };
enum class GhzKind : std::uint8_t { G1, G2, G3, G4 };

inline std::string to_string(BellKind k) {
  switch (k) {
    case BellKind::PhiPlus: return "phi+";
    case BellKind::PhiMinus: return "phi-";
    case BellKind::PsiPlus: return "psi+";
    default: return "psi-";
  }
}

inline BellKind bell_kind_from(std::string_view s) {
  if (s == "phi+") return BellKind::PhiPlus;
  if (s == "phi-") return BellKind::PhiMinus;
  if (s == "psi+") return BellKind::PsiPlus;
  if (s == "psi-") return BellKind::PsiMinus;
  throw std::invalid_argument("unknown Bell state: " + std::string(s));
}

inline std::string to_string(GhzKind k) {
  switch (k) {
    case GhzKind::G1: return "G1";
    case GhzKind::G2: return "G2";
    case GhzKind::G3: return "G3";
    default: return "G4";
  }
}

// Two classical bits packed as (hi << 1) | lo, printed "hi lo" style: 2 -> "10".
inline std::string bits2_str(std::uint8_t v) {
  std::string s = "00";
  s[0] = static_cast<char>('0' + ((v >> 1) & 1u));
  s[1] = static_cast<char>('0' + (v & 1u));
  return s;
}

inline std::uint8_t bits2_parse(std::string_view s) {
  if (s.size() != 2 || (s[0] != '0' && s[0] != '1') || (s[1] != '0' && s[1] != '1'))
    throw std::invalid_argument("expected two bits, got '" + std::string(s) + "'");
  return static_cast<std::uint8_t>(((s[0] == '1') << 1) | (s[1] == '1'));
}

// Public dictionary mapping Bell states to message bit pairs.
struct BellBitCode {
  static std::uint8_t bits(BellKind k) {
    switch (k) {
      case BellKind::PsiMinus: return 0b00;
      case BellKind::PhiPlus: return 0b01;
      case BellKind::PsiPlus: return 0b10;
      default: return 0b11;  // phi-
    }
  }
  static BellKind kind(std::uint8_t bits) {
    switch (bits & 3u) {
      case 0b00: return BellKind::PsiMinus;
      case 0b01: return BellKind::PhiPlus;
      case 0b10: return BellKind::PsiPlus;
      default: return BellKind::PhiMinus;
    }
  }
};

// Public dictionary mapping encoding operations to message bit pairs:
// U_00 = I, U_01 = sigma_x, U_10 = sigma_z, U_11 = i*sigma_y.
struct PauliBitCode {
  static std::uint8_t bits(GateKind k) {
    switch (k) {
      case GateKind::I: return 0b00;
      case GateKind::SigmaX: return 0b01;
      case GateKind::SigmaZ: return 0b10;
      case GateKind::ISigmaY: return 0b11;
      default:
        throw std::invalid_argument("PauliBitCode: not an encoding operation");
    }
  }
  static GateKind kind(std::uint8_t bits) {
    switch (bits & 3u) {
      case 0b00: return GateKind::I;
      case 0b01: return GateKind::SigmaX;
      case 0b10: return GateKind::SigmaZ;
      default: return GateKind::ISigmaY;
    }
  }
  static Gate gate(std::uint8_t bits) { return Gate::make(kind(bits)); }
};

}  // namespace qdsim
