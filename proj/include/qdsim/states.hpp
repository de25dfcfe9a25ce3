#pragma once

#include <cmath>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qdsim/codes.hpp"
#include "qdsim/statevector.hpp"

namespace qdsim {

inline StateVector prepare_bell(BellKind kind, const ParticleLabel& a,
                                const ParticleLabel& b) {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<cplx> amps(4, cplx{0.0, 0.0});
  switch (kind) {
    case BellKind::PhiPlus:
      amps[0b00] = s;
      amps[0b11] = s;
      break;
    case BellKind::PhiMinus:
      amps[0b00] = s;
      amps[0b11] = -s;
      break;
    case BellKind::PsiPlus:
      amps[0b01] = s;
      amps[0b10] = s;
      break;
    case BellKind::PsiMinus:
      amps[0b01] = s;
      amps[0b10] = -s;
      break;
  }
  return StateVector({a, b}, std::move(amps));
}

// (1/2)(|001> + |010> - |100> + |111>) over (a, b, c).
inline StateVector prepare_w(const ParticleLabel& a, const ParticleLabel& b,
                             const ParticleLabel& c) {
  std::vector<cplx> amps(8, cplx{0.0, 0.0});
  amps[0b001] = 0.5;
  amps[0b010] = 0.5;
  amps[0b100] = -0.5;
  amps[0b111] = 0.5;
  return StateVector({a, b, c}, std::move(amps));
}

inline StateVector prepare_ghz4(GhzKind kind, const ParticleLabel& a,
                                const ParticleLabel& b, const ParticleLabel& c,
                                const ParticleLabel& d) {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<cplx> amps(16, cplx{0.0, 0.0});
  switch (kind) {
    case GhzKind::G1:
      amps[0b0000] = s;
      amps[0b1111] = s;
      break;
    case GhzKind::G2:
      amps[0b0001] = s;
      amps[0b1110] = -s;
      break;
    case GhzKind::G3:
      amps[0b0101] = s;
      amps[0b1010] = s;
      break;
    case GhzKind::G4:
      amps[0b0100] = s;
      amps[0b1011] = -s;
      break;
  }
  return StateVector({a, b, c, d}, std::move(amps));
}

// Single qubit in one of the four conjugate-basis states "0", "1", "+", "-".
inline StateVector prepare_qubit(const ParticleLabel& q, std::string_view which) {
  const double s = 1.0 / std::sqrt(2.0);
  if (which == "0") return StateVector({q}, {1, 0});
  if (which == "1") return StateVector({q}, {0, 1});
  if (which == "+") return StateVector({q}, {s, s});
  if (which == "-") return StateVector({q}, {s, -s});
  throw std::invalid_argument("prepare_qubit: unknown state '" +
                              std::string(which) + "'");
}

}  // namespace qdsim
