#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdsim/statevector.hpp"

namespace qdsim {

enum class GateKind { I, SigmaX, SigmaZ, ISigmaY, Cnot, Uex };

inline std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::I: return "I";
    case GateKind::SigmaX: return "sigma_x";
    case GateKind::SigmaZ: return "sigma_z";
    case GateKind::ISigmaY: return "i_sigma_y";
    case GateKind::Cnot: return "cnot";
    default: return "u_ex";
  }
}

struct Gate {
  GateKind kind = GateKind::I;
  std::size_t arity = 1;
  std::vector<cplx> matrix;  // row-major, dim 2^arity

  static Gate make(GateKind k) {
    Gate g;
    g.kind = k;
    switch (k) {
      case GateKind::I:
        g.arity = 1;
        g.matrix = {1, 0, 0, 1};
        break;
      case GateKind::SigmaX:
        g.arity = 1;
        g.matrix = {0, 1, 1, 0};
        break;
      case GateKind::SigmaZ:
        g.arity = 1;
        g.matrix = {1, 0, 0, -1};
        break;
      case GateKind::ISigmaY:
        // |0><1| - |1><0|
        g.arity = 1;
        g.matrix = {0, 1, -1, 0};
        break;
      case GateKind::Cnot:
        // first target is the control
        g.arity = 2;
        g.matrix = {1, 0, 0, 0,  //
                    0, 1, 0, 0,  //
                    0, 0, 0, 1,  //
                    0, 0, 1, 0};
        break;
      case GateKind::Uex:
        // |00><00| + |01><10| + |10><01| + |11><11|
        g.arity = 2;
        g.matrix = {1, 0, 0, 0,  //
                    0, 0, 1, 0,  //
                    0, 1, 0, 0,  //
                    0, 0, 0, 1};
        break;
    }
    return g;
  }
};

inline bool is_unitary(const Gate& g, double tol = kNormTol) {
  const std::size_t d = std::size_t{1} << g.arity;
  if (g.matrix.size() != d * d) return false;
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      cplx s{0.0, 0.0};
      for (std::size_t k = 0; k < d; ++k)
        s += g.matrix[r * d + k] * std::conj(g.matrix[c * d + k]);
      const cplx want = (r == c) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
      if (std::abs(s - want) > tol) return false;
    }
  }
  return true;
}

// Returns the state with the gate applied; targets[0] is the gate's most
// significant qubit (the control, for cnot).
inline StateVector apply_gate(StateVector state, const Gate& g,
                              const std::vector<ParticleLabel>& targets) {
  if (targets.size() != g.arity)
    throw std::invalid_argument("apply_gate: target count mismatch");
  state.apply_unitary(g.matrix, targets);
  return state;
}

}  // namespace qdsim
