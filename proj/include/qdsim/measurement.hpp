#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdsim/rng.hpp"
#include "qdsim/statevector.hpp"

namespace qdsim {

enum class BasisKind { Z, X, Bell, ZZ };

inline std::string to_string(BasisKind b) {
  switch (b) {
    case BasisKind::Z: return "Z";
    case BasisKind::X: return "X";
    case BasisKind::Bell: return "Bell";
    default: return "ZZ";
  }
}

inline BasisKind basis_kind_from(const std::string& s) {
  if (s == "Z") return BasisKind::Z;
  if (s == "X") return BasisKind::X;
  if (s == "Bell") return BasisKind::Bell;
  if (s == "ZZ") return BasisKind::ZZ;
  throw std::invalid_argument("unknown basis: " + s);
}

// A complete orthonormal measurement basis on 1 or 2 qubits: outcome labels
// plus the matching eigenvectors.
struct MeasurementBasis {
  BasisKind kind = BasisKind::Z;
  std::size_t arity = 1;
  std::vector<std::string> outcome_labels;
  std::vector<std::vector<cplx>> eigenvectors;

  static MeasurementBasis make(BasisKind k) {
    const double s = 1.0 / std::sqrt(2.0);
    MeasurementBasis b;
    b.kind = k;
    switch (k) {
      case BasisKind::Z:
        b.arity = 1;
        b.outcome_labels = {"0", "1"};
        b.eigenvectors = {{1, 0}, {0, 1}};
        break;
      case BasisKind::X:
        b.arity = 1;
        b.outcome_labels = {"+", "-"};
        b.eigenvectors = {{s, s}, {s, -s}};
        break;
      case BasisKind::Bell:
        b.arity = 2;
        b.outcome_labels = {"phi+", "phi-", "psi+", "psi-"};
        b.eigenvectors = {
            {s, 0, 0, s}, {s, 0, 0, -s}, {0, s, s, 0}, {0, s, -s, 0}};
        break;
      case BasisKind::ZZ:
        b.arity = 2;
        b.outcome_labels = {"00", "01", "10", "11"};
        b.eigenvectors = {
            {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
        break;
    }
    return b;
  }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < outcome_labels.size(); ++i)
      if (outcome_labels[i] == label) return i;
    throw std::invalid_argument("MeasurementBasis: unknown outcome " + label);
  }
};

struct MeasurementOutcome {
  BasisKind basis = BasisKind::Z;
  std::string label;         // outcome, e.g. "0", "+", "psi-"
  std::size_t index = 0;     // position in the basis's outcome list
  double probability = 0.0;  // Born probability the outcome had when sampled
  StateVector collapsed;     // remaining register, measured qubits removed
};

// Projective measurement.  The outcome is sampled from the Born rule with
// exactly one rng.unit() draw; the returned collapsed state has the measured
// qubits removed and the remainder renormalized (measuring everything leaves
// an empty register).
inline MeasurementOutcome measure(const StateVector& state,
                                  const std::vector<ParticleLabel>& targets,
                                  const MeasurementBasis& basis, Rng& rng) {
  if (targets.size() != basis.arity)
    throw std::invalid_argument("measure: target count mismatch");
  std::vector<StateVector> posts;
  std::vector<double> probs;
  posts.reserve(basis.eigenvectors.size());
  double total = 0.0;
  for (const auto& ev : basis.eigenvectors) {
    StateVector post = state.contracted(targets, ev);
    const double n = post.norm();
    probs.push_back(n * n);
    total += n * n;
    posts.push_back(std::move(post));
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::logic_error("measure: state not normalized");
  const double u = rng.unit() * total;
  double acc = 0.0;
  std::size_t pick = probs.size() - 1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) {
      pick = i;
      break;
    }
  }
  StateVector post = std::move(posts[pick]);
  if (post.num_qubits() > 0) post.renormalize();
  return {basis.kind, basis.outcome_labels[pick], pick, probs[pick],
          std::move(post)};
}

// Force a specific outcome (used by exact enumeration).  Throws if the
// outcome has (numerically) zero probability.
inline MeasurementOutcome project(const StateVector& state,
                                  const std::vector<ParticleLabel>& targets,
                                  const MeasurementBasis& basis,
                                  std::size_t outcome_index) {
  if (targets.size() != basis.arity)
    throw std::invalid_argument("project: target count mismatch");
  if (outcome_index >= basis.eigenvectors.size())
    throw std::invalid_argument("project: outcome index out of range");
  StateVector post =
      state.contracted(targets, basis.eigenvectors[outcome_index]);
  const double n = post.norm();
  if (n * n < kNormTol)
    throw std::logic_error("project: outcome has zero probability");
  if (post.num_qubits() > 0) post.renormalize();
  return {basis.kind, basis.outcome_labels[outcome_index], outcome_index,
          n * n, std::move(post)};
}

}  // namespace qdsim
