#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdsim/labels.hpp"

namespace qdsim {

using cplx = std::complex<double>;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kPhaseTol = 1e-9;
inline constexpr std::size_t kMaxQubits = 5;

// Pure state over a small set of labeled qubits.  labels()[0] is the leftmost
// ket symbol and the most significant bit of the amplitude index.
class StateVector {
 public:
  StateVector() = default;

  StateVector(std::vector<ParticleLabel> labels, std::vector<cplx> amps)
      : labels_(std::move(labels)), amps_(std::move(amps)) {
    if (labels_.size() > kMaxQubits)
      throw std::invalid_argument("StateVector: register too large");
    if (amps_.size() != (std::size_t{1} << labels_.size()))
      throw std::invalid_argument("StateVector: amplitude count mismatch");
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("StateVector: duplicate label");
  }

  static StateVector basis_state(std::vector<ParticleLabel> labels,
                                 std::string_view bits) {
    if (bits.size() != labels.size())
      throw std::invalid_argument("basis_state: bit count mismatch");
    std::size_t idx = 0;
    for (char c : bits) {
      if (c != '0' && c != '1')
        throw std::invalid_argument("basis_state: bits must be 0/1");
      idx = (idx << 1) | static_cast<std::size_t>(c == '1');
    }
    std::vector<cplx> amps(std::size_t{1} << labels.size(), cplx{0.0, 0.0});
    amps[idx] = cplx{1.0, 0.0};
    return StateVector(std::move(labels), std::move(amps));
  }

  std::size_t num_qubits() const { return labels_.size(); }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<ParticleLabel>& labels() const { return labels_; }
  const std::vector<cplx>& amps() const { return amps_; }

  bool has_label(const ParticleLabel& q) const {
    return std::find(labels_.begin(), labels_.end(), q) != labels_.end();
  }

  std::size_t pos_of(const ParticleLabel& q) const {
    auto it = std::find(labels_.begin(), labels_.end(), q);
    if (it == labels_.end())
      throw std::invalid_argument("StateVector: unknown label " + q.str());
    return static_cast<std::size_t>(it - labels_.begin());
  }

  cplx amplitude(std::size_t basis_index) const { return amps_.at(basis_index); }

  // Amplitude of a computational basis ket written as a bit string in label
  // order, e.g. "010".
  cplx amplitude(std::string_view bits) const {
    if (bits.size() != labels_.size())
      throw std::invalid_argument("amplitude: bit count mismatch");
    std::size_t idx = 0;
    for (char c : bits) idx = (idx << 1) | static_cast<std::size_t>(c == '1');
    return amps_[idx];
  }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  void renormalize() {
    const double n = norm();
    if (n < kNormTol)
      throw std::logic_error("StateVector: cannot renormalize zero state");
    for (auto& a : amps_) a /= n;
  }

  // Same qubits, new symbol order.
  StateVector reordered(const std::vector<ParticleLabel>& new_labels) const {
    if (new_labels.size() != labels_.size())
      throw std::invalid_argument("reordered: label count mismatch");
    const std::size_t n = labels_.size();
    std::vector<std::size_t> src_pos(n);
    for (std::size_t k = 0; k < n; ++k) src_pos[k] = pos_of(new_labels[k]);
    std::vector<cplx> out(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      std::size_t j = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t bit = (i >> (n - 1 - src_pos[k])) & 1u;
        j |= bit << (n - 1 - k);
      }
      out[j] = amps_[i];
    }
    return StateVector(new_labels, std::move(out));
  }

  StateVector tensor(const StateVector& other) const {
    std::vector<ParticleLabel> labels = labels_;
    for (const auto& q : other.labels_) {
      if (has_label(q))
        throw std::invalid_argument("tensor: duplicate label " + q.str());
      labels.push_back(q);
    }
    std::vector<cplx> amps;
    amps.reserve(amps_.size() * other.amps_.size());
    for (const auto& x : amps_)
      for (const auto& y : other.amps_) amps.push_back(x * y);
    return StateVector(std::move(labels), std::move(amps));
  }

  // <this|other>; other may list the same qubits in any order.
  cplx inner(const StateVector& other) const {
    const StateVector o = other.reordered(labels_);
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i)
      s += std::conj(amps_[i]) * o.amps_[i];
    return s;
  }

  // Apply a 2^k x 2^k row-major unitary to k target qubits; targets[0] is the
  // most significant bit of the gate's basis.
  void apply_unitary(const std::vector<cplx>& u,
                     const std::vector<ParticleLabel>& targets) {
    const std::size_t k = targets.size();
    const std::size_t d = std::size_t{1} << k;
    if (u.size() != d * d)
      throw std::invalid_argument("apply_unitary: matrix size mismatch");
    const std::size_t n = labels_.size();
    std::vector<std::size_t> shift(k);
    for (std::size_t t = 0; t < k; ++t) {
      shift[t] = n - 1 - pos_of(targets[t]);
      for (std::size_t s = 0; s < t; ++s)
        if (targets[s] == targets[t])
          throw std::invalid_argument("apply_unitary: repeated target");
    }
    std::size_t tmask = 0;
    for (std::size_t t = 0; t < k; ++t) tmask |= std::size_t{1} << shift[t];
    std::vector<cplx> block(d);
    for (std::size_t base = 0; base < amps_.size(); ++base) {
      if (base & tmask) continue;  // enumerate indices with all target bits 0
      for (std::size_t j = 0; j < d; ++j) {
        std::size_t idx = base;
        for (std::size_t t = 0; t < k; ++t)
          if ((j >> (k - 1 - t)) & 1u) idx |= std::size_t{1} << shift[t];
        block[j] = amps_[idx];
      }
      for (std::size_t r = 0; r < d; ++r) {
        cplx v{0.0, 0.0};
        for (std::size_t c = 0; c < d; ++c) v += u[r * d + c] * block[c];
        std::size_t idx = base;
        for (std::size_t t = 0; t < k; ++t)
          if ((r >> (k - 1 - t)) & 1u) idx |= std::size_t{1} << shift[t];
        amps_[idx] = v;
      }
    }
  }

  // Contract the target qubits against conj(eigvec), dropping them.  The
  // squared norm of the result is the probability of that outcome.
  StateVector contracted(const std::vector<ParticleLabel>& targets,
                         const std::vector<cplx>& eigvec) const {
    const std::size_t k = targets.size();
    const std::size_t d = std::size_t{1} << k;
    if (eigvec.size() != d)
      throw std::invalid_argument("contracted: eigenvector size mismatch");
    if (k > labels_.size())
      throw std::invalid_argument("contracted: too many targets");
    const std::size_t n = labels_.size();
    std::vector<std::size_t> shift(k);
    for (std::size_t t = 0; t < k; ++t) shift[t] = n - 1 - pos_of(targets[t]);
    std::size_t tmask = 0;
    for (std::size_t t = 0; t < k; ++t) tmask |= std::size_t{1} << shift[t];

    std::vector<ParticleLabel> rest;
    for (const auto& q : labels_)
      if (std::find(targets.begin(), targets.end(), q) == targets.end())
        rest.push_back(q);
    std::vector<cplx> out(std::size_t{1} << rest.size(), cplx{0.0, 0.0});

    std::size_t r = 0;
    for (std::size_t base = 0; base < amps_.size(); ++base) {
      if (base & tmask) continue;
      cplx v{0.0, 0.0};
      for (std::size_t j = 0; j < d; ++j) {
        std::size_t idx = base;
        for (std::size_t t = 0; t < k; ++t)
          if ((j >> (k - 1 - t)) & 1u) idx |= std::size_t{1} << shift[t];
        v += std::conj(eigvec[j]) * amps_[idx];
      }
      out[r++] = v;
    }
    return StateVector(std::move(rest), std::move(out));
  }

 private:
  std::vector<ParticleLabel> labels_;
  std::vector<cplx> amps_;
};

// True when s1 == z*s2 for some unit complex z, i.e. |<s1|s2>| = 1 within tol.
// Both states must cover the same qubits (any order) and be normalized;
// throws on a label-set mismatch.
inline bool equal_up_to_global_phase(const StateVector& s1,
                                     const StateVector& s2,
                                     double tol = kPhaseTol) {
  if (s1.num_qubits() != s2.num_qubits())
    throw std::invalid_argument("equal_up_to_global_phase: label-set mismatch");
  const double overlap = std::abs(s1.inner(s2));  // throws on unknown labels
  return overlap >= 1.0 - tol;
}

}  // namespace qdsim
