#pragma once

#include <Eigen/Dense>

#include "zenogate/geometry.hpp"
#include "zenogate/linalg.hpp"
#include "zenogate/pauli.hpp"
#include "zenogate/rng.hpp"

namespace zenogate::testing {

// The running example: the 3-qubit bit-flip code with two ancillas, logical
// H = Z1Z2Z3 and rotation operator X = X1 Z3 X4 X5.
inline StabilizerCode adapted_code() {
  StabilizerCode code = append_ancillas(StabilizerCode::bit_flip(), 2);
  return code;
}

inline GateSpec adapted_gate(double omega = 0.1, double kappa = 1.0,
                             double theta = GateSpec::kPi / 6.0) {
  GateSpec spec;
  spec.code = adapted_code();
  spec.H = Pauli::from_string("ZZZII");
  spec.X = Pauli::from_string("XIZXX");
  spec.theta = theta;
  spec.omega = omega;
  spec.kappa = kappa;
  return spec;
}

// The three-qubit gate of the accelerated-gate study: H = logical X,
// X = X1 Z3 (weight 2, usable without decoding at gamma = 0).
inline GateSpec small_gate(double omega = 0.1, double kappa = 1.0,
                           double theta = GateSpec::kPi / 6.0) {
  GateSpec spec;
  spec.code = StabilizerCode::bit_flip();
  spec.H = Pauli::from_string("XXX");
  spec.X = Pauli::from_string("XIZ");
  spec.theta = theta;
  spec.omega = omega;
  spec.kappa = kappa;
  return spec;
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// Global-phase-invariant frame fidelity |tr(A^dag B)|^2 / K^2.
inline double frame_fidelity(const Mat& a, const Mat& b) {
  const auto k = static_cast<double>(a.cols());
  return std::norm((a.adjoint() * b).trace() / k);
}

// Uniformly random Pauli on n qubits with phase in {+1, -1}.
inline Pauli random_pauli(int n, Rng& rng) {
  const uint64_t mask = (~0ULL) >> (64 - n);
  const uint64_t x = rng.next_u64() & mask;
  const uint64_t z = rng.next_u64() & mask;
  const int phase = (rng.next_u64() & 1) ? 2 : 0;
  return Pauli(n, x, z, phase);
}

}  // namespace zenogate::testing
