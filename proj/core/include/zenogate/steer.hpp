#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "zenogate/geometry.hpp"
#include "zenogate/pauli.hpp"

namespace zenogate {

// Class 0: no logical error; class 1: Pauli logical error (half-pi logical
// rotation); class 2: analog logical error, including the measurement-induced
// jump.
enum class ErrorClass { Class0 = 0, Class1 = 1, Class2 = 2 };

// How a decoded syndrome is corrected. The angle beta fed to the class-2
// formula comes from the branch that can actually populate the subspace:
// the environmental projection branches carry the tabulated beta_E/beta_EX,
// while subspaces only reachable through a measurement transition carry the
// non-adiabatic angle beta_X(tau).
enum class SteerRule {
  NoChange,          // theta_tilde = 0
  HalfPi,            // theta_tilde = (pi/2) / denominator
  AnalogTabulated,   // -(beta_branch(tau) + 2 theta) / denominator
  AnalogMeasurement  // -(beta_X(tau) + 2 theta) / denominator
};

struct DecodeEntry {
  Syndrome syndrome;
  Pauli error;           // total Pauli mapping the code space to the subspace
  ErrorClass error_class = ErrorClass::Class0;
  SteerRule rule = SteerRule::NoChange;
  Pauli base_error;      // environmental factor E (error = E or E*X)
  ErrorSubspace subspace = ErrorSubspace::E;
};

class DecodeTable {
 public:
  void insert(DecodeEntry entry);
  const DecodeEntry* find(const Syndrome& s) const;
  const std::vector<DecodeEntry>& entries() const { return entries_; }
  std::string to_json() const;

 private:
  std::vector<DecodeEntry> entries_;
  std::unordered_map<Syndrome, size_t, SyndromeHash> index_;
};

// Classification by the commutation structure: class 0 for H_E with [E,H]=0
// or H_EX with {E,H}={E,X}=0; class 1 for H_EX with {E,H}=0 and [E,X]=0;
// class 2 for everything else (including the measurement-induced jump).
ErrorClass classify(const Pauli& e, ErrorSubspace subspace, const Pauli& H,
                    const Pauli& X);

// Builds the table over the correctable set: one row per E (subspace E) and
// one per E*X (subspace EX, covering X itself through E = I). Throws on a
// syndrome collision (code unsuitable for decoding).
DecodeTable build_decode_table(const StabilizerCode& code, const Pauli& H,
                               const Pauli& X);

// theta_tilde for a detected jump at tau:
//   class 0: 0
//   class 1: (pi/2) / (1 - tau/T (1 - sinc(2 w tau)))
//   class 2: -(beta + 2 theta) / (1 - tau/T (1 - sinc(2 w tau)))
// Throws a late-jump error when the denominator magnitude is below 1e-6.
double correction_angle(ErrorClass cls, const GateSpec& spec, double tau,
                        double beta);

double steering_denominator(const GateSpec& spec, double tau);

// The branch angle used by the steering formula for a decode row at time tau.
double steering_beta(const DecodeEntry& entry, const GateSpec& spec, double tau);

struct SteeringDecision {
  double tau = 0.0;
  double theta_tilde = 0.0;
  PathState new_path;
};

struct JumpEvent;  // defined in filter.hpp

// Decision for a decoded syndrome at detection time tau. Returns nullopt for
// unknown syndromes and for late jumps (denominator below threshold), which
// are logged by the caller.
std::optional<SteeringDecision> steer(const Syndrome& syndrome, double tau,
                                      const GateSpec& spec,
                                      const DecodeTable& table);

// Theorem-style oracle: ideal projection into the row's subspace at tau,
// horizontal lift under the (possibly steered) path from tau to T, and the
// global-phase-invariant frame fidelity |tr(target^dag L(T))|^2 / K^2 against
// the target frame E G L(0).
double emulated_final_frame_check(const GateSpec& spec, const DecodeEntry& entry,
                                  double tau, const SteeringDecision* decision);

}  // namespace zenogate
