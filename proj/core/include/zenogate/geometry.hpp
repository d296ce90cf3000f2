#pragma once

#include <vector>

#include "zenogate/linalg.hpp"
#include "zenogate/pauli.hpp"

namespace zenogate {

// One holonomic gate: target logical rotation G = exp(i theta H) generated by
// rotating the code space with V(t) = exp(i omega_H t H) exp(i omega t X),
// omega_H = theta*omega/(2 pi), run over a loop of duration T = 2 pi / omega
// under continuous stabilizer measurement of strength kappa.
struct GateSpec {
  StabilizerCode code;
  Pauli H;      // logical Pauli being rotated
  Pauli X;      // rotation operator
  double theta = 0.0;
  double omega = 0.0;
  double kappa = 1.0;

  double omega_h() const { return theta * omega / (2.0 * kPi); }
  double total_time() const { return 2.0 * kPi / omega; }
  int dim() const { return 1 << code.n; }

  // Checks sizes, involutions, {X,H}=0, [H,g]=0 for all generators, and that
  // X anticommutes with at least one generator. Throws on violation.
  void validate() const;

  static constexpr double kPi = 3.141592653589793238462643383279502884;
};

// Active evolution path: the base loop V(t), or the steered loop
// Vtilde(t) = exp(i omega_tilde_h (t - tau) H) V(t) for t >= tau.
struct PathState {
  bool steered = false;
  double tau = 0.0;
  double theta_tilde = 0.0;

  static PathState base() { return {}; }
  static PathState steered_from(double tau, double theta_tilde) {
    return {true, tau, theta_tilde};
  }
};

// Partial logical rotation angle theta_bar(t) = (theta / 4 pi) sin(2 omega t).
double partial_rotation_angle(const GateSpec& spec, double t);

// Applies path unitaries and rotated operators without dense matrices.
// V(t), U(t) = V(t) exp(-i theta_bar(t) H) and adjoints act in O(dim) per
// Pauli factor; rotated Paulis A(t) = W(t)^dag A W(t) come out as combos of
// at most four Paulis.
class PathEngine {
 public:
  PathEngine(const GateSpec& spec, PathState path = PathState::base());

  const GateSpec& spec() const { return spec_; }
  const PathState& path() const { return path_; }
  void switch_path(PathState path) { path_ = path; }

  void apply_v(double t, const Vec& in, Vec& out) const;
  void apply_v_dagger(double t, const Vec& in, Vec& out) const;
  void apply_u(double t, const Vec& in, Vec& out) const;

  // W(t)^dag A W(t) for the active path (W = V or Vtilde).
  PauliCombo rotated(const Pauli& a, double t) const;

  // Effective H-angle and X-angle of the active path at time t, such that
  // W(t) = exp(i h_angle H) exp(i x_angle X).
  double h_angle(double t) const;
  double x_angle(double t) const;

 private:
  GateSpec spec_;
  PathState path_;
  PauliAction h_action_;
  PauliAction x_action_;
};

// Dense V(t) (or steered Vtilde(t)). Throws std::out_of_range outside [0, T].
Mat path_unitary(const GateSpec& spec, const PathState& path, double t);

// Lemma-style closed form psi_bar(t) = V(t) exp(-i theta_bar(t) H) psi0 for
// psi0 in the code space (checked to 1e-8).
Vec instantaneous_code_state(const GateSpec& spec, const Vec& psi0, double t);

struct ZenoResult {
  Vec state;
  double max_step_correction = 0.0;  // largest per-step norm renormalization
};

// Integrates the Zeno-limit equation d psi = -i [H_drive(t), P(t)] psi dt,
// RK4 with per-step renormalization. H_drive = i (dV/dt) V^dag is the
// Hamiltonian generating the path in the V(t+dt) = exp(-i H dt) V(t) sense.
ZenoResult zeno_propagate(const GateSpec& spec, const Vec& psi0, double dt,
                          long steps);

struct LiftResult {
  Mat frame;          // L(t1) = W(t1) L0 h(t1)
  Mat holonomy_part;  // h(t1)
  double max_connection_residual = 0.0;
};

// Horizontal lift of the projector path above the base frame L0 (the frame at
// time t0 expressed in path coordinates, i.e. the physical frame at t0 is
// W(t0) L0). Integrates dh/dt = -L0^dag W^dag (dW/dt) L0 h with RK4 and
// per-step polar re-unitarization. dt must be at most (t1-t0)/100.
LiftResult horizontal_lift(const GateSpec& spec, const PathState& path,
                           const Mat& L0, double t0, double t1, double dt);

// Holonomy of the closed loop: Gamma = L0^dag L(T), unitary to 1e-8.
// Requires the loop to close (P(T) = P(0) within 1e-8).
Mat holonomy(const GateSpec& spec, const PathState& path, const Mat& L0);

// Orthonormal frame [|0_L>, |1_L>, ...] spanning the code space, with
// logical basis states fixed by the logical Z (and X for the pairing).
Mat code_frame(const StabilizerCode& code);
Vec logical_zero(const StabilizerCode& code);
Vec logical_plus(const StabilizerCode& code);

enum class ErrorSubspace { E, EX };

// Projection branch of a correctable error under measurement at time t:
// probability of landing in the branch and the erroneous logical rotation
// angle beta carried by the instantaneous error state.
struct ErrorStateSpec {
  Pauli error;             // total Pauli mapping code space to the branch
  ErrorSubspace subspace = ErrorSubspace::E;
  double beta = 0.0;
  double probability = 0.0;
};

// Branches for an environmental error E at time t, one entry per reachable
// subspace. The four commutation cases of (E,H), (E,X) give:
//   [E,H]=[E,X]=0:    p_EX = 0
//   [E,H]=0,{E,X}=0:  p_EX = sin^2(2wt),                 beta_EX = 2 theta_bar
//   {E,H}=0,[E,X]=0:  p_EX = sin^2(2wt) sin^2(2w_H t),   beta_EX = pi/2
//   {E,H}={E,X}=0:    p_EX = sin^2(2wt) cos^2(2w_H t),   beta_EX = 0
// with beta_E = 2 theta_bar - atan2(...) in the anticommuting-H cases.
std::vector<ErrorStateSpec> error_state_spec(const GateSpec& spec,
                                             const Pauli& e, double t);

// Erroneous angle of the measurement-induced jump into H_X at time tau:
// beta_X = 2 theta_bar(tau) + atan(2 theta_bar(tau)).
double measurement_induced_angle(const GateSpec& spec, double tau);

// U(tau) exp(i beta_X H) X psi0 for psi0 in the code space.
Vec measurement_induced_error_state(const GateSpec& spec, double tau,
                                    const Vec& psi0);

// Checks that projecting E psi_bar(t) with the rotated projectors
// {P_E(t), P_EX(t)} matches projecting the rotated error applied to psi_bar
// with the unrotated projectors followed by U(t), to the given tolerance.
bool rotated_measurement_equivalence_check(const GateSpec& spec, const Pauli& e,
                                           double t, double tol = 1e-8);

}  // namespace zenogate
