#pragma once

#include <string>
#include <vector>

#include "zenogate/config.hpp"
#include "zenogate/geometry.hpp"
#include "zenogate/sde.hpp"
#include "zenogate/steer.hpp"

namespace zenogate {

// Overlap with the instantaneous code state: f(t) = <psi_bar(t)| rho |psi_bar(t)>.
double gate_fidelity(const Vec& psi, const GateSpec& spec, double t,
                     const Vec& psi0);
double gate_fidelity(const Mat& rho, const GateSpec& spec, double t,
                     const Vec& psi0);

// Pauli-frame-aware success metric:
// F(rho) = max over E in correctable set, X, and X * correctable set of
// <psi_bar| G^dag E^dag rho E G |psi_bar>.
double target_state_fidelity(const Vec& psi, const GateSpec& spec,
                             const Vec& psi0);
double target_state_fidelity(const Mat& rho, const GateSpec& spec,
                             const Vec& psi0);

struct BinStat {
  double t = 0.0;
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  long n = 0;
};

struct TrajectoryOutcome {
  std::vector<double> bin_fidelity;
  double final_gate_fidelity = 0.0;
  double final_target_fidelity = 0.0;
  bool jumped = false;
  bool steered = false;
  std::string first_syndrome;
  double first_detect_time = -1.0;
  double detect_latency = -1.0;  // against an injected error, when configured
  EventLog events;
};

struct EnsembleReport {
  std::vector<BinStat> fidelity_curve;
  double final_gate_fidelity_mean = 0.0;
  double final_gate_fidelity_se = 0.0;
  double final_target_fidelity_mean = 0.0;
  double final_target_fidelity_se = 0.0;
  long trajectories = 0;
  long jumped = 0;
  long steered = 0;
  std::vector<TrajectoryOutcome> outcomes;  // index order, always complete
  std::string config_echo;
};

// Runs config.trajectories independent trajectories with RNG streams derived
// from (seed, index); the outcome vector is index-ordered and deterministic
// under any thread count.
EnsembleReport run_ensemble(const RunConfig& config);

struct Prop1Point {
  double omega_over_kappa = 0.0;
  double mc_jump_fraction = 0.0;
  double analytic_jump_probability = 0.0;
  double binomial_se = 0.0;
  long n = 0;
};

// Monte Carlo vs closed-form confinement probability over the configured
// omega/kappa values (noise off, steering off, filter on).
std::vector<Prop1Point> prop1_sweep(const RunConfig& config);

struct SweepPoint {
  double value = 0.0;  // gamma (gamma sweep) or omega (omega sweep)
  double steer_mean = 0.0;
  double steer_se = 0.0;
  double nosteer_mean = 0.0;
  double nosteer_se = 0.0;
  long n = 0;
};

// Mean final target-state fidelity with and without steering, over the
// configured noise rates (GammaSweep) or rotation rates (OmegaSweep). Both
// arms share RNG streams (paired comparison).
std::vector<SweepPoint> fidelity_sweep(const RunConfig& config);

struct NoiseCompareCurve {
  std::string label;
  NoiseModel model;
  std::vector<BinStat> curve;
  double final_mean = 0.0;
  double final_se = 0.0;
};

// Gate-fidelity decay under static / 1f / white noise at matched decoherence
// rate; config.noise must be the static reference.
std::vector<NoiseCompareCurve> noise_compare(const RunConfig& config);

}  // namespace zenogate
