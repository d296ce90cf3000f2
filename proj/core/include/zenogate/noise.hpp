#pragma once

#include <vector>

#include "zenogate/linalg.hpp"
#include "zenogate/pauli.hpp"
#include "zenogate/rng.hpp"

namespace zenogate {

// Error channels acting on the physical qubits along a fixed axis:
//  - Static: constant Hamiltonian amplitudes drawn once per run,
//  - OneOverF: a single effective fluctuator, sum of exponentially decaying
//    pulses with Poisson arrivals,
//  - White: delta-correlated Hamiltonian noise (Lindblad-equivalent),
//  - BitFlipJumps: Markovian Pauli jumps at a uniform rate.
struct NoiseModel {
  enum class Kind { None, Static, OneOverF, White, BitFlipJumps };

  Kind kind = Kind::None;
  double epsilon = 0.0;         // Static / OneOverF max amplitude
  double pulse_rate = 0.0;      // OneOverF arrivals per unit time
  double pulse_lifetime = 0.0;  // OneOverF pulse decay time
  double gamma = 0.0;           // White / BitFlipJumps rate
  char axis = 'X';

  static NoiseModel none() { return {}; }
  static NoiseModel static_noise(double epsilon, char axis = 'X');
  static NoiseModel one_over_f(double epsilon, double pulse_rate,
                               double pulse_lifetime, char axis = 'X');
  static NoiseModel white(double gamma, char axis = 'X');
  static NoiseModel bitflip_jumps(double gamma, char axis = 'X');

  bool hamiltonian() const {
    return kind == Kind::Static || kind == Kind::OneOverF;
  }
  void validate() const;
};

struct Pulse {
  double time;
  double amplitude;
};

// Sampled amplitude functions lambda_j(t) for the Hamiltonian models; empty
// for White/BitFlipJumps. Immutable after sampling.
struct NoiseRealization {
  std::vector<double> static_values;       // one per qubit (Static)
  std::vector<std::vector<Pulse>> pulses;  // per qubit, time-ordered (OneOverF)
  double pulse_lifetime = 0.0;

  // lambda_j(t); O(#pulses) evaluation, used by tests and slow paths.
  double amplitude(int qubit, double t) const;
};

// For the 1/f model, pulse arrivals are sampled from -10*lifetime so the
// process is stationary at t = 0 (pulses born earlier are still decaying).
NoiseRealization sample_realization(const NoiseModel& model, int n_qubits,
                                    double total_time, double grid_dt, Rng& rng);

// O(1)-per-step evaluator: lambda(t+dt) = e^{-dt/tau} lambda(t) + new pulses.
class FluctuatorTrace {
 public:
  FluctuatorTrace(const NoiseRealization& realization, int qubit);
  double advance_to(double t);

 private:
  const std::vector<Pulse>* pulses_ = nullptr;
  double lifetime_ = 0.0;
  double value_ = 0.0;
  double t_ = 0.0;
  size_t next_ = 0;
};

// Accumulated decoherence rate (time integral of the bath correlation
// function) over the horizon T.
struct DecoherenceRate {
  double value = 0.0;
};

// Gamma_static = eps^2 T / 3; Gamma_1/f = (eps^2/3)(rate*tau^2/2)(1-e^{-T/tau});
// Gamma_white = gamma (coherence-decay matching fixes the delta convention).
DecoherenceRate decoherence_rate(const NoiseModel& model, double total_time);

// Rescales the model amplitude so its decoherence rate over the horizon
// matches the reference:
//   static:  eps = sqrt(3 Gamma / T)
//   1/f:     eps = eps_static sqrt(2T/(rate tau^2)) evaluated from Gamma
//   white / bitflip: gamma = Gamma
NoiseModel match_strength(DecoherenceRate reference, const NoiseModel& target,
                          double total_time);

struct HamiltonianTerm {
  int qubit;          // 1-based
  double amplitude;   // coefficient of sigma^axis_qubit
};
struct Dissipator {
  double rate;
  Pauli op;
};

struct NoiseTerms {
  std::vector<HamiltonianTerm> hamiltonian;
  std::vector<Dissipator> dissipators;
};

// Descriptor of the generator at time t: Hamiltonian terms for Static/1f,
// dissipators for White/BitFlipJumps.
NoiseTerms noise_generator(const NoiseModel& model,
                           const NoiseRealization& realization, int n_qubits,
                           double t);

// One Euler step of rho + sum_j gamma_j (A rho A^dag - 1/2 {A^dag A, rho}) dt.
// Preserves the trace to 1e-10 per step; throws on larger drift.
Mat lindblad_oracle_step(const Mat& rho, const std::vector<Dissipator>& dissipators,
                         double dt);

}  // namespace zenogate
