#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zenogate/geometry.hpp"
#include "zenogate/linalg.hpp"
#include "zenogate/noise.hpp"
#include "zenogate/rng.hpp"

namespace zenogate {

// Continuous measurement currents Q_j(t_k) = <g_j(t_k)> + dW/(2 sqrt(kappa) dt),
// one sample per generator per step when retention is enabled.
struct MeasurementRecord {
  double dt = 0.0;
  int n_generators = 0;
  std::vector<double> samples;  // layout: step-major, generator-minor

  long steps() const {
    return n_generators ? static_cast<long>(samples.size()) / n_generators : 0;
  }
  double q(long step, int gen) const { return samples[step * n_generators + gen]; }
};

struct Event {
  enum class Kind {
    InjectedJump,
    DetectedJump,
    PathSwitch,
    PositivityWarning,
    UnrecognizedSyndrome,
  };
  Kind kind;
  double t = 0.0;
  std::string syndrome;
  std::string error;
  double value = 0.0;  // theta_tilde for PathSwitch, eigenvalue for warnings
};

using EventLog = std::vector<Event>;

std::string event_kind_name(Event::Kind kind);

// Receives every step's measurement currents; may request a path switch.
// Implemented by the syndrome filter + steering glue; the simulator itself
// stays agnostic of the decoding policy.
class Controller {
 public:
  virtual ~Controller() = default;
  // Called after the step covering (t, t + dt]; q holds that step's currents.
  virtual void on_step(double t_next, const std::vector<double>& q,
                       EventLog& log) = 0;
  // Non-empty when the controller wants the path changed (consumed once).
  virtual std::optional<PathState> take_path_switch() = 0;
  // Mirrors an applied switch so twin models stay in sync.
  virtual void on_path_applied(const PathState& path) = 0;
};

struct InjectedError {
  Pauli error;
  double time = 0.0;
};

struct SimOptions {
  double dt = 1e-3;
  bool density_mode = false;
  // Extra readout time after the loop closes; the path freezes at W(T), the
  // stabilizers stay measured and noise is off, so late jumps are still
  // detected. Metrics are evaluated at T.
  double settle_time = 0.0;
  bool record_currents = false;
  int fidelity_bins = 0;  // 0 disables the fidelity-vs-time trace
  std::optional<InjectedError> inject;
  Vec initial_state;  // defaults to |+_L> when empty
};

struct TrajectoryResult {
  bool density = false;
  Vec final_psi;   // lab frame at t = T (pure mode)
  Mat final_rho;   // lab frame at t = T (density mode)
  PathState final_path;
  EventLog events;
  MeasurementRecord record;
  std::vector<double> bin_times;
  std::vector<double> bin_fidelity;  // gate fidelity against psi_bar(t)
  double max_positivity_violation = 0.0;
};

// No-jump probability of Proposition-type confinement:
// 1/2 [ 1 + (1 - omega theta^2 / (2 pi kappa)) exp(-4 pi omega / kappa) ].
double confinement_probability(const GateSpec& spec);

// One Euler-Maruyama step of the stochastic Schroedinger equation
//   d psi = -kappa/2 sum_j (g_j - <g_j>)^2 psi dt
//           + sqrt(kappa) sum_j (g_j - <g_j>) psi dW_j
// with explicit renormalization. `generators` are the rotated generator
// matrices at the current time. Returns that step's currents through `q_out`.
void sse_step(Vec& psi, const std::vector<Mat>& generators, double kappa,
              double dt, Rng& rng, std::vector<double>* q_out = nullptr);

// One Euler-Maruyama step of the stochastic master equation
//   d rho = sum_d gamma_d D[A_d] rho dt + kappa sum_j D[g_j] rho dt
//           + sqrt(kappa) sum_j H[g_j] rho dW_j
// followed by Hermitization and trace renormalization.
void sme_step(Mat& rho, const std::vector<Mat>& generators,
              const std::vector<std::pair<double, Mat>>& dissipators,
              double kappa, double dt, Rng& rng,
              std::vector<double>* q_out = nullptr);

// Superoperators D[A] rho = A rho A^dag - 1/2 {A^dag A, rho} and
// H[A] rho = A rho + rho A^dag - 2 Re<A> rho.
Mat dissipator_superop(const Mat& a, const Mat& rho);
Mat measurement_superop(const Mat& a, const Mat& rho);

// Integrates one trajectory of the measurement-driven dynamics from the code
// state at t=0 to t=T (plus settle), with optional noise, injected error,
// controller-driven path steering and current recording. Deterministic given
// the RNG stream.
TrajectoryResult run_trajectory(const GateSpec& spec, const NoiseModel& noise,
                                const SimOptions& options, Controller* controller,
                                Rng rng);

}  // namespace zenogate
