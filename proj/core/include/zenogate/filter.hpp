#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "zenogate/density_kernel.hpp"
#include "zenogate/geometry.hpp"
#include "zenogate/noise.hpp"
#include "zenogate/sde.hpp"
#include "zenogate/steer.hpp"

namespace zenogate {

struct FilterParams {
  bool enabled = true;
  double threshold = 0.8;  // hysteresis band on the smoothed expectations
  double hold = 5.0;       // time a changed syndrome must persist (units 1/kappa)
  int stride = 5;          // estimator steps once per `stride` integrator steps
  // Regularization floor: a weak bit-flip dissipator (rate seed_rate * kappa)
  // inside the estimator only. Without it, an estimator whose noise model is
  // trivial assigns exactly zero weight to environmental-error sectors and
  // can never move there, whatever the record says.
  double seed_rate = 1e-6;
};

struct JumpEvent {
  double detect_time = 0.0;   // when the changed syndrome was accepted
  double tau_estimate = 0.0;  // start of the sustained window (used as tau)
  Syndrome syndrome;
  const DecodeEntry* decoded = nullptr;  // null when unknown
};

// Twin-model syndrome filter: integrates the estimator master equation
//   d rho_hat = L_N[rho_hat] dt + kappa sum_j D[g_j(t)] rho_hat dt
//               + 2 kappa sum_j H[g_j(t)] rho_hat (Q_j - <g_j>_hat) dt
// in the rotating frame, starting from the maximally mixed code state.
class EstimatorEngine {
 public:
  EstimatorEngine(const GateSpec& spec, const NoiseModel& noise,
                  const FilterParams& params);

  void reset();

  // Consumes the mean current over (t - delta, t]; `frozen` freezes the path
  // (settle window after the loop closes).
  void step(const std::vector<double>& q_mean, double t, double delta,
            bool frozen);

  void set_path(const PathState& path) { path_ = path; }

  // Smoothed expectations <g_j>_rho_hat after the last step.
  const std::vector<double>& expectations() const { return expectations_; }

  // Thresholded syndrome with per-bit dead band and a vector-level hold:
  // a changed syndrome is accepted only after staying stable for `hold`.
  const Syndrome& read_syndrome(double t);
  double pending_since() const { return pending_since_; }

  const Mat& rho_hat() const { return sigma_; }
  // Initializes from an arbitrary code-space state instead of the maximally
  // mixed one (used by the initialization-independence check).
  void reset_to(const Mat& rho0);

 private:
  double detail_expectation(int j);

  GateSpec spec_;
  NoiseModel noise_;
  FilterParams params_;
  PathState path_;
  detail::GeneratorSet gens_;
  detail::RotFrameKernel kernel_;
  std::vector<detail::RotatedPauliCache> qubit_ops_;
  Mat sigma_;
  std::vector<double> expectations_;
  std::vector<double> c_h_;
  std::vector<uint8_t> raw_bits_;
  Syndrome accepted_;
  Syndrome pending_;
  double pending_since_ = -1.0;
  bool has_pending_ = false;
};

// Jump event when the accepted syndrome changed between two readouts.
std::optional<JumpEvent> detect_jump(const Syndrome& previous,
                                     const Syndrome& current, double detect_time,
                                     double tau_estimate,
                                     const DecodeTable* table);

// Filter + decode + steer glue driving a trajectory. Applies the single-jump
// policy: the first accepted nontrivial syndrome decides the path change;
// later changes are logged but never steer again.
class SteeringController : public Controller {
 public:
  SteeringController(const GateSpec& spec, const NoiseModel& noise,
                     const DecodeTable* table, const FilterParams& params,
                     bool steering_enabled);

  void on_step(double t_next, const std::vector<double>& q,
               EventLog& log) override;
  std::optional<PathState> take_path_switch() override;
  void on_path_applied(const PathState& path) override;

  bool jump_detected() const { return !jumps_.empty(); }
  const std::vector<JumpEvent>& jumps() const { return jumps_; }
  const EstimatorEngine& estimator() const { return *estimator_; }

  // Optional expectation-trace retention (one row per estimator step).
  void enable_trace() { keep_trace_ = true; }
  const std::vector<double>& trace_times() const { return trace_times_; }
  const std::vector<std::vector<double>>& trace_expectations() const {
    return trace_expectations_;
  }

 private:
  GateSpec spec_;
  const DecodeTable* table_;
  FilterParams params_;
  bool steering_enabled_;
  std::unique_ptr<EstimatorEngine> estimator_;
  std::vector<double> q_accum_;
  int accum_count_ = 0;
  double last_estimator_time_ = 0.0;
  Syndrome last_syndrome_;
  std::vector<JumpEvent> jumps_;
  bool steer_consumed_ = false;
  std::optional<PathState> pending_switch_;
  bool keep_trace_ = false;
  std::vector<double> trace_times_;
  std::vector<std::vector<double>> trace_expectations_;
};

}  // namespace zenogate
