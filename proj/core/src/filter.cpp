#include "zenogate/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace zenogate {

namespace {
constexpr double kPi = GateSpec::kPi;
}

EstimatorEngine::EstimatorEngine(const GateSpec& spec, const NoiseModel& noise,
                                 const FilterParams& params)
    : spec_(spec),
      noise_(noise),
      params_(params),
      gens_(spec.code),
      kernel_(spec_, gens_) {
  for (int q = 1; q <= spec.code.n; ++q)
    qubit_ops_.emplace_back(Pauli::single(spec.code.n, q, noise.axis), spec.H,
                            spec.X);
  reset();
}

void EstimatorEngine::reset() {
  // Maximally mixed code state P0 / 2^k; all generator expectations +1.
  const Mat frame = code_frame(spec_.code);
  reset_to(Mat(frame * frame.adjoint() / static_cast<double>(frame.cols())));
}

void EstimatorEngine::reset_to(const Mat& rho0) {
  sigma_ = rho0;
  const int n_gens = static_cast<int>(spec_.code.generators.size());
  expectations_.assign(n_gens, 1.0);
  c_h_.assign(n_gens, 0.0);
  for (int j = 0; j < n_gens; ++j)
    expectations_[j] = detail_expectation(j);
  raw_bits_.assign(n_gens, 0);
  for (int j = 0; j < n_gens; ++j) raw_bits_[j] = expectations_[j] < 0 ? 1 : 0;
  accepted_.bits = raw_bits_;
  pending_ = accepted_;
  has_pending_ = false;
  pending_since_ = -1.0;
  path_ = PathState::base();
}

double EstimatorEngine::detail_expectation(int j) {
  if (!gens_.diag[j].empty()) {
    double m = 0.0;
    const auto& s = gens_.diag[j];
    for (int i = 0; i < sigma_.rows(); ++i) m += s[i] * sigma_(i, i).real();
    return m;
  }
  Mat tmp;
  gens_.actions[j].left_multiply(sigma_, tmp);
  return tmp.trace().real();
}

void EstimatorEngine::step(const std::vector<double>& q_mean, double t,
                           double delta, bool frozen) {
  const int n_gens = static_cast<int>(spec_.code.generators.size());
  kernel_.begin();
  if (!frozen) {
    double wh = spec_.omega_h();
    if (path_.steered && t >= path_.tau)
      wh += path_.theta_tilde * spec_.omega / (2.0 * kPi);
    kernel_.accumulate_drive(sigma_, wh, t, delta);
  }
  // Innovation coefficient 2 kappa (Q - <g>_hat) delta on the H superoperator.
  for (int j = 0; j < n_gens; ++j)
    c_h_[j] = 2.0 * spec_.kappa * (q_mean[j] - expectations_[j]) * delta;
  kernel_.accumulate_measurement(sigma_, spec_.kappa * delta, c_h_,
                                 expectations_);

  // Noise superoperator of the model plus the receptivity floor. Both use
  // path-rotated single-qubit flips; the frame freezes with the path.
  const bool model_dissipators = !frozen && !noise_.hamiltonian() &&
                                 noise_.kind != NoiseModel::Kind::None &&
                                 noise_.gamma > 0;
  const double seed = params_.seed_rate * spec_.kappa;
  if (model_dissipators || seed > 0) {
    const double t_rot = std::min(t, spec_.total_time());
    double h_angle = spec_.omega_h() * t_rot;
    if (path_.steered && t_rot >= path_.tau)
      h_angle += path_.theta_tilde * spec_.omega / (2.0 * kPi) * (t_rot - path_.tau);
    const double x_angle = spec_.omega * t_rot;
    const double rate = (model_dissipators ? noise_.gamma : 0.0) + seed;
    for (auto& op : qubit_ops_) {
      op.update(h_angle, x_angle);
      op.accumulate_dissipator(kernel_.acc(), sigma_, rate * delta,
                               kernel_.scratch1(), kernel_.scratch2());
    }
  }
  kernel_.finish(sigma_);
  for (int j = 0; j < n_gens; ++j) expectations_[j] = detail_expectation(j);
}

const Syndrome& EstimatorEngine::read_syndrome(double t) {
  const double thr = params_.threshold;
  for (size_t j = 0; j < raw_bits_.size(); ++j) {
    if (expectations_[j] < -thr)
      raw_bits_[j] = 1;
    else if (expectations_[j] > thr)
      raw_bits_[j] = 0;
    // dead band: previous value retained
  }
  Syndrome raw;
  raw.bits = raw_bits_;
  if (raw == accepted_) {
    has_pending_ = false;
    return accepted_;
  }
  if (!has_pending_ || !(raw == pending_)) {
    pending_ = raw;
    pending_since_ = t;
    has_pending_ = true;
    return accepted_;
  }
  if (t - pending_since_ >= params_.hold) {
    accepted_ = pending_;
    has_pending_ = false;
  }
  return accepted_;
}

std::optional<JumpEvent> detect_jump(const Syndrome& previous,
                                     const Syndrome& current, double detect_time,
                                     double tau_estimate,
                                     const DecodeTable* table) {
  if (previous == current) return std::nullopt;
  JumpEvent event;
  event.detect_time = detect_time;
  event.tau_estimate = tau_estimate;
  event.syndrome = current;
  event.decoded = table != nullptr ? table->find(current) : nullptr;
  return event;
}

SteeringController::SteeringController(const GateSpec& spec,
                                       const NoiseModel& noise,
                                       const DecodeTable* table,
                                       const FilterParams& params,
                                       bool steering_enabled)
    : spec_(spec),
      table_(table),
      params_(params),
      steering_enabled_(steering_enabled),
      estimator_(std::make_unique<EstimatorEngine>(spec, noise, params)) {
  const int n_gens = static_cast<int>(spec.code.generators.size());
  q_accum_.assign(n_gens, 0.0);
  last_syndrome_.bits.assign(n_gens, 0);
}

void SteeringController::on_step(double t_next, const std::vector<double>& q,
                                 EventLog& log) {
  for (size_t j = 0; j < q_accum_.size(); ++j) q_accum_[j] += q[j];
  ++accum_count_;
  if (accum_count_ < params_.stride) return;

  const double delta = t_next - last_estimator_time_;
  for (double& v : q_accum_) v /= accum_count_;
  const bool frozen = t_next > spec_.total_time() + 1e-12;
  estimator_->step(q_accum_, last_estimator_time_, delta, frozen);
  q_accum_.assign(q_accum_.size(), 0.0);
  accum_count_ = 0;
  last_estimator_time_ = t_next;

  if (keep_trace_) {
    trace_times_.push_back(t_next);
    trace_expectations_.push_back(estimator_->expectations());
  }

  const double window_start = estimator_->pending_since();
  const Syndrome& syn = estimator_->read_syndrome(t_next);
  if (auto event = detect_jump(last_syndrome_, syn, t_next,
                               window_start >= 0 ? window_start : t_next,
                               table_)) {
    last_syndrome_ = syn;
    jumps_.push_back(*event);
    log.push_back({event->decoded ? Event::Kind::DetectedJump
                                  : Event::Kind::UnrecognizedSyndrome,
                   t_next, syn.to_string(),
                   event->decoded ? event->decoded->error.to_string() : "", 0.0});
    // Single-jump policy: only the first accepted nontrivial syndrome steers.
    if (steering_enabled_ && !steer_consumed_ && !syn.trivial() &&
        event->decoded != nullptr) {
      steer_consumed_ = true;
      const double tau = std::min(event->tau_estimate, spec_.total_time());
      if (tau < spec_.total_time()) {
        if (auto decision = steer(syn, tau, spec_, *table_)) {
          if (decision->new_path.steered) pending_switch_ = decision->new_path;
        }
      }
    }
  }
}

std::optional<PathState> SteeringController::take_path_switch() {
  auto out = pending_switch_;
  pending_switch_.reset();
  return out;
}

void SteeringController::on_path_applied(const PathState& path) {
  estimator_->set_path(path);
}

}  // namespace zenogate
