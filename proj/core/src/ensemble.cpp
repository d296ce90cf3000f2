#include "zenogate/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>

#include "zenogate/filter.hpp"

namespace zenogate {

namespace {

Vec reference_state(const GateSpec& spec, double t, const Vec& psi0) {
  PathEngine engine(spec);
  Vec out(psi0.size());
  engine.apply_u(t, psi0, out);
  return out;
}

std::vector<Vec> target_states(const GateSpec& spec, const Vec& psi0) {
  // E G |psi_bar> for E in correctable set, X, and X * correctable set.
  PauliAction h(spec.H);
  Vec tmp(psi0.size());
  h.apply(psi0, tmp);
  const Vec g_psi = std::cos(spec.theta) * psi0 +
                    cplx(0, std::sin(spec.theta)) * tmp;
  std::vector<Pauli> frames = spec.code.correctable;
  if (frames.empty()) frames.push_back(Pauli::identity(spec.code.n));
  frames.push_back(spec.X);
  for (const Pauli& e : spec.code.correctable)
    if (!e.is_identity()) frames.push_back(e * spec.X);
  std::vector<Vec> out;
  out.reserve(frames.size());
  Vec v(psi0.size());
  for (const Pauli& e : frames) {
    PauliAction(e).apply(g_psi, v);
    out.push_back(v);
  }
  return out;
}

void mean_and_se(const std::vector<double>& xs, double& mean, double& se) {
  const long n = static_cast<long>(xs.size());
  if (n == 0) {
    mean = se = 0.0;
    return;
  }
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / n;
  double m2 = 0.0;
  for (double x : xs) m2 += (x - mean) * (x - mean);
  se = n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0;
}

// Index-deterministic parallel map: outcomes land in a preallocated vector,
// so aggregation order never depends on the thread count.
void parallel_for_index(long n, int threads,
                        const std::function<void(long)>& body) {
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers == 1 || n < 2) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const long i = next.fetch_add(1);
        if (i >= n) break;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
          break;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct EnsembleContext {
  GateSpec spec;
  NoiseModel noise;
  SimOptions options;
  Vec psi0;
  std::unique_ptr<DecodeTable> table;
  FilterParams filter;
  bool filter_enabled = false;
  bool steering = false;
  uint64_t seed = 0;
  bool keep_events = false;
};

TrajectoryOutcome run_one(const EnsembleContext& ctx, long index) {
  TrajectoryOutcome outcome;
  std::unique_ptr<SteeringController> controller;
  if (ctx.filter_enabled)
    controller = std::make_unique<SteeringController>(
        ctx.spec, ctx.noise, ctx.table.get(), ctx.filter, ctx.steering);
  TrajectoryResult result =
      run_trajectory(ctx.spec, ctx.noise, ctx.options, controller.get(),
                     Rng::for_trajectory(ctx.seed, static_cast<uint64_t>(index)));
  outcome.bin_fidelity = result.bin_fidelity;
  const double T = ctx.spec.total_time();
  if (result.density) {
    outcome.final_gate_fidelity = gate_fidelity(result.final_rho, ctx.spec, T,
                                                ctx.psi0);
    outcome.final_target_fidelity =
        target_state_fidelity(result.final_rho, ctx.spec, ctx.psi0);
  } else {
    outcome.final_gate_fidelity = gate_fidelity(result.final_psi, ctx.spec, T,
                                                ctx.psi0);
    outcome.final_target_fidelity =
        target_state_fidelity(result.final_psi, ctx.spec, ctx.psi0);
  }
  outcome.steered = result.final_path.steered;
  if (controller) {
    outcome.jumped = controller->jump_detected();
    if (outcome.jumped) {
      outcome.first_syndrome = controller->jumps().front().syndrome.to_string();
      outcome.first_detect_time = controller->jumps().front().detect_time;
      if (ctx.options.inject)
        outcome.detect_latency =
            outcome.first_detect_time - ctx.options.inject->time;
    }
  }
  if (ctx.keep_events) outcome.events = std::move(result.events);
  return outcome;
}

EnsembleContext make_context(const RunConfig& config) {
  EnsembleContext ctx;
  ctx.spec = config.gate_spec();
  ctx.noise = config.noise;
  ctx.options = config.sim_options();
  ctx.psi0 = ctx.options.initial_state;
  ctx.filter = config.filter;
  ctx.filter_enabled = config.filter.enabled;
  ctx.steering = config.steering;
  ctx.seed = config.seed;
  ctx.keep_events = config.events;
  if (ctx.filter_enabled)
    ctx.table = std::make_unique<DecodeTable>(
        build_decode_table(config.code, config.h, config.x));
  return ctx;
}

EnsembleReport aggregate(const RunConfig& config,
                         std::vector<TrajectoryOutcome> outcomes,
                         const GateSpec& spec) {
  EnsembleReport report;
  report.trajectories = static_cast<long>(outcomes.size());
  report.config_echo = config.echo_json();

  std::vector<double> finals_gate, finals_target;
  for (const auto& o : outcomes) {
    finals_gate.push_back(o.final_gate_fidelity);
    finals_target.push_back(o.final_target_fidelity);
    if (o.jumped) ++report.jumped;
    if (o.steered) ++report.steered;
  }
  mean_and_se(finals_gate, report.final_gate_fidelity_mean,
              report.final_gate_fidelity_se);
  mean_and_se(finals_target, report.final_target_fidelity_mean,
              report.final_target_fidelity_se);

  if (!outcomes.empty() && !outcomes.front().bin_fidelity.empty()) {
    const size_t bins = outcomes.front().bin_fidelity.size();
    const double T = spec.total_time();
    const long loop_steps = std::max<long>(1, std::llround(T / config.dt));
    const long stride = config.bins > 0
                            ? std::max<long>(1, loop_steps / config.bins)
                            : loop_steps;
    report.fidelity_curve.resize(bins);
    std::vector<double> column;
    column.reserve(outcomes.size());
    for (size_t b = 0; b < bins; ++b) {
      column.clear();
      for (const auto& o : outcomes)
        if (b < o.bin_fidelity.size()) column.push_back(o.bin_fidelity[b]);
      BinStat& stat = report.fidelity_curve[b];
      // Bin 0 is t=0; afterwards every `stride` steps, last bin at T.
      const long step_index = b == 0 ? 0 : std::min<long>(b * stride, loop_steps);
      stat.t = static_cast<double>(step_index) * (T / loop_steps);
      stat.n = static_cast<long>(column.size());
      mean_and_se(column, stat.mean, stat.stderr_of_mean);
    }
  }
  report.outcomes = std::move(outcomes);
  return report;
}

}  // namespace

double gate_fidelity(const Vec& psi, const GateSpec& spec, double t,
                     const Vec& psi0) {
  const Vec ref = reference_state(spec, t, psi0);
  return std::norm(ref.dot(psi));
}

double gate_fidelity(const Mat& rho, const GateSpec& spec, double t,
                     const Vec& psi0) {
  const Vec ref = reference_state(spec, t, psi0);
  return (ref.adjoint() * rho * ref)(0, 0).real();
}

double target_state_fidelity(const Vec& psi, const GateSpec& spec,
                             const Vec& psi0) {
  double best = 0.0;
  for (const Vec& target : target_states(spec, psi0))
    best = std::max(best, std::norm(target.dot(psi)));
  return best;
}

double target_state_fidelity(const Mat& rho, const GateSpec& spec,
                             const Vec& psi0) {
  double best = 0.0;
  for (const Vec& target : target_states(spec, psi0))
    best = std::max(best, (target.adjoint() * rho * target)(0, 0).real());
  return best;
}

EnsembleReport run_ensemble(const RunConfig& config) {
  EnsembleContext ctx = make_context(config);
  std::vector<TrajectoryOutcome> outcomes(config.trajectories);
  parallel_for_index(config.trajectories, config.threads,
                     [&](long i) { outcomes[i] = run_one(ctx, i); });
  return aggregate(config, std::move(outcomes), ctx.spec);
}

std::vector<Prop1Point> prop1_sweep(const RunConfig& config) {
  if (config.noise.kind != NoiseModel::Kind::None)
    throw ConfigError("prop1 requires the trivial noise model (gamma = 0)");
  std::vector<Prop1Point> points;
  for (double ratio : config.experiment.values) {
    RunConfig point_config = config;
    point_config.omega = ratio * config.kappa;
    point_config.steering = false;
    point_config.bins = 0;
    point_config.experiment.kind = ExperimentSpec::Kind::Curve;
    const EnsembleReport report = run_ensemble(point_config);
    Prop1Point point;
    point.omega_over_kappa = ratio;
    point.n = report.trajectories;
    point.mc_jump_fraction =
        static_cast<double>(report.jumped) / report.trajectories;
    point.analytic_jump_probability =
        1.0 - confinement_probability(point_config.gate_spec());
    point.binomial_se = std::sqrt(point.mc_jump_fraction *
                                  (1.0 - point.mc_jump_fraction) /
                                  report.trajectories);
    points.push_back(point);
  }
  return points;
}

std::vector<SweepPoint> fidelity_sweep(const RunConfig& config) {
  const bool omega_sweep =
      config.experiment.kind == ExperimentSpec::Kind::OmegaSweep;
  std::vector<SweepPoint> points;
  for (double value : config.experiment.values) {
    RunConfig point_config = config;
    point_config.bins = 0;
    point_config.experiment.kind = ExperimentSpec::Kind::Curve;
    if (omega_sweep)
      point_config.omega = value * config.kappa;
    else
      point_config.noise.gamma = value * config.kappa;
    SweepPoint point;
    point.value = value;
    point_config.steering = true;
    {
      const EnsembleReport r = run_ensemble(point_config);
      point.steer_mean = r.final_target_fidelity_mean;
      point.steer_se = r.final_target_fidelity_se;
      point.n = r.trajectories;
    }
    point_config.steering = false;
    {
      const EnsembleReport r = run_ensemble(point_config);
      point.nosteer_mean = r.final_target_fidelity_mean;
      point.nosteer_se = r.final_target_fidelity_se;
    }
    points.push_back(point);
  }
  return points;
}

std::vector<NoiseCompareCurve> noise_compare(const RunConfig& config) {
  if (config.noise.kind != NoiseModel::Kind::Static)
    throw ConfigError("noise_compare requires a static reference noise model");
  const double T = config.gate_spec().total_time();
  const DecoherenceRate reference = decoherence_rate(config.noise, T);

  std::vector<std::pair<std::string, NoiseModel>> models;
  models.emplace_back("static", config.noise);
  for (double lifetime : config.experiment.pulse_lifetimes) {
    NoiseModel target = NoiseModel::one_over_f(
        1.0, config.experiment.pulse_rate, lifetime, config.noise.axis);
    models.emplace_back("one_over_f_tau_" + std::to_string(lifetime),
                        match_strength(reference, target, T));
  }
  models.emplace_back(
      "white", match_strength(reference, NoiseModel::white(1.0, config.noise.axis), T));

  std::vector<NoiseCompareCurve> curves;
  for (const auto& [label, model] : models) {
    RunConfig point_config = config;
    point_config.noise = model;
    point_config.steering = false;
    point_config.filter.enabled = false;
    point_config.experiment.kind = ExperimentSpec::Kind::Curve;
    const EnsembleReport report = run_ensemble(point_config);
    NoiseCompareCurve curve;
    curve.label = label;
    curve.model = model;
    curve.curve = report.fidelity_curve;
    curve.final_mean = report.final_gate_fidelity_mean;
    curve.final_se = report.final_gate_fidelity_se;
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace zenogate
