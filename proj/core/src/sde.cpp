#include "zenogate/sde.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "zenogate/density_kernel.hpp"

namespace zenogate {

namespace {

constexpr double kPi = GateSpec::kPi;
using detail::hermitize_and_retrace;

}  // namespace

std::string event_kind_name(Event::Kind kind) {
  switch (kind) {
    case Event::Kind::InjectedJump: return "injected_jump";
    case Event::Kind::DetectedJump: return "detected_jump";
    case Event::Kind::PathSwitch: return "path_switch";
    case Event::Kind::PositivityWarning: return "positivity_warning";
    case Event::Kind::UnrecognizedSyndrome: return "unrecognized_syndrome";
  }
  return "unknown";
}

double confinement_probability(const GateSpec& spec) {
  const double ratio = spec.omega / spec.kappa;
  return 0.5 * (1.0 + (1.0 - ratio * spec.theta * spec.theta / (2.0 * kPi)) *
                          std::exp(-4.0 * kPi * ratio));
}

void sse_step(Vec& psi, const std::vector<Mat>& generators, double kappa,
              double dt, Rng& rng, std::vector<double>* q_out) {
  if (dt * kappa > 1e-2 + 1e-12)
    throw std::invalid_argument("sse_step requires dt * kappa <= 1e-2");
  const double sqrt_dt = std::sqrt(dt);
  const double sqrt_kappa = std::sqrt(kappa);
  Vec dpsi = Vec::Zero(psi.size());
  if (q_out) q_out->assign(generators.size(), 0.0);
  for (size_t j = 0; j < generators.size(); ++j) {
    const Vec gp = generators[j] * psi;
    const double m = psi.dot(gp).real();
    const Vec centered = gp - m * psi;
    const Vec centered2 = generators[j] * centered - m * centered;
    const double dw = rng.gaussian() * sqrt_dt;
    dpsi += -0.5 * kappa * dt * centered2 + sqrt_kappa * dw * centered;
    if (q_out) (*q_out)[j] = m + dw / (2.0 * sqrt_kappa * dt);
  }
  psi += dpsi;
  const double norm = psi.norm();
  if (norm < 1e-6)
    throw std::runtime_error("state norm collapsed; reduce the step size");
  psi /= norm;
}

void sme_step(Mat& rho, const std::vector<Mat>& generators,
              const std::vector<std::pair<double, Mat>>& dissipators,
              double kappa, double dt, Rng& rng, std::vector<double>* q_out) {
  if (dt * kappa > 1e-2 + 1e-12)
    throw std::invalid_argument("sme_step requires dt * kappa <= 1e-2");
  const double sqrt_dt = std::sqrt(dt);
  const double sqrt_kappa = std::sqrt(kappa);
  Mat acc = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& [rate, a] : dissipators)
    acc += rate * dt * dissipator_superop(a, rho);
  if (q_out) q_out->assign(generators.size(), 0.0);
  for (size_t j = 0; j < generators.size(); ++j) {
    const double dw = rng.gaussian() * sqrt_dt;
    const double m = (rho * generators[j]).trace().real();
    acc += kappa * dt * dissipator_superop(generators[j], rho);
    acc += sqrt_kappa * dw * measurement_superop(generators[j], rho);
    if (q_out) (*q_out)[j] = m + dw / (2.0 * sqrt_kappa * dt);
  }
  rho += acc;
  hermitize_and_retrace(rho);
}

Mat dissipator_superop(const Mat& a, const Mat& rho) {
  const Mat ada = a.adjoint() * a;
  return a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
}

Mat measurement_superop(const Mat& a, const Mat& rho) {
  const double mean = (rho * a).trace().real();
  return a * rho + rho * a.adjoint() - 2.0 * mean * rho;
}

namespace {

using detail::GeneratorSet;

// Lab-frame pure-state integrator. Rotated generators are applied as
// V(t) g_j V(t)^dag through analytic path rotations, never as dense matrices.
class PureStepper {
 public:
  PureStepper(const GateSpec& spec, PathEngine& engine, const GeneratorSet& gens)
      : spec_(spec), engine_(engine), gens_(gens), dim_(spec.dim()) {
    w_.resize(dim_);
    u_.resize(dim_);
    y_.resize(dim_);
    dpsi_.resize(dim_);
  }

  // Measurement + optional drive-frame noise terms over (t, t+dt].
  // RNG order per step: measurement dW per generator, then white-noise dW
  // per qubit.
  void step(Vec& psi, double t, double dt, bool frozen, Rng& rng,
            std::vector<double>& q) {
    const double kappa = spec_.kappa;
    const double sqrt_dt = std::sqrt(dt);
    const double sqrt_kappa = std::sqrt(kappa);
    dpsi_.setZero();
    if (!frozen) engine_.apply_v_dagger(t, psi, w_);
    const size_t n_gens = gens_.actions.size();
    for (size_t j = 0; j < n_gens; ++j) {
      if (frozen) {
        gens_.actions[j].apply(psi, y_);
      } else {
        gens_.actions[j].apply(w_, u_);
        engine_.apply_v(t, u_, y_);
      }
      const double m = psi.dot(y_).real();
      const double dw = rng.gaussian() * sqrt_dt;
      const double drift = -0.5 * kappa * dt;
      const double diff = sqrt_kappa * dw;
      // (g - m)^2 psi = (1 + m^2) psi - 2 m g psi for involutory g.
      const cplx c_psi = drift * (1.0 + m * m) - diff * m;
      const cplx c_y = drift * (-2.0 * m) + diff;
      dpsi_ += c_psi * psi + c_y * y_;
      q[j] = m + dw / (2.0 * sqrt_kappa * dt);
    }
    psi += dpsi_;
    const double norm = psi.norm();
    if (norm < 1e-6)
      throw std::runtime_error("state norm collapsed; reduce the step size");
    psi /= norm;
  }

 private:
  const GateSpec& spec_;
  PathEngine& engine_;
  const GeneratorSet& gens_;
  int dim_;
  Vec w_, u_, y_, dpsi_;
};

double clamp_small_negatives(Mat& rho, EventLog& log, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  const auto& vals = es.eigenvalues();
  double worst = 0.0;
  bool clamp = false;
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] < 0) {
      worst = std::min(worst, vals[i]);
      clamp = true;
    }
  }
  if (!clamp) return 0.0;
  if (worst < -1e-6)
    log.push_back({Event::Kind::PositivityWarning, t, "", "", worst});
  Eigen::VectorXd clamped = vals.cwiseMax(0.0);
  rho = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().adjoint();
  hermitize_and_retrace(rho);
  return -worst;
}

}  // namespace

TrajectoryResult run_trajectory(const GateSpec& spec, const NoiseModel& noise,
                                const SimOptions& options, Controller* controller,
                                Rng rng) {
  const double T = spec.total_time();
  if (options.dt <= 0) throw std::invalid_argument("dt must be positive");
  if (options.dt * spec.kappa > 1e-2 + 1e-12)
    throw std::invalid_argument("dt * kappa must not exceed 1e-2");
  const long loop_steps = std::max<long>(1, std::llround(T / options.dt));
  const double dt = T / static_cast<double>(loop_steps);
  const long settle_steps =
      options.settle_time > 0 ? std::llround(options.settle_time / dt) : 0;
  const int dim = spec.dim();
  const int n_gens = static_cast<int>(spec.code.generators.size());

  TrajectoryResult result;
  result.density = options.density_mode;
  result.final_path = PathState::base();

  PathEngine engine(spec);
  PathEngine reference(spec);  // base path, for psi_bar(t)
  GeneratorSet gens(spec.code);

  Vec psi0 = options.initial_state.size() ? options.initial_state
                                          : logical_plus(spec.code);
  if (std::abs(psi0.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("initial state must be normalized");

  Vec psi;
  Mat sigma;
  if (options.density_mode) {
    sigma = psi0 * psi0.adjoint();
  } else {
    psi = psi0;
  }

  // Per-qubit Markovian jump clocks (pure mode realization of bitflip noise).
  std::vector<double> next_jump(spec.code.n,
                                std::numeric_limits<double>::infinity());
  std::vector<PauliAction> qubit_ops;
  const bool jump_mode =
      noise.kind == NoiseModel::Kind::BitFlipJumps && !options.density_mode;
  const bool white_mode = noise.kind == NoiseModel::Kind::White;
  NoiseRealization realization;
  std::vector<FluctuatorTrace> traces;
  if (noise.kind != NoiseModel::Kind::None) {
    for (int q = 1; q <= spec.code.n; ++q)
      qubit_ops.emplace_back(Pauli::single(spec.code.n, q, noise.axis));
    if (noise.hamiltonian()) {
      realization = sample_realization(noise, spec.code.n, T, dt, rng);
      for (int q = 0; q < spec.code.n; ++q) traces.emplace_back(realization, q);
    }
    if (jump_mode && noise.gamma > 0)
      for (int q = 0; q < spec.code.n; ++q)
        next_jump[q] = rng.exponential(noise.gamma);
  }

  PureStepper pure(spec, engine, gens);
  detail::RotFrameKernel density(spec, gens);
  auto effective_wh = [&](double t) {
    const PathState& p = engine.path();
    double wh = spec.omega_h();
    if (p.steered && t >= p.tau) wh += p.theta_tilde * spec.omega / (2.0 * kPi);
    return wh;
  };

  if (options.record_currents) {
    result.record.dt = dt;
    result.record.n_generators = n_gens;
    result.record.samples.reserve((loop_steps + settle_steps) * n_gens);
  }

  const long bin_stride =
      options.fidelity_bins > 0 ? std::max<long>(1, loop_steps / options.fidelity_bins)
                                : 0;
  Vec psi_bar(dim), frame_ref(dim);
  auto sample_fidelity = [&](double t) {
    reference.apply_u(t, psi0, psi_bar);
    double f;
    if (options.density_mode) {
      engine.apply_v_dagger(t, psi_bar, frame_ref);
      f = (frame_ref.adjoint() * sigma * frame_ref)(0, 0).real();
    } else {
      f = std::norm(psi_bar.dot(psi));
    }
    result.bin_times.push_back(t);
    result.bin_fidelity.push_back(f);
  };
  if (bin_stride > 0) sample_fidelity(0.0);

  std::vector<double> q(n_gens, 0.0);
  std::vector<double> c_h(n_gens, 0.0);
  std::vector<double> means(n_gens, 0.0);
  bool injected_done = !options.inject.has_value();
  const double sqrt_kappa = std::sqrt(spec.kappa);

  auto apply_error_pure = [&](const Pauli& e) {
    Vec tmp(dim);
    PauliAction(e).apply(psi, tmp);
    psi = tmp;
  };
  auto apply_error_density = [&](const Pauli& e, double t) {
    // sigma lives in the rotating frame; conjugate by W^dag E W.
    PauliCombo rotated = engine.rotated(e, t);
    Mat tmp(dim, dim), tmp2(dim, dim);
    rotated.left_multiply(sigma, tmp);
    rotated.adjoint().right_multiply(tmp, tmp2);
    sigma = tmp2;
    hermitize_and_retrace(sigma);
  };

  const long total_steps = loop_steps + settle_steps;
  long next_positivity_check = 1000;
  for (long step = 0; step < total_steps; ++step) {
    const bool frozen = step >= loop_steps;
    const double t = frozen ? T : static_cast<double>(step) * dt;
    const double t_next =
        frozen ? T : static_cast<double>(step + 1) * dt;

    if (!injected_done && !frozen &&
        options.inject->time <= static_cast<double>(step + 1) * dt) {
      if (options.density_mode)
        apply_error_density(options.inject->error, t);
      else
        apply_error_pure(options.inject->error);
      result.events.push_back({Event::Kind::InjectedJump, t, "",
                               options.inject->error.to_string(), 0.0});
      injected_done = true;
    }

    if (options.density_mode) {
      density.begin();
      if (!frozen) density.accumulate_drive(sigma, effective_wh(t), t, dt);
      // Means before the update define this step's currents.
      const double sqrt_dt = std::sqrt(dt);
      for (int j = 0; j < n_gens; ++j) {
        const double dw = rng.gaussian() * sqrt_dt;
        c_h[j] = sqrt_kappa * dw;
        q[j] = dw;  // finished below once the mean is known
      }
      density.accumulate_measurement(sigma, spec.kappa * dt, c_h, means);
      for (int j = 0; j < n_gens; ++j)
        q[j] = means[j] + q[j] / (2.0 * sqrt_kappa * dt);
      if (!frozen && noise.kind != NoiseModel::Kind::None) {
        if (noise.hamiltonian()) {
          for (int qubit = 0; qubit < spec.code.n; ++qubit) {
            const double lambda = traces[qubit].advance_to(t);
            if (lambda != 0.0)
              density.accumulate_hamiltonian(
                  sigma, engine.rotated(qubit_ops[qubit].pauli(), t), lambda, dt);
          }
        } else {
          const double rate = noise.gamma;
          if (rate > 0)
            for (int qubit = 0; qubit < spec.code.n; ++qubit)
              density.accumulate_dissipator(
                  sigma, engine.rotated(qubit_ops[qubit].pauli(), t), rate, dt);
        }
      }
      density.finish(sigma);
      if (step + 1 >= next_positivity_check || step + 1 == total_steps) {
        result.max_positivity_violation =
            std::max(result.max_positivity_violation,
                     clamp_small_negatives(sigma, result.events, t_next));
        next_positivity_check += 1000;
      }
    } else {
      pure.step(psi, t, dt, frozen, rng, q);
      if (!frozen && noise.kind != NoiseModel::Kind::None) {
        if (noise.hamiltonian()) {
          Vec tmp(dim);
          for (int qubit = 0; qubit < spec.code.n; ++qubit) {
            const double lambda = traces[qubit].advance_to(t);
            if (lambda != 0.0) {
              qubit_ops[qubit].apply(psi, tmp);
              psi += cplx(0, -lambda * dt) * tmp;
            }
          }
          psi.normalize();
        } else if (white_mode && noise.gamma > 0) {
          // d psi = -(n sigma^2/2) psi dt - i sum_q X_q psi dW_q,
          // dW ~ N(0, sigma^2 dt); the Ito realization of white noise.
          const double s2 = noise.gamma;
          Vec tmp(dim);
          Vec acc = -0.5 * s2 * dt * static_cast<double>(spec.code.n) * psi;
          for (int qubit = 0; qubit < spec.code.n; ++qubit) {
            const double dw = rng.gaussian() * std::sqrt(s2 * dt);
            qubit_ops[qubit].apply(psi, tmp);
            acc += cplx(0, -dw) * tmp;
          }
          psi += acc;
          psi.normalize();
        } else if (jump_mode && noise.gamma > 0) {
          for (int qubit = 0; qubit < spec.code.n; ++qubit) {
            while (next_jump[qubit] <= t_next) {
              Vec tmp(dim);
              qubit_ops[qubit].apply(psi, tmp);
              psi = tmp;
              result.events.push_back({Event::Kind::InjectedJump, next_jump[qubit],
                                       "", qubit_ops[qubit].pauli().to_string(),
                                       0.0});
              next_jump[qubit] += rng.exponential(noise.gamma);
            }
          }
        }
      }
    }

    if (options.record_currents)
      result.record.samples.insert(result.record.samples.end(), q.begin(), q.end());

    if (controller != nullptr) {
      controller->on_step(t_next, q, result.events);
      if (auto switch_to = controller->take_path_switch()) {
        if (!frozen) {
          engine.switch_path(*switch_to);
          result.final_path = *switch_to;
          result.events.push_back({Event::Kind::PathSwitch, t_next, "", "",
                                   switch_to->theta_tilde});
          controller->on_path_applied(*switch_to);
        }
      }
    }

    if (!frozen) {
      if (bin_stride > 0 && ((step + 1) % bin_stride == 0 || step + 1 == loop_steps))
        sample_fidelity(t_next);
      if (step + 1 == loop_steps) {
        // Snapshot the physical state at T before the settle window.
        if (options.density_mode) {
          const Mat w = path_unitary(spec, engine.path(), T);
          result.final_rho = w * sigma * w.adjoint();
        } else {
          result.final_psi = psi;
        }
      }
    }
  }
  if (loop_steps == 0) {
    if (options.density_mode)
      result.final_rho = sigma;
    else
      result.final_psi = psi;
  }
  return result;
}

}  // namespace zenogate
