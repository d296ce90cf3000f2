#include "zenogate/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace zenogate {

NoiseModel NoiseModel::static_noise(double epsilon, char axis) {
  NoiseModel m;
  m.kind = Kind::Static;
  m.epsilon = epsilon;
  m.axis = axis;
  m.validate();
  return m;
}

NoiseModel NoiseModel::one_over_f(double epsilon, double pulse_rate,
                                  double pulse_lifetime, char axis) {
  NoiseModel m;
  m.kind = Kind::OneOverF;
  m.epsilon = epsilon;
  m.pulse_rate = pulse_rate;
  m.pulse_lifetime = pulse_lifetime;
  m.axis = axis;
  m.validate();
  return m;
}

NoiseModel NoiseModel::white(double gamma, char axis) {
  NoiseModel m;
  m.kind = Kind::White;
  m.gamma = gamma;
  m.axis = axis;
  m.validate();
  return m;
}

NoiseModel NoiseModel::bitflip_jumps(double gamma, char axis) {
  NoiseModel m;
  m.kind = Kind::BitFlipJumps;
  m.gamma = gamma;
  m.axis = axis;
  m.validate();
  return m;
}

void NoiseModel::validate() const {
  if (epsilon < 0 || pulse_rate < 0 || pulse_lifetime < 0 || gamma < 0)
    throw std::invalid_argument("noise rates and amplitudes must be non-negative");
  if (axis != 'X' && axis != 'Y' && axis != 'Z')
    throw std::invalid_argument("noise axis must be X, Y or Z");
}

double NoiseRealization::amplitude(int qubit, double t) const {
  double value = 0.0;
  if (!static_values.empty()) value += static_values.at(qubit);
  if (!pulses.empty()) {
    for (const Pulse& p : pulses.at(qubit)) {
      if (p.time > t) break;
      value += p.amplitude * std::exp(-(t - p.time) / pulse_lifetime);
    }
  }
  return value;
}

NoiseRealization sample_realization(const NoiseModel& model, int n_qubits,
                                    double total_time, double /*grid_dt*/,
                                    Rng& rng) {
  NoiseRealization r;
  switch (model.kind) {
    case NoiseModel::Kind::Static:
      r.static_values.resize(n_qubits);
      for (double& v : r.static_values)
        v = rng.uniform(-model.epsilon, model.epsilon);
      break;
    case NoiseModel::Kind::OneOverF: {
      r.pulse_lifetime = model.pulse_lifetime;
      r.pulses.resize(n_qubits);
      if (model.pulse_rate <= 0) break;
      const double warmup = 10.0 * model.pulse_lifetime;
      for (auto& qubit_pulses : r.pulses) {
        double t = -warmup;
        while (true) {
          t += rng.exponential(model.pulse_rate);
          if (t > total_time) break;
          qubit_pulses.push_back({t, rng.uniform(-model.epsilon, model.epsilon)});
        }
      }
      break;
    }
    default:
      break;
  }
  return r;
}

FluctuatorTrace::FluctuatorTrace(const NoiseRealization& realization, int qubit)
    : lifetime_(realization.pulse_lifetime) {
  if (!realization.pulses.empty()) {
    pulses_ = &realization.pulses.at(qubit);
    // Fold in pulses born before t = 0 (stationary warm-up).
    while (next_ < pulses_->size() && (*pulses_)[next_].time <= 0.0) {
      value_ += (*pulses_)[next_].amplitude *
                std::exp((*pulses_)[next_].time / lifetime_);
      ++next_;
    }
  }
  if (!realization.static_values.empty())
    value_ += realization.static_values.at(qubit);
}

double FluctuatorTrace::advance_to(double t) {
  if (pulses_ == nullptr) return value_;  // static or empty: constant
  if (t > t_) {
    value_ *= std::exp(-(t - t_) / lifetime_);
    while (next_ < pulses_->size() && (*pulses_)[next_].time <= t) {
      value_ += (*pulses_)[next_].amplitude *
                std::exp(-(t - (*pulses_)[next_].time) / lifetime_);
      ++next_;
    }
    t_ = t;
  }
  return value_;
}

DecoherenceRate decoherence_rate(const NoiseModel& model, double total_time) {
  switch (model.kind) {
    case NoiseModel::Kind::Static:
      return {model.epsilon * model.epsilon * total_time / 3.0};
    case NoiseModel::Kind::OneOverF: {
      const double tau = model.pulse_lifetime;
      if (tau <= 0 || model.pulse_rate <= 0) return {0.0};
      return {model.epsilon * model.epsilon / 3.0 * model.pulse_rate * tau * tau /
              2.0 * (1.0 - std::exp(-total_time / tau))};
    }
    case NoiseModel::Kind::White:
    case NoiseModel::Kind::BitFlipJumps:
      return {model.gamma};
    default:
      return {0.0};
  }
}

NoiseModel match_strength(DecoherenceRate reference, const NoiseModel& target,
                          double total_time) {
  if (reference.value <= 0)
    throw std::invalid_argument("reference decoherence rate must be positive");
  NoiseModel out = target;
  switch (target.kind) {
    case NoiseModel::Kind::Static:
      out.epsilon = std::sqrt(3.0 * reference.value / total_time);
      break;
    case NoiseModel::Kind::OneOverF: {
      if (target.pulse_rate <= 0 || target.pulse_lifetime <= 0)
        throw std::invalid_argument(
            "cannot match a 1/f model with zero pulse rate or lifetime");
      // eps_1f = eps_static sqrt(2T/(rate tau^2)) with eps_static implied by
      // the reference rate over the same horizon.
      const double eps_static = std::sqrt(3.0 * reference.value / total_time);
      out.epsilon = eps_static *
                    std::sqrt(2.0 * total_time /
                              (target.pulse_rate * target.pulse_lifetime *
                               target.pulse_lifetime));
      break;
    }
    case NoiseModel::Kind::White:
    case NoiseModel::Kind::BitFlipJumps:
      out.gamma = reference.value;
      break;
    default:
      throw std::invalid_argument("cannot match the trivial noise model");
  }
  return out;
}

NoiseTerms noise_generator(const NoiseModel& model,
                           const NoiseRealization& realization, int n_qubits,
                           double t) {
  NoiseTerms terms;
  switch (model.kind) {
    case NoiseModel::Kind::Static:
    case NoiseModel::Kind::OneOverF:
      for (int q = 0; q < n_qubits; ++q)
        terms.hamiltonian.push_back({q + 1, realization.amplitude(q, t)});
      break;
    case NoiseModel::Kind::White:
    case NoiseModel::Kind::BitFlipJumps:
      for (int q = 0; q < n_qubits; ++q)
        terms.dissipators.push_back(
            {model.gamma, Pauli::single(n_qubits, q + 1, model.axis)});
      break;
    default:
      break;
  }
  return terms;
}

Mat lindblad_oracle_step(const Mat& rho, const std::vector<Dissipator>& dissipators,
                         double dt) {
  Mat next = rho;
  for (const auto& d : dissipators) {
    const Mat a = pauli_to_matrix(d.op);
    const Mat ada = a.adjoint() * a;
    next += d.rate * dt *
            (a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada));
  }
  const double drift = std::abs(next.trace().real() - rho.trace().real());
  if (drift > 1e-10)
    throw std::runtime_error("Lindblad step trace drift " + std::to_string(drift) +
                             "; reduce dt");
  return next;
}

}  // namespace zenogate
