#include "zenogate/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace zenogate {

namespace {

constexpr double kPi = GateSpec::kPi;

void require_code_state(const StabilizerCode& code, const Vec& psi, double tol) {
  Vec proj = psi;
  Vec tmp(psi.size());
  for (const Pauli& g : code.generators) {
    PauliAction(g).apply(proj, tmp);
    proj = 0.5 * (proj + tmp);
  }
  if ((proj - psi).norm() > tol)
    throw std::invalid_argument("state is not in the code space");
}

// Two Newton-Schulz sweeps restore near-unitary matrices to unitarity.
void reunitarize(Mat& h) {
  for (int it = 0; it < 2; ++it)
    h = 1.5 * h - 0.5 * h * (h.adjoint() * h);
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

void GateSpec::validate() const {
  code.validate();
  if (H.n() != code.n || X.n() != code.n)
    throw std::invalid_argument("gate operators sized differently from code");
  if (!H.is_involutory() || H.phase_exponent() % 2 != 0)
    throw std::invalid_argument("H must be involutory with real sign");
  if (!X.is_involutory() || X.phase_exponent() % 2 != 0)
    throw std::invalid_argument("X must be involutory with real sign");
  if (commute(X, H)) throw std::invalid_argument("X must anticommute with H");
  for (const Pauli& g : code.generators)
    if (!commute(H, g))
      throw std::invalid_argument("H must commute with all generators");
  bool anti = false;
  for (const Pauli& g : code.generators)
    if (!commute(X, g)) anti = true;
  if (!anti)
    throw std::invalid_argument("X must anticommute with some generator");
  if (omega <= 0 || kappa <= 0)
    throw std::invalid_argument("rates must be positive");
}

double partial_rotation_angle(const GateSpec& spec, double t) {
  return spec.theta / (4.0 * kPi) * std::sin(2.0 * spec.omega * t);
}

PathEngine::PathEngine(const GateSpec& spec, PathState path)
    : spec_(spec), path_(path), h_action_(spec.H), x_action_(spec.X) {}

double PathEngine::h_angle(double t) const {
  double angle = spec_.omega_h() * t;
  if (path_.steered && t >= path_.tau)
    angle += path_.theta_tilde * spec_.omega / (2.0 * kPi) * (t - path_.tau);
  return angle;
}

double PathEngine::x_angle(double t) const { return spec_.omega * t; }

void PathEngine::apply_v(double t, const Vec& in, Vec& out) const {
  const double a = h_angle(t), b = x_angle(t);
  Vec tmp(in.size());
  x_action_.apply(in, tmp);
  out = std::cos(b) * in + cplx(0, std::sin(b)) * tmp;
  h_action_.apply(out, tmp);
  out = std::cos(a) * out + cplx(0, std::sin(a)) * tmp;
}

void PathEngine::apply_v_dagger(double t, const Vec& in, Vec& out) const {
  const double a = h_angle(t), b = x_angle(t);
  Vec tmp(in.size());
  h_action_.apply(in, tmp);
  out = std::cos(a) * in - cplx(0, std::sin(a)) * tmp;
  x_action_.apply(out, tmp);
  out = std::cos(b) * out - cplx(0, std::sin(b)) * tmp;
}

void PathEngine::apply_u(double t, const Vec& in, Vec& out) const {
  const double tb = partial_rotation_angle(spec_, t);
  Vec tmp(in.size());
  h_action_.apply(in, tmp);
  Vec rotated = std::cos(tb) * in - cplx(0, std::sin(tb)) * tmp;
  apply_v(t, rotated, out);
}

PauliCombo PathEngine::rotated(const Pauli& a, double t) const {
  PauliCombo combo(a);
  combo.conjugate_by_rotation(spec_.H, h_angle(t));
  combo.conjugate_by_rotation(spec_.X, x_angle(t));
  return combo;
}

Mat path_unitary(const GateSpec& spec, const PathState& path, double t) {
  const double T = spec.total_time();
  if (t < -1e-12 || t > T * (1.0 + 1e-12))
    throw std::out_of_range("time outside [0, T]");
  PathEngine engine(spec, path);
  return pauli_rotation(spec.H, engine.h_angle(t)) *
         pauli_rotation(spec.X, engine.x_angle(t));
}

Vec instantaneous_code_state(const GateSpec& spec, const Vec& psi0, double t) {
  require_code_state(spec.code, psi0, 1e-8);
  const double tb = partial_rotation_angle(spec, t);
  PathEngine engine(spec);
  PauliAction h(spec.H);
  Vec tmp(psi0.size()), out(psi0.size());
  h.apply(psi0, tmp);
  Vec rotated = std::cos(tb) * psi0 - cplx(0, std::sin(tb)) * tmp;
  engine.apply_v(t, rotated, out);
  return out;
}

ZenoResult zeno_propagate(const GateSpec& spec, const Vec& psi0, double dt,
                          long steps) {
  if (dt * static_cast<double>(steps) > spec.total_time() * (1.0 + 1e-9))
    throw std::invalid_argument("integration window exceeds the loop time");
  const int dim = spec.dim();
  const PauliAction h_act(spec.H), x_act(spec.X), xh_act(spec.X * spec.H);
  std::vector<PauliAction> gens;
  for (const Pauli& g : spec.code.generators) gens.emplace_back(g);
  const double wh = spec.omega_h(), w = spec.omega;

  // The drive Hamiltonian generating V through V(t+dt) = exp(-i H dt) V(t):
  // H_drive(t) = i (dV/dt) V^dag
  //            = -[w_H H + w cos(2 w_H t) X - i w sin(2 w_H t) XH].
  auto apply_drive = [&](double t, const Vec& in, Vec& out) {
    const double a = 2.0 * wh * t;
    out.setZero(dim);
    h_act.accumulate(-wh, in.data(), out.data());
    x_act.accumulate(-w * std::cos(a), in.data(), out.data());
    xh_act.accumulate(cplx(0, w * std::sin(a)), in.data(), out.data());
  };
  auto apply_projector = [&](const Vec& in, Vec& out) {
    out = in;
    Vec tmp(dim);
    for (const auto& g : gens) {
      g.apply(out, tmp);
      out = 0.5 * (out + tmp);
    }
  };
  PathEngine engine(spec);
  auto apply_p_t = [&](double t, const Vec& in, Vec& out) {
    Vec w1(dim), w2(dim);
    engine.apply_v_dagger(t, in, w1);
    apply_projector(w1, w2);
    engine.apply_v(t, w2, out);
  };
  auto deriv = [&](double t, const Vec& psi, Vec& out) {
    Vec p_psi(dim), hd_p(dim), hd_psi(dim), p_hd(dim);
    apply_p_t(t, psi, p_psi);
    apply_drive(t, p_psi, hd_p);
    apply_drive(t, psi, hd_psi);
    apply_p_t(t, hd_psi, p_hd);
    out = cplx(0, -1) * (hd_p - p_hd);
  };

  ZenoResult result;
  result.state = psi0;
  Vec k1(dim), k2(dim), k3(dim), k4(dim), mid(dim);
  double t = 0.0;
  for (long s = 0; s < steps; ++s) {
    deriv(t, result.state, k1);
    mid = result.state + 0.5 * dt * k1;
    deriv(t + 0.5 * dt, mid, k2);
    mid = result.state + 0.5 * dt * k2;
    deriv(t + 0.5 * dt, mid, k3);
    mid = result.state + dt * k3;
    deriv(t + dt, mid, k4);
    result.state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double norm = result.state.norm();
    result.max_step_correction = std::max(result.max_step_correction,
                                          std::abs(1.0 - norm));
    result.state /= norm;
    t += dt;
  }
  return result;
}

LiftResult horizontal_lift(const GateSpec& spec, const PathState& path,
                           const Mat& L0, double t0, double t1, double dt) {
  const long K = L0.cols();
  if ((L0.adjoint() * L0 - Mat::Identity(K, K)).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("base frame is not orthonormal");
  if (t1 > t0 && dt > (t1 - t0) / 100.0 + 1e-15)
    throw std::invalid_argument("lift step too coarse: dt must be <= (t1-t0)/100");

  // K x K sandwiches of the three Pauli directions appearing in W^dag dW/dt.
  auto sandwich = [&](const Pauli& p) {
    const PauliAction act(p);
    Mat ap(L0.rows(), K);
    Vec col(L0.rows()), out(L0.rows());
    for (long j = 0; j < K; ++j) {
      col = L0.col(j);
      act.apply(col, out);
      ap.col(j) = out;
    }
    return Mat(L0.adjoint() * ap);
  };
  const Mat s_h = sandwich(spec.H);
  const Mat s_hx = sandwich(spec.H * spec.X);
  const Mat s_x = sandwich(spec.X);
  const double w = spec.omega, wh = spec.omega_h();
  const double wh_extra = path.steered ? path.theta_tilde * w / (2.0 * kPi) : 0.0;

  // W^dag dW/dt = i [ (w_H + extra)(cos(2wt) H + i sin(2wt) HX) + w X ]
  auto coefficient_matrix = [&](double t) {
    const double wh_eff = wh + ((path.steered && t >= path.tau) ? wh_extra : 0.0);
    const double c = std::cos(2.0 * w * t), s = std::sin(2.0 * w * t);
    return Mat(cplx(0, 1) * (wh_eff * (c * s_h + cplx(0, s) * s_hx) + w * s_x));
  };

  LiftResult result;
  Mat h = Mat::Identity(K, K);
  // Consecutive (t, h) snapshots for the connection-residual diagnostic.
  std::vector<std::pair<double, Mat>> snapshots;
  long global_step = 0;
  long total_steps = std::max<long>(1, static_cast<long>(std::ceil((t1 - t0) / dt)));
  auto integrate = [&](double a, double b) {
    if (b <= a) return;
    const long steps = std::max<long>(1, static_cast<long>(std::ceil((b - a) / dt)));
    const double step = (b - a) / static_cast<double>(steps);
    Mat k1(K, K), k2(K, K), k3(K, K), k4(K, K);
    double t = a;
    for (long s = 0; s < steps; ++s) {
      const bool sample = (global_step % std::max<long>(1, total_steps / 8)) == 0;
      if (sample) snapshots.emplace_back(t, h);
      k1 = -coefficient_matrix(t) * h;
      k2 = -coefficient_matrix(t + 0.5 * step) * (h + 0.5 * step * k1);
      k3 = -coefficient_matrix(t + 0.5 * step) * (h + 0.5 * step * k2);
      k4 = -coefficient_matrix(t + step) * (h + step * k3);
      h += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      reunitarize(h);
      t += step;
      if (sample) snapshots.emplace_back(t, h);
      ++global_step;
    }
  };
  // Split at the path switch so RK4 never straddles the discontinuity.
  if (path.steered && path.tau > t0 && path.tau < t1) {
    integrate(t0, path.tau);
    integrate(path.tau, t1);
  } else {
    integrate(t0, t1);
  }

  if ((h.adjoint() * h - Mat::Identity(K, K)).cwiseAbs().maxCoeff() > 1e-6)
    throw std::runtime_error("horizontal lift lost unitarity");

  PathEngine engine(spec, path);
  auto frame_at = [&](const Mat& hh, double t) {
    Mat rotated(L0.rows(), K);
    Vec col(L0.rows()), out(L0.rows());
    Mat base = L0 * hh;
    for (long j = 0; j < K; ++j) {
      col = base.col(j);
      engine.apply_v(t, col, out);
      rotated.col(j) = out;
    }
    return rotated;
  };
  result.frame = frame_at(h, t1);
  result.holonomy_part = h;

  // Forward-difference residual ||L^dag dL/dt|| along the lifted curve.
  for (size_t i = 0; i + 1 < snapshots.size(); i += 2) {
    const auto& [ta, ha] = snapshots[i];
    const auto& [tb, hb] = snapshots[i + 1];
    if (tb <= ta) continue;
    const Mat la = frame_at(ha, ta);
    const Mat lb = frame_at(hb, tb);
    const double res = (la.adjoint() * (lb - la) / (tb - ta)).cwiseAbs().maxCoeff();
    result.max_connection_residual = std::max(result.max_connection_residual, res);
  }
  return result;
}

Mat holonomy(const GateSpec& spec, const PathState& path, const Mat& L0) {
  const double T = spec.total_time();
  const Mat p0 = code_projector(spec.code);
  const Mat vT = path_unitary(spec, path, T);
  if ((vT * p0 * vT.adjoint() - p0).cwiseAbs().maxCoeff() > 1e-8)
    throw std::runtime_error("path does not close: P(T) != P(0)");
  const LiftResult lift = horizontal_lift(spec, path, L0, 0.0, T, T / 10000.0);
  Mat gamma = L0.adjoint() * lift.frame;
  const long K = L0.cols();
  if ((gamma.adjoint() * gamma - Mat::Identity(K, K)).cwiseAbs().maxCoeff() > 1e-8)
    throw std::runtime_error("holonomy is not unitary");
  return gamma;
}

Vec logical_zero(const StabilizerCode& code) {
  const int dim = 1 << code.n;
  if (static_cast<int>(code.logicals.size()) < 2 * code.k)
    throw std::invalid_argument("need logical X and Z representatives");
  Mat proj = code_projector(code);
  for (int i = 0; i < code.k; ++i) {
    const Mat zbar = pauli_to_matrix(code.logicals[code.k + i]);
    proj = 0.5 * (proj + zbar * proj);
  }
  // Deterministic representative: the column with the largest norm, with the
  // dominant amplitude made real and positive.
  int best = 0;
  double best_norm = 0.0;
  for (int j = 0; j < dim; ++j) {
    const double nj = proj.col(j).norm();
    if (nj > best_norm) {
      best_norm = nj;
      best = j;
    }
  }
  if (best_norm < 1e-12) throw std::runtime_error("empty logical-zero subspace");
  Vec v = proj.col(best) / best_norm;
  int dominant = 0;
  double mag = 0.0;
  for (int i = 0; i < dim; ++i)
    if (std::abs(v[i]) > mag) {
      mag = std::abs(v[i]);
      dominant = i;
    }
  v *= std::conj(v[dominant]) / mag;
  return v;
}

Mat code_frame(const StabilizerCode& code) {
  const int dim = 1 << code.n;
  const int K = 1 << code.k;
  Mat frame(dim, K);
  const Vec zero = logical_zero(code);
  std::vector<PauliAction> xbars;
  for (int i = 0; i < code.k; ++i) xbars.emplace_back(code.logicals[i]);
  Vec tmp(dim);
  for (int b = 0; b < K; ++b) {
    Vec v = zero;
    for (int i = 0; i < code.k; ++i) {
      if ((b >> i) & 1) {
        xbars[i].apply(v, tmp);
        v = tmp;
      }
    }
    frame.col(b) = v;
  }
  return frame;
}

Vec logical_plus(const StabilizerCode& code) {
  const Mat frame = code_frame(code);
  if (frame.cols() < 2) throw std::invalid_argument("k = 0 code has no logical plus");
  return (frame.col(0) + frame.col(1)).normalized();
}

std::vector<ErrorStateSpec> error_state_spec(const GateSpec& spec, const Pauli& e,
                                             double t) {
  const bool ch = commute(e, spec.H);
  const bool cx = commute(e, spec.X);
  const double a = 2.0 * spec.omega_h() * t;  // 2 w_H t
  const double b = 2.0 * spec.omega * t;      // 2 w t
  const double tb = partial_rotation_angle(spec, t);

  std::vector<ErrorStateSpec> out;
  if (ch && cx) {
    out.push_back({e, ErrorSubspace::E, 0.0, 1.0});
    return out;
  }
  const Pauli ex = e * spec.X;
  if (ch && !cx) {
    const double p_ex = std::sin(b) * std::sin(b);
    out.push_back({e, ErrorSubspace::E, 0.0, 1.0 - p_ex});
    out.push_back({ex, ErrorSubspace::EX, 2.0 * tb, p_ex});
    return out;
  }
  if (!ch && cx) {
    const double p_ex = std::sin(b) * std::sin(b) * std::sin(a) * std::sin(a);
    const double phi = std::atan2(std::sin(a) * std::cos(b), std::cos(a));
    out.push_back({e, ErrorSubspace::E, 2.0 * tb - phi, 1.0 - p_ex});
    out.push_back({ex, ErrorSubspace::EX, kPi / 2.0, p_ex});
    return out;
  }
  const double p_ex = std::sin(b) * std::sin(b) * std::cos(a) * std::cos(a);
  const double phi = std::atan2(std::sin(a), std::cos(a) * std::cos(b));
  out.push_back({e, ErrorSubspace::E, 2.0 * tb - phi, 1.0 - p_ex});
  out.push_back({ex, ErrorSubspace::EX, 0.0, p_ex});
  return out;
}

double measurement_induced_angle(const GateSpec& spec, double tau) {
  const double tb = partial_rotation_angle(spec, tau);
  return 2.0 * tb + std::atan(2.0 * tb);
}

Vec measurement_induced_error_state(const GateSpec& spec, double tau,
                                    const Vec& psi0) {
  require_code_state(spec.code, psi0, 1e-8);
  const double beta = measurement_induced_angle(spec, tau);
  PauliAction h(spec.H), x(spec.X);
  Vec tmp(psi0.size());
  x.apply(psi0, tmp);
  Vec v = tmp;
  h.apply(v, tmp);
  v = std::cos(beta) * v + cplx(0, std::sin(beta)) * tmp;
  PathEngine engine(spec);
  Vec out(psi0.size());
  engine.apply_u(tau, v, out);
  return out;
}

bool rotated_measurement_equivalence_check(const GateSpec& spec, const Pauli& e,
                                           double t, double tol) {
  const Mat p0 = code_projector(spec.code);
  const Mat frame = code_frame(spec.code);
  const Vec psi0 = (frame.col(0) + cplx(0.6, 0.8) * frame.col(1)).normalized();

  const Mat v = path_unitary(spec, PathState::base(), t);
  const Mat u = v * pauli_rotation(spec.H, -partial_rotation_angle(spec, t));
  const Mat em = pauli_to_matrix(e);
  const Mat exm = pauli_to_matrix(e * spec.X);
  const Mat e_t = u.adjoint() * em * u;

  const Vec psi_bar_t = u * psi0;
  for (const Mat& branch : {em, exm}) {
    const Mat p_sub = branch * p0 * branch.adjoint();
    // Rotated-basis route.
    const Vec a = (v * p_sub * v.adjoint()) * (em * psi_bar_t);
    // Original-basis route, rotated afterwards.
    const Vec b_pre = p_sub * (e_t * psi0);
    const Vec b = u * b_pre;
    const double pa = a.squaredNorm(), pb = b.squaredNorm();
    if (std::abs(pa - pb) > tol) return false;
    if (pa > tol) {
      const double overlap = std::abs(a.dot(b)) / (a.norm() * b.norm());
      if (std::abs(1.0 - overlap) > tol) return false;
    }
  }
  return true;
}

}  // namespace zenogate
