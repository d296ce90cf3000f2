#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "zenogate/geometry.hpp"
#include "zenogate/linalg.hpp"

namespace zenogate::detail {

// Code-frame generators with a fast path for diagonal (Z-type) Paulis, whose
// D/H superoperators reduce to elementwise sign masks.
struct GeneratorSet {
  std::vector<PauliAction> actions;
  std::vector<std::vector<double>> diag;  // empty vector when not diagonal

  explicit GeneratorSet(const StabilizerCode& code) {
    const int dim = 1 << code.n;
    for (const Pauli& g : code.generators) {
      actions.emplace_back(g);
      if (g.xbits() != 0 || g.phase_exponent() % 2 != 0) {
        diag.emplace_back();
        continue;
      }
      std::vector<double> signs(dim);
      Vec basis = Vec::Zero(dim), out(dim);
      for (int b = 0; b < dim; ++b) {
        basis[b] = 1.0;
        actions.back().apply(basis, out);
        signs[b] = out[b].real();
        basis[b] = 0.0;
      }
      diag.push_back(std::move(signs));
    }
  }
};

inline void hermitize_and_retrace(Mat& rho) {
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (tr <= 0) throw std::runtime_error("density matrix lost its trace");
  rho /= tr;
}

// Rotating-frame increment builder shared by the truth SME and the estimator:
// sigma(t) = W(t)^dag rho(t) W(t), where the measured generators are constant
// code-frame Paulis and the path appears as the drive
// H_frame(t) = wh_eff (cos(2wt) H + i sin(2wt) HX) + w X.
class RotFrameKernel {
 public:
  RotFrameKernel(const GateSpec& spec, const GeneratorSet& gens)
      : spec_(&spec),
        gens_(&gens),
        dim_(spec.dim()),
        h_act_(spec.H),
        hx_act_(spec.H * spec.X),
        x_act_(spec.X) {
    acc_.resize(dim_, dim_);
    tmp1_.resize(dim_, dim_);
    tmp2_.resize(dim_, dim_);
  }

  void begin() { acc_.setZero(); }

  // acc += -i dt [H_frame(t), sigma]
  void accumulate_drive(const Mat& sigma, double wh_eff, double t, double dt) {
    const double w = spec_->omega;
    const double c = std::cos(2.0 * w * t), s = std::sin(2.0 * w * t);
    const cplx ch = wh_eff * c, chx = cplx(0, wh_eff * s), cx = w;
    const cplx mi = cplx(0, -dt);
    h_act_.left_multiply_acc(mi * ch, sigma, acc_);
    h_act_.right_multiply_acc(-mi * ch, sigma, acc_);
    hx_act_.left_multiply_acc(mi * chx, sigma, acc_);
    hx_act_.right_multiply_acc(-mi * chx, sigma, acc_);
    x_act_.left_multiply_acc(mi * cx, sigma, acc_);
    x_act_.right_multiply_acc(-mi * cx, sigma, acc_);
  }

  // acc += coeff_d * D[g_j] sigma + c_h[j] * H[g_j] sigma for every generator.
  // Writes <g_j> (computed before the update) into means.
  void accumulate_measurement(const Mat& sigma, double coeff_d,
                              const std::vector<double>& c_h,
                              std::vector<double>& means) {
    const size_t n_gens = gens_->actions.size();
    for (size_t j = 0; j < n_gens; ++j) {
      if (!gens_->diag[j].empty()) {
        const double* s = gens_->diag[j].data();
        double m = 0.0;
        for (int i = 0; i < dim_; ++i) m += s[i] * sigma(i, i).real();
        means[j] = m;
        const double ch = c_h[j];
        const cplx* src = sigma.data();
        cplx* dst = acc_.data();
        for (int col = 0; col < dim_; ++col) {
          const double sj = s[col];
          const size_t off = static_cast<size_t>(col) * dim_;
          for (int row = 0; row < dim_; ++row) {
            const double si = s[row];
            const double f =
                coeff_d * (si * sj - 1.0) + ch * (si + sj - 2.0 * m);
            dst[off + row] += f * src[off + row];
          }
        }
      } else {
        const PauliAction& g = gens_->actions[j];
        g.left_multiply(sigma, tmp2_);  // g sigma
        double m = 0.0;
        for (int i = 0; i < dim_; ++i) m += tmp2_(i, i).real();
        means[j] = m;
        g.conjugate(sigma, tmp1_);  // g sigma g
        acc_ += coeff_d * (tmp1_ - sigma);
        g.right_multiply(sigma, tmp1_);  // sigma g
        acc_ += c_h[j] * (tmp2_ + tmp1_ - 2.0 * m * sigma);
      }
    }
  }

  // acc += rate * dt * (A sigma A^dag - sigma) for a unitary Pauli combo A.
  void accumulate_dissipator(const Mat& sigma, const PauliCombo& a, double rate,
                             double dt) {
    a.left_multiply(sigma, tmp1_);
    a.adjoint().right_multiply(tmp1_, tmp2_);
    acc_ += rate * dt * (tmp2_ - sigma);
  }

  // acc += -i lambda dt [A, sigma]
  void accumulate_hamiltonian(const Mat& sigma, const PauliCombo& a,
                              double lambda, double dt) {
    const cplx mi = cplx(0, -dt * lambda);
    a.left_multiply(sigma, tmp1_);
    acc_ += mi * tmp1_;
    a.right_multiply(sigma, tmp1_);
    acc_ -= mi * tmp1_;
  }

  void finish(Mat& sigma) {
    sigma += acc_;
    hermitize_and_retrace(sigma);
  }

  Mat& acc() { return acc_; }
  Mat& scratch1() { return tmp1_; }
  Mat& scratch2() { return tmp2_; }

 private:
  const GateSpec* spec_;
  const GeneratorSet* gens_;
  int dim_;
  PauliAction h_act_, hx_act_, x_act_;
  Mat acc_, tmp1_, tmp2_;
};

// Path-rotated Pauli A(t) = W(t)^dag A W(t) with W = exp(i a H) exp(i b X):
// at most four fixed Pauli directions {A, AH, AX, AHX} whose coefficients
// depend on the angles only. Caching the actions keeps the per-step noise
// terms allocation-free.
class RotatedPauliCache {
 public:
  RotatedPauliCache(const Pauli& a, const Pauli& h, const Pauli& x)
      : ch_(commute(a, h)), cx_(commute(a, x)) {
    add_slot(a);
    if (!ch_) add_slot(a * h);
    if (!cx_ || !ch_) add_slot(a * x);
    if (!ch_) add_slot(a * h * x);
  }

  // Coefficients for the current path angles (steering folds into h_angle).
  void update(double h_angle, double x_angle) {
    const double c2a = std::cos(2 * h_angle), s2a = std::sin(2 * h_angle);
    const double c2b = std::cos(2 * x_angle), s2b = std::sin(2 * x_angle);
    for (auto& s : slots_) s.coeff = 0.0;
    if (ch_ && cx_) {
      slot(0) = 1.0;
    } else if (ch_ && !cx_) {
      slot(0) = c2b;            // A
      slot(1) = cplx(0, s2b);   // AX
    } else if (!ch_ && cx_) {
      slot(0) = c2a;                    // A
      slot(1) = cplx(0, s2a * c2b);     // AH
      slot(2) = 0.0;                    // AX unused in this case
      slot(3) = -s2a * s2b;             // AHX
    } else {
      slot(0) = c2a * c2b;              // A
      slot(1) = cplx(0, s2a);           // AH
      slot(2) = cplx(0, c2a * s2b);     // AX
      slot(3) = 0.0;                    // AHX absent
    }
  }

  // acc += rate_dt * (A sigma A^dag - sigma)
  void accumulate_dissipator(Mat& acc, const Mat& sigma, double rate_dt,
                             Mat& t1, Mat& t2) const {
    t1.setZero(sigma.rows(), sigma.cols());
    for (const auto& s : slots_)
      if (s.coeff != cplx(0.0)) s.action.left_multiply_acc(s.coeff, sigma, t1);
    t2.setZero(sigma.rows(), sigma.cols());
    for (const auto& s : slots_)
      if (s.coeff != cplx(0.0))
        s.adjoint_action.right_multiply_acc(std::conj(s.coeff), t1, t2);
    acc += rate_dt * (t2 - sigma);
  }

  // acc += coeff * [A, sigma]
  void accumulate_commutator(Mat& acc, const Mat& sigma, cplx coeff,
                             Mat& t1) const {
    for (const auto& s : slots_) {
      if (s.coeff == cplx(0.0)) continue;
      s.action.left_multiply_acc(coeff * s.coeff, sigma, acc);
      s.action.right_multiply_acc(-coeff * s.coeff, sigma, acc);
    }
  }

  Mat to_matrix(int n) const {
    Mat out;
    for (size_t i = 0; i < slots_.size(); ++i) {
      const Mat term = slots_[i].coeff * pauli_to_matrix(slots_[i].action.pauli());
      out = i == 0 ? term : Mat(out + term);
    }
    return out;
  }

 private:
  struct Slot {
    cplx coeff{0.0};
    PauliAction action;
    PauliAction adjoint_action;
  };
  void add_slot(const Pauli& p) {
    slots_.push_back({cplx(0.0), PauliAction(p), PauliAction(p.adjoint())});
  }
  cplx& slot(size_t i) { return slots_.at(i).coeff; }

  std::vector<Slot> slots_;
  bool ch_, cx_;
};

}  // namespace zenogate::detail
