#include "zenogate/linalg.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace zenogate {

Mat pauli_to_matrix(const Pauli& p) {
  if (p.n() > kMaxQubitsDense)
    throw std::invalid_argument("dense realization limited to " +
                                std::to_string(kMaxQubitsDense) + " qubits");
  const PauliAction action(p);
  const int dim = action.dim();
  Mat m = Mat::Zero(dim, dim);
  Vec basis = Vec::Zero(dim), column(dim);
  for (int b = 0; b < dim; ++b) {
    basis[b] = 1.0;
    action.apply(basis, column);
    m.col(b) = column;
    basis[b] = 0.0;
  }
  return m;
}

Mat pauli_rotation(const Pauli& p, double angle) {
  if (!p.is_involutory())
    throw std::invalid_argument("pauli_rotation requires an involutory operator");
  const Mat pm = pauli_to_matrix(p);
  const int dim = pm.rows();
  return std::cos(angle) * Mat::Identity(dim, dim) + cplx(0, std::sin(angle)) * pm;
}

Mat code_projector(const StabilizerCode& code) {
  if (code.n > kMaxQubitsDense)
    throw std::invalid_argument("dense projector limited to small registers");
  const int dim = 1 << code.n;
  Mat proj = Mat::Identity(dim, dim);
  for (const Pauli& g : code.generators)
    proj = 0.5 * (proj + pauli_to_matrix(g) * proj);
  return proj;
}

double expectation(const Vec& state, const Mat& op) {
  const cplx val = state.dot(op * state);
  if (std::abs(val.imag()) > 1e-8)
    throw std::runtime_error("expectation has imaginary residue " +
                             std::to_string(val.imag()));
  return val.real();
}

double expectation(const Mat& rho, const Mat& op) {
  const cplx val = (rho * op).trace();
  if (std::abs(val.imag()) > 1e-8)
    throw std::runtime_error("expectation has imaginary residue " +
                             std::to_string(val.imag()));
  return val.real();
}

bool is_unitary(const Mat& u, double tol) {
  return (u.adjoint() * u - Mat::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const Mat& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double trace_distance(const Mat& a, const Mat& b) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a - b) + 0.5 * (a - b).adjoint());
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

PauliAction::PauliAction(const Pauli& p) : pauli_(p) {
  const int n = p.n();
  dim_ = 1 << n;
  diagonal_ = (p.xbits() == 0);
  perm_.resize(dim_);
  phase_.resize(dim_);
  // Basis convention: qubit 1 is the most significant bit of the index, so
  // the dense realization equals kron(sigma_1, ..., sigma_n).
  uint32_t x_idx = 0, z_idx = 0;
  for (int q = 0; q < n; ++q) {
    if ((p.xbits() >> q) & 1) x_idx |= 1u << (n - 1 - q);
    if ((p.zbits() >> q) & 1) z_idx |= 1u << (n - 1 - q);
  }
  const cplx global = p.phase();
  for (uint32_t b = 0; b < static_cast<uint32_t>(dim_); ++b) {
    // P|b> = phase * (-1)^{z.b} |b ^ x>, so row r = b^x picks up the phase
    // evaluated at b = r^x.
    const uint32_t src = b ^ x_idx;
    perm_[b] = src;
    const int sign = std::popcount(src & z_idx) & 1;
    phase_[b] = sign ? -global : global;
  }
}

void PauliAction::apply(const cplx* x, cplx* y) const {
  for (int i = 0; i < dim_; ++i) y[i] = phase_[i] * x[perm_[i]];
}

void PauliAction::apply(const Vec& x, Vec& y) const {
  y.resize(dim_);
  apply(x.data(), y.data());
}

Vec PauliAction::apply(const Vec& x) const {
  Vec y(dim_);
  apply(x.data(), y.data());
  return y;
}

void PauliAction::accumulate(cplx coeff, const cplx* x, cplx* y) const {
  for (int i = 0; i < dim_; ++i) y[i] += coeff * phase_[i] * x[perm_[i]];
}

cplx PauliAction::expectation(const cplx* x) const {
  cplx acc = 0.0;
  for (int i = 0; i < dim_; ++i) acc += std::conj(x[i]) * phase_[i] * x[perm_[i]];
  return acc;
}

void PauliAction::left_multiply(const Mat& m, Mat& out) const {
  out.resize(dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    const cplx* src = m.data() + static_cast<size_t>(j) * dim_;
    cplx* dst = out.data() + static_cast<size_t>(j) * dim_;
    for (int i = 0; i < dim_; ++i) dst[i] = phase_[i] * src[perm_[i]];
  }
}

void PauliAction::right_multiply(const Mat& m, Mat& out) const {
  // (m P)_{ij} = m_{i,pi(j)} phase(j) with P_{pi(j), j} = phase... column view:
  // P has entries P_{i j} = phase_[i] delta_{j, perm_[i]}, hence
  // (m P)_{i j} = m_{i, k} P_{k j}; k with perm_[k] == j contributes phase_[k].
  out.resize(dim_, dim_);
  for (int k = 0; k < dim_; ++k) {
    const int j = perm_[k];  // perm is an involution image map: row k sources column j
    const cplx* src = m.data() + static_cast<size_t>(k) * dim_;
    cplx* dst = out.data() + static_cast<size_t>(j) * dim_;
    const cplx f = phase_[k];
    for (int i = 0; i < dim_; ++i) dst[i] = f * src[i];
  }
}

void PauliAction::conjugate(const Mat& m, Mat& out) const {
  // (P m P^dagger)_{ij} = phase_i conj(phase_j) m_{perm_i, perm_j}
  out.resize(dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    const cplx pj = std::conj(phase_[j]);
    const cplx* src = m.data() + static_cast<size_t>(perm_[j]) * dim_;
    cplx* dst = out.data() + static_cast<size_t>(j) * dim_;
    for (int i = 0; i < dim_; ++i) dst[i] = phase_[i] * pj * src[perm_[i]];
  }
}

void PauliAction::left_multiply_acc(cplx coeff, const Mat& m, Mat& out) const {
  for (int j = 0; j < dim_; ++j) {
    const cplx* src = m.data() + static_cast<size_t>(j) * dim_;
    cplx* dst = out.data() + static_cast<size_t>(j) * dim_;
    for (int i = 0; i < dim_; ++i) dst[i] += coeff * phase_[i] * src[perm_[i]];
  }
}

void PauliAction::right_multiply_acc(cplx coeff, const Mat& m, Mat& out) const {
  for (int k = 0; k < dim_; ++k) {
    const int j = perm_[k];
    const cplx* src = m.data() + static_cast<size_t>(k) * dim_;
    cplx* dst = out.data() + static_cast<size_t>(j) * dim_;
    const cplx f = coeff * phase_[k];
    for (int i = 0; i < dim_; ++i) dst[i] += f * src[i];
  }
}

PauliCombo::PauliCombo(const Pauli& p, cplx coeff) { add(coeff, p); }

void PauliCombo::add(cplx coeff, const Pauli& p) {
  terms_.push_back(Term{coeff, p, PauliAction(p)});
}

void PauliCombo::merge_duplicates() {
  std::vector<Term> merged;
  for (auto& t : terms_) {
    bool found = false;
    for (auto& m : merged) {
      if (m.pauli.xbits() == t.pauli.xbits() && m.pauli.zbits() == t.pauli.zbits()) {
        // Fold the phase difference into the coefficient.
        const cplx rel = t.pauli.phase() / m.pauli.phase();
        m.coeff += t.coeff * rel;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(std::move(t));
  }
  terms_ = std::move(merged);
}

void PauliCombo::conjugate_by_rotation(const Pauli& a, double phi) {
  std::vector<Term> next;
  next.reserve(terms_.size() * 2);
  const double c = std::cos(2 * phi), s = std::sin(2 * phi);
  for (const auto& t : terms_) {
    if (commute(t.pauli, a)) {
      next.push_back(t);
    } else {
      // exp(-i phi A) P exp(i phi A) = cos(2 phi) P + i sin(2 phi) P A
      next.push_back(Term{t.coeff * c, t.pauli, t.action});
      const Pauli pa = t.pauli * a;
      next.push_back(Term{t.coeff * cplx(0, s), pa, PauliAction(pa)});
    }
  }
  terms_ = std::move(next);
  merge_duplicates();
}

PauliCombo PauliCombo::adjoint() const {
  PauliCombo out;
  for (const auto& t : terms_) out.add(std::conj(t.coeff), t.pauli.adjoint());
  return out;
}

Mat PauliCombo::to_matrix(int n) const {
  const int dim = 1 << n;
  Mat m = Mat::Zero(dim, dim);
  for (const auto& t : terms_) m += t.coeff * pauli_to_matrix(t.pauli);
  return m;
}

void PauliCombo::apply(const Vec& x, Vec& y) const {
  y.setZero(x.size());
  accumulate(x, y);
}

void PauliCombo::accumulate(const Vec& x, Vec& y) const {
  for (const auto& t : terms_) t.action.accumulate(t.coeff, x.data(), y.data());
}

void PauliCombo::left_multiply(const Mat& m, Mat& out) const {
  out.setZero(m.rows(), m.cols());
  for (const auto& t : terms_) t.action.left_multiply_acc(t.coeff, m, out);
}

void PauliCombo::right_multiply(const Mat& m, Mat& out) const {
  out.setZero(m.rows(), m.cols());
  for (const auto& t : terms_) t.action.right_multiply_acc(t.coeff, m, out);
}

}  // namespace zenogate
