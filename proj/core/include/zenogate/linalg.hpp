#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "zenogate/pauli.hpp"

namespace zenogate {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

constexpr int kMaxQubitsDense = 6;

// Dense 2^n x 2^n realization (Kronecker product times phase). Throws above
// kMaxQubitsDense qubits.
Mat pauli_to_matrix(const Pauli& p);

// exp(i angle P) = cos(angle) I + i sin(angle) P for involutory P.
// Throws when P is not involutory.
Mat pauli_rotation(const Pauli& p, double angle);

// Projector onto the joint +1 eigenspace of the generators:
// prod_j (I + g_j)/2. Hermitian, idempotent, trace 2^k.
Mat code_projector(const StabilizerCode& code);

// Real expectation value of a Hermitian operator. Throws when the imaginary
// residue exceeds 1e-8 (numerical-health error).
double expectation(const Vec& state, const Mat& op);
double expectation(const Mat& rho, const Mat& op);

bool is_unitary(const Mat& u, double tol = 1e-10);
bool is_hermitian(const Mat& m, double tol = 1e-10);
double trace_distance(const Mat& a, const Mat& b);

// O(dim) application of a Pauli to a state vector: P|b> = phase(b)|pi(b)>.
// Precomputed permutation + per-basis-state phase.
class PauliAction {
 public:
  PauliAction() = default;
  explicit PauliAction(const Pauli& p);

  int dim() const { return dim_; }
  const Pauli& pauli() const { return pauli_; }
  bool diagonal() const { return diagonal_; }

  // y = P x (x and y must not alias unless P is diagonal).
  void apply(const cplx* x, cplx* y) const;
  void apply(const Vec& x, Vec& y) const;
  Vec apply(const Vec& x) const;

  // y += coeff * P x
  void accumulate(cplx coeff, const cplx* x, cplx* y) const;

  // <x|P|x>
  cplx expectation(const cplx* x) const;

  // Matrix products with O(dim^2) work: out = P * m, out = m * P, out = P m P.
  void left_multiply(const Mat& m, Mat& out) const;
  void right_multiply(const Mat& m, Mat& out) const;
  void conjugate(const Mat& m, Mat& out) const;

  // out += coeff * P * m and out += coeff * m * P.
  void left_multiply_acc(cplx coeff, const Mat& m, Mat& out) const;
  void right_multiply_acc(cplx coeff, const Mat& m, Mat& out) const;

 private:
  int dim_ = 0;
  bool diagonal_ = false;
  Pauli pauli_;
  std::vector<uint32_t> perm_;   // P|b> lands on basis state perm_[b]
  std::vector<cplx> phase_;      // with this phase
};

// A linear combination sum_k c_k P_k of Paulis on a fixed register. Closed
// under conjugation by exp(i phi A) for an involutory Pauli A, which is how
// path-rotated operators are represented without dense matrices.
class PauliCombo {
 public:
  PauliCombo() = default;
  explicit PauliCombo(const Pauli& p, cplx coeff = 1.0);

  void add(cplx coeff, const Pauli& p);
  size_t terms() const { return terms_.size(); }
  const Pauli& term_pauli(size_t i) const { return terms_[i].pauli; }
  cplx term_coeff(size_t i) const { return terms_[i].coeff; }

  // Replaces the combo by exp(-i phi A) (this) exp(i phi A).
  // Terms commuting with A are unchanged; anticommuting terms become
  // cos(2 phi) P + i sin(2 phi) P A.
  void conjugate_by_rotation(const Pauli& a, double phi);

  PauliCombo adjoint() const;

  Mat to_matrix(int n) const;
  void apply(const Vec& x, Vec& y) const;       // y = C x
  void accumulate(const Vec& x, Vec& y) const;  // y += C x

  // out = C * m and out = m * C (O(terms * dim^2)).
  void left_multiply(const Mat& m, Mat& out) const;
  void right_multiply(const Mat& m, Mat& out) const;

 private:
  struct Term {
    cplx coeff;
    Pauli pauli;
    PauliAction action;
  };
  std::vector<Term> terms_;
  void merge_duplicates();
};

}  // namespace zenogate
