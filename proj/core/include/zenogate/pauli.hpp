#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zenogate {

// n-qubit Pauli in symplectic form: phase * prod_j X_j^{x_j} * prod_j Z_j^{z_j},
// with phase in {1, i, -1, -i} stored as an exponent of i. Qubit j corresponds
// to bit j (qubit 1 = bit 0). Letter Y contributes x=z=1 and one factor of i,
// so the operator equals the literal tensor product of sigma matrices.
class Pauli {
 public:
  Pauli() = default;
  Pauli(int n, uint64_t xbits, uint64_t zbits, int phase_i_exponent = 0);

  static Pauli identity(int n) { return Pauli(n, 0, 0, 0); }
  // Parses strings like "XIZXX", "-ZZI", "iY", "-iXY".
  static Pauli from_string(const std::string& s);
  // Single sigma^a on qubit `qubit` (1-based), identity elsewhere.
  static Pauli single(int n, int qubit, char axis);

  int n() const { return n_; }
  uint64_t xbits() const { return x_; }
  uint64_t zbits() const { return z_; }
  int phase_exponent() const { return phase_; }  // operator = i^phase * X^x Z^z
  std::complex<double> phase() const;

  int weight() const;                 // qubits acted on non-trivially
  bool is_identity() const { return x_ == 0 && z_ == 0 && phase_ == 0; }
  bool is_involutory() const;         // P^2 == I (requires real overall sign)

  Pauli operator*(const Pauli& rhs) const;
  Pauli adjoint() const;
  Pauli negated() const;
  bool operator==(const Pauli& rhs) const = default;

  // True iff the symplectic inner product vanishes. Throws on size mismatch.
  friend bool commute(const Pauli& a, const Pauli& b);

  // Hamming distance: number of qubits whose letters differ.
  friend int distance(const Pauli& a, const Pauli& b);

  std::string to_string() const;

 private:
  int n_ = 0;
  uint64_t x_ = 0;
  uint64_t z_ = 0;
  int phase_ = 0;  // exponent of i, mod 4
};

bool commute(const Pauli& a, const Pauli& b);
int distance(const Pauli& a, const Pauli& b);

// Syndrome of an operator: bit j is 1 iff it anticommutes with generator j.
struct Syndrome {
  std::vector<uint8_t> bits;

  bool trivial() const;
  std::string to_string() const;  // "1100", leftmost bit = generator 1
  static Syndrome from_string(const std::string& s);
  bool operator==(const Syndrome& rhs) const = default;
  Syndrome operator^(const Syndrome& rhs) const;
};

struct SyndromeHash {
  size_t operator()(const Syndrome& s) const;
};

// [[n, k, d]] stabilizer code: n-k commuting generators, logical operator
// representatives, and the set of correctable errors (identity included).
struct StabilizerCode {
  int n = 0;
  int k = 0;
  int d = 0;
  std::vector<Pauli> generators;
  std::vector<Pauli> logicals;
  std::vector<Pauli> correctable;

  // Throws std::invalid_argument when the commutation structure is broken or
  // (for n <= 6) a pair of correctable errors is neither distinguishable by
  // syndrome nor equal in its action on the code space.
  void validate() const;

  static StabilizerCode from_json(const std::string& json_text);
  std::string to_json() const;

  // The 3-qubit bit-flip code with generators Z1Z2, Z2Z3 and single-qubit
  // bit-flips correctable.
  static StabilizerCode bit_flip();
};

Syndrome syndrome(const StabilizerCode& code, const Pauli& e);

struct RotationOperatorReport {
  bool weight_ok = false;
  bool stabilizer_ok = false;
  bool logical_ok = false;
  bool basic_ok = false;
  bool all() const { return weight_ok && stabilizer_ok && logical_ok && basic_ok; }
};

// Sufficient conditions for all rotated codes to stay correctable:
//  - weight(X) > d-1,
//  - every stabilizer element within Hamming distance d-1 (d-2 for even d)
//    of X anticommutes with X,
//  - every logical operator within that distance commutes with X and
//    anticommutes with H,
// plus the basic requirements (X involutory with real sign, {X,H}=0, and at
// least one generator anticommuting with X).
RotationOperatorReport check_rotation_operator(const StabilizerCode& code,
                                               const Pauli& X, const Pauli& H);

// First operator passing check_rotation_operator in the canonical order:
// ascending weight, then ascending xbits, then ascending zbits (phase +1).
// Throws for n > 12.
std::optional<Pauli> search_rotation_operator(const StabilizerCode& code,
                                              const Pauli& H);

// Appends m ancilla qubits in |0>: generators gain identity on the ancillas
// plus one new sigma^z generator per ancilla; the correctable set gains the
// single-qubit ancilla bit flips. k and d are unchanged.
StabilizerCode append_ancillas(const StabilizerCode& code, int m);

}  // namespace zenogate
