#include "zenogate/pauli.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace zenogate {

namespace {

int popcount64(uint64_t v) { return std::popcount(v); }

void require_same_size(const Pauli& a, const Pauli& b) {
  if (a.n() != b.n())
    throw std::invalid_argument("Pauli size mismatch: " + std::to_string(a.n()) +
                                " vs " + std::to_string(b.n()));
}

}  // namespace

Pauli::Pauli(int n, uint64_t xbits, uint64_t zbits, int phase_i_exponent)
    : n_(n), x_(xbits), z_(zbits), phase_(((phase_i_exponent % 4) + 4) % 4) {
  if (n < 0 || n > 63) throw std::invalid_argument("qubit count out of range");
  const uint64_t mask = (n == 0) ? 0 : ((~0ULL) >> (64 - n));
  if ((xbits & ~mask) || (zbits & ~mask))
    throw std::invalid_argument("Pauli bit vector longer than qubit count");
}

std::complex<double> Pauli::phase() const {
  switch (phase_) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

int Pauli::weight() const { return popcount64(x_ | z_); }

bool Pauli::is_involutory() const {
  // P^2 = i^{2 phase} (-1)^{x.z} I; involutory iff that sign is +1.
  const int sign = (2 * phase_ + 2 * popcount64(x_ & z_)) % 4;
  return sign == 0;
}

Pauli Pauli::operator*(const Pauli& rhs) const {
  require_same_size(*this, rhs);
  // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1.x2} X^{x1^x2} Z^{z1^z2}
  const int sign_flips = popcount64(z_ & rhs.x_) % 2;
  return Pauli(n_, x_ ^ rhs.x_, z_ ^ rhs.z_, phase_ + rhs.phase_ + 2 * sign_flips);
}

Pauli Pauli::adjoint() const {
  // (i^p X^x Z^z)^dagger = i^{-p} Z^z X^x = i^{-p} (-1)^{x.z} X^x Z^z
  return Pauli(n_, x_, z_, -phase_ + 2 * popcount64(x_ & z_));
}

Pauli Pauli::negated() const { return Pauli(n_, x_, z_, phase_ + 2); }

bool commute(const Pauli& a, const Pauli& b) {
  require_same_size(a, b);
  const int sym = (popcount64(a.xbits() & b.zbits()) +
                   popcount64(a.zbits() & b.xbits())) % 2;
  return sym == 0;
}

int distance(const Pauli& a, const Pauli& b) {
  require_same_size(a, b);
  // Letters differ exactly where the product is non-identity.
  return popcount64((a.xbits() ^ b.xbits()) | (a.zbits() ^ b.zbits()));
}

Pauli Pauli::from_string(const std::string& s) {
  size_t i = 0;
  int phase = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    if (s[i] == '-') phase += 2;
    ++i;
  }
  if (i < s.size() && s[i] == 'i') {
    phase += 1;
    ++i;
  }
  const std::string letters = s.substr(i);
  if (letters.empty()) throw std::invalid_argument("empty Pauli string");
  const int n = static_cast<int>(letters.size());
  uint64_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    switch (letters[q]) {
      case 'I': break;
      case 'X': x |= 1ULL << q; break;
      case 'Y': x |= 1ULL << q; z |= 1ULL << q; phase += 1; break;
      case 'Z': z |= 1ULL << q; break;
      default:
        throw std::invalid_argument(std::string("bad Pauli letter '") +
                                    letters[q] + "' in \"" + s + "\"");
    }
  }
  return Pauli(n, x, z, phase);
}

Pauli Pauli::single(int n, int qubit, char axis) {
  if (qubit < 1 || qubit > n) throw std::invalid_argument("qubit index out of range");
  std::string s(n, 'I');
  s[qubit - 1] = axis;
  return from_string(s);
}

std::string Pauli::to_string() const {
  // Print with the phase folded into the sign prefix and Y letters.
  int residual = phase_;
  std::string letters(n_, 'I');
  for (int q = 0; q < n_; ++q) {
    const bool xb = (x_ >> q) & 1, zb = (z_ >> q) & 1;
    if (xb && zb) {
      letters[q] = 'Y';
      residual = (residual + 3) % 4;  // printed Y carries one i
    } else if (xb) {
      letters[q] = 'X';
    } else if (zb) {
      letters[q] = 'Z';
    }
  }
  static const char* prefix[4] = {"", "i", "-", "-i"};
  return prefix[residual] + letters;
}

bool Syndrome::trivial() const {
  return std::all_of(bits.begin(), bits.end(), [](uint8_t b) { return b == 0; });
}

std::string Syndrome::to_string() const {
  std::string s;
  s.reserve(bits.size());
  for (uint8_t b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Syndrome Syndrome::from_string(const std::string& s) {
  Syndrome out;
  out.bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad syndrome string");
    out.bits.push_back(c == '1');
  }
  return out;
}

Syndrome Syndrome::operator^(const Syndrome& rhs) const {
  if (bits.size() != rhs.bits.size())
    throw std::invalid_argument("syndrome size mismatch");
  Syndrome out = *this;
  for (size_t i = 0; i < bits.size(); ++i) out.bits[i] ^= rhs.bits[i];
  return out;
}

size_t SyndromeHash::operator()(const Syndrome& s) const {
  size_t h = 1469598103934665603ULL;
  for (uint8_t b : s.bits) h = (h ^ b) * 1099511628211ULL;
  return h;
}

Syndrome syndrome(const StabilizerCode& code, const Pauli& e) {
  if (e.n() != code.n) throw std::invalid_argument("error size does not match code");
  Syndrome s;
  s.bits.reserve(code.generators.size());
  for (const Pauli& g : code.generators) s.bits.push_back(commute(e, g) ? 0 : 1);
  return s;
}

void StabilizerCode::validate() const {
  if (static_cast<int>(generators.size()) != n - k)
    throw std::invalid_argument("expected n-k generators");
  for (const Pauli& g : generators) {
    if (g.n() != n) throw std::invalid_argument("generator size mismatch");
    if (!g.is_involutory()) throw std::invalid_argument("generator not involutory");
  }
  for (size_t i = 0; i < generators.size(); ++i)
    for (size_t j = i + 1; j < generators.size(); ++j)
      if (!commute(generators[i], generators[j]))
        throw std::invalid_argument("generators do not commute");
  for (const Pauli& l : logicals) {
    if (l.n() != n) throw std::invalid_argument("logical size mismatch");
    for (const Pauli& g : generators)
      if (!commute(l, g))
        throw std::invalid_argument("logical anticommutes with a generator");
  }
  // Knill-Laflamme style check on small codes: distinct correctable errors must
  // have distinct syndromes or act identically on the code space (same coset).
  if (n <= 6) {
    for (size_t a = 0; a < correctable.size(); ++a) {
      for (size_t b = a + 1; b < correctable.size(); ++b) {
        if (!(syndrome(*this, correctable[a]) == syndrome(*this, correctable[b])))
          continue;
        // Same syndrome: product must lie in the stabilizer group to act
        // identically (up to phase) on code states.
        const Pauli prod = correctable[a] * correctable[b];
        bool in_group = false;
        const size_t m = generators.size();
        for (uint64_t mask = 0; mask < (1ULL << m); ++mask) {
          Pauli g = Pauli::identity(n);
          for (size_t j = 0; j < m; ++j)
            if ((mask >> j) & 1) g = g * generators[j];
          if (g.xbits() == prod.xbits() && g.zbits() == prod.zbits()) {
            in_group = true;
            break;
          }
        }
        if (!in_group)
          throw std::invalid_argument(
              "correctable errors " + correctable[a].to_string() + " and " +
              correctable[b].to_string() + " are not distinguishable");
      }
    }
  }
}

StabilizerCode StabilizerCode::bit_flip() {
  StabilizerCode code;
  code.n = 3;
  code.k = 1;
  code.d = 3;
  code.generators = {Pauli::from_string("ZZI"), Pauli::from_string("IZZ")};
  code.logicals = {Pauli::from_string("XXX"), Pauli::from_string("ZZZ")};
  code.correctable = {Pauli::from_string("III"), Pauli::from_string("XII"),
                      Pauli::from_string("IXI"), Pauli::from_string("IIX")};
  return code;
}

StabilizerCode StabilizerCode::from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  StabilizerCode code;
  code.n = j.at("n").get<int>();
  code.k = j.at("k").get<int>();
  code.d = j.at("d").get<int>();
  for (const auto& s : j.at("generators"))
    code.generators.push_back(Pauli::from_string(s.get<std::string>()));
  for (const auto& s : j.at("logicals"))
    code.logicals.push_back(Pauli::from_string(s.get<std::string>()));
  if (j.contains("correctable"))
    for (const auto& s : j.at("correctable"))
      code.correctable.push_back(Pauli::from_string(s.get<std::string>()));
  code.validate();
  return code;
}

std::string StabilizerCode::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["k"] = k;
  j["d"] = d;
  auto strings = [](const std::vector<Pauli>& ps) {
    std::vector<std::string> out;
    out.reserve(ps.size());
    for (const Pauli& p : ps) out.push_back(p.to_string());
    return out;
  };
  j["generators"] = strings(generators);
  j["logicals"] = strings(logicals);
  j["correctable"] = strings(correctable);
  return j.dump(2);
}

namespace {

// Enumerate the full stabilizer group (without identity when skip_identity).
std::vector<Pauli> stabilizer_group(const StabilizerCode& code, bool skip_identity) {
  const size_t m = code.generators.size();
  std::vector<Pauli> out;
  out.reserve((1ULL << m) - (skip_identity ? 1 : 0));
  for (uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    if (skip_identity && mask == 0) continue;
    Pauli g = Pauli::identity(code.n);
    for (size_t j = 0; j < m; ++j)
      if ((mask >> j) & 1) g = g * code.generators[j];
    out.push_back(g);
  }
  return out;
}

// All nontrivial logical class representatives (products of the logical
// representatives, excluding the identity class).
std::vector<Pauli> logical_classes(const StabilizerCode& code) {
  const size_t m = code.logicals.size();
  std::vector<Pauli> out;
  for (uint64_t mask = 1; mask < (1ULL << m); ++mask) {
    Pauli l = Pauli::identity(code.n);
    for (size_t j = 0; j < m; ++j)
      if ((mask >> j) & 1) l = l * code.logicals[j];
    out.push_back(l);
  }
  return out;
}

}  // namespace

RotationOperatorReport check_rotation_operator(const StabilizerCode& code,
                                               const Pauli& X, const Pauli& H) {
  if (X.n() != code.n || H.n() != code.n)
    throw std::invalid_argument("operator size does not match code");
  RotationOperatorReport report;

  const int threshold = (code.d % 2 == 0) ? code.d - 2 : code.d - 1;
  report.weight_ok = X.weight() > code.d - 1;

  bool some_generator_anticommutes = false;
  for (const Pauli& g : code.generators)
    if (!commute(X, g)) some_generator_anticommutes = true;
  report.basic_ok = !X.is_identity() && X.is_involutory() &&
                    (X.phase_exponent() % 2 == 0) && !commute(X, H) &&
                    some_generator_anticommutes;

  report.stabilizer_ok = true;
  for (const Pauli& s : stabilizer_group(code, /*skip_identity=*/true)) {
    if (distance(s, X) <= threshold && commute(s, X)) {
      report.stabilizer_ok = false;
      break;
    }
  }

  report.logical_ok = true;
  const auto group = stabilizer_group(code, /*skip_identity=*/false);
  for (const Pauli& lclass : logical_classes(code)) {
    for (const Pauli& s : group) {
      const Pauli l = lclass * s;
      if (distance(l, X) > threshold) continue;
      if (!commute(l, X) || commute(l, H)) {
        report.logical_ok = false;
        break;
      }
    }
    if (!report.logical_ok) break;
  }
  return report;
}

std::optional<Pauli> search_rotation_operator(const StabilizerCode& code,
                                              const Pauli& H) {
  if (code.n > 12)
    throw std::invalid_argument("exhaustive search limited to n <= 12");
  const int n = code.n;
  const uint64_t limit = 1ULL << n;

  // Candidates sorted by weight, then xbits, then zbits; phase +1 throughout.
  for (int w = std::max(1, code.d); w <= n; ++w) {
    for (uint64_t x = 0; x < limit; ++x) {
      for (uint64_t z = 0; z < limit; ++z) {
        if (popcount64(x | z) != w) continue;
        Pauli candidate(n, x, z, 0);
        if (!candidate.is_involutory()) continue;
        if (commute(candidate, H)) continue;  // cheap rejection first
        if (check_rotation_operator(code, candidate, H).all()) return candidate;
      }
    }
  }
  return std::nullopt;
}

StabilizerCode append_ancillas(const StabilizerCode& code, int m) {
  if (m < 0) throw std::invalid_argument("ancilla count must be non-negative");
  if (m == 0) return code;
  StabilizerCode out;
  out.n = code.n + m;
  out.k = code.k;
  out.d = code.d;
  auto extend = [&](const Pauli& p) {
    return Pauli(out.n, p.xbits(), p.zbits(), p.phase_exponent());
  };
  for (const Pauli& g : code.generators) out.generators.push_back(extend(g));
  for (int a = 0; a < m; ++a)
    out.generators.push_back(Pauli::single(out.n, code.n + a + 1, 'Z'));
  for (const Pauli& l : code.logicals) out.logicals.push_back(extend(l));
  for (const Pauli& e : code.correctable) out.correctable.push_back(extend(e));
  for (int a = 0; a < m; ++a)
    out.correctable.push_back(Pauli::single(out.n, code.n + a + 1, 'X'));
  return out;
}

}  // namespace zenogate
