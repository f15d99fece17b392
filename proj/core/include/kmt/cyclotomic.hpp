#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmt/rational.hpp"

namespace kmt {

/// Coefficients of the N-th cyclotomic polynomial, lowest degree first.
const std::vector<long long>& cyclotomic_polynomial(unsigned n);
unsigned euler_phi(unsigned n);
unsigned lcm_u(unsigned a, unsigned b);

/// Exact element of Q(zeta_N), stored as sum c_e zeta_N^e reduced modulo
/// Phi_N (degree < phi(N)). Trailing zero coefficients are trimmed, so zero
/// is the empty vector and a rational value has exactly one coefficient.
class Cyc {
 public:
  Cyc() = default;
  Cyc(long long v) : Cyc(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  Cyc(const Rational& v);                 // NOLINT(google-explicit-constructor)

  static Cyc make(unsigned conductor, const std::map<long long, Rational>& coeffs);
  /// zeta_N^e
  static Cyc root_of_unity(unsigned conductor, long long e);
  static Cyc sqrt2();

  unsigned conductor() const { return n_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const { return c_.empty(); }
  bool is_rational() const { return c_.size() <= 1; }
  Rational rational_value() const;  // throws if not rational

  /// Same value expressed over Q(zeta_M); requires N | M.
  Cyc promote(unsigned m) const;
  /// Image under the Galois automorphism zeta -> zeta^{-1}.
  Cyc conj() const;

  Cyc operator-() const;
  Cyc inverse() const;

  friend Cyc operator+(const Cyc& a, const Cyc& b);
  friend Cyc operator-(const Cyc& a, const Cyc& b);
  friend Cyc operator*(const Cyc& a, const Cyc& b);
  friend Cyc operator/(const Cyc& a, const Cyc& b) { return a * b.inverse(); }
  Cyc& operator+=(const Cyc& b) { return *this = *this + b; }
  Cyc& operator-=(const Cyc& b) { return *this = *this - b; }
  Cyc& operator*=(const Cyc& b) { return *this = *this * b; }

  friend bool operator==(const Cyc& a, const Cyc& b);
  friend bool operator!=(const Cyc& a, const Cyc& b) { return !(a == b); }

  std::string str() const;

 private:
  Cyc(unsigned n, std::vector<Rational> c);
  void trim();
  static std::vector<Rational> reduce(unsigned n, std::vector<Rational> poly);

  unsigned n_ = 1;
  std::vector<Rational> c_;
};

/// {"N": int, "c": {"e": ["num","den"], ...}}
nlohmann::json to_json(const Cyc& x);
Cyc cyc_from_json(const nlohmann::json& j);

}  // namespace kmt
