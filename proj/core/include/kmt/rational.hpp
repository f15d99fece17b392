#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <gmpxx.h>

namespace kmt {

/// Exact rational number. Values that fit in 64-bit numerator/denominator
/// stay on a fast path; everything else spills into a shared GMP rational.
/// Always normalized: gcd(num, den) = 1, den > 0.
class Rational {
 public:
  Rational() = default;
  Rational(long long n);  // NOLINT(google-explicit-constructor)
  Rational(long long n, long long d);
  explicit Rational(const mpq_class& q);

  static Rational parse(const std::string& num, const std::string& den);
  static Rational parse(const std::string& text);  // "p" or "p/q"

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const;
  int sign() const;

  Rational operator-() const;
  Rational inverse() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  std::string num_str() const;
  std::string den_str() const;
  std::string str() const;  // "p" or "p/q"

  /// Floor for integer-valued comparisons; throws if the value does not fit.
  long long floor() const;
  /// Numerator/denominator as 64-bit values; throws std::overflow_error if big.
  long long small_num() const;
  long long small_den() const;

  mpq_class to_mpq() const;

 private:
  static Rational from_wide(__int128 n, __int128 d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

Rational binomial(long long n, long long k);
Rational factorial(long long n);

}  // namespace kmt
