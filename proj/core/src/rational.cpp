#include "kmt/rational.hpp"

#include <limits>
#include <stdexcept>

namespace kmt {
namespace {

using u128 = unsigned __int128;
using i128 = __int128;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(i128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  u128 u = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  mpz_class hi = static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64));
  mpz_class lo = static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

Rational::Rational(long long n) : num_(n), den_(1) {}

Rational::Rational(long long n, long long d) {
  if (d == 0) throw std::domain_error("rational: zero denominator");
  *this = from_wide(n, d);
}

Rational::Rational(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  if (c.get_num().fits_slong_p() && c.get_den().fits_slong_p()) {
    num_ = c.get_num().get_si();
    den_ = c.get_den().get_si();
  } else {
    big_ = std::make_shared<const mpq_class>(c);
  }
}

Rational Rational::from_wide(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  u128 un = n < 0 ? static_cast<u128>(-n) : static_cast<u128>(n);
  u128 g = gcd128(un, static_cast<u128>(d));
  if (g > 1) {
    n /= static_cast<i128>(g);
    d /= static_cast<i128>(g);
  }
  Rational r;
  if (fits64(n) && fits64(d)) {
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    if (r.num_ == 0) r.den_ = 1;
  } else {
    mpq_class q(to_mpz(n), to_mpz(d));
    q.canonicalize();
    r.big_ = std::make_shared<const mpq_class>(q);
  }
  return r;
}

Rational Rational::parse(const std::string& num, const std::string& den) {
  mpq_class q(mpz_class(num, 10), mpz_class(den, 10));
  if (q.get_den() == 0) throw std::domain_error("rational: zero denominator");
  return Rational(q);
}

Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return parse(text, "1");
  return parse(text.substr(0, slash), text.substr(slash + 1));
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
  return q;
}

bool Rational::is_integer() const {
  if (big_) return big_->get_den() == 1;
  return den_ == 1;
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
}

Rational Rational::operator-() const {
  if (big_) return Rational(mpq_class(-*big_));
  if (num_ == std::numeric_limits<std::int64_t>::min()) return from_wide(-static_cast<i128>(num_), den_);
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("rational: division by zero");
  if (big_) return Rational(mpq_class(1 / *big_));
  return from_wide(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.num_ == 0) return b;
    if (b.num_ == 0) return a;
    if (a.den_ == 1 && b.den_ == 1) {
      i128 s = static_cast<i128>(a.num_) + b.num_;
      if (fits64(s)) {
        Rational r;
        r.num_ = static_cast<std::int64_t>(s);
        return r;
      }
    }
    return Rational::from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                               static_cast<i128>(a.den_) * b.den_);
  }
  return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.num_ == 0 || b.num_ == 0) return Rational();
    if (a.den_ == 1 && b.den_ == 1) {
      i128 p = static_cast<i128>(a.num_) * b.num_;
      if (fits64(p)) {
        Rational r;
        r.num_ = static_cast<std::int64_t>(p);
        return r;
      }
    }
    return Rational::from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
  }
  return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
}

Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // normalized: a big value never equals a small one
}

bool operator<(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_)
    return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
  return a.to_mpq() < b.to_mpq();
}

std::string Rational::num_str() const {
  if (big_) return big_->get_num().get_str();
  return std::to_string(num_);
}

std::string Rational::den_str() const {
  if (big_) return big_->get_den().get_str();
  return std::to_string(den_);
}

std::string Rational::str() const {
  if (is_integer()) return num_str();
  return num_str() + "/" + den_str();
}

long long Rational::floor() const {
  if (big_) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    if (!f.fits_slong_p()) throw std::overflow_error("rational: floor out of range");
    return f.get_si();
  }
  long long q = num_ / den_;
  if ((num_ % den_ != 0) && (num_ < 0)) --q;
  return q;
}

long long Rational::small_num() const {
  if (big_) throw std::overflow_error("rational: numerator exceeds 64 bits");
  return num_;
}

long long Rational::small_den() const {
  if (big_) throw std::overflow_error("rational: denominator exceeds 64 bits");
  return den_;
}

Rational binomial(long long n, long long k) {
  if (k < 0 || k > n) return Rational();
  Rational r(1);
  for (long long i = 1; i <= k; ++i) r = r * Rational(n - k + i, i);
  return r;
}

Rational factorial(long long n) {
  Rational r(1);
  for (long long i = 2; i <= n; ++i) r = r * Rational(i);
  return r;
}

}  // namespace kmt
