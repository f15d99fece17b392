#include "kmt/cyclotomic.hpp"

#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace kmt {
namespace {

// Polynomials with integer coefficients, lowest degree first.
using IntPoly = std::vector<long long>;

IntPoly exact_divide(const IntPoly& num, const IntPoly& den) {
  IntPoly rem = num;
  IntPoly q(num.size() - den.size() + 1, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    long long lead = rem[i + den.size() - 1];  // den is monic
    q[i] = lead;
    for (std::size_t j = 0; j < den.size(); ++j) rem[i + j] -= lead * den[j];
  }
  return q;
}

}  // namespace

unsigned lcm_u(unsigned a, unsigned b) { return a / std::gcd(a, b) * b; }

unsigned euler_phi(unsigned n) {
  unsigned result = n;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

const std::vector<long long>& cyclotomic_polynomial(unsigned n) {
  static std::mutex mu;
  static std::map<unsigned, std::unique_ptr<IntPoly>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, computed bottom-up.
  std::vector<unsigned> divisors;
  for (unsigned d = 1; d <= n; ++d)
    if (n % d == 0) divisors.push_back(d);
  for (unsigned d : divisors) {
    if (cache.count(d)) continue;
    IntPoly p(d + 1, 0);
    p[0] = -1;
    p[d] = 1;
    for (unsigned e = 1; e < d; ++e)
      if (d % e == 0) p = exact_divide(p, *cache.at(e));
    cache.emplace(d, std::make_unique<IntPoly>(std::move(p)));
  }
  return *cache.at(n);
}

Cyc::Cyc(const Rational& v) {
  if (!v.is_zero()) c_.push_back(v);
}

Cyc::Cyc(unsigned n, std::vector<Rational> c) : n_(n), c_(std::move(c)) { trim(); }

void Cyc::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

std::vector<Rational> Cyc::reduce(unsigned n, std::vector<Rational> poly) {
  const IntPoly& phi = cyclotomic_polynomial(n);
  const std::size_t deg = phi.size() - 1;
  for (std::size_t i = poly.size(); i-- > deg;) {
    if (poly[i].is_zero()) continue;
    Rational lead = poly[i];
    std::size_t shift = i - deg;
    for (std::size_t j = 0; j <= deg; ++j) {
      if (phi[j] != 0) poly[shift + j] -= lead * Rational(phi[j]);
    }
  }
  if (poly.size() > deg) poly.resize(deg);
  return poly;
}

Cyc Cyc::make(unsigned conductor, const std::map<long long, Rational>& coeffs) {
  if (conductor == 0) throw std::invalid_argument("cyc: conductor must be positive");
  std::vector<Rational> poly(conductor);
  for (const auto& [e, v] : coeffs) {
    long long r = ((e % static_cast<long long>(conductor)) + conductor) % conductor;
    poly[static_cast<std::size_t>(r)] += v;
  }
  return Cyc(conductor, reduce(conductor, std::move(poly)));
}

Cyc Cyc::root_of_unity(unsigned conductor, long long e) { return make(conductor, {{e, Rational(1)}}); }

Cyc Cyc::sqrt2() { return make(8, {{1, Rational(1)}, {7, Rational(1)}}); }

Rational Cyc::rational_value() const {
  if (!is_rational()) throw std::domain_error("cyc: value is not rational");
  return c_.empty() ? Rational() : c_[0];
}

Cyc Cyc::promote(unsigned m) const {
  if (m % n_ != 0) throw std::invalid_argument("cyc: target conductor is not a multiple");
  if (is_rational()) {
    Cyc r = *this;
    r.n_ = m;
    return r;
  }
  unsigned step = m / n_;
  std::vector<Rational> poly(static_cast<std::size_t>(step) * (c_.size() - 1) + 1);
  for (std::size_t e = 0; e < c_.size(); ++e) poly[e * step] = c_[e];
  return Cyc(m, reduce(m, std::move(poly)));
}

Cyc Cyc::conj() const {
  if (is_rational()) return *this;
  std::map<long long, Rational> m;
  for (std::size_t e = 0; e < c_.size(); ++e)
    if (!c_[e].is_zero()) m[-static_cast<long long>(e)] = c_[e];
  return make(n_, m);
}

Cyc Cyc::operator-() const {
  Cyc r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Cyc operator+(const Cyc& a, const Cyc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.n_ != b.n_ && !a.is_rational() && !b.is_rational()) {
    unsigned m = lcm_u(a.n_, b.n_);
    return a.promote(m) + b.promote(m);
  }
  unsigned n = a.is_rational() ? b.n_ : a.n_;
  if (a.is_rational() && b.is_rational()) n = std::max(a.n_, b.n_);
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Cyc(n, std::move(c));
}

Cyc operator-(const Cyc& a, const Cyc& b) { return a + (-b); }

Cyc operator*(const Cyc& a, const Cyc& b) {
  if (a.is_zero() || b.is_zero()) return Cyc();
  if (a.is_rational() || b.is_rational()) {
    const Cyc& s = a.is_rational() ? a : b;
    const Cyc& v = a.is_rational() ? b : a;
    Cyc r = v;
    const Rational& f = s.c_[0];
    if (!f.is_one())
      for (auto& x : r.c_) x *= f;
    if (a.is_rational() && b.is_rational()) r.n_ = std::max(a.n_, b.n_);
    return r;
  }
  if (a.n_ != b.n_) {
    unsigned m = lcm_u(a.n_, b.n_);
    return a.promote(m) * b.promote(m);
  }
  std::vector<Rational> prod(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j].is_zero()) continue;
      prod[i + j] += a.c_[i] * b.c_[j];
    }
  }
  return Cyc(a.n_, Cyc::reduce(a.n_, std::move(prod)));
}

Cyc Cyc::inverse() const {
  if (is_zero()) throw std::domain_error("cyc: division by zero");
  if (is_rational()) return Cyc(c_[0].inverse());
  // Solve (multiplication by this) * x = 1 over Q in the power basis.
  const std::size_t d = cyclotomic_polynomial(n_).size() - 1;
  std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d + 1));
  for (std::size_t col = 0; col < d; ++col) {
    std::vector<Rational> basis(col + 1);
    basis[col] = Rational(1);
    Cyc prod = *this * Cyc(n_, basis);
    for (std::size_t row = 0; row < prod.c_.size(); ++row) m[row][col] = prod.c_[row];
  }
  m[0][d] = Rational(1);
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && m[piv][col].is_zero()) ++piv;
    if (piv == d) throw std::logic_error("cyc: singular multiplication matrix");
    std::swap(m[piv], m[col]);
    Rational inv = m[col][col].inverse();
    for (std::size_t k = col; k <= d; ++k) m[col][k] *= inv;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      Rational f = m[r][col];
      for (std::size_t k = col; k <= d; ++k) m[r][k] -= f * m[col][k];
    }
  }
  std::vector<Rational> x(d);
  for (std::size_t r = 0; r < d; ++r) x[r] = m[r][d];
  return Cyc(n_, std::move(x));
}

bool operator==(const Cyc& a, const Cyc& b) {
  if (a.is_rational() && b.is_rational()) return a.c_ == b.c_;
  if (a.is_rational() != b.is_rational()) return false;
  if (a.n_ == b.n_) return a.c_ == b.c_;
  unsigned m = lcm_u(a.n_, b.n_);
  return a.promote(m).c_ == b.promote(m).c_;
}

std::string Cyc::str() const {
  if (c_.empty()) return "0";
  if (is_rational()) return c_[0].str();
  std::string out;
  for (std::size_t e = 0; e < c_.size(); ++e) {
    if (c_[e].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + c_[e].str() + ")";
    if (e > 0) out += "*z" + std::to_string(n_) + "^" + std::to_string(e);
  }
  return out;
}

nlohmann::json to_json(const Cyc& x) {
  nlohmann::json c = nlohmann::json::object();
  for (std::size_t e = 0; e < x.coeffs().size(); ++e) {
    const Rational& v = x.coeffs()[e];
    if (v.is_zero()) continue;
    c[std::to_string(e)] = nlohmann::json::array({v.num_str(), v.den_str()});
  }
  return {{"N", x.conductor()}, {"c", c}};
}

Cyc cyc_from_json(const nlohmann::json& j) {
  unsigned n = j.at("N").get<unsigned>();
  std::map<long long, Rational> m;
  for (const auto& [k, v] : j.at("c").items())
    m[std::stoll(k)] = Rational::parse(v.at(0).get<std::string>(), v.at(1).get<std::string>());
  return Cyc::make(n, m);
}

}  // namespace kmt
