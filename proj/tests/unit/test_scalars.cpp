#include <doctest.h>

#include <random>

#include "kmt/cyclotomic.hpp"

using kmt::Cyc;
using kmt::Rational;

TEST_CASE("rational arithmetic and normalization") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -3) == Rational(-1, 3));
  CHECK((Rational(1, 2) + Rational(1, 3)).str() == "5/6");
  CHECK(Rational::parse("-6/4").str() == "-3/2");
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(kmt::binomial(6, 2) == Rational(15));
  CHECK(kmt::factorial(5) == Rational(120));
}

TEST_CASE("rational overflow spills into big values and returns") {
  Rational big(1);
  for (int i = 0; i < 5; ++i) big *= Rational(1000000007LL * 1000);
  CHECK_THROWS(big.small_num());
  Rational back = big;
  for (int i = 0; i < 5; ++i) back /= Rational(1000000007LL * 1000);
  CHECK(back.is_one());
  CHECK(back.small_num() == 1);
  CHECK(kmt::factorial(30).str() == "265252859812191058636308480000000");
}

TEST_CASE("cyclotomic basics") {
  CHECK(Cyc::make(2, {{1, Rational(1)}}) == Cyc(-1));
  Cyc s = Cyc::root_of_unity(8, 1) + Cyc::root_of_unity(8, -1);
  CHECK(s * s == Cyc(2));
  CHECK(Cyc::sqrt2() * Cyc::sqrt2() == Cyc(2));
  Cyc w = Cyc(1) + Cyc::root_of_unity(3, 1);
  CHECK(w * w.inverse() == Cyc(1));
  Cyc i = Cyc::root_of_unity(4, 1);
  CHECK(i * i == Cyc(-1));
  Cyc p = Cyc::sqrt2().promote(24);
  CHECK(p.conductor() == 24);
  CHECK(p * p == Cyc(2));
  CHECK((Cyc::root_of_unity(3, 1) * Cyc::root_of_unity(4, 1)) == Cyc::root_of_unity(12, 7));
  CHECK(Cyc::root_of_unity(5, 1).conj() == Cyc::root_of_unity(5, 4));
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(kmt::cyclotomic_polynomial(1) == std::vector<long long>{-1, 1});
  CHECK(kmt::cyclotomic_polynomial(6) == std::vector<long long>{1, -1, 1});
  CHECK(kmt::cyclotomic_polynomial(24).size() - 1 == kmt::euler_phi(24));
  CHECK(kmt::cyclotomic_polynomial(24) == std::vector<long long>{1, 0, 0, 0, -1, 0, 0, 0, 1});
}

namespace {
Cyc random_cyc(std::mt19937& rng, unsigned n) {
  std::uniform_int_distribution<int> d(-5, 5);
  std::map<long long, Rational> m;
  for (unsigned e = 0; e < n; ++e) m[e] = Rational(d(rng), 1 + (d(rng) + 5) % 4);
  return Cyc::make(n, m);
}
}  // namespace

TEST_CASE("field axioms on random elements of Q(zeta_24)") {
  std::mt19937 rng(7);
  for (int t = 0; t < 40; ++t) {
    Cyc a = random_cyc(rng, 24), b = random_cyc(rng, 24), c = random_cyc(rng, 24);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Cyc());
    if (!a.is_zero()) CHECK(a * a.inverse() == Cyc(1));
    CHECK(a.conj().conj() == a);
    CHECK((a * b).conj() == a.conj() * b.conj());
  }
}

TEST_CASE("json roundtrip") {
  Cyc a = Cyc::make(24, {{1, Rational(3, 7)}, {5, Rational(-2)}});
  CHECK(kmt::cyc_from_json(kmt::to_json(a)) == a);
}
