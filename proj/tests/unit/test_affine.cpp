#include <doctest.h>

#include <random>

#include "kmt/affine.hpp"

using namespace kmt;

namespace {

std::shared_ptr<const AffineAlgebra> aff(const char* t, int c, std::vector<int> s = {}) {
  return affine_algebra(make_realization({t, c, std::move(s), {}, 0}));
}

struct Inst {
  const char* type;
  int case_id;
  std::vector<int> s;
};

const Inst kInst[] = {{"A2", 1, {}},     {"A2", 1, {0, 1}}, {"A3", 2, {}}, {"D3", 3, {}},
                      {"D4", 5, {}},     {"A1", 0, {}},     {"A1", 0, {1, 1}}, {"A2", 0, {}},
                      {"G2", 0, {}}};

// All symbols with |N| <= bound.
std::vector<Sym> symbols(const AffineAlgebra& A, int bound) {
  std::vector<Sym> out;
  for (int N = -bound; N <= bound; ++N)
    for (std::size_t b = 0; b < A.dim(); ++b)
      if (A.valid(Sym{static_cast<int>(b), N})) out.push_back(Sym{static_cast<int>(b), N});
  return out;
}

AffineElement one(const Sym& s) {
  AffineElement e;
  e.add(s, Cyc(1));
  return e;
}

CVec unit(int L, int j, int sign) {
  CVec c(static_cast<std::size_t>(L));
  c[static_cast<std::size_t>(j)] = sign;
  return c;
}

}  // namespace

TEST_CASE("affine Jacobi identity with central term and derivation") {
  std::mt19937 rng(7);
  for (const auto& in : kInst) {
    auto A = aff(in.type, in.case_id, in.s);
    auto syms = symbols(*A, 2 * A->T());
    std::uniform_int_distribution<std::size_t> pick(0, syms.size() - 1);
    AffineElement dd;
    dd.d = Cyc(1);
    for (int trial = 0; trial < 300; ++trial) {
      AffineElement x = one(syms[pick(rng)]), y = one(syms[pick(rng)]), z = one(syms[pick(rng)]);
      if (trial % 10 == 0) x = dd;
      AffineElement j = A->bracket(x, A->bracket(y, z));
      j += A->bracket(y, A->bracket(z, x));
      j += A->bracket(z, A->bracket(x, y));
      CHECK_MESSAGE(j.is_zero(), in.type, "/", in.case_id);
      CHECK(A->bracket(x, y) == A->bracket(y, x) * Cyc(-1));
    }
  }
}

TEST_CASE("finite form on the gradation basis is invariant") {
  for (const auto& in : kInst) {
    auto A = aff(in.type, in.case_id, in.s);
    int d = static_cast<int>(A->dim());
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; c += 3) {
          Cyc lhs, rhs;
          for (const auto& [k, x] : A->fbracket(a, b)) lhs += x * A->form(k, c);
          for (const auto& [k, x] : A->fbracket(b, c)) rhs += x * A->form(a, k);
          REQUIRE(lhs == rhs);
        }
  }
}

TEST_CASE("canonical generators satisfy the Kac-Moody relations") {
  for (const auto& in : kInst) {
    auto A = aff(in.type, in.case_id, in.s);
    const auto& R = A->real();
    int L = R.l + 1;
    AffineElement sum;
    for (int i = 0; i < L; ++i) {
      sum += A->h(i) * Cyc(R.comarks[static_cast<std::size_t>(i)]);
      for (int j = 0; j < L; ++j) {
        Cyc a(R.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        CHECK(A->bracket(A->h(i), A->e(j)) == A->e(j) * a);
        CHECK(A->bracket(A->h(i), A->f(j)) == A->f(j) * (-a));
        CHECK(A->bracket(A->e(i), A->f(j)) == (i == j ? A->h(i) : AffineElement{}));
      }
    }
    // sum of comarks times h_j is the canonical central element
    AffineElement c;
    c.c = Cyc(1);
    CHECK(sum == c);
    AffineElement dd;
    dd.d = Cyc(1);
    for (int j = 0; j < L; ++j) {
      CHECK(A->bracket(dd, A->e(j)) == A->e(j) * Cyc(Rational(R.s[static_cast<std::size_t>(j)], R.T)));
      for (const auto& [s, x] : A->e(j).terms) {
        CHECK(A->root(s) == unit(L, j, 1));
        CHECK(A->side(s) == 1);
      }
      for (const auto& [s, x] : A->f(j).terms) CHECK(A->root(s) == unit(L, j, -1));
      auto tri = A->triangular(A->e(j) + A->f(j) + A->h(j));
      CHECK(tri[0] == A->f(j));
      CHECK(tri[1] == A->h(j));
      CHECK(tri[2] == A->e(j));
    }
  }
}

TEST_CASE("affine roots are additive and sign-definite") {
  for (const auto& in : kInst) {
    auto A = aff(in.type, in.case_id, in.s);
    auto syms = symbols(*A, A->T());
    for (const auto& s : syms) {
      CVec r = A->root(s);
      CHECK(A->degree_of(r) == s.N);
      CHECK_NOTHROW(A->side(s));
      if (s.N == 0 && A->is_cartan0(s.b)) CHECK(height(r) == 0);
      for (const auto& t : syms) {
        auto br = A->bracket(s, t);
        for (const auto& [u, x] : br.terms) {
          CVec rt = A->root(t), ru = A->root(u);
          for (std::size_t k = 0; k < r.size(); ++k) REQUIRE(ru[k] == r[k] + rt[k]);
        }
      }
    }
  }
}

TEST_CASE("Chevalley anti-involution") {
  std::mt19937 rng(11);
  for (const auto& in : kInst) {
    auto A = aff(in.type, in.case_id, in.s);
    int L = A->l() + 1;
    auto om = [&](const AffineElement& x) {
      AffineElement r;
      for (const auto& [s, a] : x.terms) r += A->omega(s) * a;
      r.c = x.c;
      return r;
    };
    for (int j = 0; j < L; ++j) {
      CHECK(om(A->e(j)) == A->f(j));
      CHECK(om(A->f(j)) == A->e(j));
      CHECK(om(A->h(j)) == A->h(j));
    }
    auto syms = symbols(*A, 2 * A->T());
    std::uniform_int_distribution<std::size_t> pick(0, syms.size() - 1);
    for (int trial = 0; trial < 200; ++trial) {
      auto x = one(syms[pick(rng)]), y = one(syms[pick(rng)]);
      CHECK(om(om(x)) == x);
      CHECK(om(A->bracket(x, y)) == A->bracket(om(y), om(x)));
    }
  }
}

TEST_CASE("loop symbols and labels") {
  auto A = aff("A2", 1);
  CHECK(A->T() == 2);
  int th = A->theta_elem();
  CHECK(A->cls(th) == 1);
  CHECK(A->valid(Sym{th, -1}));
  CHECK_FALSE(A->valid(Sym{th, -2}));
  CHECK_THROWS(A->root(Sym{th, 0}));
  if (A->theta_scale() == Cyc(1)) CHECK(A->label(Sym{th, -1}) == "x[theta]@-1/2");
  // E_0 = x_{-theta} at degree 1/2
  auto e0 = A->e(0);
  REQUIRE(e0.terms.size() == 1);
  CHECK(A->elem_label(e0.terms.begin()->first.b) == "x[-theta]");
  CHECK(A->label(e0.terms.begin()->first) == "x[-theta]@1/2");
  CHECK_THROWS(A->loop(A->real().alg->x({1, 0}), 0));

  auto U = aff("A1", 0);
  CHECK(U->T() == 1);
  CHECK(U->root(Sym{U->theta_elem(), -1}) == CVec{-1, 0});
}
