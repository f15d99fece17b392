#include <doctest.h>

#include <random>

#include "kmt/modules.hpp"

using namespace kmt;

namespace {

std::shared_ptr<const AffineAlgebra> aff(const char* t, int c, std::vector<int> s = {}) {
  return affine_algebra(make_realization({t, c, std::move(s), {}, 0}));
}

WeightLambda labels(std::vector<Rational> v) { return WeightLambda{std::move(v), Rational()}; }

// q-series coefficients (in steps of 1/T) of prod_{m>0} (1 - q^{m/T})^{-d(m mod T)}
std::vector<long long> pbw_series(const Gradation& g, int T, int maxn) {
  std::vector<long long> c(static_cast<std::size_t>(maxn + 1), 0);
  c[0] = 1;
  for (int m = 1; m <= maxn; ++m) {
    long long d = static_cast<long long>(g.dim(m % T));
    for (long long rep = 0; rep < d; ++rep)
      for (int n = m; n <= maxn; ++n) c[static_cast<std::size_t>(n)] += c[static_cast<std::size_t>(n - m)];
  }
  return c;
}

// sum_n q^{n^2} / prod (1 - q^m): the level-1 basic sl2 module
std::vector<long long> frenkel_kac(int maxn) {
  std::vector<long long> p(static_cast<std::size_t>(maxn + 1), 0);
  p[0] = 1;
  for (int m = 1; m <= maxn; ++m)
    for (int n = m; n <= maxn; ++n) p[static_cast<std::size_t>(n)] += p[static_cast<std::size_t>(n - m)];
  std::vector<long long> out(static_cast<std::size_t>(maxn + 1), 0);
  for (int k = -maxn; k <= maxn; ++k)
    for (int n = 0; n + k * k <= maxn; ++n) out[static_cast<std::size_t>(n + k * k)] += p[static_cast<std::size_t>(n)];
  return out;
}

// [a,b] v = a b v - b a v on a random basis vector
void check_representation(Module& M, const std::vector<CVec>& weights, int trials, unsigned seed) {
  const auto& A = M.alg();
  std::mt19937 rng(seed);
  std::vector<Sym> syms;
  for (int N = -2 * A.T(); N <= 2 * A.T(); ++N)
    for (std::size_t b = 0; b < A.dim(); ++b)
      if (A.valid(Sym{static_cast<int>(b), N})) syms.push_back(Sym{static_cast<int>(b), N});
  std::uniform_int_distribution<std::size_t> ps(0, syms.size() - 1), pw(0, weights.size() - 1);
  for (int t = 0; t < trials; ++t) {
    const CVec& beta = weights[pw(rng)];
    std::size_t d = M.dim(beta);
    if (d == 0) continue;
    WVec v{beta, Vec(d)};
    v.v[rng() % d] = Cyc(1);
    Sym a = syms[ps(rng)], b = syms[ps(rng)];
    WVec ab = M.act(a, M.act(b, v));
    WVec ba = M.act(b, M.act(a, v));
    AffineElement br = A.bracket(a, b);
    WVec c = br.is_zero() ? WVec{ab.beta, Vec(ab.v.size())} : M.act(br, v);
    REQUIRE(ab.beta == ba.beta);
    Vec diff = ab.v;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= ba.v[i] + c.v[i];
    CHECK(is_zero(diff));
  }
}

}  // namespace

TEST_CASE("weights and levels") {
  auto A = aff("A2", 1);
  const auto& R = A->real();
  auto w = WeightLambda::fundamental(R, 1);
  CHECK(w.level(R) == Rational(1));
  CHECK(w.dominant());
  CHECK(WeightLambda::fundamental(R, 0).level(R) == Rational(2));
  auto v = WeightLambda::vacuum(R, Rational(1));
  auto fin = v.finite_values(R);
  CHECK(fin[1].is_zero());
  CHECK(v.level(R) == Rational(1));
  CHECK_FALSE(labels({Rational(1, 2), Rational(0)}).dominant());
}

TEST_CASE("trivial-top PBW module: basis sizes match the product formula") {
  for (auto [t, c] : {std::pair{"A2", 1}, std::pair{"A3", 2}, std::pair{"A1", 0}}) {
    auto A = aff(t, c);
    const auto& R = A->real();
    PBWModule V(A, PBWModule::Kind::Vacuum, WeightLambda::vacuum(R, Rational(1)));
    int maxn = 2 * R.T;
    auto want = pbw_series(R.grad, R.T, maxn);
    std::vector<long long> got(static_cast<std::size_t>(maxn + 1), 0);
    for (const auto& b : window_weights(R, Window{maxn, 6 * maxn + 4})) got[static_cast<std::size_t>(depth_num(R, b))] += static_cast<long long>(V.dim(b));
    CHECK(got == want);
  }
  // depth 1/2 in A2 case 1: one symbol per basis vector of g_(1)
  auto A = aff("A2", 1);
  PBWModule V(A, PBWModule::Kind::Vacuum, WeightLambda::vacuum(A->real(), Rational(1)));
  std::size_t n = 0;
  for (const auto& b : window_weights(A->real(), Window{1, 8}))
    if (depth_num(A->real(), b) == 1) n += V.dim(b);
  CHECK(n == 5);
  CHECK(V.dim(CVec{0, 0}) == 1);
}

TEST_CASE("module actions are representations") {
  auto A = aff("A2", 1);
  const auto& R = A->real();
  PBWModule M(A, PBWModule::Kind::Verma, WeightLambda::fundamental(R, 1));
  check_representation(M, window_weights(R, Window{2, 4}), 150, 1);
  PBWModule V(A, PBWModule::Kind::Vacuum, WeightLambda::vacuum(R, Rational(2)));
  check_representation(V, window_weights(R, Window{2, 6}), 150, 2);
  StandardModule L(A, WeightLambda::fundamental(R, 1));
  check_representation(L, window_weights(R, Window{3, 6}), 150, 3);
  auto U = aff("A1", 0);
  StandardModule L2(U, WeightLambda::fundamental(U->real(), 0, 2));
  check_representation(L2, window_weights(U->real(), Window{3, 8}), 150, 4);
  auto D = aff("D4", 5);
  StandardModule L3(D, WeightLambda::fundamental(D->real(), 0));
  check_representation(L3, window_weights(D->real(), Window{3, 6}), 60, 5);
}

TEST_CASE("highest-weight conditions") {
  auto A = aff("A2", 1);
  const auto& R = A->real();
  auto lam = labels({Rational(3, 2), Rational(-2)});
  PBWModule M(A, PBWModule::Kind::Verma, lam);
  for (int j = 0; j <= R.l; ++j) {
    WVec v = M.top();
    CHECK(is_zero(M.act(A->e(j), v).v));
    WVec h = M.act(A->h(j), v);
    CHECK(h.v == Vec{Cyc(lam.labels[static_cast<std::size_t>(j)])});
    WVec efv = M.act(A->e(j), M.act(A->f(j), v));
    CHECK(efv.v == Vec{Cyc(lam.labels[static_cast<std::size_t>(j)])});
  }
  AffineElement c;
  c.c = Cyc(1);
  CHECK(M.act(c, M.top()).v == Vec{Cyc(lam.level(R))});

  // x_theta(1) x_{-theta}(-1) 1 = k 1 in the untwisted vacuum module
  auto U = aff("A2", 0);
  PBWModule V(U, PBWModule::Kind::Vacuum, WeightLambda::vacuum(U->real(), Rational(3)));
  Cyc sc;
  int tb = U->theta_elem();
  int mb = U->elem_of_root(RootVec{-1, -1}, &sc);
  REQUIRE(U->theta_scale() == Cyc(1));
  REQUIRE(sc == Cyc(1));
  WVec w = V.act(Sym{mb, -1}, V.top());
  WVec back = V.act(Sym{tb, 1}, w);
  CHECK(back.v == Vec{Cyc(3)});
  // g(0) kills the vacuum
  for (std::size_t b = 0; b < U->dim(); ++b) CHECK(is_zero(V.act(Sym{static_cast<int>(b), 0}, V.top()).v));
  // x_theta(-1)^{k+1} 1 is singular
  WVec s = V.top();
  for (int i = 0; i < 4; ++i) s = V.act(Sym{tb, -1}, s);
  CHECK_FALSE(is_zero(s.v));
  for (int j = 0; j <= U->l(); ++j) CHECK(is_zero(V.act(U->e(j), s).v));
}

TEST_CASE("contravariant form") {
  auto A = aff("A2", 1);
  const auto& R = A->real();
  PBWModule M(A, PBWModule::Kind::Verma, WeightLambda::fundamental(R, 1));
  auto g0 = contravariant_gram(M, CVec{0, 0});
  CHECK(g0.gram == Mat{Vec{Cyc(1)}});
  CHECK(g0.nullity() == 0);
  for (const auto& b : window_weights(R, Window{3, 5})) {
    auto g = contravariant_gram(M, b);
    for (std::size_t i = 0; i < g.gram.size(); ++i)
      for (std::size_t j = 0; j < g.gram.size(); ++j) CHECK(g.gram[i][j] == g.gram[j][i]);
  }
  // generic weight: nondegenerate at small depth
  PBWModule G(A, PBWModule::Kind::Verma, labels({Rational(1, 3), Rational(2, 7)}));
  for (const auto& b : window_weights(R, Window{2, 4})) CHECK(contravariant_gram(G, b).nullity() == 0);
}

TEST_CASE("maximal submodule generators") {
  auto A = aff("A2", 1);
  const auto& R = A->real();
  PBWModule M(A, PBWModule::Kind::Verma, WeightLambda::fundamental(R, 1));
  auto gens = maximal_submodule_generators(M);
  REQUIRE(gens.size() == 2);
  CHECK(gens[0].beta == CVec{1, 0});
  CHECK(gens[1].beta == CVec{0, 2});
  for (const auto& g : gens) {
    CHECK_FALSE(is_zero(g.v));
    for (int j = 0; j <= R.l; ++j) CHECK(is_zero(M.act(A->e(j), g).v));
  }
  PBWModule N(A, PBWModule::Kind::Verma, labels({Rational(1, 2), Rational(0)}));
  CHECK_THROWS_AS(maximal_submodule_generators(N), NonDominant);
  auto empty = submodule_closure(M, {}, Window{2, 4});
  CHECK(empty.basis.empty());
  auto full = submodule_closure(M, {M.top()}, Window{2, 4});
  for (const auto& b : window_weights(R, Window{2, 4})) CHECK(full.dim(b) == M.dim(b));
}

TEST_CASE("untwisted A1 level 1: standard dims match Frenkel-Kac") {
  auto U = aff("A1", 0);
  StandardModule L(U, WeightLambda::fundamental(U->real(), 0));
  auto dims = standard_dims(L, 6);
  auto fk = frenkel_kac(6);
  for (std::size_t n = 0; n < dims.size(); ++n) CHECK(static_cast<long long>(dims[n]) == fk[n]);
}

TEST_CASE("character tables: Gram, generator closure and standard model agree") {
  {
    auto U = aff("A1", 0);
    auto t = character_table(U, WeightLambda::fundamental(U->real(), 0), Window{3, 7});
    CHECK(t.agree());
    // depth 0 holds f_1^n v for every n; only the top survives in L
    CHECK(t.rows.front().verma == 8);
    CHECK(t.rows.front().gram_rank == 1);
    auto top = t.by_weight.at(CVec{0, 0});
    CHECK(top[0] == 1);
    CHECK(top[4] == 1);
  }
  {
    auto A = aff("A2", 1);
    auto t = character_table(A, WeightLambda::fundamental(A->real(), 1), Window{4, 6});
    CHECK(t.agree());
    for (const auto& [b, e] : t.by_weight) CHECK(e[1] == e[2]);
  }
  {
    auto A = aff("A2", 1, {1, 1});
    auto t = character_table(A, WeightLambda::fundamental(A->real(), 1), Window{6, -1});
    CHECK(t.agree());
  }
}

TEST_CASE("integrability") {
  auto A = aff("A2", 1);
  const auto& R = A->real();
  StandardModule L(A, WeightLambda::fundamental(R, 1));
  CHECK(integrability_check(L));
  PBWModule M(A, PBWModule::Kind::Verma, WeightLambda::fundamental(R, 1));
  CHECK_FALSE(integrability_check(M, 4));
  StandardModule N(A, labels({Rational(1, 2), Rational(1)}));
  CHECK_FALSE(integrability_check(N, 4));
}

TEST_CASE("Heisenberg membership") {
  for (int m = 0; m <= 8; ++m) CHECK(heisenberg_membership(m).member);
  auto r = heisenberg_membership(2);
  REQUIRE(r.member);
  std::map<std::string, Rational> w(r.witness.begin(), r.witness.end());
  CHECK(w["x^2"] == Rational(1));
  CHECK(w["z"] == Rational(-1));
  CHECK(w["xy"] == Rational(2));
  CHECK(w["y^2"] == Rational(1));
  CHECK_THROWS(heisenberg_membership(11));
}
