#include <doctest.h>

#include <set>

#include "kmt/twist.hpp"

using namespace kmt;

namespace {

struct CaseRef {
  const char* type;
  int case_id;
};

const CaseRef kCases[] = {{"A2", 1}, {"A4", 1}, {"A3", 2}, {"A5", 2}, {"D3", 3}, {"D4", 3},
                          {"D4", 5}, {"A1", 0}, {"A2", 0}, {"B2", 0}, {"G2", 0}};

std::shared_ptr<const TwistRealization> real(const char* t, int c, std::vector<int> s = {}) {
  return make_realization({t, c, std::move(s), {}, 0});
}

// Membership of v in span(basis) via rank.
bool in_span(const std::vector<LieVec>& basis, const LieVec& v) {
  if (basis.empty()) return is_zero(v);
  EchelonBasis eb(v.size());
  for (const auto& b : basis) eb.insert(b);
  return eb.contains(v);
}

}  // namespace

TEST_CASE("diagram automorphisms: order, bracket and form") {
  auto a2 = chevalley_algebra(root_system("A2"));
  auto mu = diagram_automorphism(a2, 1);
  CHECK(mu.apply(a2->x({1, 0})) == a2->x({0, 1}));
  CHECK(mu.apply(a2->x({1, 1})) == scale(Cyc(-1), a2->x({1, 1})));
  CHECK(mu.apply(a2->h(0)) == a2->h(1));
  CHECK(mu.power(2).is_identity());
  auto d4 = chevalley_algebra(root_system("D4"));
  auto m5 = diagram_automorphism(d4, 5);
  CHECK_FALSE(m5.power(2).is_identity());
  CHECK(m5.power(3).is_identity());
  auto a3 = chevalley_algebra(root_system("A3"));
  auto m2 = diagram_automorphism(a3, 2);
  CHECK(m2.apply(a3->x({1, 1, 1})) == a3->x({1, 1, 1}));
  for (auto [t, c] : {CaseRef{"A2", 1}, CaseRef{"A3", 2}, CaseRef{"D3", 3}, CaseRef{"D4", 5}, CaseRef{"A4", 1}}) {
    CAPTURE(t);
    auto g = chevalley_algebra(root_system(t));
    auto m = diagram_automorphism(g, c);
    CHECK(m.preserves_bracket());
    CHECK(m.preserves_form());
    // mu(h_alpha) = h_{mu-bar(alpha)}
    auto p = diagram_permutation(g->roots(), c);
    for (const auto& r : g->roots().positive) {
      RootVec img(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) img[p[i]] += r[i];
      CHECK(m.apply(g->h_of(r)) == g->h_of(img));
    }
  }
  CHECK_THROWS_AS(diagram_automorphism(a3, 1), InvalidRealization);
  CHECK_THROWS_AS(diagram_automorphism(a2, 5), InvalidRealization);
}

TEST_CASE("case 1 sign rule holds verbatim") {
  for (const char* t : {"A2", "A4"}) {
    auto R = real(t, 1);
    const auto& g = *R->alg;
    const auto& rs = g.roots();
    auto p = diagram_permutation(rs, 1);
    for (std::size_t b = 0; b < g.dim(); ++b) {
      if (g.is_cartan(static_cast<int>(b))) continue;
      RootVec r = g.root_of(static_cast<int>(b)), m(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) m[p[i]] += r[i];
      int sign = (1 + rs.height(r)) % 2 == 0 ? 1 : -1;
      CHECK(R->mu.images[b] == scale(Cyc(sign), g.x(m)));
    }
  }
}

TEST_CASE("inner automorphisms") {
  auto a1 = chevalley_algebra(root_system("A1"));
  CHECK(inner_automorphism(a1, {0}, 3).is_identity());
  auto flip = inner_automorphism(a1, {1}, 2);
  CHECK(flip.apply(a1->x({1})) == scale(Cyc(-1), a1->x({1})));
  CHECK(flip.apply(a1->h(0)) == a1->h(0));
  CHECK(flip.preserves_bracket());
  CHECK_THROWS_AS(inner_automorphism(a1, {1, 2}, 2), InvalidRealization);
}

TEST_CASE("affine Cartan data reference values") {
  auto R = real("A2", 1);
  CHECK(R->A == std::vector<std::vector<int>>{{2, -1}, {-4, 2}});
  CHECK(R->marks == std::vector<int>{1, 2});
  CHECK(R->comarks == std::vector<int>{2, 1});
  CHECK(R->coxeter == 3);
  CHECK(R->dual_coxeter == 3);
  CHECK(R->T == 2);
  CHECK(R->beta_norm[0] == Rational(2));
  auto U = real("A1", 0);
  CHECK(U->A == std::vector<std::vector<int>>{{2, -2}, {-2, 2}});
  CHECK(U->marks == std::vector<int>{1, 1});
  CHECK(U->comarks == std::vector<int>{1, 1});
  CHECK(U->coxeter == 2);
  CHECK(U->dual_coxeter == 2);
  CHECK(U->T == 1);
  auto D = real("D4", 5);
  CHECK(D->r == 3);
  CHECK(D->T == 3);
  CHECK(D->grad.dim(0) == 14);
  CHECK(R->grad.dim(0) == 3);
  CHECK(R->grad.dim(1) == 5);
}

TEST_CASE("printed generator formulas") {
  auto R = real("A2", 1);
  const auto& g = *R->alg;
  CHECK(R->E[0] == g.x({-1, -1}));
  CHECK(R->F[0] == g.x({1, 1}));
  CHECK(R->E[1] == scale(Cyc::sqrt2(), add(g.x({1, 0}), g.x({0, 1}))));
  auto D = real("D4", 5);
  const auto& d = *D->alg;
  Cyc eps = Cyc::root_of_unity(3, 1);
  LieVec e0 = d.x({-1, -1, -1, 0});
  axpy(e0, eps * eps, d.x({-1, -1, 0, -1}));
  axpy(e0, eps, d.x({0, -1, -1, -1}));
  CHECK(D->theta0 == RootVec{1, 1, 1, 0});
  CHECK(D->E[0] == e0);
  auto C3 = real("D3", 3);
  CHECK(C3->E[0] == add(C3->alg->x({-1, -1, 0}), scale(Cyc(-1), C3->alg->x({-1, 0, -1}))));
  // case 2: the sign between the two terms is fixed by mu in this basis
  auto C2 = real("A3", 2);
  const auto& a3 = *C2->alg;
  CHECK(C2->theta0 == RootVec{1, 1, 0});
  CHECK(C2->mu.apply(a3.x({-1, -1, 0})) == scale(Cyc(-1), a3.x({0, -1, -1})));
  CHECK(C2->E[0] == add(a3.x({-1, -1, 0}), a3.x({0, -1, -1})));
  CHECK(C2->mu.apply(C2->E[0]) == scale(Cyc(-1), C2->E[0]));
}

TEST_CASE("realization invariants for every shipped case") {
  for (auto [t, c] : kCases) {
    auto R = real(t, c);
    const auto& g = *R->alg;
    CAPTURE(R->name());
    const int l = R->l;
    CHECK(R->sigma.power(R->T).is_identity());
    CHECK(R->sigma.preserves_bracket());
    CHECK(R->sigma.preserves_form());
    CHECK_FALSE(R->f0_rescaled);
    // generators
    for (int i = 0; i <= l; ++i) {
      CHECK(g.bracket(R->E[i], R->F[i]) == R->H[i]);
      CHECK(g.bracket(R->H[i], R->E[i]) == scale(Cyc(2), R->E[i]));
      CHECK(R->A[i][i] == 2);
      for (int j = 0; j <= l; ++j) {
        CHECK(g.bracket(R->H[i], R->E[j]) == scale(Cyc(R->A[i][j]), R->E[j]));
        CHECK(g.bracket(R->H[i], R->F[j]) == scale(Cyc(-R->A[i][j]), R->F[j]));
        if (i != j) CHECK(is_zero(g.bracket(R->E[i], R->F[j])));
      }
    }
    // null vectors
    for (int i = 0; i <= l; ++i) {
      long long s1 = 0, s2 = 0;
      for (int j = 0; j <= l; ++j) {
        s1 += static_cast<long long>(R->A[i][j]) * R->marks[j];
        s2 += static_cast<long long>(R->comarks[j]) * R->A[j][i];
      }
      CHECK(s1 == 0);
      CHECK(s2 == 0);
    }
    CHECK(R->marks[0] == 1);
    // comark relation and beta_0 normalization
    for (int j = 0; j <= l; ++j)
      CHECK(Rational(R->comarks[j]) == Rational(R->r) * R->beta_norm[j] * Rational(R->marks[j]) / Rational(2));
    CHECK(R->beta_norm[0] == Rational(2 * R->comarks[0]) / Rational(R->r));
    // E_0 is a lowest weight vector of g_[1]
    for (int j = 1; j <= l; ++j) CHECK(is_zero(g.bracket(R->F[j], R->E[0])));
    if (R->r > 1) {
      Cyc omega = Cyc::root_of_unity(static_cast<unsigned>(R->r), 1);
      CHECK(R->mu.apply(R->E[0]) == scale(omega, R->E[0]));
      for (int j = 1; j <= l; ++j) CHECK(R->mu.apply(R->E[j]) == R->E[j]);
    }
    // gradation
    std::size_t total = 0;
    for (int j = 0; j < R->T; ++j) total += R->grad.dim(j);
    CHECK(total == g.dim());
    std::vector<std::vector<LieVec>> spaces(R->T);
    for (const auto& e : R->grad.elems) {
      CHECK(R->sigma.apply(e.v) == scale(Cyc::root_of_unity(static_cast<unsigned>(R->T), e.cls), e.v));
      spaces[e.cls].push_back(e.v);
      // weight vector for t_[0]
      for (int i = 0; i <= l; ++i) CHECK(g.bracket(R->H[i], e.v) == scale(Cyc(e.weight[i]), e.v));
    }
    for (const auto& a : R->grad.elems)
      for (const auto& b : R->grad.elems)
        CHECK(in_span(spaces[(a.cls + b.cls) % R->T], g.bracket(a.v, b.v)));
  }
}

TEST_CASE("g_[1] and g_[-1] are contragredient") {
  for (auto [t, c] : {CaseRef{"A2", 1}, CaseRef{"A3", 2}, CaseRef{"D4", 5}, CaseRef{"D4", 3}}) {
    auto R = real(t, c);
    std::multiset<std::vector<int>> w1, wm1;
    for (const auto& e : R->grad.elems) {
      if (e.cls == 1) w1.insert(e.weight);
      if (e.cls == R->T - 1) {
        auto w = e.weight;
        for (auto& x : w) x = -x;
        wm1.insert(w);
      }
    }
    CHECK(w1 == wm1);
  }
}

TEST_CASE("s-automorphisms") {
  auto R = real("A2", 1);
  // (1,0,...,0) gives back mu
  CHECK(R->sigma.images == R->mu.images);
  auto R01 = real("A2", 1, {0, 1});
  CHECK(R01->T == 4);
  CHECK(R01->sigma.power(4).is_identity());
  CHECK(R01->sigma.apply(R01->E[1]) == scale(Cyc::root_of_unity(4, 1), R01->E[1]));
  CHECK(R01->sigma.apply(R01->E[0]) == R01->E[0]);
  // composite mu o inner reproduces the s-automorphism
  auto comp = R->mu.compose(inner_automorphism(R->alg, {1, 1}, 4));
  CHECK(comp.images == R01->sigma.images);
  CHECK(s_automorphism(*R, {0, 1}).images == R01->sigma.images);
  // untwisted A1: s = (0,1) has order 1, s = (1,1) has order 2
  CHECK(real("A1", 0, {0, 1})->T == 1);
  auto U11 = real("A1", 0, {1, 1});
  CHECK(U11->T == 2);
  CHECK(U11->sigma.apply(U11->E[1]) == scale(Cyc(-1), U11->E[1]));
  CHECK(U11->sigma.apply(U11->E[0]) == scale(Cyc(-1), U11->E[0]));
  CHECK(U11->grad.dim(0) == 1);
  CHECK(U11->grad.dim(1) == 2);
  CHECK_THROWS_AS(real("A2", 1, {0, 0}), InvalidRealization);
  CHECK_THROWS_AS(real("A2", 1, {2, 2}), InvalidRealization);
  CHECK_THROWS_AS(real("A2", 1, {1, -1}), InvalidRealization);
  CHECK_THROWS_AS(real("A2", 1, {1}), InvalidRealization);
}

TEST_CASE("inner h given in s-normal form") {
  auto R = make_realization({"A2", 1, {}, {1, 1}, 4});
  CHECK(R->s == std::vector<int>{0, 1});
  CHECK_THROWS_AS(make_realization({"A2", 1, {}, {1, 0}, 4}), InvalidRealization);
  CHECK_THROWS_AS(make_realization({"A2", 1, {}, {3, 3}, 4}), InvalidRealization);
}

TEST_CASE("E6 case 4 realization") {
  auto R = real("E6", 4);
  CHECK(R->grad.dim(0) == 52);
  CHECK(R->grad.dim(1) == 26);
  CHECK(R->marks == std::vector<int>{1, 2, 3, 2, 1});
  CHECK(R->comarks == std::vector<int>{1, 2, 3, 4, 2});
  CHECK(R->sigma.power(2).is_identity());
}

TEST_CASE("realization json and fingerprint are deterministic") {
  auto R = real("A2", 1);
  auto j = R->to_json();
  CHECK(j["T"] == 2);
  CHECK(j["A"] == nlohmann::json::parse("[[2,-1],[-4,2]]"));
  CHECK(R->fingerprint() == real("A2", 1)->fingerprint());
  CHECK(R->fingerprint() != real("A1", 0)->fingerprint());
  CHECK(R->fingerprint().size() == 16);
}

TEST_CASE("validate_realization accepts shipped cases and flags corrupted data") {
  for (auto [t, c] : kCases) {
    auto R = real(t, c);
    CAPTURE(R->name());
    CHECK(validate_realization(*R)["pass"] == true);
  }
  TwistRealization bad = *real("A2", 1);
  bad.A[0][1] = -2;
  auto j = validate_realization(bad);
  CHECK(j["cartan_matrix"] == false);
  CHECK(j["jacobi"] == true);
  CHECK(j["pass"] == false);
  TwistRealization bad2 = *real("A3", 2);
  bad2.marks[0] = 2;
  CHECK(validate_realization(bad2)["null_vectors"] == false);
}
