#include <doctest.h>

#include "kmt/finlie.hpp"

using namespace kmt;

namespace {

std::size_t classical_root_count(char f, int n) {
  switch (f) {
    case 'A': return static_cast<std::size_t>(n * (n + 1));
    case 'B':
    case 'C': return static_cast<std::size_t>(2 * n * n);
    case 'D': return static_cast<std::size_t>(2 * n * (n - 1));
    case 'E': return n == 6 ? 72 : n == 7 ? 126 : 240;
    case 'F': return 48;
    case 'G': return 12;
  }
  return 0;
}

bool jacobi_all(const ChevalleyAlgebra& g) {
  const int d = static_cast<int>(g.dim());
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      LieVec ab = g.bracket(g.basis_vector(a), g.basis_vector(b));
      for (int c = b + 1; c < d; ++c) {
        LieVec x = g.bracket(ab, g.basis_vector(c));
        LieVec y = g.bracket(g.bracket(g.basis_vector(b), g.basis_vector(c)), g.basis_vector(a));
        LieVec z = g.bracket(g.bracket(g.basis_vector(c), g.basis_vector(a)), g.basis_vector(b));
        if (!is_zero(add(add(x, y), z))) return false;
      }
    }
  return true;
}

bool form_invariant_all(const ChevalleyAlgebra& g) {
  const int d = static_cast<int>(g.dim());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      LieVec ab = g.bracket(g.basis_vector(a), g.basis_vector(b));
      for (int c = 0; c < d; ++c) {
        LieVec ac = g.bracket(g.basis_vector(a), g.basis_vector(c));
        if (g.form(ab, g.basis_vector(c)) + g.form(g.basis_vector(b), ac) != Cyc()) return false;
      }
    }
  return true;
}

}  // namespace

TEST_CASE("root counts and highest roots") {
  const std::vector<std::pair<char, int>> types = {{'A', 1}, {'A', 2}, {'A', 5}, {'B', 2}, {'B', 4}, {'C', 3},
                                                   {'C', 4}, {'D', 3}, {'D', 4}, {'D', 5}, {'E', 6}, {'E', 7},
                                                   {'E', 8}, {'F', 4}, {'G', 2}};
  for (auto [f, n] : types) {
    RootSystem rs = root_system(f, n);
    CAPTURE(rs.label());
    CHECK(rs.num_roots() == classical_root_count(f, n));
    for (int i = 0; i < n; ++i) {
      RootVec up = rs.highest;
      up[i] += 1;
      CHECK_FALSE(rs.is_root(up));
    }
    for (const auto& r : rs.positive) {
      auto c = rs.coroot(r);
      int v = 0;
      for (int i = 0; i < n; ++i) v += c[i] * rs.pair_coroot(r, i);
      CHECK(v == 2);
    }
  }
  CHECK(root_system("A2").highest == RootVec{1, 1});
  CHECK(root_system("D4").highest == RootVec{1, 2, 1, 1});
  CHECK(root_system("E6").highest == RootVec{1, 2, 3, 2, 1, 2});
  CHECK(root_system("E6").inner(root_system("E6").highest, root_system("E6").highest) == Rational(2));
}

TEST_CASE("unsupported types are rejected") {
  CHECK_THROWS_AS(root_system("E9"), UnsupportedType);
  CHECK_THROWS_AS(root_system("B1"), UnsupportedType);
  CHECK_THROWS_AS(root_system("C2"), UnsupportedType);
  CHECK_THROWS_AS(root_system("Q3"), UnsupportedType);
  CHECK_THROWS_AS(root_system("A"), UnsupportedType);
}

TEST_CASE("sl2 relations") {
  auto g = chevalley_algebra(root_system("A1"));
  CHECK(g->dim() == 3);
  LieVec e = g->x({1}), f = g->x({-1}), h = g->h(0);
  CHECK(g->bracket(e, f) == h);
  CHECK(g->bracket(h, e) == scale(Cyc(2), e));
  CHECK(g->bracket(h, f) == scale(Cyc(-2), f));
}

TEST_CASE("A2 brackets and form") {
  auto g = chevalley_algebra(root_system("A2"));
  CHECK(g->dim() == 8);
  Rational n = g->structure_constant({1, 0}, {0, 1});
  CHECK((n == Rational(1) || n == Rational(-1)));
  // extraspecial pair (alpha_1, alpha_2) carries the positive sign
  CHECK(n == Rational(1));
  CHECK(g->bracket(g->h(0), g->x({0, 1})) == scale(Cyc(-1), g->x({0, 1})));
  CHECK(g->form(g->x({1, 1}), g->x({-1, -1})) == Cyc(1));
  CHECK(g->form(g->x({1, 0}), g->x({0, 1})) == Cyc());
  LieVec a = add(g->x({1, 0}), g->h(1));
  CHECK(is_zero(g->bracket(a, a)));
  CHECK(chevalley_algebra(root_system("D4"))->dim() == 28);
}

TEST_CASE("Chevalley integrality: [x_a, x_b] = +-(p+1) x_{a+b}") {
  for (const char* t : {"A3", "B3", "C3", "D4", "G2", "F4"}) {
    auto g = chevalley_algebra(root_system(t));
    const auto& rs = g->roots();
    CAPTURE(t);
    std::vector<RootVec> all = rs.positive;
    for (const auto& r : rs.positive) {
      RootVec m = r;
      for (auto& x : m) x = -x;
      all.push_back(m);
    }
    for (const auto& a : all)
      for (const auto& b : all) {
        RootVec s = a;
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += b[i];
        if (!rs.is_root(s)) continue;
        int p = 0;
        RootVec d = b;
        while (true) {
          for (std::size_t i = 0; i < d.size(); ++i) d[i] -= a[i];
          if (!rs.is_root(d)) break;
          ++p;
        }
        Rational n = g->structure_constant(a, b);
        CHECK((n == Rational(p + 1) || n == Rational(-(p + 1))));
        RootVec ma = a, mb = b;
        for (auto& x : ma) x = -x;
        for (auto& x : mb) x = -x;
        CHECK(g->structure_constant(ma, mb) == -n);
      }
  }
}

TEST_CASE("Jacobi identity and form invariance, exhaustive") {
  for (const char* t : {"A1", "A2", "A3", "B2", "C3", "D4", "G2"}) {
    CAPTURE(t);
    auto g = chevalley_algebra(root_system(t));
    CHECK(jacobi_all(*g));
    CHECK(form_invariant_all(*g));
  }
}

TEST_CASE("Weyl stability: simple reflections permute root vectors up to sign") {
  // s_i = exp(ad e_i) exp(-ad f_i) exp(ad e_i) is an automorphism sending x_a to +-x_{s_i a}.
  for (const char* t : {"A3", "B3", "G2", "D4"}) {
    CAPTURE(t);
    auto g = chevalley_algebra(root_system(t));
    const auto& rs = g->roots();
    const int d = static_cast<int>(g->dim());
    for (int i = 0; i < rs.rank; ++i) {
      RootVec ai(rs.rank, 0);
      ai[i] = 1;
      RootVec mai = ai;
      mai[i] = -1;
      auto expad = [&](const LieVec& x, const LieVec& v) {
        LieVec r = v, term = v;
        for (int k = 1; k < 6; ++k) {
          term = scale(Cyc(Rational(1, k)), g->bracket(x, term));
          if (is_zero(term)) break;
          r = add(r, term);
        }
        return r;
      };
      LieVec e = g->x(ai), mf = scale(Cyc(-1), g->x(mai));
      std::vector<LieVec> image(d);
      for (int b = 0; b < d; ++b) image[b] = expad(e, expad(mf, expad(e, g->basis_vector(b))));
      for (int b = 0; b < d; ++b) {
        if (g->is_cartan(b)) continue;
        RootVec r = g->root_of(b);
        int pr = rs.pair_coroot(r, i);
        r[i] -= pr;
        LieVec target = g->x(r);
        bool plus = image[b] == target, minus = image[b] == scale(Cyc(-1), target);
        CHECK((plus || minus));
      }
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          LieVec lhs = expad(e, expad(mf, expad(e, g->bracket(g->basis_vector(a), g->basis_vector(b)))));
          CHECK(lhs == g->bracket(image[a], image[b]));
        }
    }
  }
}

TEST_CASE("json dump lists labels, brackets and form") {
  auto g = chevalley_algebra(root_system("A2"));
  auto j = g->to_json();
  CHECK(j["basis"].size() == 8);
  CHECK(j["basis"][2] == "x[theta]");
  CHECK(!j["brackets"].empty());
  CHECK(j["form"].size() == 10);
}
