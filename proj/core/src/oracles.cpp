#include <algorithm>
#include <set>

#include "kmt/modules.hpp"

namespace kmt {

namespace {

bool nonnegative(const CVec& c) {
  return std::all_of(c.begin(), c.end(), [](int x) { return x >= 0; });
}

CVec shift(CVec c, std::size_t j, int by) {
  c[j] += by;
  return c;
}

// phi_u(w) = <u v, w>; phi_{s rest} = phi_rest o omega(s)
const Vec& functional(PBWModule& M, std::map<Monomial, Vec>& cache, const Monomial& u) {
  auto it = cache.find(u);
  if (it != cache.end()) return it->second;
  Vec row;
  if (u.empty()) {
    row = Vec{Cyc(1)};
  } else {
    Monomial rest(u.begin() + 1, u.end());
    CVec bu = M.weight_of(u);
    Mat W = M.matrix(M.alg().omega(u.front()), bu);
    row = apply_left(functional(M, cache, rest), W);
    row.resize(M.dim(bu));
  }
  return cache.emplace(u, std::move(row)).first->second;
}

}  // namespace

GramBlock contravariant_gram(PBWModule& M, const CVec& beta) {
  auto& cache = M.gram_rows;
  GramBlock g;
  g.beta = beta;
  const auto& basis = M.basis(beta);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    g.basis.push_back(M.monomial_label(basis[i]));
    g.gram.push_back(functional(M, cache, basis[i]));
  }
  g.rank = rank(g.gram);
  return g;
}

std::vector<WVec> maximal_submodule_generators(PBWModule& M) {
  const auto& lab = M.lambda().labels;
  if (!M.lambda().dominant()) throw NonDominant("maximal submodule generators need a dominant weight");
  std::vector<WVec> out;
  for (std::size_t i = 0; i < lab.size(); ++i) {
    WVec v = M.top();
    long long n = lab[i].floor() + 1;
    for (long long m = 0; m < n; ++m) v = M.act(M.alg().f(static_cast<int>(i)), v);
    out.push_back(std::move(v));
  }
  return out;
}

std::size_t Closure::dim(const CVec& beta) const {
  auto it = basis.find(beta);
  return it == basis.end() ? 0 : it->second.size();
}

Closure submodule_closure(Module& M, const std::vector<WVec>& seeds, const Window& w, bool raise) {
  const auto& R = M.alg().real();
  std::size_t L = static_cast<std::size_t>(R.l + 1);
  std::map<CVec, EchelonBasis> span;
  auto insert = [&](const CVec& b, const Vec& v) {
    if (is_zero(v)) return;
    auto it = span.find(b);
    if (it == span.end()) it = span.emplace(b, EchelonBasis(M.dim(b))).first;
    if (!it->second.contains(v)) it->second.insert(v);
  };
  // seeds outside the window still matter: raising can bring them back in
  for (const auto& s : seeds) insert(s.beta, s.v);
  auto by_height = [](const CVec& a, const CVec& b) {
    return std::make_pair(height(a), a) < std::make_pair(height(b), b);
  };
  if (raise) {
    // U(n_+) first: e_j lowers beta, so sweep from the top down
    std::set<CVec, decltype(by_height)> todo(by_height);
    for (const auto& [b, e] : span) todo.insert(b);
    while (!todo.empty()) {
      CVec b = *todo.rbegin();
      todo.erase(std::prev(todo.end()));
      auto rows = span.at(b).rows();
      for (std::size_t j = 0; j < L; ++j) {
        CVec t = shift(b, j, -1);
        if (!nonnegative(t) || M.dim(t) == 0) continue;
        Mat E = M.matrix(M.alg().e(static_cast<int>(j)), b);
        for (const auto& r : rows) insert(t, kmt::apply(E, r));
        if (span.count(t)) todo.insert(t);
      }
    }
  }
  // then U(n_-) upward through the window
  auto weights = M.support(w);
  std::sort(weights.begin(), weights.end(), by_height);
  for (const auto& b : weights) {
    for (std::size_t j = 0; j < L; ++j) {
      CVec src = shift(b, j, -1);
      auto it = span.find(src);
      if (!nonnegative(src) || it == span.end()) continue;
      Mat F = M.matrix(M.alg().f(static_cast<int>(j)), src);
      for (const auto& r : it->second.rows()) insert(b, kmt::apply(F, r));
    }
  }
  Closure c;
  for (auto& [b, e] : span)
    if (w.contains(R, b)) c.basis.emplace(b, e.rows());
  return c;
}

bool CharacterTable::agree() const {
  return std::all_of(rows.begin(), rows.end(), [](const CharacterRow& r) { return r.agree(); });
}

CharacterTable character_table(std::shared_ptr<const AffineAlgebra> A, const WeightLambda& lambda, const Window& w) {
  const auto& R = A->real();
  PBWModule M(A, PBWModule::Kind::Verma, lambda);
  StandardModule L(A, lambda);
  CharacterTable t;
  t.window = w;
  Closure cl;
  bool dom = lambda.dominant();
  if (dom) cl = submodule_closure(M, maximal_submodule_generators(M), w);
  std::map<int, CharacterRow> rows;
  for (const auto& b : window_weights(R, w)) {
    std::size_t vd = M.dim(b);
    GramBlock g = contravariant_gram(M, b);
    std::array<std::size_t, 5> e{vd, g.nullity(), dom ? cl.dim(b) : 0, g.rank, L.dim(b)};
    t.by_weight[b] = e;
    auto& row = rows[depth_num(R, b)];
    row.depth_num = depth_num(R, b);
    row.verma += e[0];
    row.gram_nullity += e[1];
    row.closure += e[2];
    row.gram_rank += e[3];
    row.standard += e[4];
  }
  for (auto& [d, r] : rows) t.rows.push_back(r);
  return t;
}

std::vector<std::size_t> standard_dims(StandardModule& L, int D) {
  if (!L.lambda().dominant()) throw NonDominant("standard_dims needs a dominant weight");
  std::vector<std::size_t> out(static_cast<std::size_t>(D + 1), 0);
  for (const auto& b : L.support(Window{D, -1})) out[static_cast<std::size_t>(depth_num(L.alg().real(), b))] += L.dim(b);
  return out;
}

bool integrability_check(Module& M, int bound) {
  const auto& lab = M.lambda().labels;
  for (std::size_t i = 0; i < lab.size(); ++i) {
    int limit = bound;
    bool integral = lab[i].is_integer() && lab[i].sign() >= 0;
    if (integral) limit = std::min<int>(bound, static_cast<int>(lab[i].floor()) + 1);
    WVec v = M.top();
    bool vanished = false;
    for (int m = 1; m <= limit && !vanished; ++m) {
      v = M.act(M.alg().f(static_cast<int>(i)), v);
      vanished = is_zero(v.v);
    }
    if (!vanished) return false;
  }
  return true;
}

// ---- Heisenberg algebra: [x, y] = z central, PBW order x^a y^b z^c ----

namespace {

using HMono = std::array<int, 3>;
using HElem = std::map<HMono, Rational>;

void hadd(HElem& e, const HMono& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = e.emplace(m, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) e.erase(it);
}

// left multiplication by x (g = 0) or y (g = 1); y x^a = x^a y - a x^{a-1} z
HElem lmul(int g, const HElem& e) {
  HElem r;
  for (const auto& [m, c] : e) {
    auto [a, b, cz] = m;
    if (g == 0) {
      hadd(r, {a + 1, b, cz}, c);
    } else {
      hadd(r, {a, b + 1, cz}, c);
      if (a > 0) hadd(r, {a - 1, b, cz + 1}, -c * Rational(a));
    }
  }
  return r;
}

HElem word(const std::vector<int>& gens, int zpow) {
  HElem e;
  e[{0, 0, zpow}] = Rational(1);
  for (auto it = gens.rbegin(); it != gens.rend(); ++it) e = lmul(*it, e);
  return e;
}

}  // namespace

HeisenbergResult heisenberg_membership(int m, int bound) {
  if (m < 0 || m > bound) throw std::invalid_argument("heisenberg: m outside the configured bound");
  HElem target;
  target[{0, 0, 0}] = Rational(1);
  for (int i = 0; i < m; ++i) {
    HElem nx = lmul(0, target), ny = lmul(1, target);
    target = nx;
    for (const auto& [k, c] : ny) hadd(target, k, c);
  }
  std::vector<std::string> labels;
  std::vector<HElem> span;
  auto mono_label = [](const std::string& first, int p, const std::string& second, int q, int c) {
    std::string s;
    auto part = [&](const std::string& g, int e) {
      if (e == 0) return;
      s += g + (e > 1 ? "^" + std::to_string(e) : "");
    };
    part(first, p);
    part(second, q);
    part("z", c);
    return s.empty() ? std::string("1") : s;
  };
  // the a <= b family first so its columns take the pivots
  for (int pass = 0; pass < 2; ++pass)
    for (int c = 0; 2 * c <= m; ++c)
      for (int a = 0; a + 2 * c <= m; ++a) {
        int b = m - 2 * c - a;
        if (pass == 0 && a <= b) {
          std::vector<int> g(static_cast<std::size_t>(a), 0);
          g.insert(g.end(), static_cast<std::size_t>(b), 1);
          span.push_back(word(g, c));
          labels.push_back(mono_label("x", a, "y", b, c));
        }
        if (pass == 1 && b <= a) {
          std::vector<int> g(static_cast<std::size_t>(b), 1);
          g.insert(g.end(), static_cast<std::size_t>(a), 0);
          span.push_back(word(g, c));
          labels.push_back(mono_label("y", b, "x", a, c));
        }
      }
  std::vector<HMono> keys;
  for (const auto& e : span)
    for (const auto& [k, c] : e) keys.push_back(k);
  for (const auto& [k, c] : target) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  auto pos = [&](const HMono& k) { return static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), k) - keys.begin()); };
  Mat sys(keys.size(), Vec(span.size()));
  for (std::size_t j = 0; j < span.size(); ++j)
    for (const auto& [k, c] : span[j]) sys[pos(k)][j] = Cyc(c);
  Vec rhs(keys.size());
  for (const auto& [k, c] : target) rhs[pos(k)] = Cyc(c);
  auto x = solve(sys, rhs, span.size());
  HeisenbergResult res;
  if (!x) return res;
  res.member = true;
  for (std::size_t j = 0; j < span.size(); ++j)
    if (!(*x)[j].is_zero()) res.witness.emplace_back(labels[j], (*x)[j].rational_value());
  return res;
}

}  // namespace kmt
