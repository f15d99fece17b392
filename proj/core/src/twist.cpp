#include "kmt/twist.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>

namespace kmt {
namespace {

RootVec unit(int n, int i) {
  RootVec r(n, 0);
  r[i] = 1;
  return r;
}

RootVec neg(RootVec r) {
  for (auto& x : r) x = -x;
  return r;
}

int mod(long long a, int m) { return static_cast<int>(((a % m) + m) % m); }

// c with a = c * b for parallel nonzero vectors.
std::optional<Cyc> ratio(const LieVec& a, const LieVec& b) {
  std::size_t k = 0;
  while (k < b.size() && b[k].is_zero()) ++k;
  if (k == b.size()) return std::nullopt;
  Cyc c = a[k] / b[k];
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != c * b[i]) return std::nullopt;
  return c;
}

bool in_cartan(const ChevalleyAlgebra& g, const LieVec& v) {
  for (std::size_t b = 0; b < v.size(); ++b)
    if (!v[b].is_zero() && !g.is_cartan(static_cast<int>(b))) return false;
  return true;
}

}  // namespace

LieVec Automorphism::apply(const LieVec& v) const {
  LieVec r(alg->dim());
  for (std::size_t b = 0; b < v.size(); ++b) axpy(r, v[b], images[b]);
  return r;
}

Automorphism Automorphism::compose(const Automorphism& other) const {
  Automorphism r{alg, std::lcm(order, other.order), {}};
  for (const auto& im : other.images) r.images.push_back(apply(im));
  return r;
}

Automorphism Automorphism::power(int k) const {
  Automorphism r = identity_automorphism(alg);
  for (int i = 0; i < k; ++i) r = compose(r);
  r.order = order;
  return r;
}

bool Automorphism::is_identity() const {
  for (std::size_t b = 0; b < images.size(); ++b)
    if (images[b] != alg->basis_vector(static_cast<int>(b))) return false;
  return true;
}

bool Automorphism::preserves_bracket() const {
  const int d = static_cast<int>(alg->dim());
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      if (apply(alg->bracket(alg->basis_vector(a), alg->basis_vector(b))) != alg->bracket(images[a], images[b]))
        return false;
  return true;
}

bool Automorphism::preserves_form() const {
  const int d = static_cast<int>(alg->dim());
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b)
      if (alg->form(images[a], images[b]) != alg->form_basis(a, b)) return false;
  return true;
}

Automorphism identity_automorphism(std::shared_ptr<const ChevalleyAlgebra> alg) {
  Automorphism a{alg, 1, {}};
  for (std::size_t b = 0; b < alg->dim(); ++b) a.images.push_back(alg->basis_vector(static_cast<int>(b)));
  return a;
}

Automorphism extend_automorphism(std::shared_ptr<const ChevalleyAlgebra> alg, const std::vector<LieVec>& pos,
                                 const std::vector<LieVec>& neg_images, int order) {
  const auto& rs = alg->roots();
  const int n = rs.rank;
  Automorphism a{alg, order, std::vector<LieVec>(alg->dim())};
  for (int i = 0; i < n; ++i) {
    a.images[alg->root_index(unit(n, i))] = pos[i];
    a.images[alg->root_index(neg(unit(n, i)))] = neg_images[i];
    a.images[alg->cartan_index(i)] = alg->bracket(pos[i], neg_images[i]);
  }
  // x_xi = [x_{alpha_i}, x_beta] / N along extraspecial pairs, in height order.
  for (const auto& xi : rs.positive) {
    if (rs.height(xi) == 1) continue;
    int i = 0;
    RootVec beta;
    for (;; ++i) {
      beta = xi;
      beta[i] -= 1;
      if (rs.positive_index(beta) >= 0) break;
    }
    RootVec ai = unit(n, i);
    Cyc np = alg->structure_constant(ai, beta);
    Cyc nn = alg->structure_constant(neg(ai), neg(beta));
    a.images[alg->root_index(xi)] =
        scale(np.inverse(), alg->bracket(a.images[alg->root_index(ai)], a.images[alg->root_index(beta)]));
    a.images[alg->root_index(neg(xi))] =
        scale(nn.inverse(), alg->bracket(a.images[alg->root_index(neg(ai))], a.images[alg->root_index(neg(beta))]));
  }
  return a;
}

std::vector<int> diagram_permutation(const RootSystem& rs, int case_id) {
  const int n = rs.rank;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  auto bad = [&]() {
    return InvalidRealization("case " + std::to_string(case_id) + " is not compatible with type " + rs.label());
  };
  switch (case_id) {
    case 1:
      if (rs.family != 'A' || n % 2 != 0) throw bad();
      for (int i = 0; i < n; ++i) p[i] = n - 1 - i;
      break;
    case 2:
      if (rs.family != 'A' || n % 2 != 1 || n < 3) throw bad();
      for (int i = 0; i < n; ++i) p[i] = n - 1 - i;
      break;
    case 3:
      if (rs.family != 'D' || n < 3) throw bad();
      std::swap(p[n - 2], p[n - 1]);
      break;
    case 4:
      if (rs.family != 'E' || n != 6) throw bad();
      p = {4, 3, 2, 1, 0, 5};
      break;
    case 5:
      // alpha_1 -> alpha_4 -> alpha_3 -> alpha_1, alpha_2 fixed
      if (rs.family != 'D' || n != 4) throw bad();
      p = {3, 1, 0, 2};
      break;
    default:
      throw InvalidRealization("unknown case " + std::to_string(case_id));
  }
  return p;
}

Automorphism diagram_automorphism(std::shared_ptr<const ChevalleyAlgebra> alg, int case_id) {
  const auto& rs = alg->roots();
  auto p = diagram_permutation(rs, case_id);
  const int n = rs.rank;
  std::vector<LieVec> pos(n), ng(n);
  for (int i = 0; i < n; ++i) {
    pos[i] = alg->x(unit(n, p[i]));
    ng[i] = alg->x(neg(unit(n, p[i])));
  }
  return extend_automorphism(alg, pos, ng, case_id == 5 ? 3 : 2);
}

Automorphism inner_automorphism(std::shared_ptr<const ChevalleyAlgebra> alg, const std::vector<int>& values, int T) {
  const auto& rs = alg->roots();
  if (T <= 0) throw InvalidRealization("inner automorphism: order must be positive");
  if (static_cast<int>(values.size()) != rs.rank) throw InvalidRealization("inner automorphism: need one value per simple root");
  Automorphism a = identity_automorphism(alg);
  a.order = T;
  for (std::size_t b = 0; b < alg->dim(); ++b) {
    if (alg->is_cartan(static_cast<int>(b))) continue;
    RootVec r = alg->root_of(static_cast<int>(b));
    long long v = 0;
    for (int i = 0; i < rs.rank; ++i) v += static_cast<long long>(r[i]) * values[i];
    int e = mod(v, T);
    if (e != 0) a.images[b] = scale(Cyc::root_of_unity(static_cast<unsigned>(T), e), a.images[b]);
  }
  return a;
}

Gradation gradation(const Automorphism& sigma, const std::vector<LieVec>& probe) {
  const auto& g = *sigma.alg;
  const int d = static_cast<int>(g.dim());
  const int T = sigma.order;
  // blocks = connected components of the support graph
  std::vector<int> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int b = 0; b < d; ++b)
    for (int k = 0; k < d; ++k)
      if (!sigma.images[b][k].is_zero()) parent[find(b)] = find(k);
  std::map<int, std::vector<int>> comp;
  for (int b = 0; b < d; ++b) comp[find(b)].push_back(b);
  std::vector<std::vector<int>> blocks;
  for (auto& [root, members] : comp) blocks.push_back(members);
  std::sort(blocks.begin(), blocks.end());

  Gradation gr;
  gr.T = T;
  gr.by_class.assign(T, {});
  std::vector<Cyc> eta(T);
  for (int j = 0; j < T; ++j) eta[j] = Cyc::root_of_unity(static_cast<unsigned>(T), j);
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& B = blocks[bi];
    const std::size_t m = B.size();
    int root_member = -1;
    for (int b : B)
      if (!g.is_cartan(b)) root_member = b;
    std::vector<int> weight;
    if (root_member >= 0) {
      RootVec r = g.root_of(root_member);
      for (const auto& H : probe) {
        Cyc s;
        for (int i = 0; i < g.roots().rank; ++i) s += H[g.cartan_index(i)] * Cyc(g.roots().pair_coroot(r, i));
        weight.push_back(static_cast<int>(s.rational_value().floor()));
      }
    } else {
      weight.assign(probe.size(), 0);
    }
    for (int j = 0; j < T; ++j) {
      Mat S(m, Vec(m));
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t r = 0; r < m; ++r) S[r][c] = sigma.images[B[c]][B[r]];
      for (std::size_t k = 0; k < m; ++k) S[k][k] -= eta[j];
      for (const auto& nv : nullspace(S, m)) {
        GradedVector gv;
        gv.v.assign(d, Cyc());
        for (std::size_t k = 0; k < m; ++k) gv.v[B[k]] = nv[k];
        gv.cls = j;
        gv.weight = weight;
        gv.block = static_cast<int>(bi);
        gv.cartan = root_member < 0;
        gr.by_class[j].push_back(static_cast<int>(gr.elems.size()));
        gr.elems.push_back(std::move(gv));
      }
    }
  }
  if (static_cast<int>(gr.elems.size()) != d) throw std::logic_error("gradation: eigenspaces do not exhaust g");
  return gr;
}

std::vector<int> positive_null_vector(const std::vector<std::vector<int>>& A, bool transpose) {
  const std::size_t n = A.size();
  Mat m(n, Vec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = Cyc(transpose ? A[j][i] : A[i][j]);
  auto ns = nullspace(m, n);
  if (ns.size() != 1) throw std::logic_error("affine Cartan matrix does not have corank 1");
  std::vector<Rational> v;
  for (const auto& x : ns[0]) v.push_back(x.rational_value());
  // clear denominators, divide by gcd, fix sign
  long long den = 1;
  for (const auto& x : v) den = std::lcm(den, x.small_den());
  std::vector<long long> w;
  long long g = 0;
  for (const auto& x : v) {
    w.push_back((x * Rational(den)).small_num());
    g = std::gcd(g, std::llabs(w.back()));
  }
  int sign = w[0] < 0 ? -1 : 1;
  std::vector<int> out;
  for (auto x : w) {
    long long y = sign * x / g;
    if (y <= 0) throw std::logic_error("affine Cartan matrix null vector is not positive");
    out.push_back(static_cast<int>(y));
  }
  return out;
}

std::vector<int> TwistRealization::restrict_weight(const RootVec& alpha) const {
  std::vector<int> w;
  const auto& rs = alg->roots();
  for (const auto& h : H) {
    Cyc s;
    for (int i = 0; i < rs.rank; ++i) s += h[alg->cartan_index(i)] * Cyc(rs.pair_coroot(alpha, i));
    w.push_back(static_cast<int>(s.rational_value().floor()));
  }
  return w;
}

std::string TwistRealization::name() const {
  std::string out = alg->roots().label() + (case_id == 0 ? "/untwisted" : "/c" + std::to_string(case_id));
  out += "/s=";
  for (std::size_t j = 0; j < s.size(); ++j) out += (j ? "," : "") + std::to_string(s[j]);
  return out;
}

namespace {

nlohmann::json lie_json(const ChevalleyAlgebra& g, const LieVec& v) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t b = 0; b < v.size(); ++b)
    if (!v[b].is_zero()) j[g.label(static_cast<int>(b))] = to_json(v[b]);
  return j;
}

}  // namespace

nlohmann::json TwistRealization::to_json() const {
  nlohmann::json j;
  j["type"] = alg->roots().label();
  j["case"] = case_id == 0 ? nlohmann::json("untwisted") : nlohmann::json(case_id);
  j["r"] = r;
  j["l"] = l;
  j["s"] = s;
  j["T"] = T;
  j["A"] = A;
  j["marks"] = marks;
  j["comarks"] = comarks;
  j["coxeter"] = coxeter;
  j["dual_coxeter"] = dual_coxeter;
  j["theta0"] = theta0;
  nlohmann::json norms = nlohmann::json::array();
  for (const auto& x : beta_norm) norms.push_back(x.str());
  j["beta_norms"] = norms;
  nlohmann::json dims = nlohmann::json::array();
  for (int c = 0; c < grad.T; ++c) dims.push_back(grad.dim(c));
  j["gradation_dims"] = dims;
  nlohmann::json gens = nlohmann::json::array();
  for (int i = 0; i <= l; ++i)
    gens.push_back({{"i", i},
                    {"E", lie_json(*alg, E[i])},
                    {"F", lie_json(*alg, F[i])},
                    {"H", lie_json(*alg, H[i])}});
  j["generators"] = gens;
  return j;
}

std::string TwistRealization::fingerprint() const {
  // FNV-1a over the canonical dump
  std::string dump = to_json().dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

struct CaseLayout {
  int l = 0;
  int r = 1;
  std::vector<std::vector<int>> support;  // simple indices of E_j, j = 1..l
  std::vector<Cyc> scalar;                // scalar in front of E_j and F_j
  RootVec theta0;
};

CaseLayout layout(const RootSystem& rs, int case_id) {
  const int n = rs.rank;
  CaseLayout c;
  c.theta0 = rs.highest;
  auto add = [&](std::vector<int> sup, Cyc s = Cyc(1)) {
    c.support.push_back(std::move(sup));
    c.scalar.push_back(std::move(s));
  };
  if (case_id != 0) diagram_permutation(rs, case_id);  // type check
  switch (case_id) {
    case 0:
      c.l = n;
      for (int i = 0; i < n; ++i) add({i});
      break;
    case 1:
      c.l = n / 2;
      c.r = 2;
      for (int j = 1; j <= c.l; ++j) add({j - 1, n - j}, j == c.l ? Cyc::sqrt2() : Cyc(1));
      break;
    case 2:
      c.l = (n + 1) / 2;
      c.r = 2;
      for (int j = 1; j < c.l; ++j) add({j - 1, n - j});
      add({c.l - 1});
      c.theta0[n - 1] -= 1;
      break;
    case 3: {
      c.l = n - 1;
      c.r = 2;
      for (int j = 1; j < c.l; ++j) add({j - 1});
      add({c.l - 1, c.l});
      RootVec t = rs.highest;
      t[0] += 1;
      t[c.l - 1] += 1;
      t[c.l] -= 1;
      for (auto& x : t) x /= 2;
      c.theta0 = t;
      break;
    }
    case 4:
      c.l = 4;
      c.r = 2;
      add({0, 4});
      add({1, 3});
      add({2});
      add({5});
      c.theta0[2] -= 1;
      c.theta0[3] -= 1;
      c.theta0[5] -= 1;
      break;
    case 5:
      c.l = 2;
      c.r = 3;
      add({0, 2, 3});
      add({1});
      c.theta0[1] -= 1;
      c.theta0[3] -= 1;
      break;
    default:
      throw InvalidRealization("unknown case " + std::to_string(case_id));
  }
  if (!rs.is_root(c.theta0)) throw std::logic_error("theta0 is not a root");
  return c;
}

TwistRealization build(const RealizationSpec& spec) {
  TwistRealization R;
  RootSystem rs = root_system(spec.type);
  R.alg = chevalley_algebra(rs);
  const auto& g = *R.alg;
  const int n = rs.rank;
  R.case_id = spec.case_id;
  CaseLayout lay = layout(rs, spec.case_id);
  R.l = lay.l;
  R.r = lay.r;
  R.theta0 = lay.theta0;
  R.mu = spec.case_id == 0 ? identity_automorphism(R.alg) : diagram_automorphism(R.alg, spec.case_id);
  const int l = R.l;

  R.E.assign(l + 1, LieVec(g.dim()));
  R.F.assign(l + 1, LieVec(g.dim()));
  for (int j = 1; j <= l; ++j)
    for (int i : lay.support[j - 1]) {
      axpy(R.E[j], lay.scalar[j - 1], g.x(unit(n, i)));
      axpy(R.F[j], lay.scalar[j - 1], g.x(neg(unit(n, i))));
    }
  if (spec.case_id <= 1) {
    R.E[0] = g.x(neg(rs.highest));
    R.F[0] = g.x(rs.highest);
  } else {
    // E_0 = sum_m omega^{-m} mu^m(x_{-theta0}), F_0 = sum_m omega^m mu^m(x_{theta0})
    LieVec xe = g.x(neg(R.theta0)), xf = g.x(R.theta0);
    for (int m = 0; m < R.r; ++m) {
      axpy(R.E[0], Cyc::root_of_unity(static_cast<unsigned>(R.r), -m), xe);
      axpy(R.F[0], Cyc::root_of_unity(static_cast<unsigned>(R.r), m), xf);
      xe = R.mu.apply(xe);
      xf = R.mu.apply(xf);
    }
  }
  {
    LieVec h0 = g.bracket(R.E[0], R.F[0]);
    auto kappa = ratio(g.bracket(h0, R.E[0]), R.E[0]);
    if (!kappa || kappa->is_zero()) throw std::logic_error("E_0 is not an eigenvector of [E_0, F_0]");
    if (*kappa != Cyc(2)) {
      R.F[0] = scale(Cyc(2) / *kappa, R.F[0]);
      R.f0_rescaled = true;
    }
  }
  for (int i = 0; i <= l; ++i) {
    R.H.push_back(g.bracket(R.E[i], R.F[i]));
    if (!in_cartan(g, R.H[i])) throw std::logic_error("H_i is not in the Cartan subalgebra");
  }
  R.A.assign(l + 1, std::vector<int>(l + 1));
  for (int i = 0; i <= l; ++i)
    for (int j = 0; j <= l; ++j) {
      auto c = ratio(g.bracket(R.H[i], R.E[j]), R.E[j]);
      if (!c) {
        if (is_zero(g.bracket(R.H[i], R.E[j]))) c = Cyc();
        else throw std::logic_error("E_j is not a weight vector");
      }
      Rational v = c->rational_value();
      if (!v.is_integer()) throw std::logic_error("non-integral affine Cartan entry");
      R.A[i][j] = static_cast<int>(v.floor());
    }
  R.marks = positive_null_vector(R.A, false);
  R.comarks = positive_null_vector(R.A, true);
  R.coxeter = std::accumulate(R.marks.begin(), R.marks.end(), 0);
  R.dual_coxeter = std::accumulate(R.comarks.begin(), R.comarks.end(), 0);
  for (int j = 0; j <= l; ++j) R.beta_norm.push_back((Cyc(2) / g.form(R.E[j], R.F[j])).rational_value());

  // index j(i) with alpha_i in the support of E_j
  std::vector<int> owner(n, -1);
  for (int j = 1; j <= l; ++j)
    for (int i : lay.support[j - 1]) owner[i] = j;

  if (!spec.inner_h.empty()) {
    if (!spec.s.empty()) throw InvalidRealization("give either an s-vector or an inner h, not both");
    if (static_cast<int>(spec.inner_h.size()) != n) throw InvalidRealization("inner h needs one value per simple root");
    if (spec.inner_T <= 0) throw InvalidRealization("inner h needs a positive order");
    std::vector<int> s(l + 1, 0);
    for (int i = 0; i < n; ++i) {
      if (s[owner[i]] != 0 && s[owner[i]] != spec.inner_h[i])
        throw InvalidRealization("inner h is not fixed by the diagram automorphism");
      s[owner[i]] = spec.inner_h[i];
    }
    for (int j = 1; j <= l; ++j)
      if (s[j] < 0) throw InvalidRealization("inner h is not in normal form (negative value)");
    long long rest = spec.inner_T / R.r;
    if (spec.inner_T % R.r != 0) throw InvalidRealization("inner order must be a multiple of r");
    for (int j = 1; j <= l; ++j) rest -= static_cast<long long>(R.marks[j]) * s[j];
    if (rest < 0 || rest % R.marks[0] != 0)
      throw InvalidRealization("mu o exp(ad 2 pi i h/T) is not in s-normal form; conjugation is not supported");
    s[0] = static_cast<int>(rest / R.marks[0]);
    R.s = s;
  } else {
    R.s = spec.s.empty() ? std::vector<int>(l + 1, 0) : spec.s;
    if (spec.s.empty()) R.s[0] = 1;
  }
  if (static_cast<int>(R.s.size()) != l + 1) throw InvalidRealization("s-vector must have l+1 entries");
  int gs = 0;
  for (int x : R.s) {
    if (x < 0) throw InvalidRealization("s-vector entries must be nonnegative");
    gs = std::gcd(gs, x);
  }
  if (gs != 1) throw InvalidRealization("s-vector entries must have gcd 1");
  long long tsum = 0;
  for (int j = 0; j <= l; ++j) tsum += static_cast<long long>(R.s[j]) * R.marks[j];
  R.T = static_cast<int>(R.r * tsum);
  R.conductor = lcm_u(24, static_cast<unsigned>(R.T));
  R.inner_values.assign(n, 0);
  for (int i = 0; i < n; ++i) R.inner_values[i] = R.s[owner[i]];
  R.sigma = R.mu.compose(inner_automorphism(R.alg, R.inner_values, R.T));
  R.sigma.order = R.T;
  for (int j = 0; j <= l; ++j) {
    Cyc expect = Cyc::root_of_unity(static_cast<unsigned>(R.T), R.s[j]);
    if (R.sigma.apply(R.E[j]) != scale(expect, R.E[j])) throw std::logic_error("sigma(E_j) != eta^{s_j} E_j");
  }
  R.grad = gradation(R.sigma, R.H);
  return R;
}

}  // namespace

std::shared_ptr<const TwistRealization> make_realization(const RealizationSpec& spec) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const TwistRealization>> cache;
  std::ostringstream key;
  key << spec.type << '|' << spec.case_id << '|';
  for (int x : spec.s) key << x << ',';
  key << '|';
  for (int x : spec.inner_h) key << x << ',';
  key << '|' << spec.inner_T;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key.str());
    if (it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const TwistRealization>(build(spec));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key.str(), built).first->second;
}

Automorphism s_automorphism(const TwistRealization& base, const std::vector<int>& s) {
  RealizationSpec spec{base.alg->roots().label(), base.case_id, s, {}, 0};
  return make_realization(spec)->sigma;
}

}  // namespace kmt
