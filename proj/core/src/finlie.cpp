#include "kmt/finlie.hpp"

#include <algorithm>
#include <mutex>
#include <cctype>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace kmt {
namespace {

// Symmetric form (alpha_i, alpha_j) before scaling, per Dynkin type.
std::vector<std::vector<Rational>> symmetric_form(char family, int n) {
  std::vector<std::vector<Rational>> b(n, std::vector<Rational>(n));
  auto edge = [&](int i, int j, Rational v) { b[i][j] = b[j][i] = v; };
  auto norms = [&](std::vector<Rational> v) {
    for (int i = 0; i < n; ++i) b[i][i] = v[i];
  };
  std::vector<Rational> two(n, Rational(2));
  switch (family) {
    case 'A':
      if (n < 1) break;
      norms(two);
      for (int i = 0; i + 1 < n; ++i) edge(i, i + 1, -1);
      return b;
    case 'B':
      if (n < 2) break;
      two[n - 1] = 1;
      norms(two);
      for (int i = 0; i + 1 < n; ++i) edge(i, i + 1, -1);
      return b;
    case 'C': {
      if (n < 3) break;
      std::vector<Rational> v(n, Rational(1));
      v[n - 1] = 2;
      norms(v);
      for (int i = 0; i + 2 < n; ++i) edge(i, i + 1, Rational(-1, 2));
      edge(n - 2, n - 1, -1);
      return b;
    }
    case 'D':
      if (n < 3) break;
      norms(two);
      for (int i = 0; i + 2 < n; ++i) edge(i, i + 1, -1);
      edge(n - 3, n - 1, -1);
      return b;
    case 'E': {
      if (n < 6 || n > 8) break;
      norms(two);
      for (int i = 0; i + 2 < n; ++i) edge(i, i + 1, -1);
      // branch node: alpha_3 for E6/E7, alpha_5 for E8 (1-based)
      int branch = n == 8 ? 4 : 2;
      edge(branch, n - 1, -1);
      return b;
    }
    case 'F':
      if (n != 4) break;
      norms({2, 2, 1, 1});
      edge(0, 1, -1);
      edge(1, 2, -1);
      edge(2, 3, Rational(-1, 2));
      return b;
    case 'G':
      if (n != 2) break;
      norms({Rational(2, 3), 2});
      edge(0, 1, -1);
      return b;
    default:
      break;
  }
  throw UnsupportedType("unsupported Lie type " + std::string(1, family) + std::to_string(n));
}

bool root_less(const RootVec& a, const RootVec& b) {
  int ha = std::accumulate(a.begin(), a.end(), 0), hb = std::accumulate(b.begin(), b.end(), 0);
  if (ha != hb) return ha < hb;
  return a < b;
}

RootVec negate(RootVec r) {
  for (auto& x : r) x = -x;
  return r;
}

RootVec plus(RootVec a, const RootVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

RootVec unit(int n, int i) {
  RootVec r(n, 0);
  r[i] = 1;
  return r;
}

}  // namespace

int RootSystem::height(const RootVec& r) const { return std::accumulate(r.begin(), r.end(), 0); }

int RootSystem::positive_index(const RootVec& r) const {
  auto it = std::lower_bound(positive.begin(), positive.end(), r, root_less);
  if (it != positive.end() && *it == r) return static_cast<int>(it - positive.begin());
  return -1;
}

bool RootSystem::is_root(const RootVec& r) const {
  if (static_cast<int>(r.size()) != rank) return false;
  return positive_index(r) >= 0 || positive_index(negate(r)) >= 0;
}

Rational RootSystem::inner(const RootVec& a, const RootVec& b) const {
  Rational s;
  for (int i = 0; i < rank; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < rank; ++j) {
      if (b[j] == 0 || cartan[i][j] == 0) continue;
      s += Rational(a[i] * b[j]) * Rational(cartan[i][j]) * norms[i] * Rational(1, 2);
    }
  }
  return s;
}

int RootSystem::pair_coroot(const RootVec& a, int i) const {
  int s = 0;
  for (int j = 0; j < rank; ++j) s += a[j] * cartan[i][j];
  return s;
}

std::vector<int> RootSystem::coroot(const RootVec& a) const {
  Rational na = inner(a, a);
  std::vector<int> c(rank);
  for (int i = 0; i < rank; ++i) {
    Rational v = Rational(a[i]) * norms[i] / na;
    if (!v.is_integer()) throw std::logic_error("coroot coordinates are not integral");
    c[i] = static_cast<int>(v.floor());
  }
  return c;
}

bool RootSystem::is_long(const RootVec& a) const { return inner(a, a) == Rational(2); }

RootSystem root_system(char family, int n) {
  auto b = symmetric_form(family, n);
  RootSystem rs;
  rs.family = family;
  rs.rank = n;
  Rational maxnorm;
  for (int i = 0; i < n; ++i) maxnorm = std::max(maxnorm, b[i][i]);
  Rational scale = Rational(2) / maxnorm;
  rs.cartan.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    rs.norms.push_back(b[i][i] * scale);
    for (int j = 0; j < n; ++j) rs.cartan[i][j] = static_cast<int>((Rational(2) * b[i][j] / b[i][i]).floor());
  }
  // Positive roots by height: alpha + alpha_i is a root iff p - <alpha, alpha_i^vee> > 0,
  // where p is the length of the alpha_i-string below alpha.
  std::vector<RootVec> roots;
  std::vector<RootVec> layer;
  for (int i = 0; i < n; ++i) layer.push_back(unit(n, i));
  auto known = [&](const RootVec& r) { return std::find(roots.begin(), roots.end(), r) != roots.end(); };
  while (!layer.empty()) {
    for (auto& r : layer) roots.push_back(r);
    std::vector<RootVec> next;
    for (const auto& r : layer) {
      for (int i = 0; i < n; ++i) {
        int p = 0;
        RootVec down = r;
        while (true) {
          down[i] -= 1;
          if (!known(down)) break;
          ++p;
        }
        int q = p - rs.pair_coroot(r, i);
        if (q <= 0) continue;
        RootVec up = plus(r, unit(n, i));
        if (std::find(next.begin(), next.end(), up) == next.end()) next.push_back(up);
      }
    }
    layer = std::move(next);
  }
  std::sort(roots.begin(), roots.end(), root_less);
  rs.positive = roots;
  rs.highest = roots.back();
  return rs;
}

RootSystem root_system(const std::string& label) {
  if (label.size() < 2) throw UnsupportedType("unsupported Lie type " + label);
  char family = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
  std::string digits = label.substr(1);
  if (!digits.empty() && digits[0] == '_') digits = digits.substr(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit) || digits.size() > 3)
    throw UnsupportedType("unsupported Lie type " + label);
  return root_system(family, std::stoi(digits));
}

namespace {

using SpMat = std::vector<std::map<int, Cyc>>;

SpMat sp_mul(const SpMat& a, const SpMat& b) {
  SpMat r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (const auto& [k, va] : a[i])
      for (const auto& [j, vb] : b[k]) r[i][j] += va * vb;
  for (auto& row : r)
    for (auto it = row.begin(); it != row.end();) it = it->second.is_zero() ? row.erase(it) : std::next(it);
  return r;
}

SpMat sp_lin(const SpMat& a, const Cyc& s, const SpMat& b, const Cyc& t) {
  SpMat r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const auto& [j, v] : a[i]) r[i][j] += s * v;
    for (const auto& [j, v] : b[i]) r[i][j] += t * v;
    for (auto it = r[i].begin(); it != r[i].end();) it = it->second.is_zero() ? r[i].erase(it) : std::next(it);
  }
  return r;
}

SpMat sp_comm(const SpMat& a, const SpMat& b) { return sp_lin(sp_mul(a, b), 1, sp_mul(b, a), -1); }

// Returns c with a = c * b, or nullopt when a is not a multiple of b.
std::optional<Cyc> sp_ratio(const SpMat& a, const SpMat& b) {
  std::optional<Cyc> c;
  for (std::size_t i = 0; i < b.size() && !c; ++i)
    if (!b[i].empty()) {
      auto [j, v] = *b[i].begin();
      auto it = a[i].find(j);
      c = it == a[i].end() ? Cyc() : it->second / v;
    }
  if (!c) return std::nullopt;
  SpMat diff = sp_lin(a, 1, b, -*c);
  for (const auto& row : diff)
    if (!row.empty()) return std::nullopt;
  return c;
}

// Matrices of e_i, f_i on the adjoint module, built by e/f induction from the
// highest root downwards. Weight spaces are tiny, so blocks are dense.
struct AdjointModel {
  std::vector<RootVec> weights;  // highest first
  std::vector<int> offset;
  int total = 0;
  std::vector<SpMat> e, f;
};

AdjointModel build_adjoint(const RootSystem& rs) {
  const int n = rs.rank;
  AdjointModel m;
  for (auto it = rs.positive.rbegin(); it != rs.positive.rend(); ++it) m.weights.push_back(*it);
  m.weights.push_back(RootVec(n, 0));
  for (const auto& r : rs.positive) m.weights.push_back(negate(r));
  std::map<RootVec, int> widx;
  for (std::size_t w = 0; w < m.weights.size(); ++w) widx[m.weights[w]] = static_cast<int>(w);
  auto find = [&](const RootVec& r) {
    auto it = widx.find(r);
    return it == widx.end() ? -1 : it->second;
  };
  const std::size_t W = m.weights.size();
  std::vector<int> dim(W, 0);
  // E[w][j]: L_w -> L_{w+alpha_j}; F[w][i]: L_{w+alpha_i} -> L_w. Column-vector convention.
  std::vector<std::vector<Mat>> E(W, std::vector<Mat>(n)), F(W, std::vector<Mat>(n));
  dim[0] = 1;
  for (std::size_t w = 1; w < W; ++w) {
    const RootVec& mu = m.weights[w];
    std::vector<int> up(n), upoff(n);
    int S = 0;
    for (int j = 0; j < n; ++j) {
      up[j] = find(plus(mu, unit(n, j)));
      upoff[j] = S;
      if (up[j] >= 0) S += dim[up[j]];
    }
    struct Cand {
      int i, u;
      Vec image;
    };
    std::vector<Cand> cands;
    EchelonBasis eb(static_cast<std::size_t>(S));
    std::vector<int> basis_of_insert;
    for (int i = 0; i < n; ++i) {
      if (up[i] < 0) continue;
      const int src = up[i];
      const int hval = rs.pair_coroot(m.weights[src], i);
      for (int u = 0; u < dim[src]; ++u) {
        Vec img(static_cast<std::size_t>(S));
        for (int j = 0; j < n; ++j) {
          if (up[j] < 0) continue;
          // f_i e_j u
          int top = find(plus(m.weights[src], unit(n, j)));
          if (top >= 0) {
            const Mat& ej = E[src][j];
            const Mat& fi = F[up[j]][i];
            for (int a = 0; a < dim[up[j]]; ++a) {
              Cyc s;
              for (int b = 0; b < dim[top]; ++b)
                if (!fi[a][b].is_zero() && !ej[b][u].is_zero()) s += fi[a][b] * ej[b][u];
              img[upoff[j] + a] += s;
            }
          }
          if (i == j) img[upoff[j] + u] += Cyc(hval);
        }
        bool fresh = eb.insert(img);
        basis_of_insert.push_back(fresh ? static_cast<int>(cands.size()) : -1);
        cands.push_back({i, u, std::move(img)});
      }
    }
    std::vector<int> basis_pos(cands.size(), -1);
    std::vector<const Vec*> basis;
    for (std::size_t c = 0; c < cands.size(); ++c)
      if (basis_of_insert[c] >= 0) {
        basis_pos[c] = static_cast<int>(basis.size());
        basis.push_back(&cands[c].image);
      }
    dim[w] = static_cast<int>(basis.size());
    for (int j = 0; j < n; ++j) {
      if (up[j] < 0) continue;
      Mat ej(dim[up[j]], Vec(dim[w]));
      for (int b = 0; b < dim[w]; ++b)
        for (int a = 0; a < dim[up[j]]; ++a) ej[a][b] = (*basis[b])[upoff[j] + a];
      E[w][j] = std::move(ej);
    }
    for (int i = 0; i < n; ++i) {
      if (up[i] < 0) continue;
      Mat fi(dim[w], Vec(dim[up[i]]));
      for (const auto& c : cands) {
        if (c.i != i) continue;
        auto coeffs = eb.express(c.image);
        for (std::size_t k = 0; k < coeffs->size(); ++k)
          if (!(*coeffs)[k].is_zero()) fi[basis_pos[k]][c.u] = (*coeffs)[k];
      }
      F[w][i] = std::move(fi);
    }
  }
  m.offset.resize(W);
  for (std::size_t w = 0; w < W; ++w) {
    m.offset[w] = m.total;
    m.total += dim[w];
  }
  m.e.assign(n, SpMat(m.total));
  m.f.assign(n, SpMat(m.total));
  for (std::size_t w = 0; w < W; ++w)
    for (int j = 0; j < n; ++j) {
      int u = find(plus(m.weights[w], unit(n, j)));
      if (u < 0) continue;
      for (int a = 0; a < dim[u]; ++a)
        for (int b = 0; b < dim[w]; ++b) {
          if (!E[w][j][a][b].is_zero()) m.e[j][m.offset[u] + a][m.offset[w] + b] = E[w][j][a][b];
          if (!F[w][j][b][a].is_zero()) m.f[j][m.offset[w] + b][m.offset[u] + a] = F[w][j][b][a];
        }
    }
  return m;
}

}  // namespace

ChevalleyAlgebra::ChevalleyAlgebra(RootSystem rs) : rs_(std::move(rs)) {
  const int n = rs_.rank;
  const int P = static_cast<int>(rs_.positive.size());
  dim_ = static_cast<std::size_t>(2 * P + n);
  table_.assign(dim_ * dim_, {});
  form_.assign(dim_ * dim_, Cyc());

  AdjointModel adj = build_adjoint(rs_);
  // Root vectors as matrices; extraspecial pairs fix the signs.
  std::vector<SpMat> X(dim_);
  for (int i = 0; i < n; ++i) {
    X[root_index(unit(n, i))] = adj.e[i];
    X[root_index(negate(unit(n, i)))] = adj.f[i];
  }
  for (const auto& xi : rs_.positive) {
    if (rs_.height(xi) == 1) continue;
    int i = 0;
    while (rs_.positive_index(plus(xi, negate(unit(n, i)))) < 0) ++i;
    RootVec beta = plus(xi, negate(unit(n, i)));
    int p = 0;
    RootVec down = beta;
    while (true) {
      down[i] -= 1;
      if (!rs_.is_root(down)) break;
      ++p;
    }
    Cyc inv = Rational(1, p + 1);
    X[root_index(xi)] = sp_lin(sp_comm(X[root_index(unit(n, i))], X[root_index(beta)]), inv, SpMat(adj.total), 0);
    X[root_index(negate(xi))] =
        sp_lin(sp_comm(X[root_index(negate(unit(n, i)))], X[root_index(negate(beta))]), -inv, SpMat(adj.total), 0);
  }
  std::vector<SpMat> H(n, SpMat(adj.total));
  for (int i = 0; i < n; ++i) H[i] = sp_comm(adj.e[i], adj.f[i]);

  const int D = static_cast<int>(dim_);
  for (int a = 0; a < D; ++a) {
    if (is_cartan(a)) continue;
    RootVec ra = root_of(a);
    for (int b = 0; b < D; ++b) {
      auto& slot = table_[static_cast<std::size_t>(a) * dim_ + b];
      if (is_cartan(b)) {
        int v = rs_.pair_coroot(ra, b - P);
        if (v != 0) {
          slot.push_back({a, Cyc(-v)});
          table_[static_cast<std::size_t>(b) * dim_ + a].push_back({a, Cyc(v)});
        }
        continue;
      }
      RootVec rb = root_of(b);
      RootVec s = plus(ra, rb);
      bool zero = std::all_of(s.begin(), s.end(), [](int x) { return x == 0; });
      SpMat c = sp_comm(X[a], X[b]);
      if (zero) {
        auto cr = rs_.coroot(ra);
        SpMat expect(adj.total);
        for (int k = 0; k < n; ++k)
          if (cr[k] != 0) expect = sp_lin(expect, 1, H[k], cr[k]);
        if (!sp_ratio(c, expect) || *sp_ratio(c, expect) != Cyc(1))
          throw std::logic_error("chevalley: [x_a, x_-a] != h_a");
        for (int k = 0; k < n; ++k)
          if (cr[k] != 0) slot.push_back({cartan_index(k), Cyc(cr[k])});
      } else if (rs_.is_root(s)) {
        auto ratio = sp_ratio(c, X[root_index(s)]);
        if (!ratio || ratio->is_zero()) throw std::logic_error("chevalley: bracket not proportional to root vector");
        slot.push_back({root_index(s), *ratio});
      } else {
        bool empty = std::all_of(c.begin(), c.end(), [](const auto& row) { return row.empty(); });
        if (!empty) throw std::logic_error("chevalley: bracket of roots with non-root sum is nonzero");
      }
    }
  }
  for (auto& slot : table_) std::sort(slot.begin(), slot.end(), [](auto& x, auto& y) { return x.first < y.first; });

  for (int a = 0; a < D; ++a) {
    if (is_cartan(a)) {
      for (int k = 0; k < n; ++k)
        form_[static_cast<std::size_t>(a) * dim_ + cartan_index(k)] =
            Cyc(Rational(2 * rs_.cartan[a - P][k]) / rs_.norms[k]);
    } else {
      RootVec r = root_of(a);
      form_[static_cast<std::size_t>(a) * dim_ + root_index(negate(r))] = Cyc(Rational(2) / rs_.inner(r, r));
    }
  }
}

int ChevalleyAlgebra::root_index(const RootVec& alpha) const {
  int p = rs_.positive_index(alpha);
  if (p >= 0) return p;
  p = rs_.positive_index(negate(alpha));
  if (p < 0) throw std::invalid_argument("not a root");
  return static_cast<int>(rs_.positive.size()) + rs_.rank + p;
}

bool ChevalleyAlgebra::is_cartan(int b) const {
  int P = static_cast<int>(rs_.positive.size());
  return b >= P && b < P + rs_.rank;
}

RootVec ChevalleyAlgebra::root_of(int b) const {
  int P = static_cast<int>(rs_.positive.size());
  if (b < P) return rs_.positive[b];
  if (b < P + rs_.rank) return RootVec(rs_.rank, 0);
  return negate(rs_.positive[b - P - rs_.rank]);
}

std::string ChevalleyAlgebra::label(int b) const {
  if (is_cartan(b)) return "h" + std::to_string(b - static_cast<int>(rs_.positive.size()) + 1);
  RootVec r = root_of(b);
  if (r == rs_.highest) return "x[theta]";
  if (r == negate(rs_.highest)) return "x[-theta]";
  std::string s = "x[";
  for (int i = 0; i < rs_.rank; ++i) s += (i ? "," : "") + std::to_string(r[i]);
  return s + "]";
}

LieVec ChevalleyAlgebra::basis_vector(int b) const {
  LieVec v(dim_);
  v.at(b) = Cyc(1);
  return v;
}

LieVec ChevalleyAlgebra::h_of(const RootVec& alpha) const {
  LieVec v(dim_);
  auto c = rs_.coroot(alpha);
  for (int i = 0; i < rs_.rank; ++i) v[cartan_index(i)] = Cyc(c[i]);
  return v;
}

LieVec ChevalleyAlgebra::bracket(const LieVec& a, const LieVec& b) const {
  if (a.size() != dim_ || b.size() != dim_) throw std::invalid_argument("bracket: algebra mismatch");
  LieVec r(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (b[j].is_zero()) continue;
      const auto& t = table_[i * dim_ + j];
      if (t.empty()) continue;
      Cyc s = a[i] * b[j];
      for (const auto& [k, c] : t) r[k] += s * c;
    }
  }
  return r;
}

Cyc ChevalleyAlgebra::form(const LieVec& a, const LieVec& b) const {
  if (a.size() != dim_ || b.size() != dim_) throw std::invalid_argument("form: algebra mismatch");
  Cyc s;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim_; ++j)
      if (!b[j].is_zero() && !form_[i * dim_ + j].is_zero()) s += a[i] * b[j] * form_[i * dim_ + j];
  }
  return s;
}

Rational ChevalleyAlgebra::structure_constant(const RootVec& a, const RootVec& b) const {
  RootVec s = plus(a, b);
  if (!rs_.is_root(s)) return Rational();
  const auto& t = bracket_basis(root_index(a), root_index(b));
  return t.empty() ? Rational() : t.front().second.rational_value();
}

nlohmann::json ChevalleyAlgebra::to_json() const {
  nlohmann::json j;
  j["type"] = rs_.label();
  j["basis"] = nlohmann::json::array();
  for (std::size_t b = 0; b < dim_; ++b) j["basis"].push_back(label(static_cast<int>(b)));
  j["brackets"] = nlohmann::json::array();
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = 0; b < dim_; ++b)
      for (const auto& [k, c] : table_[a * dim_ + b]) j["brackets"].push_back({a, b, k, kmt::to_json(c)});
  j["form"] = nlohmann::json::array();
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = 0; b < dim_; ++b)
      if (!form_[a * dim_ + b].is_zero()) j["form"].push_back({a, b, kmt::to_json(form_[a * dim_ + b])});
  return j;
}

std::shared_ptr<const ChevalleyAlgebra> chevalley_algebra(const RootSystem& rs) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const ChevalleyAlgebra>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[rs.label()];
  if (!slot) slot = std::make_shared<const ChevalleyAlgebra>(rs);
  return slot;
}

}  // namespace kmt
