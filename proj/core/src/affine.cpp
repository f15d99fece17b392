#include "kmt/affine.hpp"

#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "kmt/linalg.hpp"

namespace kmt {

namespace {

using Sparse = std::vector<std::pair<int, Cyc>>;

Sparse nonzeros(const LieVec& v) {
  Sparse r;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) r.emplace_back(static_cast<int>(i), v[i]);
  return r;
}

int mod(int a, int T) { return ((a % T) + T) % T; }

}  // namespace

// ---- AffineElement ----

bool AffineElement::is_zero() const { return terms.empty() && c.is_zero() && d.is_zero(); }

void AffineElement::add(const Sym& s, const Cyc& coeff) {
  if (coeff.is_zero()) return;
  auto [it, fresh] = terms.emplace(s, coeff);
  if (fresh) return;
  it->second += coeff;
  if (it->second.is_zero()) terms.erase(it);
}

AffineElement& AffineElement::operator+=(const AffineElement& o) {
  for (const auto& [s, x] : o.terms) add(s, x);
  c += o.c;
  d += o.d;
  return *this;
}

AffineElement AffineElement::operator*(const Cyc& s) const {
  AffineElement r;
  if (s.is_zero()) return r;
  for (const auto& [k, x] : terms) r.terms.emplace(k, x * s);
  r.c = c * s;
  r.d = d * s;
  return r;
}

AffineElement operator-(const AffineElement& a, const AffineElement& b) {
  AffineElement r = a;
  r += b * Cyc(-1);
  return r;
}

bool operator==(const AffineElement& a, const AffineElement& b) { return (a - b).is_zero(); }

int height(const CVec& c) { return std::accumulate(c.begin(), c.end(), 0); }

int depth_num(const TwistRealization& R, const CVec& c) {
  int s = 0;
  for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * R.s[j];
  return s;
}

// ---- AffineAlgebra ----

AffineAlgebra::AffineAlgebra(std::shared_ptr<const TwistRealization> R) : R_(std::move(R)) {
  elems_.resize(R_->grad.elems.size());
  std::iota(elems_.begin(), elems_.end(), 0);
  build_blocks();
  build_tables();
  build_generators();
}

void AffineAlgebra::build_blocks() {
  const auto& g = R_->grad;
  std::size_t n = R_->alg->dim();
  block_of_basis_.assign(n, -1);
  int nb = 0;
  for (const auto& e : g.elems) nb = std::max(nb, e.block + 1);
  blocks_.assign(static_cast<std::size_t>(nb), Block{});
  for (std::size_t b = 0; b < g.elems.size(); ++b) {
    auto& B = blocks_.at(static_cast<std::size_t>(g.elems[b].block));
    B.members.push_back(static_cast<int>(b));
    for (const auto& [i, x] : nonzeros(g.elems[b].v)) {
      if (block_of_basis_[static_cast<std::size_t>(i)] < 0) {
        block_of_basis_[static_cast<std::size_t>(i)] = g.elems[b].block;
        B.support.push_back(i);
      } else if (block_of_basis_[static_cast<std::size_t>(i)] != g.elems[b].block) {
        throw std::logic_error("gradation blocks overlap");
      }
    }
  }
  for (auto& B : blocks_) {
    std::sort(B.support.begin(), B.support.end());
    if (B.support.size() != B.members.size()) throw std::logic_error("gradation block is not square");
    Mat m(B.support.size(), Vec(B.members.size()));
    for (std::size_t c = 0; c < B.members.size(); ++c) {
      const auto& v = g.elems[static_cast<std::size_t>(B.members[c])].v;
      for (std::size_t r = 0; r < B.support.size(); ++r) m[r][c] = v[static_cast<std::size_t>(B.support[r])];
    }
    auto inv = inverse(m);
    if (!inv) throw std::logic_error("gradation block is singular");
    B.inverse = std::move(*inv);
  }

  // H_1..H_l coordinates of class-0 Cartan vectors
  hcoords_.assign(g.elems.size(), {});
  std::size_t l = static_cast<std::size_t>(R_->l);
  Mat hm(n, Vec(l));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t r = 0; r < n; ++r) hm[r][i] = R_->H[i + 1][r];
  for (std::size_t b = 0; b < g.elems.size(); ++b) {
    if (!is_cartan0(static_cast<int>(b))) continue;
    auto y = solve(hm, g.elems[b].v, l);
    if (!y) throw std::logic_error("class-0 Cartan vector outside span of H_i");
    hcoords_[b] = std::move(*y);
  }

  // (degree, H_1..H_l) -> c-vector
  std::size_t L = l + 1;
  Mat sys(L, Vec(L));
  for (std::size_t j = 0; j < L; ++j) sys[0][j] = Cyc(R_->s[j]);
  for (std::size_t i = 1; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) sys[i][j] = Cyc(R_->A[i][j]);
  auto inv = inverse(sys);
  if (!inv) throw std::logic_error("root system of the affine algebra is degenerate");
  root_solve_.assign(L, std::vector<Rational>(L));
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) root_solve_[i][j] = (*inv)[i][j].rational_value();

  theta_b_ = elem_of_root(R_->alg->roots().highest, &theta_scale_);
  if (theta_b_ < 0) throw std::logic_error("x_theta is not sigma-homogeneous");
}

void AffineAlgebra::build_tables() {
  const auto& alg = *R_->alg;
  std::size_t d = dim();
  std::vector<Sparse> nz(d);
  for (std::size_t b = 0; b < d; ++b) nz[b] = nonzeros(vec(static_cast<int>(b)));
  table_.assign(d * d, {});
  form_.assign(d, {});
  std::size_t n = alg.dim();
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      LieVec r(n);
      bool any = false;
      for (const auto& [i, x] : nz[a])
        for (const auto& [j, y] : nz[b]) {
          const auto& t = alg.bracket_basis(i, j);
          if (t.empty()) continue;
          Cyc s = x * y;
          for (const auto& [k, c] : t) r[static_cast<std::size_t>(k)] += s * c;
          any = true;
        }
      if (any) table_[a * d + b] = nonzeros(coords(r));
      if (mod(cls(static_cast<int>(a)) + cls(static_cast<int>(b)), T()) != 0) continue;
      Cyc f;
      for (const auto& [i, x] : nz[a])
        for (const auto& [j, y] : nz[b]) {
          const auto& fv = alg.form_basis(i, j);
          if (!fv.is_zero()) f += x * y * fv;
        }
      if (!f.is_zero()) form_[a].emplace_back(static_cast<int>(b), f);
    }
  }
}

void AffineAlgebra::build_generators() {
  int L = l() + 1;
  for (int j = 0; j < L; ++j) {
    std::size_t J = static_cast<std::size_t>(j);
    int sj = R_->s[J];
    e_.push_back(loop(R_->E[J], sj));
    f_.push_back(loop(R_->F[J], -sj));
    AffineElement h = loop(R_->H[J], 0);
    h.c = Cyc(Rational(2 * sj) / (Rational(T()) * R_->beta_norm[J]));
    h_.push_back(std::move(h));
  }
}

bool AffineAlgebra::is_cartan0(int b) const {
  const auto& e = R_->grad.elems[static_cast<std::size_t>(b)];
  return e.cartan && e.cls == 0;
}

bool AffineAlgebra::valid(const Sym& s) const {
  return s.b >= 0 && static_cast<std::size_t>(s.b) < dim() && mod(s.N, T()) == cls(s.b);
}

CVec AffineAlgebra::root_of_weight(const std::vector<int>& gamma, int N) const {
  std::size_t L = root_solve_.size();
  CVec c(L);
  for (std::size_t i = 0; i < L; ++i) {
    Rational x = root_solve_[i][0] * Rational(N);
    for (std::size_t j = 1; j < L; ++j) x += root_solve_[i][j] * Rational(gamma[j]);
    if (!x.is_integer()) throw std::logic_error("non-integral affine root");
    c[i] = static_cast<int>(x.floor());
  }
  return c;
}

CVec AffineAlgebra::root(const Sym& s) const {
  if (!valid(s)) throw std::invalid_argument("invalid loop symbol");
  return root_of_weight(weight(s.b), s.N);
}

int AffineAlgebra::side(const Sym& s) const {
  CVec c = root(s);
  bool pos = false, neg = false;
  for (int x : c) {
    if (x > 0) pos = true;
    if (x < 0) neg = true;
  }
  if (pos && neg) throw std::logic_error("affine root of mixed sign");
  return pos ? 1 : (neg ? -1 : 0);
}

int AffineAlgebra::degree_of(const CVec& c) const { return depth_num(*R_, c); }

Vec AffineAlgebra::coords(const LieVec& v) const {
  Vec out(dim());
  std::vector<char> seen(blocks_.size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    int bi = block_of_basis_[i];
    if (seen[static_cast<std::size_t>(bi)]) continue;
    seen[static_cast<std::size_t>(bi)] = 1;
    const auto& B = blocks_[static_cast<std::size_t>(bi)];
    Vec sub(B.support.size());
    for (std::size_t r = 0; r < B.support.size(); ++r) sub[r] = v[static_cast<std::size_t>(B.support[r])];
    Vec c = kmt::apply(B.inverse, sub);
    for (std::size_t k = 0; k < B.members.size(); ++k) out[static_cast<std::size_t>(B.members[k])] = c[k];
  }
  return out;
}

Cyc AffineAlgebra::form(int a, int b) const {
  for (const auto& [k, x] : fform(a))
    if (k == b) return x;
  return Cyc();
}

AffineElement AffineAlgebra::bracket(const Sym& s, const Sym& t) const {
  AffineElement r;
  int N = s.N + t.N;
  for (const auto& [k, c] : fbracket(s.b, t.b)) r.add(Sym{k, N}, c);
  if (N == 0 && s.N != 0) {
    Cyc f = form(s.b, t.b);
    if (!f.is_zero()) r.c = f * Cyc(Rational(s.N, T()));
  }
  return r;
}

AffineElement AffineAlgebra::bracket(const AffineElement& x, const AffineElement& y) const {
  AffineElement r;
  for (const auto& [s, a] : x.terms)
    for (const auto& [t, b] : y.terms) r += bracket(s, t) * (a * b);
  if (!x.d.is_zero())
    for (const auto& [t, b] : y.terms)
      if (t.N != 0) r.add(t, x.d * b * Cyc(Rational(t.N, T())));
  if (!y.d.is_zero())
    for (const auto& [s, a] : x.terms)
      if (s.N != 0) r.add(s, -(y.d * a * Cyc(Rational(s.N, T()))));
  return r;
}

AffineElement AffineAlgebra::loop(const LieVec& x, int N) const {
  Vec c = coords(x);
  AffineElement r;
  for (std::size_t b = 0; b < c.size(); ++b) {
    if (c[b].is_zero()) continue;
    if (cls(static_cast<int>(b)) != mod(N, T())) throw std::invalid_argument("loop: element not in the right eigenspace");
    r.add(Sym{static_cast<int>(b), N}, c[b]);
  }
  return r;
}

void AffineAlgebra::build_omega() const {
  const auto& alg = *R_->alg;
  std::size_t n = alg.dim();
  std::vector<LieVec> gens, imgs;
  for (std::size_t j = 0; j < R_->E.size(); ++j) {
    gens.push_back(R_->E[j]);
    imgs.push_back(R_->F[j]);
    gens.push_back(R_->F[j]);
    imgs.push_back(R_->E[j]);
  }
  // omega([g, x]) = [omega(x), omega(g)]
  EchelonBasis span(n);
  std::vector<LieVec> X, Y;
  auto push = [&](const LieVec& x, const LieVec& y) {
    if (is_zero(x) || span.contains(x)) return;
    span.insert(x);
    X.push_back(x);
    Y.push_back(y);
  };
  for (std::size_t i = 0; i < gens.size(); ++i) push(gens[i], imgs[i]);
  for (std::size_t q = 0; q < X.size() && X.size() < n; ++q)
    for (std::size_t i = 0; i < gens.size(); ++i) {
      LieVec x = X[q], y = Y[q];
      push(alg.bracket(gens[i], x), alg.bracket(y, imgs[i]));
    }
  if (X.size() != n) throw std::logic_error("generators do not span g");
  std::vector<LieVec> image(n);
  for (std::size_t b = 0; b < n; ++b) {
    auto c = span.express(alg.basis_vector(static_cast<int>(b)));
    LieVec w(n);
    for (std::size_t i = 0; i < c->size(); ++i) axpy(w, (*c)[i], Y[i]);
    image[b] = std::move(w);
  }
  omega_.assign(dim(), {});
  for (std::size_t a = 0; a < dim(); ++a) {
    LieVec w(n);
    for (const auto& [b, x] : nonzeros(vec(static_cast<int>(a)))) axpy(w, x, image[static_cast<std::size_t>(b)]);
    auto c = coords(w);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k].is_zero()) continue;
      if (mod(cls(static_cast<int>(k)) + cls(static_cast<int>(a)), T()) != 0)
        throw std::logic_error("omega does not reverse the gradation");
      omega_[a].emplace_back(static_cast<int>(k), c[k]);
    }
  }
}

const std::vector<std::pair<int, Cyc>>& AffineAlgebra::omega0(int b) const {
  std::call_once(omega_once_, [this] { build_omega(); });
  return omega_.at(static_cast<std::size_t>(b));
}

AffineElement AffineAlgebra::omega(const Sym& s) const {
  AffineElement r;
  for (const auto& [k, x] : omega0(s.b)) r.add(Sym{k, -s.N}, x);
  return r;
}

std::array<AffineElement, 3> AffineAlgebra::triangular(const AffineElement& x) const {
  std::array<AffineElement, 3> r;
  for (const auto& [s, a] : x.terms) r[static_cast<std::size_t>(side(s) + 1)].add(s, a);
  r[1].c = x.c;
  r[1].d = x.d;
  return r;
}

int AffineAlgebra::elem_of_root(const RootVec& alpha, Cyc* scale) const {
  int idx = R_->alg->root_index(alpha);
  for (std::size_t b = 0; b < dim(); ++b) {
    auto nz = nonzeros(vec(static_cast<int>(b)));
    if (nz.size() == 1 && nz[0].first == idx) {
      if (scale) *scale = nz[0].second;
      return static_cast<int>(b);
    }
  }
  return -1;
}

std::string AffineAlgebra::elem_label(int b) const {
  auto nz = nonzeros(vec(b));
  if (nz.size() == 1 && nz[0].second == Cyc(1)) return R_->alg->label(nz[0].first);
  return "g" + std::to_string(b);
}

std::string AffineAlgebra::label(const Sym& s) const {
  return elem_label(s.b) + "@" + std::to_string(s.N) + "/" + std::to_string(T());
}

std::string AffineAlgebra::str(const AffineElement& x) const {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Cyc& a, const std::string& what) {
    if (!first) os << " + ";
    first = false;
    os << "(" << a.str() << ")*" << what;
  };
  for (const auto& [s, a] : x.terms) emit(a, label(s));
  if (!x.c.is_zero()) emit(x.c, "c");
  if (!x.d.is_zero()) emit(x.d, "d");
  if (first) os << "0";
  return os.str();
}

std::shared_ptr<const AffineAlgebra> affine_algebra(std::shared_ptr<const TwistRealization> R) {
  static std::mutex m;
  static std::map<const TwistRealization*, std::shared_ptr<const AffineAlgebra>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(R.get());
  if (it != cache.end()) return it->second;
  auto a = std::make_shared<const AffineAlgebra>(R);
  cache.emplace(R.get(), a);
  return a;
}

}  // namespace kmt
