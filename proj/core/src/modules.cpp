#include "kmt/modules.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace kmt {

namespace {

bool nonnegative(const CVec& c) {
  return std::all_of(c.begin(), c.end(), [](int x) { return x >= 0; });
}

CVec minus(const CVec& a, const CVec& b) {
  CVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

}  // namespace

// ---- WeightLambda ----

Rational WeightLambda::level(const TwistRealization& R) const {
  Rational k;
  for (std::size_t j = 0; j < labels.size(); ++j) k += Rational(R.comarks.at(j)) * labels[j];
  return k;
}

bool WeightLambda::dominant() const {
  return std::all_of(labels.begin(), labels.end(), [](const Rational& x) { return x.is_integer() && x.sign() >= 0; });
}

std::vector<Rational> WeightLambda::finite_values(const TwistRealization& R) const {
  if (labels.size() != static_cast<std::size_t>(R.l + 1)) throw std::invalid_argument("weight needs l+1 labels");
  Rational k = level(R);
  std::vector<Rational> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    out.push_back(labels[i] - Rational(2 * R.s[i]) * k / (Rational(R.T) * R.beta_norm[i]));
  return out;
}

std::string WeightLambda::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? "," : "") + labels[i].str();
  return s + ")";
}

WeightLambda WeightLambda::fundamental(const TwistRealization& R, int i, int multiple) {
  WeightLambda w;
  w.labels.assign(static_cast<std::size_t>(R.l + 1), Rational());
  w.labels.at(static_cast<std::size_t>(i)) = Rational(multiple);
  return w;
}

WeightLambda WeightLambda::vacuum(const TwistRealization& R, const Rational& k) {
  WeightLambda w;
  w.labels.assign(static_cast<std::size_t>(R.l + 1), Rational());
  Rational rest;
  for (std::size_t i = 1; i < w.labels.size(); ++i) {
    w.labels[i] = Rational(2 * R.s[i]) * k / (Rational(R.T) * R.beta_norm[i]);
    rest += Rational(R.comarks[i]) * w.labels[i];
  }
  w.labels[0] = (k - rest) / Rational(R.comarks[0]);
  return w;
}

bool Window::contains(const TwistRealization& R, const CVec& beta) const {
  if (!nonnegative(beta)) return false;
  if (depth_num(R, beta) > D) return false;
  return H < 0 || height(beta) <= H;
}

std::vector<CVec> window_weights(const TwistRealization& R, const Window& w) {
  std::size_t L = static_cast<std::size_t>(R.l + 1);
  for (std::size_t j = 0; j < L; ++j)
    if (R.s[j] == 0 && w.H < 0) throw std::invalid_argument("window needs a height bound when some s_j = 0");
  std::vector<CVec> out;
  CVec c(L);
  auto rec = [&](auto&& self, std::size_t j, int dleft, int hleft) -> void {
    if (j == L) {
      out.push_back(c);
      return;
    }
    int maxc = R.s[j] > 0 ? dleft / R.s[j] : hleft;
    if (w.H >= 0) maxc = std::min(maxc, hleft);
    for (int x = 0; x <= maxc; ++x) {
      c[j] = x;
      self(self, j + 1, dleft - x * R.s[j], hleft - x);
    }
    c[j] = 0;
  };
  rec(rec, 0, w.D, w.H < 0 ? INT_MAX / 2 : w.H);
  std::sort(out.begin(), out.end(), [](const CVec& a, const CVec& b) {
    return std::make_pair(height(a), a) < std::make_pair(height(b), b);
  });
  return out;
}

// ---- Module ----

Module::Module(std::shared_ptr<const AffineAlgebra> A, WeightLambda lambda)
    : A_(std::move(A)), lambda_(std::move(lambda)) {
  k_ = lambda_.level(A_->real());
  fin_ = lambda_.finite_values(A_->real());
}

void Module::check_cap(const CVec& beta) const {
  if (depth_num(A_->real(), beta) > cap_)
    throw TruncationOverflow("weight space beyond depth " + std::to_string(cap_) + "/" + std::to_string(A_->T()));
}

std::size_t Module::dim(const CVec& beta) {
  if (!nonnegative(beta)) return 0;
  auto it = dims_.find(beta);
  if (it != dims_.end()) return it->second;
  check_cap(beta);
  std::size_t d = compute_dim(beta);
  dims_.emplace(beta, d);
  return d;
}

Rational Module::h_value(int i, const CVec& beta) const {
  const auto& A = A_->real().A;
  Rational v = lambda_.labels.at(static_cast<std::size_t>(i));
  for (std::size_t j = 0; j < beta.size(); ++j) v -= Rational(beta[j] * A[static_cast<std::size_t>(i)][j]);
  return v;
}

Cyc Module::cartan_value(int b, const CVec& beta) const {
  const auto& y = A_->cartan_coords(b);
  const auto& A = A_->real().A;
  Cyc v;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i].is_zero()) continue;
    Rational x = fin_[i + 1];
    for (std::size_t j = 0; j < beta.size(); ++j) x -= Rational(beta[j] * A[i + 1][j]);
    v += y[i] * Cyc(x);
  }
  return v;
}

const Mat& Module::matrix(const Sym& s, const CVec& beta) {
  auto key = std::make_pair(s, beta);
  auto it = mats_.find(key);
  if (it != mats_.end()) return it->second;
  Mat m;
  std::size_t src = dim(beta);
  std::size_t dst = dim(minus(beta, A_->root(s)));
  if (src > 0 && dst > 0) {
    m = compute_matrix(s, beta);
  } else {
    m.assign(dst, Vec(src));
  }
  return mats_.emplace(key, std::move(m)).first->second;
}

Mat Module::matrix(const AffineElement& x, const CVec& beta) {
  std::optional<CVec> root;
  auto merge = [&](const CVec& r) {
    if (root && *root != r) throw std::invalid_argument("element is not root-homogeneous");
    root = r;
  };
  for (const auto& [s, a] : x.terms) merge(A_->root(s));
  CVec zero(beta.size());
  if (!x.c.is_zero() || !x.d.is_zero()) merge(zero);
  if (!root) root = zero;
  std::size_t src = dim(beta);
  std::size_t dst = dim(minus(beta, *root));
  Mat out(dst, Vec(src));
  if (src == 0 || dst == 0) return out;
  for (const auto& [s, a] : x.terms) {
    const Mat& m = matrix(s, beta);
    for (std::size_t r = 0; r < dst; ++r) axpy(out[r], a, m[r]);
  }
  Cyc diag = x.c * Cyc(k_);
  if (!x.d.is_zero()) diag += x.d * Cyc(lambda_.d - Rational(depth_num(A_->real(), beta), A_->T()));
  if (!diag.is_zero())
    for (std::size_t r = 0; r < dst; ++r) out[r][r] += diag;
  return out;
}

WVec Module::act(const Sym& s, const WVec& v) {
  WVec r{minus(v.beta, A_->root(s)), {}};
  if (dim(r.beta) == 0 || v.v.empty()) {
    r.v.assign(dim(r.beta), Cyc());
    return r;
  }
  r.v = kmt::apply(matrix(s, v.beta), v.v);
  return r;
}

WVec Module::act(const AffineElement& x, const WVec& v) {
  Mat m = matrix(x, v.beta);
  CVec root(v.beta.size());
  if (!x.terms.empty()) root = A_->root(x.terms.begin()->first);
  WVec r{minus(v.beta, root), {}};
  r.v = v.v.empty() ? Vec(m.size()) : kmt::apply(m, v.v);
  return r;
}

WVec Module::top() const { return WVec{CVec(static_cast<std::size_t>(A_->l() + 1)), Vec{Cyc(1)}}; }

nlohmann::json Module::to_json(const WVec& v) {
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t i = 0; i < v.v.size(); ++i)
    if (!v.v[i].is_zero()) terms.push_back({{"basis", basis_label(v.beta, i)}, {"coeff", kmt::to_json(v.v[i])}});
  return {{"module", kind()},
          {"weight", v.beta},
          {"depth", std::to_string(depth_num(A_->real(), v.beta)) + "/" + std::to_string(A_->T())},
          {"terms", terms}};
}

std::vector<CVec> Module::support(const Window& w) {
  const auto& R = A_->real();
  std::set<CVec> seen;
  std::deque<CVec> q;
  CVec z(static_cast<std::size_t>(R.l + 1));
  seen.insert(z);
  q.push_back(z);
  while (!q.empty()) {
    CVec b = q.front();
    q.pop_front();
    for (std::size_t j = 0; j < b.size(); ++j) {
      CVec n = b;
      ++n[j];
      if (!w.contains(R, n) || seen.count(n)) continue;
      if (dim(n) == 0) continue;
      seen.insert(n);
      q.push_back(n);
    }
  }
  std::vector<CVec> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), [](const CVec& a, const CVec& b) {
    return std::make_pair(height(a), a) < std::make_pair(height(b), b);
  });
  return out;
}

// ---- PBWModule ----

PBWModule::PBWModule(std::shared_ptr<const AffineAlgebra> A, Kind kind, WeightLambda lambda)
    : Module(std::move(A), std::move(lambda)), kind_(kind) {
  if (kind_ == Kind::Vacuum)
    for (std::size_t i = 1; i < fin_.size(); ++i)
      if (!fin_[i].is_zero()) throw std::invalid_argument("vacuum module needs a weight vanishing on t_[0]");
}

bool PBWModule::creation(const Sym& s) const {
  if (kind_ == Kind::Vacuum) return s.N < 0;
  return A_->side(s) < 0;
}

bool PBWModule::before(const Sym& a, const Sym& b) {
  if (a.N != b.N) return a.N > b.N;
  return a.b < b.b;
}

CVec PBWModule::weight_of(const Monomial& m) const {
  CVec w(static_cast<std::size_t>(A_->l() + 1));
  for (const auto& s : m) w = minus(w, A_->root(s));
  return w;
}

std::vector<Sym> PBWModule::creation_symbols(const CVec& beta) const {
  std::vector<Sym> out;
  int dn = depth_num(A_->real(), beta);
  int top = kind_ == Kind::Vacuum ? -1 : 0;
  for (int N = -dn; N <= top; ++N)
    for (std::size_t b = 0; b < A_->dim(); ++b) {
      Sym s{static_cast<int>(b), N};
      if (!A_->valid(s) || !creation(s)) continue;
      CVec r = A_->root(s);
      bool ok = true;
      for (std::size_t j = 0; j < r.size(); ++j)
        if (-r[j] > beta[j]) ok = false;
      if (ok) out.push_back(s);
    }
  std::sort(out.begin(), out.end(), before);
  return out;
}

const std::vector<Monomial>& PBWModule::basis(const CVec& beta) {
  auto it = bases_.find(beta);
  if (it != bases_.end()) return it->second;
  check_cap(beta);
  std::vector<Monomial> out;
  if (nonnegative(beta)) {
    auto syms = creation_symbols(beta);
    std::vector<CVec> neg;
    for (const auto& s : syms) neg.push_back(minus(CVec(beta.size()), A_->root(s)));
    Monomial cur;
    CVec rem = beta;
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (std::all_of(rem.begin(), rem.end(), [](int x) { return x == 0; })) {
        out.push_back(cur);
        return;
      }
      for (std::size_t i = start; i < syms.size(); ++i) {
        CVec nr = minus(rem, neg[i]);
        if (!nonnegative(nr)) continue;
        std::swap(rem, nr);
        cur.push_back(syms[i]);
        self(self, i);
        cur.pop_back();
        std::swap(rem, nr);
      }
    };
    rec(rec, 0);
  }
  auto& idx = index_[beta];
  for (std::size_t i = 0; i < out.size(); ++i) idx.emplace(out[i], i);
  return bases_.emplace(beta, std::move(out)).first->second;
}

std::size_t PBWModule::index(const CVec& beta, const Monomial& m) {
  basis(beta);
  auto it = index_.at(beta).find(m);
  if (it == index_.at(beta).end()) throw std::logic_error("monomial not in weight space");
  return it->second;
}

std::size_t PBWModule::compute_dim(const CVec& beta) { return basis(beta).size(); }

std::string PBWModule::monomial_label(const Monomial& m) const {
  std::string s;
  for (const auto& x : m) s += A_->label(x) + " ";
  return s + (kind_ == Kind::Vacuum ? "1" : "v");
}

std::string PBWModule::basis_label(const CVec& beta, std::size_t i) { return monomial_label(basis(beta).at(i)); }

WVec PBWModule::vector_of(const Monomial& m) {
  WVec v{weight_of(m), {}};
  v.v.assign(dim(v.beta), Cyc());
  v.v[index(v.beta, m)] = Cyc(1);
  return v;
}

const std::map<Monomial, Cyc>& PBWModule::apply(const Sym& x, const Monomial& m) {
  auto key = std::make_pair(x, m);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  std::map<Monomial, Cyc> out;
  auto add = [&out](const Monomial& w, const Cyc& c) {
    if (c.is_zero()) return;
    auto [p, fresh] = out.emplace(w, c);
    if (fresh) return;
    p->second += c;
    if (p->second.is_zero()) out.erase(p);
  };
  if (x.N == 0 && A_->is_cartan0(x.b)) {
    add(m, cartan_value(x.b, weight_of(m)));
  } else if (m.empty()) {
    if (creation(x)) add(Monomial{x}, Cyc(1));
  } else if (creation(x) && !before(m[0], x)) {
    Monomial w;
    w.reserve(m.size() + 1);
    w.push_back(x);
    w.insert(w.end(), m.begin(), m.end());
    add(w, Cyc(1));
  } else {
    // x s1 rest = s1 (x rest) + [x, s1] rest
    const Sym s1 = m[0];
    const Monomial rest(m.begin() + 1, m.end());
    const auto& inner = apply(x, rest);
    for (const auto& [w, c] : inner)
      for (const auto& [w2, c2] : apply(s1, w)) add(w2, c * c2);
    AffineElement br = A_->bracket(x, s1);
    for (const auto& [t, c] : br.terms)
      for (const auto& [w2, c2] : apply(t, rest)) add(w2, c * c2);
    if (!br.c.is_zero()) add(rest, br.c * Cyc(k_));
  }
  return memo_.emplace(key, std::move(out)).first->second;
}

Mat PBWModule::compute_matrix(const Sym& s, const CVec& beta) {
  CVec tgt = minus(beta, A_->root(s));
  const auto& src = basis(beta);
  Mat m(dim(tgt), Vec(src.size()));
  for (std::size_t i = 0; i < src.size(); ++i)
    for (const auto& [w, c] : apply(s, src[i])) m[index(tgt, w)][i] = c;
  return m;
}

std::vector<Sym> symbols_with_root(const AffineAlgebra& A, const CVec& root) {
  std::vector<Sym> out;
  int N = A.degree_of(root);
  for (std::size_t b = 0; b < A.dim(); ++b) {
    Sym s{static_cast<int>(b), N};
    if (A.valid(s) && A.root(s) == root) out.push_back(s);
  }
  return out;
}

}  // namespace kmt
