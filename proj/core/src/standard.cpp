#include <algorithm>

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

CVec minus(const CVec& a, const CVec& b) {
  CVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

// a (r x k) times b (k x cols)
Mat mul(const Mat& a, const Mat& b, std::size_t cols) {
  Mat r(a.size(), Vec(cols));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].size(); ++k)
      if (!a[i][k].is_zero()) axpy(r[i], a[i][k], b[k]);
  return r;
}

}  // namespace

StandardModule::StandardModule(std::shared_ptr<const AffineAlgebra> A, WeightLambda lambda)
    : Module(std::move(A), std::move(lambda)) {}

std::size_t StandardModule::compute_dim(const CVec& beta) { return space(beta).dim; }

const StandardModule::Space& StandardModule::space(const CVec& beta) {
  auto it = spaces_.find(beta);
  if (it != spaces_.end()) return it->second;
  check_cap(beta);
  std::size_t L = beta.size();
  Space sp;
  sp.E.resize(L);
  sp.Fin.resize(L);
  bool is_top = std::all_of(beta.begin(), beta.end(), [](int x) { return x == 0; });
  if (is_top) {
    sp.dim = 1;
    for (std::size_t j = 0; j < L; ++j) {
      sp.E[j] = Mat{};
      sp.Fin[j] = Mat(1, Vec{});
    }
    return spaces_.emplace(beta, std::move(sp)).first->second;
  }

  // target of Phi: sum over j of the beta - alpha_j spaces
  std::vector<std::size_t> off(L + 1, 0), dj(L, 0);
  for (std::size_t j = 0; j < L; ++j) {
    CVec b = shift(beta, j, -1);
    dj[j] = nonnegative(b) ? space(b).dim : 0;
    off[j + 1] = off[j] + dj[j];
  }
  std::size_t tot = off[L];

  std::vector<std::vector<Vec>> phi(L);  // phi[i][k] = Phi(f_i u_k)
  for (std::size_t i = 0; i < L; ++i) {
    if (dj[i] == 0) continue;
    CVec bi = shift(beta, i, -1);
    const Space& sub = space(bi);
    Rational hv = h_value(static_cast<int>(i), bi);
    for (std::size_t k = 0; k < dj[i]; ++k) {
      Vec out(tot);
      for (std::size_t j = 0; j < L; ++j) {
        if (dj[j] == 0) continue;
        // f_i e_j u_k lands in beta - alpha_j
        const Mat& Ej = sub.E[j];
        if (!Ej.empty()) {
          Vec eu(Ej.size());
          for (std::size_t r = 0; r < Ej.size(); ++r) eu[r] = Ej[r][k];
          if (!is_zero(eu)) {
            const Mat& Fi = space(shift(beta, j, -1)).Fin[i];
            Vec fe = kmt::apply(Fi, eu);
            for (std::size_t r = 0; r < fe.size(); ++r) out[off[j] + r] += fe[r];
          }
        }
        if (i == j && !hv.is_zero()) out[off[j] + k] += Cyc(hv);
      }
      phi[i].push_back(std::move(out));
    }
  }

  EchelonBasis span(tot);
  std::vector<Vec> chosen;
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t k = 0; k < phi[i].size(); ++k) {
      if (is_zero(phi[i][k]) || span.contains(phi[i][k])) continue;
      span.insert(phi[i][k]);
      chosen.push_back(phi[i][k]);
      sp.basis.emplace_back(static_cast<int>(i), k);
    }
  sp.dim = chosen.size();
  for (std::size_t j = 0; j < L; ++j) {
    sp.E[j].assign(dj[j], Vec(sp.dim));
    for (std::size_t m = 0; m < sp.dim; ++m)
      for (std::size_t r = 0; r < dj[j]; ++r) sp.E[j][r][m] = chosen[m][off[j] + r];
    sp.Fin[j].assign(sp.dim, Vec(dj[j]));
    for (std::size_t k = 0; k < phi[j].size(); ++k) {
      auto c = span.express(phi[j][k]);
      if (!c) throw std::logic_error("standard module: image outside span");
      for (std::size_t m = 0; m < sp.dim; ++m) sp.Fin[j][m][k] = (*c)[m];
    }
  }
  return spaces_.emplace(beta, std::move(sp)).first->second;
}

const Mat& StandardModule::E(int j, const CVec& beta) {
  static const Mat empty;
  if (!nonnegative(beta)) return empty;
  return space(beta).E.at(static_cast<std::size_t>(j));
}

const Mat& StandardModule::F(int j, const CVec& beta) {
  CVec t = shift(beta, static_cast<std::size_t>(j), 1);
  if (!nonnegative(beta)) {
    thread_local Mat z;
    z.assign(space(t).dim, Vec{});
    return z;
  }
  return space(t).Fin.at(static_cast<std::size_t>(j));
}

std::string StandardModule::basis_label(const CVec& beta, std::size_t i) {
  // f_{i_1} f_{i_2} ... v, following the chosen basis back to the top
  std::string s;
  CVec b = beta;
  std::size_t idx = i;
  while (std::any_of(b.begin(), b.end(), [](int x) { return x != 0; })) {
    auto [fi, k] = space(b).basis.at(idx);
    s += "f" + std::to_string(fi) + " ";
    b = shift(b, static_cast<std::size_t>(fi), -1);
    idx = k;
  }
  return s + "v";
}

const StandardModule::RootWords& StandardModule::words_for(const CVec& root) {
  auto it = root_words_.find(root);
  if (it != root_words_.end()) return it->second;
  RootWords rw;
  rw.syms = symbols_with_root(*A_, root);
  if (rw.syms.empty()) throw std::invalid_argument("not an affine root");
  rw.span = EchelonBasis(rw.syms.size());
  int sign = height(root) > 0 ? 1 : -1;
  auto coords = [&](const AffineElement& x) {
    Vec v(rw.syms.size());
    for (const auto& [s, a] : x.terms) {
      auto p = std::find(rw.syms.begin(), rw.syms.end(), s);
      if (p == rw.syms.end()) throw std::logic_error("bracket word left its root space");
      v[static_cast<std::size_t>(p - rw.syms.begin())] = a;
    }
    return v;
  };
  auto try_add = [&](Word w, AffineElement val) {
    Vec v = coords(val);
    if (is_zero(v) || rw.span.contains(v)) return;
    rw.span.insert(v);
    rw.words.push_back(static_cast<int>(words_.size()));
    words_.push_back(std::move(w));
    word_values_.push_back(std::move(val));
  };
  std::size_t L = root.size();
  if (std::abs(height(root)) == 1) {
    std::size_t j = static_cast<std::size_t>(std::find(root.begin(), root.end(), sign) - root.begin());
    try_add(Word{static_cast<int>(j), -1, sign, root}, sign > 0 ? A_->e(static_cast<int>(j)) : A_->f(static_cast<int>(j)));
  } else {
    for (std::size_t j = 0; j < L && rw.span.rank() < rw.syms.size(); ++j) {
      CVec prev = shift(root, j, -sign);
      bool ok = std::all_of(prev.begin(), prev.end(), [&](int x) { return x * sign >= 0; });
      if (!ok || symbols_with_root(*A_, prev).empty()) continue;
      std::vector<int> parents = words_for(prev).words;
      const AffineElement& g = sign > 0 ? A_->e(static_cast<int>(j)) : A_->f(static_cast<int>(j));
      for (int p : parents) {
        if (rw.span.rank() == rw.syms.size()) break;
        AffineElement val = A_->bracket(g, word_values_[static_cast<std::size_t>(p)]);
        try_add(Word{static_cast<int>(j), p, sign, root}, std::move(val));
      }
    }
  }
  if (rw.span.rank() != rw.syms.size()) throw std::logic_error("root space not generated by bracket words");
  return root_words_.emplace(root, std::move(rw)).first->second;
}

Mat StandardModule::word_matrix(int w, const CVec& beta) {
  auto key = std::make_pair(w, beta);
  auto it = word_mats_.find(key);
  if (it != word_mats_.end()) return it->second;
  Word wd = words_[static_cast<std::size_t>(w)];
  std::size_t j = static_cast<std::size_t>(wd.j);
  std::size_t src = dim(beta);
  std::size_t dst = dim(minus(beta, wd.root));
  Mat out;
  if (src == 0 || dst == 0) {
    out.assign(dst, Vec(src));
  } else if (wd.parent < 0) {
    out = wd.sign > 0 ? E(wd.j, beta) : F(wd.j, beta);
  } else {
    const Word& pw = words_[static_cast<std::size_t>(wd.parent)];
    CVec mid = minus(beta, pw.root);             // after the parent word
    CVec gen = shift(beta, j, -wd.sign);         // after the generator
    const Mat& G1 = wd.sign > 0 ? E(wd.j, mid) : F(wd.j, mid);
    const Mat& G2 = wd.sign > 0 ? E(wd.j, beta) : F(wd.j, beta);
    Mat P1 = word_matrix(wd.parent, beta);
    Mat P2 = word_matrix(wd.parent, gen);
    out = mul(G1, P1, src);
    Mat second = mul(P2, G2, src);
    for (std::size_t r = 0; r < out.size(); ++r) axpy(out[r], Cyc(-1), second[r]);
  }
  return word_mats_.emplace(key, out).first->second;
}

Mat StandardModule::compute_matrix(const Sym& s, const CVec& beta) {
  CVec root = A_->root(s);
  std::size_t src = dim(beta);
  std::size_t dst = dim(minus(beta, root));
  if (std::all_of(root.begin(), root.end(), [](int x) { return x == 0; })) {
    Mat m(src, Vec(src));
    Cyc v = cartan_value(s.b, beta);
    for (std::size_t i = 0; i < src; ++i) m[i][i] = v;
    return m;
  }
  const RootWords& rw = words_for(root);
  Vec unit(rw.syms.size());
  unit[static_cast<std::size_t>(std::find(rw.syms.begin(), rw.syms.end(), s) - rw.syms.begin())] = Cyc(1);
  auto c = rw.span.express(unit);
  Mat out(dst, Vec(src));
  for (std::size_t q = 0; q < c->size(); ++q) {
    if ((*c)[q].is_zero()) continue;
    Mat wm = word_matrix(rw.words[q], beta);
    for (std::size_t r = 0; r < dst; ++r) axpy(out[r], (*c)[q], wm[r]);
  }
  return out;
}

}  // namespace kmt
