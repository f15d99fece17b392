#include "kmt/twist.hpp"

namespace kmt {

namespace {

using Sparse = std::vector<std::pair<int, Cyc>>;

void add_to(std::vector<Cyc>& acc, const Cyc& s, const Sparse& terms) {
  for (const auto& [k, c] : terms) acc[static_cast<std::size_t>(k)] += s * c;
}

bool jacobi(const ChevalleyAlgebra& g) {
  const int d = static_cast<int>(g.dim());
  std::vector<Cyc> acc(g.dim());
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c) {
        std::fill(acc.begin(), acc.end(), Cyc());
        for (const auto& [k, s] : g.bracket_basis(a, b)) add_to(acc, s, g.bracket_basis(k, c));
        for (const auto& [k, s] : g.bracket_basis(b, c)) add_to(acc, s, g.bracket_basis(k, a));
        for (const auto& [k, s] : g.bracket_basis(c, a)) add_to(acc, s, g.bracket_basis(k, b));
        if (!is_zero(acc)) return false;
      }
  return true;
}

bool form_invariant(const ChevalleyAlgebra& g) {
  const int d = static_cast<int>(g.dim());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = b; c < d; ++c) {
        Cyc s;
        for (const auto& [k, x] : g.bracket_basis(a, b)) s += x * g.form_basis(k, c);
        for (const auto& [k, x] : g.bracket_basis(a, c)) s += x * g.form_basis(b, k);
        if (!s.is_zero()) return false;
      }
  return true;
}

bool gradation_ok(const TwistRealization& R) {
  const auto& g = *R.alg;
  std::vector<EchelonBasis> spaces(static_cast<std::size_t>(R.T), EchelonBasis(g.dim()));
  std::size_t total = 0;
  for (const auto& e : R.grad.elems) {
    if (R.sigma.apply(e.v) != scale(Cyc::root_of_unity(static_cast<unsigned>(R.T), e.cls), e.v)) return false;
    spaces[static_cast<std::size_t>(e.cls)].insert(e.v);
    ++total;
  }
  std::size_t rk = 0;
  for (const auto& s : spaces) rk += s.rank();
  if (total != g.dim() || rk != g.dim()) return false;
  for (const auto& a : R.grad.elems)
    for (const auto& b : R.grad.elems) {
      LieVec ab = g.bracket(a.v, b.v);
      if (!is_zero(ab) && !spaces[static_cast<std::size_t>((a.cls + b.cls) % R.T)].contains(ab)) return false;
    }
  return true;
}

bool cartan_ok(const TwistRealization& R) {
  const auto& g = *R.alg;
  const int l = R.l;
  for (int i = 0; i <= l; ++i) {
    if (R.A[i][i] != 2) return false;
    if (g.bracket(R.E[i], R.F[i]) != R.H[i]) return false;
    for (int j = 0; j <= l; ++j) {
      if (i != j && (R.A[i][j] > 0 || (R.A[i][j] == 0) != (R.A[j][i] == 0))) return false;
      if (g.bracket(R.H[i], R.E[j]) != scale(Cyc(R.A[i][j]), R.E[j])) return false;
      if (g.bracket(R.H[i], R.F[j]) != scale(Cyc(-R.A[i][j]), R.F[j])) return false;
      if (i != j && !is_zero(g.bracket(R.E[i], R.F[j]))) return false;
    }
  }
  return true;
}

bool null_vectors_ok(const TwistRealization& R) {
  const int l = R.l;
  if (static_cast<int>(R.marks.size()) != l + 1 || static_cast<int>(R.comarks.size()) != l + 1) return false;
  for (int i = 0; i <= l; ++i) {
    if (R.marks[i] <= 0 || R.comarks[i] <= 0) return false;
    long long s1 = 0, s2 = 0;
    for (int j = 0; j <= l; ++j) {
      s1 += static_cast<long long>(R.A[i][j]) * R.marks[j];
      s2 += static_cast<long long>(R.comarks[j]) * R.A[j][i];
    }
    if (s1 != 0 || s2 != 0) return false;
  }
  // corank 1: deleting any node leaves a nonsingular matrix
  Mat m;
  for (int i = 1; i <= l; ++i) {
    Vec row;
    for (int j = 1; j <= l; ++j) row.emplace_back(R.A[i][j]);
    m.push_back(row);
  }
  return rank(m) == static_cast<std::size_t>(l);
}

}  // namespace

nlohmann::json validate_realization(const TwistRealization& R) {
  nlohmann::json j;
  j["jacobi"] = jacobi(*R.alg);
  j["form_invariance"] = form_invariant(*R.alg);
  j["sigma_order"] = R.sigma.power(R.T).is_identity() && (R.T == 1 || !R.sigma.is_identity());
  j["sigma_automorphism"] = R.sigma.preserves_bracket() && R.sigma.preserves_form();
  j["gradation"] = gradation_ok(R);
  j["cartan_matrix"] = cartan_ok(R);
  j["null_vectors"] = null_vectors_ok(R);
  bool pass = true;
  for (const auto& [k, v] : j.items()) pass = pass && v.get<bool>();
  j["pass"] = pass;
  return j;
}

}  // namespace kmt
