#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmt/linalg.hpp"

namespace kmt {

class UnsupportedType : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Root written in simple-root coordinates.
using RootVec = std::vector<int>;

/// Root system of a finite-dimensional simple Lie algebra, simple roots
/// numbered as in Kac's Table Fin (trivalent node of E_6 is alpha_3 with
/// alpha_6 attached, D_n fork at alpha_{n-1}, alpha_n).
struct RootSystem {
  char family = 'A';
  int rank = 0;
  std::vector<std::vector<int>> cartan;  // a_ij = alpha_j(h_i)
  std::vector<Rational> norms;           // <alpha_i, alpha_i>, long roots = 2
  std::vector<RootVec> positive;         // ordered by height, then coordinates
  RootVec highest;

  std::string label() const { return std::string(1, family) + std::to_string(rank); }
  int height(const RootVec& r) const;
  bool is_root(const RootVec& r) const;
  int positive_index(const RootVec& r) const;  // -1 if not a positive root
  /// <a, b> from the symmetrized Cartan matrix.
  Rational inner(const RootVec& a, const RootVec& b) const;
  /// a(h_i) for the simple coroot h_i.
  int pair_coroot(const RootVec& a, int i) const;
  /// Coroot of a root as an integer combination of simple coroots.
  std::vector<int> coroot(const RootVec& a) const;
  bool is_long(const RootVec& a) const;
  std::size_t num_roots() const { return 2 * positive.size(); }
};

/// Parses "A2", "D4", "E6", ... Throws UnsupportedType.
RootSystem root_system(const std::string& type_label);
RootSystem root_system(char family, int rank);

/// Element of g in the Chevalley basis.
using LieVec = Vec;

/// Chevalley-basis realization. Basis layout: positive roots (in the order of
/// RootSystem::positive), then h_1..h_n, then negative roots (same order).
class ChevalleyAlgebra {
 public:
  explicit ChevalleyAlgebra(RootSystem rs);

  const RootSystem& roots() const { return rs_; }
  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return static_cast<std::size_t>(rs_.rank); }

  /// Basis index of x_alpha (alpha positive or negative).
  int root_index(const RootVec& alpha) const;
  int cartan_index(int i) const { return static_cast<int>(rs_.positive.size()) + i; }
  bool is_cartan(int b) const;
  /// Root of a basis element (zero vector for Cartan elements).
  RootVec root_of(int b) const;
  std::string label(int b) const;

  LieVec basis_vector(int b) const;
  LieVec x(const RootVec& alpha) const { return basis_vector(root_index(alpha)); }
  LieVec h(int i) const { return basis_vector(cartan_index(i)); }
  /// h_alpha = [x_alpha, x_{-alpha}], written over h_1..h_n.
  LieVec h_of(const RootVec& alpha) const;

  /// Sparse structure constants: [b_i, b_j] = sum_k c_k b_k.
  const std::vector<std::pair<int, Cyc>>& bracket_basis(int i, int j) const {
    return table_[static_cast<std::size_t>(i) * dim_ + j];
  }
  LieVec bracket(const LieVec& a, const LieVec& b) const;
  /// Normalized invariant form (long roots have norm 2).
  const Cyc& form_basis(int i, int j) const { return form_[static_cast<std::size_t>(i) * dim_ + j]; }
  Cyc form(const LieVec& a, const LieVec& b) const;

  /// Structure constant N with [x_a, x_b] = N x_{a+b}; zero if a+b is not a root.
  Rational structure_constant(const RootVec& a, const RootVec& b) const;

  nlohmann::json to_json() const;

 private:
  RootSystem rs_;
  std::size_t dim_;
  std::vector<std::vector<std::pair<int, Cyc>>> table_;
  std::vector<Cyc> form_;
};

std::shared_ptr<const ChevalleyAlgebra> chevalley_algebra(const RootSystem& rs);

}  // namespace kmt
