#pragma once

#include <array>
#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "kmt/twist.hpp"

namespace kmt {

/// Coefficients of an affine root on alpha_0..alpha_l.
using CVec = std::vector<int>;

/// Loop symbol g_b (x) t^{N/T}, where g_b is a gradation basis vector of class N mod T.
struct Sym {
  int b = 0;
  int N = 0;
  auto operator<=>(const Sym&) const = default;
};

/// Element of the twisted affine algebra: finite sum of symbols plus c and d parts.
struct AffineElement {
  std::map<Sym, Cyc> terms;
  Cyc c;
  Cyc d;

  bool is_zero() const;
  void add(const Sym& s, const Cyc& coeff);
  AffineElement& operator+=(const AffineElement& o);
  AffineElement operator*(const Cyc& s) const;
  friend AffineElement operator+(AffineElement a, const AffineElement& b) { return a += b; }
  friend AffineElement operator-(const AffineElement& a, const AffineElement& b);
  friend bool operator==(const AffineElement& a, const AffineElement& b);
};

class AffineAlgebra {
 public:
  explicit AffineAlgebra(std::shared_ptr<const TwistRealization> R);

  const TwistRealization& real() const { return *R_; }
  std::shared_ptr<const TwistRealization> real_ptr() const { return R_; }
  int T() const { return R_->T; }
  int l() const { return R_->l; }
  std::size_t dim() const { return elems_.size(); }

  int cls(int b) const { return R_->grad.elems[static_cast<std::size_t>(b)].cls; }
  /// gamma(H_i), i = 0..l
  const std::vector<int>& weight(int b) const { return R_->grad.elems[static_cast<std::size_t>(b)].weight; }
  const LieVec& vec(int b) const { return R_->grad.elems[static_cast<std::size_t>(b)].v; }
  bool is_cartan0(int b) const;
  /// Coordinates over H_1..H_l of a class-0 Cartan vector.
  const std::vector<Cyc>& cartan_coords(int b) const { return hcoords_.at(static_cast<std::size_t>(b)); }

  bool valid(const Sym& s) const;
  /// Affine root of a symbol; zero for degree-0 Cartan symbols.
  CVec root(const Sym& s) const;
  /// Sign of the root: +1 (n_+), -1 (n_-), 0 (Cartan).
  int side(const Sym& s) const;
  /// Degree N of the combination with given t_[0]-weight and root c-vector.
  int degree_of(const CVec& c) const;
  /// Solves for the c-vector of (t_[0]-weight gamma(H_1..H_l), degree N); throws if not integral.
  CVec root_of_weight(const std::vector<int>& gamma, int N) const;

  /// Gradation-basis coordinates of an element of g.
  Vec coords(const LieVec& v) const;
  const std::vector<std::pair<int, Cyc>>& fbracket(int a, int b) const {
    return table_[static_cast<std::size_t>(a) * dim() + static_cast<std::size_t>(b)];
  }
  /// Nonzero values <g_a, g_b>.
  const std::vector<std::pair<int, Cyc>>& fform(int a) const { return form_[static_cast<std::size_t>(a)]; }
  Cyc form(int a, int b) const;

  /// [s, t] as an affine element (includes the central term).
  AffineElement bracket(const Sym& s, const Sym& t) const;
  AffineElement bracket(const AffineElement& x, const AffineElement& y) const;

  /// x (x) t^{N/T} for x in g_(N mod T); throws if x has components of other classes.
  AffineElement loop(const LieVec& x, int N) const;
  const AffineElement& e(int j) const { return e_[static_cast<std::size_t>(j)]; }
  const AffineElement& f(int j) const { return f_[static_cast<std::size_t>(j)]; }
  const AffineElement& h(int j) const { return h_[static_cast<std::size_t>(j)]; }

  /// Chevalley anti-involution: E_i <-> F_i, fixes H_i, reverses brackets.
  const std::vector<std::pair<int, Cyc>>& omega0(int b) const;
  AffineElement omega(const Sym& s) const;

  /// Splits into (n_-, h, n_+) parts; c and d go to the Cartan part.
  std::array<AffineElement, 3> triangular(const AffineElement& x) const;

  /// Gradation index of x_theta and the scale with vec(b) = scale * x_theta.
  int theta_elem() const { return theta_b_; }
  const Cyc& theta_scale() const { return theta_scale_; }
  /// Gradation element that is a multiple of a root vector x_alpha (or -1).
  int elem_of_root(const RootVec& alpha, Cyc* scale = nullptr) const;

  std::string elem_label(int b) const;
  /// "label@N/T"
  std::string label(const Sym& s) const;
  std::string str(const AffineElement& x) const;

 private:
  std::shared_ptr<const TwistRealization> R_;
  std::vector<int> elems_;
  std::vector<std::vector<std::pair<int, Cyc>>> table_;
  std::vector<std::vector<std::pair<int, Cyc>>> form_;
  mutable std::vector<std::vector<std::pair<int, Cyc>>> omega_;  // built on first use
  mutable std::once_flag omega_once_;
  std::vector<std::vector<Cyc>> hcoords_;
  // per block: member gradation indices, Chevalley indices and inverse of the block matrix
  struct Block {
    std::vector<int> members;
    std::vector<int> support;
    Mat inverse;  // coords = inverse * (restriction to support)
  };
  std::vector<Block> blocks_;
  std::vector<int> block_of_basis_;
  std::vector<std::vector<Rational>> root_solve_;  // inverse of the (degree, H_1..H_l) system
  std::vector<AffineElement> e_, f_, h_;
  int theta_b_ = -1;
  Cyc theta_scale_;

  void build_blocks();
  void build_tables();
  void build_generators();
  void build_omega() const;
};

std::shared_ptr<const AffineAlgebra> affine_algebra(std::shared_ptr<const TwistRealization> R);

/// Sum of coefficients (principal height).
int height(const CVec& c);
/// Depth numerator sum_j c_j s_j (depth = value / T).
int depth_num(const TwistRealization& R, const CVec& c);

}  // namespace kmt
