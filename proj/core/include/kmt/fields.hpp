#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmt/modules.hpp"

namespace kmt {

/// Vector of the untwisted vacuum module, split by weight.
using MultiVec = std::map<CVec, Vec>;

bool is_zero(const MultiVec& v);
void axpy(MultiVec& a, const Cyc& s, const MultiVec& b);

/// One basis vector of R: elem(0) applied to the parent vector (parent < 0: the
/// highest vector x_theta(-1)^{k+1} 1).
struct RVector {
  MultiVec v;
  int parent = -1;
  int elem = -1;
  int cls = 0;
  std::vector<int> weight;  // t_[0]-weight gamma(H_i), i = 0..l
};

/// R = U(g) x_theta(-1)^{k+1} 1 inside the untwisted vacuum module N(k Lambda_0),
/// with a basis adapted to the twisted gradation.
class RSpace {
 public:
  RSpace(std::shared_ptr<const AffineAlgebra> A, int k);

  int level() const { return k_; }
  std::size_t dim() const { return basis_.size(); }
  const AffineAlgebra& twisted() const { return *A_; }
  std::shared_ptr<const AffineAlgebra> twisted_ptr() const { return A_; }
  const AffineAlgebra& untwisted() const { return *U_; }
  PBWModule& vacuum() { return *V_; }
  const RVector& operator[](std::size_t i) const { return basis_[i]; }
  std::string label(std::size_t i) const;

  /// Matrix of elem(0) on R (elem a twisted gradation index).
  const Mat& action(int elem) const { return action_.at(static_cast<std::size_t>(elem)); }
  std::optional<Vec> express(const MultiVec& v) const;
  MultiVec combine(const Vec& coords) const;

  /// x(n) acting on the vacuum module, x given in Chevalley coordinates.
  MultiVec apply(const LieVec& x, int n, const MultiVec& v);
  /// x(-1)^p 1
  MultiVec power_vector(const LieVec& x, int p);
  /// The t_[0]-weight spaces of R in the untwisted grading: beta -> basis of the R part at beta.
  std::map<CVec, std::vector<Vec>> weight_basis() const;

 private:
  std::shared_ptr<const AffineAlgebra> A_, U_;
  std::unique_ptr<PBWModule> V_;
  int k_;
  std::vector<CVec> keys_;  // flattening order of the weight-(k+1) block
  std::map<CVec, std::size_t> offset_;
  std::size_t flat_dim_ = 0;
  std::vector<RVector> basis_;
  EchelonBasis span_;
  std::vector<Mat> action_;

  Vec flatten(const MultiVec& v) const;
};

/// Loop operators r_n on a highest-weight module of the twisted algebra, for r in R.
/// r_n is the coefficient of z^{-n-(k+1)} and lowers the depth by n = N/T.
class LoopOperators {
 public:
  LoopOperators(RSpace& R, Module& M);

  RSpace& space() { return R_; }
  Module& module() { return M_; }
  bool allowed(std::size_t r, int N) const;
  CVec root(std::size_t r, int N) const;

  /// Matrix of (basis r)_{N/T} from the beta space.
  const Mat& matrix(std::size_t r, int N, const CVec& beta);
  WVec apply(std::size_t r, int N, const WVec& v);
  /// Coefficient of x_b(z)^p at z^{-N/T-p} (x_b a gradation vector), from the beta space.
  const Mat& power(int b, int p, int N, const CVec& beta);

 private:
  RSpace& R_;
  Module& M_;
  std::map<std::tuple<std::size_t, int, CVec>, Mat> mats_;
  std::map<std::tuple<int, int, int, int, CVec>, Mat> partial_;
  std::map<std::tuple<int, int, int, CVec>, Mat> powers_;

  const Mat& partial(int b, int c, int S, int U, const CVec& beta);
};

/// One verification result as it appears in reports.
struct CheckResult {
  std::string name;
  bool pass = false;
  nlohmann::json detail = nlohmann::json::object();
  nlohmann::json witness;  // null when absent
  nlohmann::json to_json() const;
};

/// [x(m), r_n] = (x(0) r)_{m+n} over all gradation x, basis r, |m|, |n| <= bound,
/// on every weight of the window.
CheckResult verify_commutator_26(LoopOperators& ops, const Window& w, int bound = 2);

/// All r_n vanish on the window (zero matrices), or the first nonzero r_n v.
CheckResult annihilation_check(LoopOperators& ops, const Window& w);

/// Per depth: dims of R.M (submodule generated by r_n v_Lambda), the generator
/// closure and the Gram nullity.
struct ImageRow {
  int depth_num = 0;
  std::size_t image = 0, closure = 0, gram_nullity = 0;
};
std::vector<ImageRow> image_dims(LoopOperators& ops, PBWModule& M, const Window& w);

/// Per n = N/T: dimension of span{r_n} as operators on the window.
std::map<int, std::size_t> operator_dims(LoopOperators& ops, const Window& w, int Nmin, int Nmax);

/// A loop module R (x) t^{*}: g-action matrices on R, classes of the R basis and of
/// the gradation elements.
struct LoopModuleData {
  int T = 1;
  std::vector<Mat> action;
  std::vector<int> elem_cls;
  std::vector<int> basis_cls;
};
LoopModuleData loop_module_data(const RSpace& R);

/// Closure of one seed r (x) t^{N/T} under ad x(m), inside the N-window [Nmin, Nmax].
/// True iff every class-compatible block R(N) is reached in full.
bool loop_closure_reaches_all(const LoopModuleData& L, const Vec& seed, int seedN, int Nmin, int Nmax);
CheckResult irreducibility_probe(LoopOperators& ops, const Window& w, int Nmin, int Nmax);

/// Delta(h, z) v = z^{h(0)} exp(sum (-1)^{n-1} h(n)/n z^{-n}) v up to z^{-order}.
/// Keys are exponents of z.
using Series = std::map<Rational, MultiVec>;
Series delta_deform(RSpace& R, const LieVec& h, const MultiVec& v, int order);
/// The power-law identity for the deformed vertex map, and Delta(h) Delta(-h) = id.
CheckResult verify_delta(LoopOperators& ops, const Window& w, int order = 4);

/// Coefficients of x_alpha(z)^power vanish on the window (x_alpha a gradation vector
/// proportional to a root vector).
CheckResult verify_nilpotent_field(LoopOperators& ops, const RootVec& alpha, int power, const Window& w);

/// Smallest t in 1..4 with F_i(-1)^{tk+1} 1 in N^1(k Lambda_0), with witness.
struct FPowerResult {
  int i = 0;
  int t = 0;  // 0: none found
  bool verified = false;
  nlohmann::json witness;
};
FPowerResult F_power_membership(RSpace& R, int i, int max_t = 4);

/// Annihilation on L(Lambda), R.M(Lambda) = Gram nullity per depth, and a nonzero
/// witness on a non-standard module.
nlohmann::json verify_standard_iff(std::shared_ptr<const AffineAlgebra> A, const WeightLambda& lambda, const Window& w);

}  // namespace kmt
