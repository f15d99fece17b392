#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmt/finlie.hpp"

namespace kmt {

class InvalidRealization : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite-order automorphism of g, stored as the images of the basis vectors.
struct Automorphism {
  std::shared_ptr<const ChevalleyAlgebra> alg;
  int order = 1;
  std::vector<LieVec> images;

  LieVec apply(const LieVec& v) const;
  /// (this o other)(x) = this(other(x))
  Automorphism compose(const Automorphism& other) const;
  Automorphism power(int k) const;
  bool is_identity() const;
  bool preserves_bracket() const;
  bool preserves_form() const;
};

Automorphism identity_automorphism(std::shared_ptr<const ChevalleyAlgebra> alg);
/// The unique automorphism with x_{+-alpha_i} -> the given images.
Automorphism extend_automorphism(std::shared_ptr<const ChevalleyAlgebra> alg, const std::vector<LieVec>& pos,
                                 const std::vector<LieVec>& neg, int order);

/// Diagram automorphism for cases 1..5 (type checks as in Kac's list).
Automorphism diagram_automorphism(std::shared_ptr<const ChevalleyAlgebra> alg, int case_id);
/// Permutation of simple roots (0-based) induced by the diagram symmetry of a case.
std::vector<int> diagram_permutation(const RootSystem& rs, int case_id);
/// exp(ad 2 pi i h / T) where alpha_i(h) = values[i]; acts on x_alpha by zeta_T^{alpha(h)}.
Automorphism inner_automorphism(std::shared_ptr<const ChevalleyAlgebra> alg, const std::vector<int>& values, int T);

/// Eigenspace decomposition g = sum_j g_(j), eigenvalue zeta_T^j. Every vector
/// is also a weight vector for t_[0], so it carries a class and a weight.
struct GradedVector {
  LieVec v;
  int cls = 0;
  std::vector<int> weight;  // gamma(H_i), i = 0..l
  int block = -1;           // block of the Chevalley basis this vector lives in
  bool cartan = false;      // block made of Cartan elements
};

struct Gradation {
  int T = 1;
  std::vector<GradedVector> elems;
  std::vector<std::vector<int>> by_class;  // by_class[j] = indices into elems
  std::size_t dim(int j) const { return by_class.at(static_cast<std::size_t>(((j % T) + T) % T)).size(); }
};

/// Eigenspaces of sigma, computed block by block: sigma permutes the lines of
/// root vectors, so the blocks are the orbits of those lines plus the Cartan
/// block. Weights are gamma(H) for each H in `probe` (empty probe, no weights).
Gradation gradation(const Automorphism& sigma, const std::vector<LieVec>& probe = {});

/// Twisted (or untwisted) affine realization: sigma = mu o exp(ad 2 pi i h / T).
struct TwistRealization {
  std::shared_ptr<const ChevalleyAlgebra> alg;
  int case_id = 0;  // 0 = untwisted
  int r = 1;
  int l = 0;
  std::vector<int> s;
  int T = 1;
  unsigned conductor = 24;  // working field Q(zeta_N), N = lcm(24, T)
  Automorphism mu;
  Automorphism sigma;
  std::vector<int> inner_values;  // alpha_i(h) of the inner part
  RootVec theta0;
  std::vector<LieVec> E, F, H;
  std::vector<std::vector<int>> A;  // a_ij = beta_j(H_i)
  std::vector<int> marks, comarks;
  int coxeter = 0, dual_coxeter = 0;
  std::vector<Rational> beta_norm;  // <beta_j, beta_j>
  Gradation grad;
  bool f0_rescaled = false;

  std::string name() const;
  /// gamma(H_i) for i = 0..l, for a t-weight given in simple-root coordinates.
  std::vector<int> restrict_weight(const RootVec& alpha) const;
  nlohmann::json to_json() const;
  std::string fingerprint() const;
};

struct RealizationSpec {
  std::string type = "A2";
  int case_id = 1;  // 0 = untwisted
  std::vector<int> s;          // empty = (1,0,...,0)
  std::vector<int> inner_h;    // optional alpha_i(h) values of a mu-fixed h
  int inner_T = 0;             // order paired with inner_h; converted to an s-vector
};

/// Builds canonical generators, affine Cartan data, sigma and its gradation.
std::shared_ptr<const TwistRealization> make_realization(const RealizationSpec& spec);

/// The s-automorphism over the same diagram automorphism as `base`.
Automorphism s_automorphism(const TwistRealization& base, const std::vector<int>& s);

/// Jacobi and form invariance on the basis, sigma^T = id, sigma preserving bracket
/// and form, gradation multiplicativity and the affine Cartan data. One bool per
/// check plus "pass".
nlohmann::json validate_realization(const TwistRealization& R);

/// Integer null vector with positive entries and gcd 1 of A (right) or A^T.
std::vector<int> positive_null_vector(const std::vector<std::vector<int>>& A, bool transpose);

}  // namespace kmt
