#pragma once

#include <array>
#include <climits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmt/affine.hpp"
#include "kmt/linalg.hpp"

namespace kmt {

/// Raised when a computation needs a weight space deeper than the module's cap.
class TruncationOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonDominant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Highest weight given by its labels Lambda(h_0..h_l) and Lambda(d).
struct WeightLambda {
  std::vector<Rational> labels;
  Rational d;

  Rational level(const TwistRealization& R) const;
  bool dominant() const;
  /// Lambda(H_i) for i = 0..l (the t_[0] part).
  std::vector<Rational> finite_values(const TwistRealization& R) const;
  std::string str() const;

  static WeightLambda fundamental(const TwistRealization& R, int i, int multiple = 1);
  /// Labels making the t_[0] part vanish at level k (trivial top).
  static WeightLambda vacuum(const TwistRealization& R, const Rational& k);
};

/// Window of weights: depth numerator <= D and principal height <= H (H < 0: no bound).
struct Window {
  int D = 0;
  int H = -1;
  bool contains(const TwistRealization& R, const CVec& beta) const;
};

/// Homogeneous vector of a module: weight Lambda - beta, coordinates in the weight-space basis.
struct WVec {
  CVec beta;
  Vec v;
};

/// Highest-weight module with weight spaces indexed by beta (weight Lambda - beta).
/// Spaces and operator matrices are built on demand and memoized.
class Module {
 public:
  Module(std::shared_ptr<const AffineAlgebra> A, WeightLambda lambda);
  virtual ~Module() = default;
  Module(const Module&) = delete;
  Module& operator=(const Module&) = delete;

  const AffineAlgebra& alg() const { return *A_; }
  std::shared_ptr<const AffineAlgebra> alg_ptr() const { return A_; }
  const WeightLambda& lambda() const { return lambda_; }
  const Rational& level() const { return k_; }
  virtual std::string kind() const = 0;

  void set_depth_cap(int cap) { cap_ = cap; }
  int depth_cap() const { return cap_; }

  std::size_t dim(const CVec& beta);
  /// Matrix of a symbol from the beta space to the beta - root(s) space.
  const Mat& matrix(const Sym& s, const CVec& beta);
  /// Matrix of a root-homogeneous element; c acts by the level, d by Lambda(d) - depth.
  Mat matrix(const AffineElement& x, const CVec& beta);
  WVec act(const Sym& s, const WVec& v);
  WVec act(const AffineElement& x, const WVec& v);

  /// (Lambda - beta)(x) for a class-0 Cartan gradation vector x.
  Cyc cartan_value(int b, const CVec& beta) const;
  /// (Lambda - beta)(h_i)
  Rational h_value(int i, const CVec& beta) const;

  WVec top() const;
  virtual std::string basis_label(const CVec& beta, std::size_t i) = 0;
  nlohmann::json to_json(const WVec& v);

  /// Weights beta >= 0 in the window with nonzero space, found by adding simple roots.
  std::vector<CVec> support(const Window& w);

 protected:
  virtual std::size_t compute_dim(const CVec& beta) = 0;
  virtual Mat compute_matrix(const Sym& s, const CVec& beta) = 0;
  void check_cap(const CVec& beta) const;

  std::shared_ptr<const AffineAlgebra> A_;
  WeightLambda lambda_;
  Rational k_;
  std::vector<Rational> fin_;  // Lambda(H_i)
  int cap_ = INT_MAX;

 private:
  std::map<CVec, std::size_t> dims_;
  std::map<std::pair<Sym, CVec>, Mat> mats_;
};

using Monomial = std::vector<Sym>;

/// Module induced from a one-dimensional top: the Verma module M(Lambda) (creation
/// operators = all negative affine roots) or the vacuum-type module with creation
/// operators of negative degree only (g_(0)(0) kills the top).
class PBWModule : public Module {
 public:
  enum class Kind { Verma, Vacuum };
  PBWModule(std::shared_ptr<const AffineAlgebra> A, Kind kind, WeightLambda lambda);

  std::string kind() const override { return kind_ == Kind::Verma ? "verma" : "vacuum"; }
  Kind type() const { return kind_; }
  bool creation(const Sym& s) const;
  /// Order used inside monomials (shallow symbols first).
  static bool before(const Sym& a, const Sym& b);

  const std::vector<Monomial>& basis(const CVec& beta);
  std::size_t index(const CVec& beta, const Monomial& m);
  CVec weight_of(const Monomial& m) const;
  std::string basis_label(const CVec& beta, std::size_t i) override;
  std::string monomial_label(const Monomial& m) const;

  /// Straightening x . m in the PBW basis.
  const std::map<Monomial, Cyc>& apply(const Sym& x, const Monomial& m);
  WVec vector_of(const Monomial& m);

  /// Creation symbols s with -root(s) <= beta.
  std::vector<Sym> creation_symbols(const CVec& beta) const;

  /// Contravariant functionals u -> <u v, .>, filled by contravariant_gram.
  std::map<Monomial, Vec> gram_rows;

 protected:
  std::size_t compute_dim(const CVec& beta) override;
  Mat compute_matrix(const Sym& s, const CVec& beta) override;

 private:
  Kind kind_;
  std::map<CVec, std::vector<Monomial>> bases_;
  std::map<CVec, std::map<Monomial, std::size_t>> index_;
  std::map<std::pair<Sym, Monomial>, std::map<Monomial, Cyc>> memo_;
};

/// Irreducible highest-weight module L(Lambda), built weight by weight: the beta
/// space is the image of the f_i under the condition that a vector vanishes
/// iff every e_j kills it. Other symbols act through e/f bracket words.
class StandardModule : public Module {
 public:
  StandardModule(std::shared_ptr<const AffineAlgebra> A, WeightLambda lambda);

  std::string kind() const override { return "standard"; }
  std::string basis_label(const CVec& beta, std::size_t i) override;

  /// e_j : beta -> beta - alpha_j and f_j : beta -> beta + alpha_j.
  const Mat& E(int j, const CVec& beta);
  const Mat& F(int j, const CVec& beta);

 protected:
  std::size_t compute_dim(const CVec& beta) override;
  Mat compute_matrix(const Sym& s, const CVec& beta) override;

 private:
  struct Space {
    std::size_t dim = 0;
    std::vector<std::pair<int, std::size_t>> basis;  // f_i applied to basis vector of beta - alpha_i
    std::vector<Mat> E;                              // E[j]: beta -> beta - alpha_j
    std::vector<Mat> Fin;                            // Fin[i]: beta - alpha_i -> beta
  };
  struct Word {
    int j;        // generator index
    int parent;   // -1 for a generator
    int sign;     // +1: e-word, -1: f-word
    CVec root;
  };
  struct RootWords {
    std::vector<Sym> syms;
    std::vector<int> words;
    EchelonBasis span;
  };
  const Space& space(const CVec& beta);
  const RootWords& words_for(const CVec& root);
  Mat word_matrix(int w, const CVec& beta);

  std::map<CVec, Space> spaces_;
  std::vector<Word> words_;
  std::vector<AffineElement> word_values_;
  std::map<CVec, RootWords> root_words_;
  std::map<std::pair<int, CVec>, Mat> word_mats_;
};

std::vector<Sym> symbols_with_root(const AffineAlgebra& A, const CVec& root);

/// All beta >= 0 in the window (needs H >= 0 unless every s_j > 0).
std::vector<CVec> window_weights(const TwistRealization& R, const Window& w);

struct GramBlock {
  CVec beta;
  std::vector<std::string> basis;
  Mat gram;
  std::size_t rank = 0;
  std::size_t nullity() const { return basis.size() - rank; }
};

/// Contravariant form on one weight space of a PBW module (top vector has norm 1).
GramBlock contravariant_gram(PBWModule& M, const CVec& beta);

/// f_i^{Lambda(h_i)+1} v_Lambda for i = 0..l.
std::vector<WVec> maximal_submodule_generators(PBWModule& M);

/// Per-weight subspaces of U(g^)·span(seeds) inside the window.
struct Closure {
  std::map<CVec, std::vector<Vec>> basis;
  std::size_t dim(const CVec& beta) const;
};
Closure submodule_closure(Module& M, const std::vector<WVec>& seeds, const Window& w, bool raise = true);

/// One row per depth numerator: Verma, maximal submodule (Gram nullity and
/// generator closure) and quotient dims (Gram rank and the standard model).
struct CharacterRow {
  int depth_num = 0;
  std::size_t verma = 0, gram_nullity = 0, closure = 0, gram_rank = 0, standard = 0;
  bool agree() const { return gram_nullity == closure && gram_rank == standard && verma == gram_nullity + gram_rank; }
};
struct CharacterTable {
  Window window;
  std::vector<CharacterRow> rows;
  std::map<CVec, std::array<std::size_t, 5>> by_weight;
  bool agree() const;
};
CharacterTable character_table(std::shared_ptr<const AffineAlgebra> A, const WeightLambda& lambda, const Window& w);

/// Per-depth dims of L(Lambda) for depth numerators 0..D (Lambda dominant).
std::vector<std::size_t> standard_dims(StandardModule& L, int D);

/// True iff f_i^m v_Lambda = 0 for some m <= Lambda(h_i) + 1, for every i.
bool integrability_check(Module& M, int bound = 12);

struct HeisenbergResult {
  bool member = false;
  /// (spanning element label, coefficient) pairs.
  std::vector<std::pair<std::string, Rational>> witness;
};
HeisenbergResult heisenberg_membership(int m, int bound = 10);

}  // namespace kmt
