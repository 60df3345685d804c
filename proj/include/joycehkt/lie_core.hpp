#pragma once

// Root systems and the Cartan-Weyl basis of a complex reductive Lie algebra.
//
// Normalization used throughout:
//   * the pairing (.,.) on roots is the one induced by the Killing form of
//     each simple factor, e.g. (a,a) = 1/n for every root of A_{n-1};
//   * root vectors satisfy B(E_a, E_-a) = 1, so [E_a, E_-a] = t_a;
//   * conjugation with respect to the compact real form sends E_a to -E_-a.
//
// Elements of g^C are stored as dense complex vectors laid out as
//   [ center (l entries) | Cartan (r entries) | root vectors (|R| entries) ].
// The Cartan basis is h_i = t_{a_i} for the simple roots a_i, so the Cartan
// coordinates of t_a are the simple-root coordinates of a. Center basis
// vectors z_k satisfy B(z_k, z_l) = delta_kl and, like h_i, lie in i*g.

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "joycehkt/errors.hpp"

namespace joycehkt {

using Rational = boost::rational<long long>;
using Complex = std::complex<double>;
using RootCoords = std::vector<int>;
using Element = Eigen::VectorXcd;

enum class SimpleType { A, B, C, D, E6, E7, E8, F4, G2 };

std::string to_string(SimpleType t);
/// Accepts "A".."D", "E6", "E7", "E8", "F4", "G2" (and "E", "F", "G").
SimpleType parse_simple_type(const std::string& label);

struct FactorSpec {
  SimpleType type;
  int rank;
};

struct SimpleFactor {
  SimpleType type;
  int rank;
  int offset;  // index of the first simple root of this factor
  // Type A only: simple root i is eps_{first} - eps_{second} (1-based labels).
  std::vector<std::pair<int, int>> epsilon_labels;
};

class AlgebraModel {
 public:
  const std::vector<SimpleFactor>& factors() const { return factors_; }
  int center_dim() const { return center_dim_; }
  int rank() const { return rank_; }
  int num_roots() const { return static_cast<int>(roots_.size()); }
  int num_positive() const { return num_positive_; }
  /// Complex dimension of g^C (= real dimension of g).
  int dimension() const { return center_dim_ + rank_ + num_roots(); }

  const RootCoords& root(int i) const { return roots_.at(i); }
  int negative(int i) const { return i < num_positive_ ? i + num_positive_ : i - num_positive_; }
  bool is_positive(int i) const { return i < num_positive_; }
  int height(int i) const;
  int component_of(int i) const { return component_.at(i); }
  std::optional<int> find(const RootCoords& c) const;
  /// Index of root a+b, if it is a root.
  std::optional<int> sum(int a, int b) const;
  /// Index of the simple root a_i.
  int simple_root(int i) const { return simple_index_.at(i); }

  /// Killing pairing between weights given in simple-root coordinates.
  Rational pairing(const RootCoords& x, const RootCoords& y) const;
  Rational pairing(int a, int b) const { return pairing_cache_.at(a * num_roots() + b); }
  Rational norm2(int a) const { return pairing(a, a); }
  const std::vector<std::vector<Rational>>& simple_gram() const { return gram_; }

  /// eps-coordinates of a root lying in a type A factor (empty otherwise).
  std::vector<int> epsilon(int a) const;
  /// Human-readable label, e.g. "e1-e3" for type A, "[1,1,0]" otherwise.
  std::string label(int a) const;

 private:
  friend AlgebraModel build_algebra(const std::vector<FactorSpec>&, int, int);

  std::vector<SimpleFactor> factors_;
  int center_dim_ = 0;
  int rank_ = 0;
  int num_positive_ = 0;
  std::vector<RootCoords> roots_;
  std::vector<int> component_;
  std::vector<int> simple_index_;
  std::vector<std::vector<Rational>> gram_;
  std::vector<Rational> pairing_cache_;
  std::vector<int> sum_table_;
  std::map<RootCoords, int> index_;
};

/// Builds the root system of the given simple factors plus an l-dimensional
/// center. Positive roots are ordered by height, then lexicographically
/// descending in simple-root coordinates; negatives follow in the same order.
AlgebraModel build_algebra(const std::vector<FactorSpec>& factors, int center_dim, int rank_cap = 8);

Rational killing_form(const AlgebraModel& model, const RootCoords& x, const RootCoords& y);

/// (p, q) for the a-string through b: b - p a, ..., b + q a.
std::pair<int, int> root_string(const AlgebraModel& model, int alpha, int beta);

/// Structure constants N_{a,b} of the normalized Cartan-Weyl basis.
class StructureConstantTable {
 public:
  explicit StructureConstantTable(const AlgebraModel& model);

  /// N_{a,b}; zero when a+b is not a root.
  double N(int a, int b) const { return n_[a * num_roots_ + b]; }
  /// Integral Chevalley constant before rescaling.
  int chevalley(int a, int b) const { return chevalley_[a * num_roots_ + b]; }
  /// Cartan coordinates of t_a.
  std::vector<Rational> H(int a) const;
  std::pair<int, int> string(int a, int b) const;

 private:
  const AlgebraModel* model_;
  int num_roots_;
  std::vector<double> n_;
  std::vector<int> chevalley_;
};

/// A reductive Lie algebra in its Cartan-Weyl basis: root data, structure
/// constants, bracket, conjugation and the invariant form. Immutable.
class LieAlgebra {
 public:
  explicit LieAlgebra(AlgebraModel model);

  const AlgebraModel& model() const { return model_; }
  const StructureConstantTable& constants() const { return table_; }
  int dimension() const { return model_.dimension(); }

  int center_offset() const { return 0; }
  int cartan_offset() const { return model_.center_dim(); }
  int root_offset() const { return model_.center_dim() + model_.rank(); }

  Element zero() const { return Element::Zero(dimension()); }
  Element E(int a) const;
  Element h(int i) const;
  Element z(int k) const;
  /// t_a, as an element of the Cartan subalgebra.
  Element t(int a) const;
  /// t_lambda for an arbitrary weight in simple-root coordinates (rational).
  Element t(const std::vector<Rational>& coords) const;

  Element bracket(const Element& x, const Element& y) const;
  Element conjugate(const Element& x) const;
  /// C-bilinear extension of the invariant form (Killing on each simple
  /// factor, identity on the chosen center basis).
  Complex killing(const Element& x, const Element& y) const;
  /// a(x) for the Cartan/center part of x.
  Complex root_value(int a, const Element& x) const;
  /// Matrix of ad(x) on g^C.
  Eigen::MatrixXcd ad(const Element& x) const;

  /// Max |Jacobi| over all basis triples.
  double jacobi_residual() const;

 private:
  void check_size(const Element& x) const;

  AlgebraModel model_;
  StructureConstantTable table_;
  Eigen::MatrixXd cartan_gram_;   // (a_i, a_j)
  Eigen::MatrixXd root_on_cartan_;  // row a: a(h_i) = (a, a_i)
};

// Free-function forms of the core operations.
std::shared_ptr<const LieAlgebra> make_algebra(const std::vector<FactorSpec>& factors, int center_dim,
                                               int rank_cap = 8);
Element bracket(const LieAlgebra& g, const Element& x, const Element& y);
Element conjugate(const LieAlgebra& g, const Element& x);

/// Residuals of the identities satisfied by the N_{a,b}.
struct StructureConstantReport {
  double antisymmetry = 0;       // first line: all five equalities
  double cocycle = 0;            // second line
  double quadratic_minus = 0;    // N_{a,-b}^2 - N_{a,b}^2 = (a,b)
  double quadratic_plus = 0;     // N_{a,-b}^2 + N_{a,b}^2 = (a,b), as printed
  double string_magnitude = 0;   // N_{a,b}^2 = q(p+1)(a,a)/2
  double jacobi = 0;
  double conjugation = 0;        // conj[x,y] - [conj x, conj y] on random elements
};
StructureConstantReport verify_structure_constants(const LieAlgebra& g, unsigned seed = 7);

}  // namespace joycehkt
