#pragma once

// Joyce decomposition of a compact Lie algebra, the coset space G/L built
// from it, and the invariant hypercomplex structure on m.
//
// Toral vectors (elements of the compact torus) are real vectors v of length
// l + r standing for the compact element i*(sum_k v_k z_k + sum_i v_{l+i} h_i).
// On them -B is the Gram matrix diag(1_l, (a_i, a_j)).

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "joycehkt/lie_core.hpp"

namespace joycehkt {

using ToralVector = Eigen::VectorXd;

struct JoyceLayer {
  int alpha = -1;               // root index of alpha_j
  std::vector<int> r_plus;      // R_j^+, ascending root index, includes alpha_j
  std::vector<int> theta_prev;  // Theta_{j-1}
};

struct JoyceDecomposition {
  std::shared_ptr<const LieAlgebra> algebra;
  std::vector<JoyceLayer> layers;
  std::vector<int> theta_final;
  std::vector<ToralVector> b_d;  // -B-orthonormal basis of the final centralizer
  int d() const { return static_cast<int>(layers.size()); }
};

enum class TieBreak { FirstIndex, LastIndex };

/// Recursion alpha_j = maximal root of Theta_{j-1}. Ties at maximal height go
/// to the lexicographically largest root (lowest factor first) by default.
JoyceDecomposition joyce_decompose(std::shared_ptr<const LieAlgebra> algebra, TieBreak tie = TieBreak::FirstIndex);

/// Strong orthogonality of the alpha_j and the layer properties; returns a
/// description of the first violation, or an empty string.
std::string check_decomposition(const JoyceDecomposition& dec);

Eigen::MatrixXd toral_gram(const LieAlgebra& g);
Element toral_element(const LieAlgebra& g, const ToralVector& v);

/// -B unit vector spanning (coroots of the component of Theta_{j-1} holding
/// a_j) minus (t_{a_j} + coroots of that component inside Theta_j), signed so
/// the first other root of R_j^+ is positive on it. Empty when that space is
/// not a line.
std::optional<ToralVector> canonical_frame_direction(const JoyceDecomposition& dec, int j);

struct IsotropySpec {
  int m = 1;
  std::optional<std::vector<ToralVector>> v_subspace;  // default: b_d ∩ span{i t_g : g in Theta_m}
  std::optional<std::vector<ToralVector>> u_frame;     // default: normalized A_j directions
  bool trivial = false;                                // require L = {e}
};

/// Isotropy data after validation and defaulting.
struct ResolvedIsotropy {
  int m = 0;
  std::vector<ToralVector> v_basis;  // -B-orthonormal
  std::vector<ToralVector> u_frame;  // X_1^1..X_1^m
};

enum class BasisKind { X1, X2, X3, X4, FRe, FIm, Toral, LRoot };

struct BasisVector {
  Element element;
  std::string label;
  int layer = -1;  // 0-based layer, -1 for toral isotropy directions
  BasisKind kind = BasisKind::Toral;
  int root = -1;
};

struct CosetLayer {
  int alpha = -1;
  double norm2 = 0;
  std::vector<int> f_roots;  // R_j^+ \ {alpha_j}
  int begin = 0, end = 0;    // index range in the m basis
  int x1 = 0, x2 = 0, x3 = 0, x4 = 0;
};

struct HolomorphicVector {
  Eigen::VectorXcd coords;  // m coordinates
  std::string label;
  int layer = -1;
  int root = -1;  // -1 for H_j
};

class CosetSpace {
 public:
  CosetSpace(const JoyceDecomposition& dec, const IsotropySpec& iso);

  const LieAlgebra& algebra() const { return *algebra_; }
  std::shared_ptr<const LieAlgebra> algebra_ptr() const { return algebra_; }
  const JoyceDecomposition& decomposition() const { return dec_; }
  const ResolvedIsotropy& isotropy() const { return iso_; }

  int m() const { return iso_.m; }
  int dim_m() const { return static_cast<int>(m_basis_.size()); }
  int dim_l() const { return static_cast<int>(l_basis_.size()); }
  const std::vector<CosetLayer>& layers() const { return layers_; }
  const std::vector<BasisVector>& m_basis() const { return m_basis_; }
  const std::vector<BasisVector>& l_basis() const { return l_basis_; }

  /// Coordinates of x in the basis (m_basis, l_basis).
  Eigen::VectorXcd coordinates(const Element& x) const { return inverse_ * x; }
  Eigen::VectorXcd m_part(const Element& x) const { return coordinates(x).head(dim_m()); }
  Eigen::VectorXcd l_part(const Element& x) const { return coordinates(x).tail(dim_l()); }
  Element from_m(const Eigen::VectorXcd& c) const;

  /// [e_a, .]_m restricted to m.
  const Eigen::MatrixXd& ad_m(int a) const { return ad_m_.at(a); }
  /// Column b: l coordinates of [e_a, e_b].
  const Eigen::MatrixXd& bracket_to_l(int a) const { return to_l_.at(a); }
  /// ad(l_k) acting on m.
  const Eigen::MatrixXd& ad_l(int k) const { return ad_l_.at(k); }
  /// Max size of the m-to-l leakage of ad(l); zero when m is ad(l)-invariant.
  double isotropy_leak() const { return leak_; }

  Eigen::VectorXcd bracket_m(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;
  Eigen::VectorXcd bracket_l(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;
  /// Matrix of [x, .]_m on m^C.
  Eigen::MatrixXcd ad_m(const Eigen::VectorXcd& x) const;
  Eigen::MatrixXcd ad_l(const Eigen::VectorXcd& u) const;

  /// (1,0) basis: H_j = H_{a_j} + (|a_j|^2/2) X_1^j, then E_g for g in R-hat^+.
  const std::vector<HolomorphicVector>& hol_basis() const { return hol_; }
  /// Positive roots of R-hat, ascending index.
  const std::vector<int>& hat_positive() const { return hat_positive_; }
  /// Layer of a root (either sign) in R-hat, or -1.
  int layer_of_root(int root) const { return root_layer_.at(root); }
  /// m coordinates of E_g for g in R-hat.
  Eigen::VectorXcd root_vector(int root) const;
  /// Elements of t^C ∩ m^C: indices of X_1^j and X_2^j.
  std::vector<int> toral_m_indices() const;

 private:
  std::shared_ptr<const LieAlgebra> algebra_;
  JoyceDecomposition dec_;
  ResolvedIsotropy iso_;
  std::vector<CosetLayer> layers_;
  std::vector<BasisVector> m_basis_, l_basis_;
  Eigen::MatrixXcd basis_, inverse_;
  std::vector<Eigen::MatrixXd> ad_m_, to_l_, ad_l_;
  std::vector<HolomorphicVector> hol_;
  std::vector<int> hat_positive_;
  std::vector<int> root_layer_;
  double leak_ = 0;
};

struct HypercomplexStructure {
  Eigen::MatrixXd I, J, K;
  std::vector<Complex> k;
  std::vector<int> layer_of;  // m basis index -> layer
};

/// Default k_j = 1/(sqrt(2)|a_j|).
std::vector<Complex> default_k(const CosetSpace& coset);

/// Builds I and J from the layer rules. With validate = false a k vector
/// violating |k_j|^2 = 1/(2|a_j|^2) is accepted so that verify_hypercomplex
/// can report it.
HypercomplexStructure hypercomplex_structure(const CosetSpace& coset,
                                             std::optional<std::vector<Complex>> k = std::nullopt,
                                             bool validate = true);

/// X_3^j(k), X_4^j(k).
std::pair<Element, Element> x3_x4(const CosetSpace& coset, int layer, Complex k);

struct HypercomplexReport {
  double i_squared = 0, j_squared = 0, k_squared = 0;
  double anticommute = 0;
  double k_is_ij = 0;
  double commute_l_i = 0, commute_l_j = 0;
  double closure_i = 0, closure_j = 0;
  double k_normalization = 0;  // max | |k_j|^2 * 2|a_j|^2 - 1 |
  double su2_brackets = 0;     // [X2,X3]=2X4 and cyclic
  double max_residual() const;
};

HypercomplexReport verify_hypercomplex(const CosetSpace& coset, const HypercomplexStructure& h);

/// Projector onto the +i (resp. -i) eigenspace of a complex structure.
Eigen::MatrixXcd projector_10(const Eigen::MatrixXd& P);
Eigen::MatrixXcd projector_01(const Eigen::MatrixXd& P);

}  // namespace joycehkt
