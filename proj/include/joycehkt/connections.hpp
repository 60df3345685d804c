#pragma once

// Chern-Ricci form, HKT-Einstein metrics and the Bismut connection of an
// invariant HKT metric on a Joyce coset space.

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <vector>

#include "joycehkt/forms.hpp"

namespace joycehkt {

/// Simple-root coordinates of delta-hat = 1/2 sum of R-hat^+. These are also
/// the Cartan coordinates of H_delta-hat.
std::vector<Rational> delta_hat(const CosetSpace& coset);
/// gamma(H_delta-hat) = (gamma, delta-hat).
Rational delta_pairing(const CosetSpace& coset, int root);

/// Ric(E_g, conj E_g) = 2i g(H_delta-hat) for every g in R-hat^+.
std::map<int, Complex> chern_ricci_closed_form(const CosetSpace& coset);

struct ChernRicci {
  Eigen::MatrixXd form;               // real 2-form on the m basis
  std::map<int, Complex> diagonal;    // Ric(E_g, conj E_g), g in R-hat^+
  double toral_block = 0;             // max |Ric(H_j, conj H_k)|
  double off_diagonal = 0;            // max |Ric(V, conj W)| over distinct (1,0) basis vectors
  double isotropy_contribution = 0;   // max |tr ad(Y_l)| seen while tracing
};

/// Ric(V, conj W) = -i tr_m10 Lambda([V, conj W]_m) - i tr_m10 ad([V, conj W]_l)
/// with the Chern traces on m10. Requires a layer metric.
ChernRicci chern_ricci_trace(const CosetSpace& coset, const InvariantMetric& g, const HypercomplexStructure& h);

struct EinsteinSolution {
  std::vector<Rational> exact;      // g_j = a_j(H_delta-hat)
  std::vector<double> coeffs;
  double lambda_constant = 1;
  std::vector<Rational> delta_hat;
  double comparison = 0;            // max |a_j(H_delta-hat) - (a_j,a_j)(2 + dim_C f_j)/4|
};

EinsteinSolution einstein_coefficients(const CosetSpace& coset);

struct EinsteinResidual {
  double lambda = 0;
  double residual = 0;
};

/// Compares (Ric - J Ric)/2 with lambda omega_I on (1,0) x (0,1) basis pairs.
/// lambda is the median componentwise ratio. Throws InvalidInput when g is
/// not HKT at tolerance tol.
EinsteinResidual hkt_einstein_residual(const CosetSpace& coset, const InvariantMetric& g, const HypercomplexStructure& h,
                                       double tol = 1e-9);

enum class ConnectionKind { Canonical, Bismut, ChernPartial };

/// An invariant connection given by Lambda: m -> End(m), with torsion and
/// curvature derived from it.
class ConnectionModel {
 public:
  ConnectionModel(const CosetSpace& coset, std::vector<Eigen::MatrixXd> lambda, ConnectionKind kind);

  ConnectionKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(lambda_.size()); }
  const Eigen::MatrixXd& lambda(int a) const { return lambda_.at(a); }
  /// T(e_a, e_b).
  Eigen::VectorXd torsion(int a, int b) const { return torsion_[a].col(b); }
  /// R(e_a, e_b) as an endomorphism of m.
  Eigen::MatrixXd curvature(int a, int b) const;

  /// Max |Lambda(e_a) - Lambda'(e_a)|.
  double distance(const ConnectionModel& other) const;

 private:
  std::vector<Eigen::MatrixXd> lambda_;
  std::vector<Eigen::MatrixXd> torsion_;    // column b of entry a: T(e_a, e_b)
  std::vector<Eigen::MatrixXd> curvature_;  // a < b, packed
  ConnectionKind kind_;
  int pair_index(int a, int b) const;
};

/// Lambda = 0; torsion -[X, Y]_m.
ConnectionModel canonical_connection(const CosetSpace& coset);

/// Bismut connection of a layer metric, assembled in the complex basis from
/// Lambda(E_a)E_b and Lambda(H)E_a.
ConnectionModel bismut_connection(const CosetSpace& coset, const InvariantMetric& g, const HypercomplexStructure& h);

/// Bismut connection of any I-Hermitian invariant metric: Levi-Civita plus half
/// the torsion 3-form c(X,Y,Z) = d omega_I(IX, IY, IZ).
ConnectionModel bismut_connection_general(const CosetSpace& coset, const InvariantMetric& g, const Eigen::MatrixXd& I);

/// Max |g(Lambda(X)Y, Z) + g(Y, Lambda(X)Z)| over basis triples.
double skew_adjoint_residual(const ConnectionModel& c, const InvariantMetric& g);
/// Max |[Lambda(X), P]| over the basis.
double commutator_residual(const ConnectionModel& c, const Eigen::MatrixXd& P);

/// Basis tuples beyond this dimension are sampled instead of enumerated.
constexpr int kFullEnumerationDim = 64;

double nabla_torsion_residual(const CosetSpace& coset, const ConnectionModel& c);
double nabla_curvature_residual(const CosetSpace& coset, const ConnectionModel& c);

/// Layer coefficients constant on each irreducible component of the root system.
bool btp_predicate(const CosetSpace& coset, const std::vector<double>& coeffs, double rel_tol = 1e-9);

struct StrongReport {
  double raw = 0;
  double relative = 0;             // raw / |g|_op
  double skew = 0;                 // total skew-symmetry defect of c
  double quadruple_factor = 0;     // fitted dc / closed-form ratio on the checked quadruples
  double quadruple_residual = 0;   // max |dc - factor * closed form|
  int quadruples_checked = 0;
};

/// c(X,Y,Z) = g(T(X,Y), Z) for the Bismut connection, then max |dc|.
StrongReport strong_residual(const CosetSpace& coset, const InvariantMetric& g, const HypercomplexStructure& h,
                             double tol = 1e-9);

struct FlagWitness {
  int layer = -1;
  int alpha = -1, beta = -1, sum = -1;  // alpha + beta = sum, all in R_j^+
  double values[3] = {0, 0, 0};         // g(E, conj E) on alpha, beta, sum
};

/// A triple in one layer with equal metric values on all three root vectors.
std::optional<FlagWitness> flag_kahler_obstruction(const CosetSpace& coset, const InvariantMetric& g);

}  // namespace joycehkt
