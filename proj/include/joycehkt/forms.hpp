#pragma once

// Invariant metrics and forms on m. A metric is its Gram matrix in the real
// m basis of a CosetSpace; its complex extension is bilinear, g(x, y) = x^T G y.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "joycehkt/joyce.hpp"

namespace joycehkt {

struct InvariantMetric {
  Eigen::MatrixXd gram;
  std::optional<std::vector<double>> layer_coeffs;  // set for layer metrics
};

/// h: -B on d_j + f_j, h(X_1^j, X_1^j) = 4/|a_j|^2, layers orthogonal.
InvariantMetric reference_metric(const CosetSpace& coset);
/// sum_j g_j h|m_j. Throws InvalidInput on a wrong length or a non-positive entry.
InvariantMetric layer_metric(const CosetSpace& coset, const std::vector<double>& coeffs);

/// g(x, y) with the bilinear extension.
Complex metric_value(const InvariantMetric& g, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);
double operator_norm(const InvariantMetric& g);

/// max |g(I., I.) - g|, |g(J., J.) - g| over basis pairs.
double hyperhermitian_residual(const InvariantMetric& g, const HypercomplexStructure& h);

struct OmegaForms {
  Eigen::MatrixXd omega_I, omega_J, omega_K;  // omega_P(a, b) = g(P e_a, e_b)
  Eigen::MatrixXcd Omega;                     // (omega_J + i omega_K) / 2
};

/// Throws InvalidInput when the hyperhermitian residual exceeds tol * |g|.
OmegaForms omega_forms(const InvariantMetric& g, const HypercomplexStructure& h, double tol = 1e-9);

/// Antisymmetric p-linear complex form on m, stored on increasing index tuples.
class InvariantForm {
 public:
  InvariantForm(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return values_.size(); }

  /// Value on basis vectors in any order; repeated indices give zero.
  Complex at(std::vector<int> idx) const;
  /// idx must be strictly increasing.
  void set(const std::vector<int>& idx, Complex v);
  Complex get_sorted(const std::vector<int>& idx) const { return values_[rank(idx)]; }

  /// Calls f(idx, value) for every increasing tuple.
  template <class F>
  void for_each(F&& f) const {
    std::vector<int> idx(degree_);
    for (int k = 0; k < degree_; ++k) idx[k] = k;
    if (degree_ > dim_) return;
    for (std::size_t r = 0; r < values_.size(); ++r) {
      f(static_cast<const std::vector<int>&>(idx), values_[r]);
      next(idx);
    }
  }

  /// Multilinear evaluation on arbitrary complex vectors.
  Complex evaluate(const std::vector<Eigen::VectorXcd>& v) const;
  double max_abs() const;

  static InvariantForm from_matrix(const Eigen::MatrixXcd& A);  // 2-form from a skew matrix

 private:
  std::size_t rank(const std::vector<int>& idx) const;
  void next(std::vector<int>& idx) const;
  int dim_, degree_;
  std::vector<std::vector<std::uint64_t>> binom_;
  std::vector<Complex> values_;
};

/// (d phi)(X_0..X_p) = sum_{s<t} (-1)^{s+t} phi([X_s, X_t]_m, X_0..^s..^t..X_p).
InvariantForm exterior_derivative(const CosetSpace& coset, const InvariantForm& phi);

struct HktResidual {
  double raw = 0;
  double relative = 0;  // raw / |g|_op
};

/// Max over (1,0) basis triples of |g([X,Y]_m10, JZ) + g([Z,X]_m10, JY) + g([Y,Z]_m10, JX)|.
HktResidual hkt_residual(const CosetSpace& coset, const InvariantMetric& g, const HypercomplexStructure& h);

/// Max over basis triples of |g([X,Y]_m, Z) + g(Y, [X,Z]_m)|.
double naturally_reductive_residual(const CosetSpace& coset, const InvariantMetric& g);

/// Max over basis pairs and isotropy generators of |g(ad(U)., .) + g(., ad(U).)|.
double invariance_residual(const CosetSpace& coset, const InvariantMetric& g);

/// Orthonormal (Frobenius) basis of the ad(l)-invariant symmetric forms that
/// are Hermitian for I and J. With drop_layers, the span of the layer forms
/// h|m_j is removed.
std::vector<Eigen::MatrixXd> hyperhermitian_invariant_basis(const CosetSpace& coset, const HypercomplexStructure& h,
                                                            bool drop_layers);

/// base + size*|base|_op*S with S a unit (operator norm) non-layer invariant
/// hyperhermitian direction obtained by projecting random rank-2 couplings
/// between distinct blocks. Returns nullopt when no such direction exists.
std::optional<InvariantMetric> perturbed_metric(const CosetSpace& coset, const HypercomplexStructure& h,
                                                const InvariantMetric& base, double size, std::uint64_t seed);

}  // namespace joycehkt
