#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <cmath>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "joycehkt/connections.hpp"

namespace testing {

using namespace joycehkt;

struct Space {
  std::shared_ptr<const LieAlgebra> algebra;
  JoyceDecomposition dec;
  std::unique_ptr<CosetSpace> coset;
  HypercomplexStructure h;

  const CosetSpace& cs() const { return *coset; }
  const AlgebraModel& model() const { return algebra->model(); }
};

inline double alpha_length(const JoyceDecomposition& dec, int j) {
  return std::sqrt(boost::rational_cast<double>(dec.algebra->model().norm2(dec.layers[j].alpha)));
}

inline std::unique_ptr<Space> make_space(std::vector<FactorSpec> factors, int center, IsotropySpec iso) {
  auto s = std::make_unique<Space>();
  s->algebra = make_algebra(factors, center);
  s->dec = joyce_decompose(s->algebra);
  s->coset = std::make_unique<CosetSpace>(s->dec, iso);
  s->h = hypercomplex_structure(*s->coset);
  return s;
}

inline IsotropySpec iso_m(int m, bool trivial = false) {
  IsotropySpec iso;
  iso.m = m;
  iso.trivial = trivial;
  return iso;
}

/// SU(n) with m retained layers.
inline std::unique_ptr<Space> su(int n, int m, bool trivial = false) {
  return make_space({{SimpleType::A, n - 1}}, 0, iso_m(m, trivial));
}

inline std::unique_ptr<Space> su3xsu3() { return make_space({{SimpleType::A, 2}, {SimpleType::A, 2}}, 0, iso_m(2, true)); }

/// T^2 x SU(3) x SU(3) modulo the torus spanned by (frame direction of
/// factor j) - (center unit j); the u frame pairs them the other way.
inline std::unique_ptr<Space> su3xsu3_center2() {
  auto alg = make_algebra({{SimpleType::A, 2}, {SimpleType::A, 2}}, 2);
  auto dec = joyce_decompose(alg);
  IsotropySpec iso;
  iso.m = 2;
  std::vector<ToralVector> v, u;
  for (int j = 0; j < 2; ++j) {
    const ToralVector a = *canonical_frame_direction(dec, j);
    ToralVector z = ToralVector::Zero(a.size());
    z[j] = 1;
    v.push_back(a - z);
    u.push_back((2 / alpha_length(dec, j)) * (a + z) / std::sqrt(2.0));
  }
  iso.v_subspace = v;
  iso.u_frame = u;
  auto s = std::make_unique<Space>();
  s->algebra = alg;
  s->dec = dec;
  s->coset = std::make_unique<CosetSpace>(dec, iso);
  s->h = hypercomplex_structure(*s->coset);
  return s;
}

inline std::vector<double> random_coeffs(std::mt19937_64& rng, int m, double lo = 0.1, double hi = 10.0) {
  std::uniform_real_distribution<double> logu(std::log(lo), std::log(hi));
  std::vector<double> c(m);
  for (auto& x : c) x = std::exp(logu(rng));
  return c;
}

/// Lambda(X) for a complex m vector X.
inline Eigen::MatrixXcd lambda_of(const ConnectionModel& c, const Eigen::VectorXcd& x) {
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(c.dim(), c.dim());
  for (int a = 0; a < c.dim(); ++a)
    if (x[a] != Complex(0)) L += x[a] * c.lambda(a).cast<Complex>();
  return L;
}

}  // namespace testing
