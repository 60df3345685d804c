#include <doctest.h>

#include "../support.hpp"

using namespace joycehkt;
using testing::su;

namespace {

Eigen::VectorXcd conj(const Eigen::VectorXcd& x) { return x.conjugate(); }

// g([X,Y]_m10, JZ) + g([Z,X]_m10, JY) + g([Y,Z]_m10, JX) computed directly.
Complex three_term(const CosetSpace& cs, const InvariantMetric& g, const HypercomplexStructure& h,
                   const Eigen::VectorXcd& X, const Eigen::VectorXcd& Y, const Eigen::VectorXcd& Z) {
  const Eigen::MatrixXcd P = projector_10(h.I);
  const Eigen::MatrixXcd J = h.J.cast<Complex>();
  auto br = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) -> Eigen::VectorXcd { return P * cs.bracket_m(a, b); };
  return metric_value(g, br(X, Y), J * Z) + metric_value(g, br(Z, X), J * Y) + metric_value(g, br(Y, Z), J * X);
}

InvariantMetric scale_f(const CosetSpace& cs, const InvariantMetric& g, double c) {
  InvariantMetric out = g;
  out.layer_coeffs.reset();
  for (int a = 0; a < cs.dim_m(); ++a)
    for (int b = 0; b < cs.dim_m(); ++b) {
      const auto ka = cs.m_basis()[a].kind, kb = cs.m_basis()[b].kind;
      const bool fa = ka == BasisKind::FRe || ka == BasisKind::FIm;
      const bool fb = kb == BasisKind::FRe || kb == BasisKind::FIm;
      if (fa && fb) out.gram(a, b) *= c;
    }
  return out;
}

}  // namespace

TEST_SUITE("forms") {

TEST_CASE("reference metric values on SU(3)") {
  const auto s = su(3, 1, true);
  const auto& cs = s->cs();
  const auto h = reference_metric(cs);
  const int a = cs.layers()[0].alpha;
  const Eigen::VectorXcd E = cs.root_vector(a);
  CHECK(metric_value(h, E, conj(E)).real() == doctest::Approx(1.0));
  CHECK(std::abs(metric_value(h, E, conj(E)).imag()) < 1e-15);
  CHECK(h.gram(cs.layers()[0].x1, cs.layers()[0].x1) == doctest::Approx(12.0));
  // -B(E_a, conj E_a) = 1 computed in the algebra.
  const auto& g = cs.algebra();
  CHECK((-g.killing(g.E(a), g.conjugate(g.E(a)))).real() == doctest::Approx(1.0));
}

TEST_CASE("layers are h-orthogonal on SU(5)") {
  const auto s = su(5, 2, true);
  const auto& L = s->cs().layers();
  const auto h = reference_metric(s->cs());
  CHECK(h.gram.block(L[0].begin, L[1].begin, L[0].end - L[0].begin, L[1].end - L[1].begin).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("layer metrics") {
  const auto s3 = su(3, 1, true);
  CHECK((layer_metric(s3->cs(), {1.0}).gram - reference_metric(s3->cs()).gram).norm() == 0.0);

  const auto s5 = su(5, 2, true);
  const auto& cs = s5->cs();
  const auto g = layer_metric(cs, {2.0, 1.0});
  for (int j = 0; j < 2; ++j) {
    const Eigen::VectorXcd E = cs.root_vector(cs.layers()[j].alpha);
    CHECK(metric_value(g, E, conj(E)).real() == doctest::Approx(j == 0 ? 2.0 : 1.0));
  }
  CHECK_THROWS_AS(layer_metric(cs, {0.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(layer_metric(cs, {1.0, 2.0, 3.0}), InvalidInput);
}

TEST_CASE("every root of a layer carries the layer coefficient") {
  std::mt19937_64 rng(17);
  const auto s = su(7, 3, true);
  const auto& cs = s->cs();
  const auto co = testing::random_coeffs(rng, 3);
  const auto g = layer_metric(cs, co);
  for (int j = 0; j < 3; ++j)
    for (int r : s->dec.layers[j].r_plus) {
      const Eigen::VectorXcd E = cs.root_vector(r);
      CHECK(metric_value(g, E, conj(E)).real() == doctest::Approx(co[j]).epsilon(1e-13));
    }
}

TEST_CASE("hyperhermitian residual") {
  const auto s = su(3, 1, true);
  const auto g = layer_metric(s->cs(), {2.5});
  CHECK(hyperhermitian_residual(g, s->h) < 1e-12);

  std::mt19937 rng(2);
  std::normal_distribution<double> nd;
  const int n = s->cs().dim_m();
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
  InvariantMetric r{A * A.transpose() + Eigen::MatrixXd::Identity(n, n), std::nullopt};
  const double res = hyperhermitian_residual(r, s->h);
  CHECK(res > 0.01);
  InvariantMetric r3{3.0 * r.gram, std::nullopt};
  CHECK(hyperhermitian_residual(r3, s->h) / 3.0 == doctest::Approx(res).epsilon(1e-12));
  CHECK_THROWS_AS(omega_forms(r, s->h), InvalidInput);
}

TEST_CASE("fundamental forms") {
  const auto s = su(5, 2, true);
  const auto& cs = s->cs();
  const auto g = layer_metric(cs, {1.3, 0.4});
  const auto w = omega_forms(g, s->h);
  // Omega is of type (2,0) for I.
  for (const auto& v : cs.hol_basis()) {
    const Eigen::VectorXcd zbar = v.coords.conjugate();
    CHECK((zbar.transpose() * w.Omega).cwiseAbs().maxCoeff() < 1e-12);
  }
  // g = 2 Re Omega(., J.)
  CHECK((2.0 * (w.Omega * s->h.J.cast<Complex>()).real() - g.gram).cwiseAbs().maxCoeff() < 1e-10);
  // omega_I(E_a, conj E_a) = i g_j
  for (int j = 0; j < 2; ++j) {
    const Eigen::VectorXcd E = cs.root_vector(cs.layers()[j].alpha);
    const Complex v = E.transpose() * w.omega_I.cast<Complex>() * E.conjugate();
    CHECK(std::abs(v - Complex(0, j == 0 ? 1.3 : 0.4)) < 1e-12);
  }
}

TEST_CASE("d squared vanishes") {
  const auto s = su(3, 1, true);
  const int n = s->cs().dim_m();
  std::mt19937 rng(9);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = Complex(nd(rng), nd(rng));
  const auto phi = InvariantForm::from_matrix(A - A.transpose());
  const auto dphi = exterior_derivative(s->cs(), phi);
  CHECK(dphi.max_abs() > 1e-3);
  CHECK(exterior_derivative(s->cs(), dphi).max_abs() < 1e-10);
}

TEST_CASE("d Omega on (1,0) triples is the three-term expansion") {
  const auto s = su(5, 2, true);
  const auto& cs = s->cs();
  const auto base = layer_metric(cs, {1.0, 0.6});
  const auto g = perturbed_metric(cs, s->h, base, 0.05, 4);
  REQUIRE(g);
  const auto w = omega_forms(*g, s->h);
  const auto dO = exterior_derivative(cs, InvariantForm::from_matrix(w.Omega));
  const auto& hol = cs.hol_basis();
  double worst = 0, largest = 0;
  for (std::size_t a = 0; a < hol.size(); ++a)
    for (std::size_t b = a + 1; b < hol.size(); ++b)
      for (std::size_t c = b + 1; c < hol.size(); ++c) {
        const Complex lhs = dO.evaluate({hol[a].coords, hol[b].coords, hol[c].coords});
        const Complex rhs = three_term(cs, *g, s->h, hol[a].coords, hol[b].coords, hol[c].coords);
        worst = std::max(worst, std::abs(lhs - rhs));
        largest = std::max(largest, std::abs(rhs));
      }
  CHECK(worst < 1e-12);
  CHECK(largest > 1e-4);
}

TEST_CASE("omega_I is not closed on SU(3)") {
  const auto s = su(3, 1, true);
  const auto w = omega_forms(reference_metric(s->cs()), s->h);
  CHECK(exterior_derivative(s->cs(), InvariantForm::from_matrix(w.omega_I.cast<Complex>())).max_abs() > 0.1);
}

TEST_CASE("layer metrics are HKT") {
  const auto s = su(5, 2, true);
  const auto r = hkt_residual(s->cs(), layer_metric(s->cs(), {3.7, 0.2}), s->h);
  CHECK(r.relative < 1e-9);
  CHECK(r.raw < 1e-9 * 3.7 * 60);
}

TEST_CASE("HKT residual is linear in g") {
  const auto s = su(5, 2, true);
  const auto g = perturbed_metric(s->cs(), s->h, reference_metric(s->cs()), 1e-2, 1);
  REQUIRE(g);
  const InvariantMetric g3{3.0 * g->gram, std::nullopt};
  const auto a = hkt_residual(s->cs(), *g, s->h), b = hkt_residual(s->cs(), g3, s->h);
  CHECK(b.raw == doctest::Approx(3.0 * a.raw).epsilon(1e-12));
  CHECK(b.relative == doctest::Approx(a.relative).epsilon(1e-12));
}

TEST_CASE("coupling the layers breaks HKT linearly in the size") {
  const auto s = su(5, 2, true);
  const auto h = reference_metric(s->cs());
  const auto big = perturbed_metric(s->cs(), s->h, h, 1e-2, 7);
  const auto small = perturbed_metric(s->cs(), s->h, h, 1e-3, 7);
  REQUIRE(big);
  REQUIRE(small);
  const double rb = hkt_residual(s->cs(), *big, s->h).relative;
  const double rs = hkt_residual(s->cs(), *small, s->h).relative;
  CHECK(rb > 1e-6);
  CHECK(rb / rs == doctest::Approx(10.0).epsilon(0.1));
  CHECK(invariance_residual(s->cs(), *big) < 1e-12);
  CHECK(hyperhermitian_residual(*big, s->h) < 1e-12);
}

TEST_CASE("unequal values on f and on alpha break HKT") {
  const auto s = su(3, 1, true);
  const auto g = scale_f(s->cs(), reference_metric(s->cs()), 1.5);
  CHECK(hyperhermitian_residual(g, s->h) < 1e-12);
  CHECK(hkt_residual(s->cs(), g, s->h).relative > 1e-3);
}

TEST_CASE("naturally reductive frames on SU(3)") {
  const auto s = su(3, 1, true);
  CHECK(naturally_reductive_residual(s->cs(), reference_metric(s->cs())) < 1e-10);

  // X_1 three times longer in -B: h(X_1, X_1) = 12 while -B(X_1, X_1) = 36.
  IsotropySpec iso = testing::iso_m(1, true);
  iso.u_frame = std::vector<ToralVector>{std::sqrt(3.0) * s->cs().isotropy().u_frame[0]};
  const auto t = testing::make_space({{SimpleType::A, 2}}, 0, iso);
  CHECK(naturally_reductive_residual(t->cs(), reference_metric(t->cs())) > 0.01);
  CHECK(hkt_residual(t->cs(), reference_metric(t->cs()), t->h).relative < 1e-9);
}

TEST_CASE("invariant hyperhermitian forms") {
  const auto s = su(5, 2, true);
  const auto& cs = s->cs();
  const auto all = hyperhermitian_invariant_basis(cs, s->h, false);
  const auto rest = hyperhermitian_invariant_basis(cs, s->h, true);
  CHECK(all.size() == rest.size() + 2);
  for (const auto& S : rest) {
    const InvariantMetric m{S, std::nullopt};
    CHECK(hyperhermitian_residual(m, s->h) < 1e-10);
    CHECK(invariance_residual(cs, m) < 1e-10);
    const Eigen::MatrixXd h = reference_metric(cs).gram;
    for (const auto& l : cs.layers()) {
      const int w = l.end - l.begin;
      CHECK(std::abs((S.block(l.begin, l.begin, w, w).array() * h.block(l.begin, l.begin, w, w).array()).sum()) < 1e-10);
    }
  }
}

}
