#include <doctest.h>

#include <algorithm>

#include "../support.hpp"

using namespace joycehkt;
using testing::su;

namespace {

std::string eps_label(int i, int j) { return "e" + std::to_string(i) + "-e" + std::to_string(j); }

std::set<std::string> labels(const AlgebraModel& m, const std::vector<int>& roots) {
  std::set<std::string> s;
  for (int a : roots) s.insert(m.label(a));
  return s;
}

std::multiset<std::pair<double, int>> layer_invariants(const JoyceDecomposition& dec) {
  std::multiset<std::pair<double, int>> s;
  for (const auto& l : dec.layers)
    s.insert({boost::rational_cast<double>(dec.algebra->model().norm2(l.alpha)), static_cast<int>(l.r_plus.size())});
  return s;
}

}  // namespace

TEST_SUITE("joyce") {

TEST_CASE("A2 has a single layer") {
  const auto dec = joyce_decompose(make_algebra({{SimpleType::A, 2}}, 0));
  REQUIRE(dec.d() == 1);
  const auto& m = dec.algebra->model();
  CHECK(m.label(dec.layers[0].alpha) == "e1-e2");
  CHECK(labels(m, dec.layers[0].r_plus) == std::set<std::string>{"e1-e2", "e1-e3", "e3-e2"});
}

TEST_CASE("A4 and A3 layer data") {
  const auto d4 = joyce_decompose(make_algebra({{SimpleType::A, 4}}, 0));
  REQUIRE(d4.d() == 2);
  CHECK(d4.algebra->model().label(d4.layers[0].alpha) == "e1-e2");
  CHECK(d4.algebra->model().label(d4.layers[1].alpha) == "e3-e4");
  CHECK(d4.layers[0].r_plus.size() == 7);
  CHECK(d4.layers[1].r_plus.size() == 3);
  CHECK(d4.b_d.size() == 2);

  const auto d3 = joyce_decompose(make_algebra({{SimpleType::A, 3}}, 0));
  CHECK(d3.d() == 2);
  CHECK(d3.b_d.size() == 1);
}

TEST_CASE("type A layers follow the epsilon pattern") {
  for (int n = 3; n <= 8; ++n) {
    CAPTURE(n);
    const auto dec = joyce_decompose(make_algebra({{SimpleType::A, n - 1}}, 0));
    const auto& m = dec.algebra->model();
    CHECK(dec.d() == n / 2);
    for (int j = 1; j <= dec.d(); ++j) {
      std::set<std::string> expect = {eps_label(2 * j - 1, 2 * j)};
      for (int p = 2 * j + 1; p <= n; ++p) {
        expect.insert(eps_label(2 * j - 1, p));
        expect.insert(eps_label(p, 2 * j));
      }
      CHECK(labels(m, dec.layers[j - 1].r_plus) == expect);
      CHECK(dec.layers[j - 1].r_plus.size() == static_cast<std::size_t>(1 + 2 * (n - 2 * j)));
    }
    CHECK(static_cast<int>(dec.b_d.size()) == (n % 2 ? (n - 1) / 2 : n / 2 - 1));
  }
}

TEST_CASE("layer properties on all types") {
  const std::vector<std::vector<FactorSpec>> algebras = {
      {{SimpleType::A, 5}}, {{SimpleType::B, 3}}, {{SimpleType::C, 3}}, {{SimpleType::D, 4}}, {{SimpleType::D, 5}},
      {{SimpleType::G2, 2}}, {{SimpleType::F4, 4}}, {{SimpleType::E6, 6}}, {{SimpleType::A, 2}, {SimpleType::B, 2}}};
  for (const auto& f : algebras) {
    const auto dec = joyce_decompose(make_algebra(f, 1));
    const auto& m = dec.algebra->model();
    CAPTURE(to_string(f[0].type));
    CHECK(check_decomposition(dec).empty());
    for (int i = 0; i < dec.d(); ++i)
      for (int j = i + 1; j < dec.d(); ++j) {
        const int a = dec.layers[i].alpha, b = dec.layers[j].alpha;
        CHECK_FALSE(m.sum(a, b));
        CHECK_FALSE(m.sum(a, m.negative(b)));
      }
    std::set<int> seen;
    for (const auto& l : dec.layers) {
      CHECK(std::find(l.r_plus.begin(), l.r_plus.end(), l.alpha) != l.r_plus.end());
      for (int g : l.r_plus) {
        CHECK(seen.insert(g).second);
        CHECK(m.component_of(g) == m.component_of(l.alpha));
        if (g == l.alpha) continue;
        CHECK(Rational(2) * m.pairing(g, l.alpha) / m.norm2(l.alpha) == Rational(1));
        CHECK_FALSE(m.sum(g, l.alpha));
        CHECK(m.sum(g, m.negative(l.alpha)));
      }
    }
  }
}

TEST_CASE("tie-break choices give the same layer invariants") {
  const std::vector<std::vector<FactorSpec>> algebras = {{{SimpleType::A, 2}, {SimpleType::A, 2}},
                                                         {{SimpleType::A, 3}, {SimpleType::B, 2}},
                                                         {{SimpleType::D, 4}},
                                                         {{SimpleType::G2, 2}, {SimpleType::C, 3}}};
  for (const auto& f : algebras) {
    auto alg = make_algebra(f, 0);
    const auto first = joyce_decompose(alg, TieBreak::FirstIndex);
    const auto last = joyce_decompose(alg, TieBreak::LastIndex);
    CHECK(first.d() == last.d());
    CHECK(layer_invariants(first) == layer_invariants(last));
    CHECK(first.b_d.size() == last.b_d.size());
  }
}

TEST_CASE("coset dimensions") {
  CHECK(su(3, 1, true)->cs().dim_m() == 8);
  const auto s4 = su(4, 1);
  CHECK(s4->cs().dim_m() == 12);
  CHECK(s4->cs().dim_l() == 3);
  CHECK_THROWS_AS(su(4, 1, true), InvalidInput);
  const auto s5 = su(5, 2, true);
  CHECK(s5->cs().dim_m() == 24);
  CHECK(s5->cs().layers()[0].end - s5->cs().layers()[0].begin == 4 + 2 * 6);
  CHECK(s5->cs().layers()[1].end - s5->cs().layers()[1].begin == 4 + 2 * 2);
}

TEST_CASE("default frame has -B norm 4/|alpha|^2") {
  const auto s = su(5, 2, true);
  const Eigen::MatrixXd G = toral_gram(s->cs().algebra());
  for (int j = 0; j < 2; ++j) {
    const auto& x = s->cs().isotropy().u_frame[j];
    const double n2 = boost::rational_cast<double>(s->model().norm2(s->dec.layers[j].alpha));
    CHECK(x.dot(G * x) == doctest::Approx(4 / n2));
    const auto dir = canonical_frame_direction(s->dec, j);
    REQUIRE(dir);
    CHECK(dir->dot(G * *dir) == doctest::Approx(1.0));
  }
}

TEST_CASE("isotropy acts inside each d_j + f_j") {
  const auto s = su(4, 1);
  const auto& cs = s->cs();
  for (int k = 0; k < cs.dim_l(); ++k) {
    const auto& A = cs.ad_l(k);
    for (const auto& l : cs.layers())
      for (int r = 0; r < cs.dim_m(); ++r)
        for (int c = l.begin; c < l.end; ++c) {
          const bool inside = r >= l.begin && r < l.end && r != l.x1 && c != l.x1;
          if (!inside) CHECK(std::abs(A(r, c)) < 1e-13);
        }
  }
  CHECK(cs.isotropy_leak() < 1e-13);
}

TEST_CASE("m and l projections recover the element") {
  const auto s = su(5, 1);
  const auto& cs = s->cs();
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  Element x(cs.algebra().dimension());
  for (int k = 0; k < x.size(); ++k) x[k] = Complex(nd(rng), nd(rng));
  Element back = cs.from_m(cs.m_part(x));
  const Eigen::VectorXcd lp = cs.l_part(x);
  for (int k = 0; k < cs.dim_l(); ++k) back += lp[k] * cs.l_basis()[k].element;
  CHECK((back - x).norm() < 1e-12);
}

TEST_CASE("su(2) bracket relations per layer") {
  for (const auto& s : {su(3, 1, true), su(5, 2, true), su(6, 2)}) {
    const auto& cs = s->cs();
    const auto& g = cs.algebra();
    for (const auto& l : cs.layers()) {
      const auto& X2 = cs.m_basis()[l.x2].element;
      const auto& X3 = cs.m_basis()[l.x3].element;
      const auto& X4 = cs.m_basis()[l.x4].element;
      CHECK((g.bracket(X3, X4) - 2.0 * X2).norm() < 1e-12);
      CHECK((g.bracket(X2, X3) - 2.0 * X4).norm() < 1e-12);
      CHECK((g.bracket(X4, X2) - 2.0 * X3).norm() < 1e-12);
    }
  }
}

TEST_CASE("J on root vectors of the first SU(5) layer") {
  const auto s = su(5, 2, true);
  const auto& cs = s->cs();
  const auto& m = s->model();
  const auto& layer = cs.layers()[0];
  const Complex k = s->h.k[0];
  CHECK(std::abs(k - 1 / (std::sqrt(2.0) * std::sqrt(0.2))) < 1e-14);
  for (int g : layer.f_roots) {
    const auto diff = m.sum(g, m.negative(layer.alpha));
    REQUIRE(diff);
    const Eigen::VectorXcd lhs = s->h.J.cast<Complex>() * cs.root_vector(g);
    const Eigen::VectorXcd rhs = 2.0 * k * s->algebra->constants().N(g, m.negative(layer.alpha)) * cs.root_vector(*diff);
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("hypercomplex structure residuals") {
  const auto s3 = su(3, 1, true);
  const int n = s3->cs().dim_m();
  CHECK((s3->h.I * s3->h.I + Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(verify_hypercomplex(s3->cs(), s3->h).max_residual() < 1e-10);

  const auto s5 = su(5, 2, true);
  const auto rep = verify_hypercomplex(s5->cs(), s5->h);
  CHECK(rep.closure_i < 1e-10);
  CHECK(rep.closure_j < 1e-10);
  CHECK((s5->h.K - s5->h.I * s5->h.J).cwiseAbs().maxCoeff() < 1e-12);

  const auto s42 = su(4, 1);
  CHECK(verify_hypercomplex(s42->cs(), s42->h).max_residual() < 1e-10);
}

TEST_CASE("phases of k keep the structure integrable") {
  const auto s = su(5, 2, true);
  auto k = default_k(s->cs());
  k[0] *= std::polar(1.0, 0.7);
  k[1] *= std::polar(1.0, -2.1);
  const auto h = hypercomplex_structure(s->cs(), k);
  CHECK(verify_hypercomplex(s->cs(), h).max_residual() < 1e-10);
}

TEST_CASE("a doubled k is flagged") {
  const auto s = su(3, 1, true);
  auto k = default_k(s->cs());
  k[0] *= 2.0;
  CHECK_THROWS_AS(hypercomplex_structure(s->cs(), k), InvalidInput);
  const auto h = hypercomplex_structure(s->cs(), k, false);
  CHECK(verify_hypercomplex(s->cs(), h).k_normalization == doctest::Approx(3.0));
}

TEST_CASE("invalid isotropy data") {
  auto alg = make_algebra({{SimpleType::A, 4}}, 0);
  const auto dec = joyce_decompose(alg);
  IsotropySpec iso;
  iso.m = 3;
  CHECK_THROWS_AS(CosetSpace(dec, iso), InvalidInput);
  iso.m = 2;
  iso.u_frame = std::vector<ToralVector>{ToralVector::Zero(4), ToralVector::Zero(4)};
  CHECK_THROWS_AS(CosetSpace(dec, iso), InvalidInput);
  const auto torus = joyce_decompose(make_algebra({}, 2));
  CHECK(torus.d() == 0);
  CHECK_THROWS_AS(CosetSpace(torus, IsotropySpec{}), InvalidInput);
}

}
