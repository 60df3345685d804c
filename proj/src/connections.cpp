#include "joycehkt/connections.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "joycehkt/errors.hpp"

namespace joycehkt {

namespace {

// Layer coefficients of a layer-diagonal metric, or nullopt.
std::optional<std::vector<double>> infer_layer_coeffs(const CosetSpace& coset, const InvariantMetric& g) {
  if (g.layer_coeffs) return g.layer_coeffs;
  std::vector<double> c;
  for (const auto& L : coset.layers()) c.push_back(g.gram(L.x1, L.x1) * L.norm2 / 4.0);
  for (double x : c)
    if (!(x > 0)) return std::nullopt;
  const Eigen::MatrixXd ref = layer_metric(coset, c).gram;
  const double scale = std::max(1.0, g.gram.cwiseAbs().maxCoeff());
  if ((ref - g.gram).cwiseAbs().maxCoeff() > 1e-10 * scale) return std::nullopt;
  return c;
}

std::vector<int> doubled_delta(const CosetSpace& coset) {
  const auto& model = coset.algebra().model();
  std::vector<int> two(model.rank(), 0);
  for (int r : coset.hat_positive())
    for (int i = 0; i < model.rank(); ++i) two[i] += model.root(r)[i];
  return two;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<Rational> delta_hat(const CosetSpace& coset) {
  std::vector<Rational> out;
  for (int x : doubled_delta(coset)) out.emplace_back(x, 2);
  return out;
}

Rational delta_pairing(const CosetSpace& coset, int root) {
  const auto& model = coset.algebra().model();
  return model.pairing(model.root(root), doubled_delta(coset)) / Rational(2);
}

std::map<int, Complex> chern_ricci_closed_form(const CosetSpace& coset) {
  std::map<int, Complex> out;
  for (int r : coset.hat_positive())
    out[r] = Complex(0, 2.0 * boost::rational_cast<double>(delta_pairing(coset, r)));
  return out;
}

ChernRicci chern_ricci_trace(const CosetSpace& coset, const InvariantMetric& g, const HypercomplexStructure& h) {
  if (!infer_layer_coeffs(coset, g))
    throw InvalidInput("the Chern-Ricci trace route needs a layer-diagonal metric");
  const int n = coset.dim_m(), nl = coset.dim_l();
  const Eigen::MatrixXcd p10 = projector_10(h.I), p01 = projector_01(h.I);
  // Traces on m10 are linear in the argument.
  Eigen::VectorXcd t10(n), t01(n), tl(nl);
  for (int a = 0; a < n; ++a) {
    t10[a] = (p10 * coset.ad_m(a)).trace();
    t01[a] = (p01 * coset.ad_m(a)).trace();
  }
  for (int k = 0; k < nl; ++k) tl[k] = (p10 * coset.ad_l(k)).trace();

  ChernRicci out;
  // F(V, U) for V in m10, U in m01.
  auto F = [&](const Eigen::VectorXcd& V, const Eigen::VectorXcd& U) {
    const Eigen::VectorXcd ym = coset.bracket_m(V, U);
    const Complex lam = t10.cwiseProduct(p01 * ym).sum() - t01.cwiseProduct(p10 * ym).sum();
    const Complex iso = nl ? tl.cwiseProduct(coset.bracket_l(V, U)).sum() : Complex(0);
    out.isotropy_contribution = std::max(out.isotropy_contribution, std::abs(iso));
    return Complex(0, -1) * (lam + iso);
  };

  Eigen::MatrixXcd R(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) R(a, b) = F(p10.col(a), p01.col(b)) - F(p10.col(b), p01.col(a));
  if (R.imag().cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, R.cwiseAbs().maxCoeff()))
    throw InternalError("Chern-Ricci form is not real");
  out.form = R.real();

  const auto& hol = coset.hol_basis();
  const Eigen::MatrixXcd Rc = out.form.cast<Complex>();
  for (std::size_t a = 0; a < hol.size(); ++a)
    for (std::size_t b = 0; b < hol.size(); ++b) {
      const Complex v = hol[a].coords.transpose() * Rc * hol[b].coords.conjugate();
      if (a == b && hol[a].root >= 0) out.diagonal[hol[a].root] = v;
      if (hol[a].root < 0 && hol[b].root < 0) out.toral_block = std::max(out.toral_block, std::abs(v));
      if (a != b) out.off_diagonal = std::max(out.off_diagonal, std::abs(v));
    }
  return out;
}

EinsteinSolution einstein_coefficients(const CosetSpace& coset) {
  EinsteinSolution s;
  s.delta_hat = delta_hat(coset);
  const auto& model = coset.algebra().model();
  for (const auto& L : coset.layers()) {
    const Rational gj = delta_pairing(coset, L.alpha);
    if (gj <= Rational(0)) throw InternalError("non-positive Einstein coefficient");
    const Rational closed = model.norm2(L.alpha) / Rational(4) * Rational(2 + static_cast<long long>(L.f_roots.size()));
    s.comparison = std::max(s.comparison, std::abs(boost::rational_cast<double>(gj - closed)));
    s.exact.push_back(gj);
    s.coeffs.push_back(boost::rational_cast<double>(gj));
  }
  return s;
}

EinsteinResidual hkt_einstein_residual(const CosetSpace& coset, const InvariantMetric& g, const HypercomplexStructure& h,
                                       double tol) {
  const auto hkt = hkt_residual(coset, g, h);
  if (hkt.relative > tol) throw InvalidInput("metric is not HKT (relative residual " + std::to_string(hkt.relative) + ")");
  const ChernRicci ric = chern_ricci_trace(coset, g, h);
  const Eigen::MatrixXd A = 0.5 * (ric.form - h.J.transpose() * ric.form * h.J);
  const Eigen::MatrixXd W = h.I.transpose() * g.gram;
  const auto& hol = coset.hol_basis();
  const int nh = static_cast<int>(hol.size());
  Eigen::MatrixXcd a(nh, nh), w(nh, nh);
  for (int p = 0; p < nh; ++p)
    for (int q = 0; q < nh; ++q) {
      const Eigen::VectorXcd u = hol[p].coords, v = hol[q].coords.conjugate();
      a(p, q) = u.transpose() * A.cast<Complex>() * v;
      w(p, q) = u.transpose() * W.cast<Complex>() * v;
    }
  const double floor = tol * std::max(1.0, w.cwiseAbs().maxCoeff());
  std::vector<double> ratios;
  for (int p = 0; p < nh; ++p)
    for (int q = 0; q < nh; ++q)
      if (std::abs(w(p, q)) > floor) ratios.push_back((a(p, q) / w(p, q)).real());
  EinsteinResidual r;
  r.lambda = median(ratios);
  r.residual = (a - r.lambda * w).cwiseAbs().maxCoeff();
  return r;
}

// ---------------------------------------------------------------------------

ConnectionModel::ConnectionModel(const CosetSpace& coset, std::vector<Eigen::MatrixXd> lambda, ConnectionKind kind)
    : lambda_(std::move(lambda)), kind_(kind) {
  const int n = coset.dim_m();
  if (static_cast<int>(lambda_.size()) != n) throw InvalidInput("Lambda must have one endomorphism per basis vector");
  torsion_.resize(n);
  for (int a = 0; a < n; ++a) {
    torsion_[a] = lambda_[a] - coset.ad_m(a);
    for (int b = 0; b < n; ++b) torsion_[a].col(b) -= lambda_[b].col(a);
  }
  curvature_.resize(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Eigen::MatrixXd R = lambda_[a] * lambda_[b] - lambda_[b] * lambda_[a];
      const Eigen::MatrixXd& ad = coset.ad_m(a);
      for (int c = 0; c < n; ++c)
        if (ad(c, b) != 0.0) R -= ad(c, b) * lambda_[c];
      const Eigen::MatrixXd& tl = coset.bracket_to_l(a);
      for (int k = 0; k < coset.dim_l(); ++k)
        if (tl(k, b) != 0.0) R -= tl(k, b) * coset.ad_l(k);
      curvature_[pair_index(a, b)] = R;
    }
}

int ConnectionModel::pair_index(int a, int b) const {
  const int n = dim();
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

Eigen::MatrixXd ConnectionModel::curvature(int a, int b) const {
  if (a == b) return Eigen::MatrixXd::Zero(dim(), dim());
  return a < b ? curvature_[pair_index(a, b)] : Eigen::MatrixXd(-curvature_[pair_index(b, a)]);
}

double ConnectionModel::distance(const ConnectionModel& other) const {
  double d = 0;
  for (int a = 0; a < dim(); ++a) d = std::max(d, (lambda_[a] - other.lambda_.at(a)).cwiseAbs().maxCoeff());
  return d;
}

ConnectionModel canonical_connection(const CosetSpace& coset) {
  const int n = coset.dim_m();
  return ConnectionModel(coset, std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)), ConnectionKind::Canonical);
}

ConnectionModel bismut_connection(const CosetSpace& coset, const InvariantMetric& g, const HypercomplexStructure&) {
  if (!infer_layer_coeffs(coset, g)) throw InvalidInput("the Bismut root formulas need a layer-diagonal metric");
  const auto& alg = coset.algebra();
  const auto& model = alg.model();
  const auto& N = alg.constants();
  const int n = coset.dim_m();

  // Complex basis: X1, X2 of every layer, then E_a for a in R-hat.
  std::vector<int> toral = coset.toral_m_indices();
  std::vector<int> roots = coset.hat_positive();
  for (int r : coset.hat_positive()) roots.push_back(model.negative(r));
  const int nt = static_cast<int>(toral.size());
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
  for (int p = 0; p < nt; ++p) S(toral[p], p) = 1;
  std::vector<int> pos(model.num_roots(), -1);
  for (std::size_t q = 0; q < roots.size(); ++q) {
    S.col(nt + q) = coset.root_vector(roots[q]);
    pos[roots[q]] = nt + static_cast<int>(q);
  }
  if (nt + static_cast<int>(roots.size()) != n) throw InternalError("complex basis of m has the wrong size");
  const Eigen::MatrixXcd Sinv = S.inverse();

  auto eps = [&](int r) { return model.is_positive(r) ? 1.0 : -1.0; };
  std::vector<double> ga(model.num_roots(), 0);
  for (int r : roots) {
    const Eigen::VectorXcd v = coset.root_vector(r);
    ga[r] = metric_value(g, v, v.conjugate()).real();
  }

  std::vector<Eigen::MatrixXcd> lc(n, Eigen::MatrixXcd::Zero(n, n));
  for (int p = 0; p < nt; ++p) {
    const Element& H = coset.m_basis()[toral[p]].element;
    const Eigen::VectorXcd hm = Eigen::VectorXcd::Unit(n, toral[p]);
    for (int a : roots) {
      const Eigen::VectorXcd ha = coset.m_part(alg.t(a));
      lc[p](pos[a], pos[a]) = metric_value(g, hm, ha) / ga[a] + alg.root_value(a, H);
    }
  }
  for (int a : roots)
    for (int b : roots) {
      const auto s = model.sum(a, b);
      if (!s || pos[*s] < 0) continue;
      const int c = *s;
      const double coef = 0.5 * N.N(a, b) *
                          (1 + eps(a) * eps(b) + (1 - eps(a) * eps(c)) * ga[b] / ga[c] -
                           (1 + eps(b) * eps(c)) * ga[a] / ga[c]);
      lc[pos[a]](pos[c], pos[b]) = coef;
    }

  std::vector<Eigen::MatrixXd> lambda(n);
  double imag = 0;
  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (int p = 0; p < n; ++p)
      if (Sinv(p, a) != 0.0) M += Sinv(p, a) * lc[p];
    const Eigen::MatrixXcd real_basis = S * M * Sinv;
    imag = std::max(imag, real_basis.imag().cwiseAbs().maxCoeff());
    lambda[a] = real_basis.real();
  }
  if (imag > 1e-8) throw InternalError("Bismut Lambda is not real in the real basis");
  return ConnectionModel(coset, std::move(lambda), ConnectionKind::Bismut);
}

ConnectionModel bismut_connection_general(const CosetSpace& coset, const InvariantMetric& g, const Eigen::MatrixXd& I) {
  const int n = coset.dim_m();
  const Eigen::MatrixXd& G = g.gram;
  const Eigen::MatrixXd Ginv = G.inverse();
  // u(a, b, c) = g(U(e_a, e_b), e_c).
  std::vector<Eigen::MatrixXd> u(n);
  for (int c = 0; c < n; ++c) {
    const Eigen::MatrixXd& A = coset.ad_m(c);
    u[c] = 0.5 * (A.transpose() * G + G * A);
  }
  // d omega_I as a 3-tensor, then pulled back by I.
  const auto domega = exterior_derivative(coset, InvariantForm::from_matrix((I.transpose() * G).cast<Complex>()));
  std::vector<double> D(static_cast<std::size_t>(n) * n * n);
  auto at = [n](int a, int b, int c) { return (static_cast<std::size_t>(a) * n + b) * n + c; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) D[at(a, b, c)] = domega.at({a, b, c}).real();
  auto contract = [&](const std::vector<double>& T, int slot) {
    std::vector<double> out(T.size(), 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const double v = T[at(a, b, c)];
          if (v == 0.0) continue;
          for (int p = 0; p < n; ++p) {
            // (I^* T)(.., e_p, ..) = T(.., I e_p, ..): I e_p = sum_q I(q, p) e_q.
            const int q = slot == 0 ? a : slot == 1 ? b : c;
            const double w = I(q, p);
            if (w == 0.0) continue;
            out[slot == 0 ? at(p, b, c) : slot == 1 ? at(a, p, c) : at(a, b, p)] += w * v;
          }
        }
    return out;
  };
  const std::vector<double> cI = contract(contract(contract(D, 0), 1), 2);

  std::vector<Eigen::MatrixXd> lambda(n, Eigen::MatrixXd::Zero(n, n));
  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXd low(n, n);  // low(c, b) = g(Lambda(e_a) e_b, e_c)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) low(c, b) = u[c](a, b) + 0.5 * cI[at(a, b, c)];
    lambda[a] = 0.5 * coset.ad_m(a) + Ginv * low;
  }
  return ConnectionModel(coset, std::move(lambda), ConnectionKind::Bismut);
}

double skew_adjoint_residual(const ConnectionModel& c, const InvariantMetric& g) {
  double worst = 0;
  for (int a = 0; a < c.dim(); ++a) {
    const Eigen::MatrixXd& L = c.lambda(a);
    worst = std::max(worst, (L.transpose() * g.gram + g.gram * L).cwiseAbs().maxCoeff());
  }
  return worst;
}

double commutator_residual(const ConnectionModel& c, const Eigen::MatrixXd& P) {
  double worst = 0;
  for (int a = 0; a < c.dim(); ++a) worst = std::max(worst, (c.lambda(a) * P - P * c.lambda(a)).cwiseAbs().maxCoeff());
  return worst;
}

namespace {

// (W, X) pairs to visit: all of them up to the enumeration cap, otherwise a
// fixed pseudo-random sample.
std::vector<std::pair<int, int>> index_pairs(int n, std::size_t sample) {
  std::vector<std::pair<int, int>> out;
  if (n <= kFullEnumerationDim) {
    for (int w = 0; w < n; ++w)
      for (int x = 0; x < n; ++x) out.emplace_back(w, x);
    return out;
  }
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (std::size_t s = 0; s < sample; ++s) out.emplace_back(pick(rng), pick(rng));
  return out;
}

}  // namespace

double nabla_torsion_residual(const CosetSpace& coset, const ConnectionModel& c) {
  const int n = coset.dim_m();
  std::vector<Eigen::MatrixXd> T(n, Eigen::MatrixXd(n, n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) T[a].col(b) = c.torsion(a, b);
  double worst = 0;
  for (const auto& [w, x] : index_pairs(n, 4096)) {
    const Eigen::MatrixXd& L = c.lambda(w);
    // column y: L T(x,y) - T(L e_x, y) - T(x, L e_y)
    Eigen::MatrixXd R = L * T[x] - T[x] * L;
    for (int y = 0; y < n; ++y) R.col(y) += T[y] * L.col(x);
    worst = std::max(worst, R.cwiseAbs().maxCoeff());
  }
  return worst;
}

double nabla_curvature_residual(const CosetSpace& coset, const ConnectionModel& c) {
  const int n = coset.dim_m();
  double worst = 0;
  for (const auto& [w, x] : index_pairs(n, 256)) {
    const Eigen::MatrixXd& L = c.lambda(w);
    for (int y = x + 1; y < n; ++y) {
      Eigen::MatrixXd R = L * c.curvature(x, y) - c.curvature(x, y) * L;
      for (int k = 0; k < n; ++k) {
        if (L(k, x) != 0.0) R -= L(k, x) * c.curvature(k, y);
        if (L(k, y) != 0.0) R -= L(k, y) * c.curvature(x, k);
      }
      worst = std::max(worst, R.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

bool btp_predicate(const CosetSpace& coset, const std::vector<double>& coeffs, double rel_tol) {
  if (static_cast<int>(coeffs.size()) != coset.m()) throw InvalidInput("coefficient count does not match m");
  const auto& model = coset.algebra().model();
  for (int j = 0; j < coset.m(); ++j)
    for (int k = j + 1; k < coset.m(); ++k) {
      if (model.component_of(coset.layers()[j].alpha) != model.component_of(coset.layers()[k].alpha)) continue;
      if (std::abs(coeffs[j] - coeffs[k]) > rel_tol * std::max(std::abs(coeffs[j]), std::abs(coeffs[k]))) return false;
    }
  return true;
}

StrongReport strong_residual(const CosetSpace& coset, const InvariantMetric& g, const HypercomplexStructure& h,
                             double tol) {
  const auto hkt = hkt_residual(coset, g, h);
  if (hkt.relative > tol) throw InvalidInput("metric is not HKT (relative residual " + std::to_string(hkt.relative) + ")");
  const auto coeffs = infer_layer_coeffs(coset, g);
  const ConnectionModel bis = coeffs ? bismut_connection(coset, g, h) : bismut_connection_general(coset, g, h.I);
  const int n = coset.dim_m();
  StrongReport rep;
  std::vector<Eigen::MatrixXd> C(n);  // C[a](b, c) = g(T(e_a, e_b), e_c)
  for (int a = 0; a < n; ++a) {
    C[a].resize(n, n);
    for (int b = 0; b < n; ++b) C[a].row(b) = (g.gram * bis.torsion(a, b)).transpose();
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        rep.skew = std::max({rep.skew, std::abs(C[a](b, c) + C[b](a, c)), std::abs(C[a](b, c) + C[a](c, b))});
  const double nrm = operator_norm(g);
  if (rep.skew > 1e-8 * std::max(1.0, nrm)) throw InternalError("Bismut torsion 3-form is not totally skew");
  InvariantForm c3(n, 3);
  c3.for_each([&](const std::vector<int>& idx, Complex) { c3.set(idx, C[idx[0]](idx[1], idx[2])); });
  const InvariantForm dc = exterior_derivative(coset, c3);
  rep.raw = dc.max_abs();
  rep.relative = nrm > 0 ? rep.raw / nrm : rep.raw;

  // Quadruples (a, b, c, v) = (a_j - beta, beta, -theta, theta - a_j) with
  // theta - beta = a_k and a_j - (theta + beta) not a root.
  const auto& alg = coset.algebra();
  const auto& model = alg.model();
  const auto& N = alg.constants();
  auto gval = [&](int r) {
    const int p = model.is_positive(r) ? r : model.negative(r);
    const Eigen::VectorXcd v = coset.root_vector(p);
    return metric_value(g, v, v.conjugate()).real();
  };
  auto eps = [&](int r) { return model.is_positive(r) ? 1.0 : -1.0; };
  std::vector<double> dcv, formula;
  const auto& dec = coset.decomposition();
  for (int j = 0; j < coset.m(); ++j) {
    const int aj = dec.layers[j].alpha;
    for (int k = j + 1; k < dec.d(); ++k) {
      const int ak = dec.layers[k].alpha;
      if (model.component_of(aj) != model.component_of(ak)) continue;
      for (int theta : dec.layers[j].r_plus)
        for (int beta : dec.layers[j].r_plus) {
          const auto diff = model.sum(theta, model.negative(beta));
          if (!diff || *diff != ak) continue;
          RootCoords rest = model.root(aj);
          for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= model.root(theta)[i] + model.root(beta)[i];
          if (model.find(rest) || std::all_of(rest.begin(), rest.end(), [](int x) { return x == 0; })) continue;
          const auto a_opt = model.sum(aj, model.negative(beta));
          const auto v_opt = model.sum(theta, model.negative(aj));
          if (!a_opt || !v_opt) continue;
          const int a = *a_opt, b = beta, c = model.negative(theta), v = *v_opt;
          double f = N.N(a, b) * N.N(c, v) * (gval(a) + gval(b) + gval(c) + gval(v) - 2 * gval(aj));
          if (coset.layer_of_root(ak) >= 0) {
            const double e = eps(ak);
            f += e * N.N(a, v) * N.N(b, c) * (-gval(a) + gval(b) - gval(c) + gval(v) + 2 * e * gval(ak));
          }
          const Complex val = dc.evaluate({coset.root_vector(a), coset.root_vector(b), coset.root_vector(c),
                                           coset.root_vector(v)});
          dcv.push_back(val.real());
          formula.push_back(f);
        }
    }
  }
  rep.quadruples_checked = static_cast<int>(dcv.size());
  std::vector<double> ratios;
  for (std::size_t q = 0; q < dcv.size(); ++q)
    if (std::abs(formula[q]) > 1e-9) ratios.push_back(dcv[q] / formula[q]);
  rep.quadruple_factor = median(ratios);
  for (std::size_t q = 0; q < dcv.size(); ++q)
    rep.quadruple_residual = std::max(rep.quadruple_residual, std::abs(dcv[q] - rep.quadruple_factor * formula[q]));
  return rep;
}

std::optional<FlagWitness> flag_kahler_obstruction(const CosetSpace& coset, const InvariantMetric& g) {
  const auto& model = coset.algebra().model();
  auto gval = [&](int r) {
    const Eigen::VectorXcd v = coset.root_vector(r);
    return metric_value(g, v, v.conjugate()).real();
  };
  for (int j = 0; j < coset.m(); ++j) {
    const auto& L = coset.layers()[j];
    for (int gamma : L.f_roots) {  // ascending index
      const auto beta = model.sum(L.alpha, model.negative(gamma));
      if (!beta || coset.layer_of_root(*beta) != j || !model.is_positive(*beta)) continue;
      FlagWitness w;
      w.layer = j;
      w.alpha = gamma;
      w.beta = *beta;
      w.sum = L.alpha;
      w.values[0] = gval(gamma);
      w.values[1] = gval(*beta);
      w.values[2] = gval(L.alpha);
      const double scale = std::max({1.0, w.values[0], w.values[1], w.values[2]});
      if (std::abs(w.values[0] - w.values[2]) < 1e-9 * scale && std::abs(w.values[1] - w.values[2]) < 1e-9 * scale)
        return w;
    }
  }
  return std::nullopt;
}

}  // namespace joycehkt
