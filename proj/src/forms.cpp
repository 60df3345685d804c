#include "joycehkt/forms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "joycehkt/errors.hpp"

namespace joycehkt {

InvariantMetric reference_metric(const CosetSpace& coset) {
  const int N = coset.dim_m();
  InvariantMetric g;
  g.gram = Eigen::MatrixXd::Zero(N, N);
  for (const auto& L : coset.layers()) {
    const double s = 4.0 / L.norm2;
    for (int b : {L.x1, L.x2, L.x3, L.x4}) g.gram(b, b) = s;
    for (int b = L.x4 + 1; b < L.end; ++b) g.gram(b, b) = 1.0;
  }
  return g;
}

InvariantMetric layer_metric(const CosetSpace& coset, const std::vector<double>& coeffs) {
  if (static_cast<int>(coeffs.size()) != coset.m())
    throw InvalidInput("expected " + std::to_string(coset.m()) + " layer coefficients, got " +
                       std::to_string(coeffs.size()));
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    if (!(coeffs[j] > 0) || !std::isfinite(coeffs[j]))
      throw InvalidInput("layer coefficient g_" + std::to_string(j + 1) + " must be positive");
  InvariantMetric g = reference_metric(coset);
  for (int j = 0; j < coset.m(); ++j) {
    const auto& L = coset.layers()[j];
    for (int b = L.begin; b < L.end; ++b) g.gram(b, b) *= coeffs[j];
  }
  g.layer_coeffs = coeffs;
  return g;
}

Complex metric_value(const InvariantMetric& g, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  return x.transpose() * g.gram.cast<Complex>() * y;
}

double operator_norm(const InvariantMetric& g) {
  if (g.gram.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double hyperhermitian_residual(const InvariantMetric& g, const HypercomplexStructure& h) {
  if (g.gram.size() == 0) return 0;
  const auto& G = g.gram;
  return std::max((h.I.transpose() * G * h.I - G).cwiseAbs().maxCoeff(),
                  (h.J.transpose() * G * h.J - G).cwiseAbs().maxCoeff());
}

OmegaForms omega_forms(const InvariantMetric& g, const HypercomplexStructure& h, double tol) {
  const double res = hyperhermitian_residual(g, h);
  if (res > tol * std::max(1.0, operator_norm(g)))
    throw InvalidInput("metric is not hyperhermitian (residual " + std::to_string(res) + ")");
  OmegaForms w;
  w.omega_I = h.I.transpose() * g.gram;
  w.omega_J = h.J.transpose() * g.gram;
  w.omega_K = h.K.transpose() * g.gram;
  w.Omega = 0.5 * (w.omega_J.cast<Complex>() + Complex(0, 1) * w.omega_K.cast<Complex>());
  return w;
}

// ---------------------------------------------------------------------------

InvariantForm::InvariantForm(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 0 || degree < 0) throw InvalidInput("invalid form shape");
  binom_.assign(dim + 1, std::vector<std::uint64_t>(degree + 1, 0));
  for (int n = 0; n <= dim; ++n) {
    binom_[n][0] = 1;
    for (int k = 1; k <= degree && k <= n; ++k)
      binom_[n][k] = binom_[n - 1][k - 1] + (k <= n - 1 ? binom_[n - 1][k] : 0);
  }
  values_.assign(degree <= dim ? binom_[dim][degree] : 0, Complex(0));
}

std::size_t InvariantForm::rank(const std::vector<int>& idx) const {
  // Combinatorial number system, lexicographic order of increasing tuples.
  std::size_t r = 0;
  int prev = -1;
  for (int k = 0; k < degree_; ++k) {
    for (int v = prev + 1; v < idx[k]; ++v) r += binom_[dim_ - v - 1][degree_ - k - 1];
    prev = idx[k];
  }
  return r;
}

void InvariantForm::next(std::vector<int>& idx) const {
  int k = degree_ - 1;
  while (k >= 0 && idx[k] == dim_ - degree_ + k) --k;
  if (k < 0) return;
  ++idx[k];
  for (int t = k + 1; t < degree_; ++t) idx[t] = idx[t - 1] + 1;
}

Complex InvariantForm::at(std::vector<int> idx) const {
  if (static_cast<int>(idx.size()) != degree_) throw InvalidInput("wrong number of form arguments");
  int sign = 1;
  for (int i = 1; i < degree_; ++i)
    for (int j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  return static_cast<double>(sign) * values_[rank(idx)];
}

void InvariantForm::set(const std::vector<int>& idx, Complex v) {
  for (int k = 1; k < degree_; ++k)
    if (idx[k - 1] >= idx[k]) throw InvalidInput("form index tuple must be strictly increasing");
  values_[rank(idx)] = v;
}

Complex InvariantForm::evaluate(const std::vector<Eigen::VectorXcd>& v) const {
  if (static_cast<int>(v.size()) != degree_) throw InvalidInput("wrong number of form arguments");
  Complex sum = 0;
  for_each([&](const std::vector<int>& idx, Complex val) {
    if (val == 0.0) return;
    Eigen::MatrixXcd minor(degree_, degree_);
    for (int r = 0; r < degree_; ++r)
      for (int c = 0; c < degree_; ++c) minor(r, c) = v[c][idx[r]];
    sum += val * (degree_ ? minor.determinant() : Complex(1));
  });
  return sum;
}

double InvariantForm::max_abs() const {
  double m = 0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

InvariantForm InvariantForm::from_matrix(const Eigen::MatrixXcd& A) {
  InvariantForm f(static_cast<int>(A.rows()), 2);
  f.for_each([&](const std::vector<int>& idx, Complex) { f.set(idx, 0.5 * (A(idx[0], idx[1]) - A(idx[1], idx[0]))); });
  return f;
}

InvariantForm exterior_derivative(const CosetSpace& coset, const InvariantForm& phi) {
  const int n = phi.dim(), p = phi.degree();
  if (n != coset.dim_m()) throw InvalidInput("form dimension does not match m");
  InvariantForm out(n, p + 1);
  std::vector<int> rest(p);
  out.for_each([&](const std::vector<int>& idx, Complex) {
    Complex sum = 0;
    for (int s = 0; s <= p; ++s)
      for (int t = s + 1; t <= p; ++t) {
        const Eigen::MatrixXd& ad = coset.ad_m(idx[s]);
        for (int k = 0, q = 0; k <= p; ++k)
          if (k != s && k != t) rest[q++] = idx[k];
        Complex term = 0;
        for (int c = 0; c < n; ++c) {
          const double C = ad(c, idx[t]);
          if (C == 0.0) continue;
          std::vector<int> args(p);
          args[0] = c;
          for (int q = 0; q + 1 < p; ++q) args[q + 1] = rest[q];
          term += C * phi.at(args);
        }
        sum += ((s + t) % 2 == 0) ? term : -term;
      }
    out.set(idx, sum);
  });
  return out;
}

HktResidual hkt_residual(const CosetSpace& coset, const InvariantMetric& g, const HypercomplexStructure& h) {
  const auto& hol = coset.hol_basis();
  const int nh = static_cast<int>(hol.size());
  const Eigen::MatrixXcd p10 = projector_10(h.I);
  const Eigen::MatrixXcd Gc = g.gram.cast<Complex>();
  const Eigen::MatrixXcd Jc = h.J.cast<Complex>();
  // W(:, c) = G J Z_c, so g(B, J Z_c) = B^T W(:, c).
  Eigen::MatrixXcd W(coset.dim_m(), nh);
  for (int c = 0; c < nh; ++c) W.col(c) = Gc * (Jc * hol[c].coords);
  std::vector<Eigen::RowVectorXcd> M(nh * nh);
  for (int a = 0; a < nh; ++a)
    for (int b = 0; b < nh; ++b) {
      const Eigen::VectorXcd br = p10 * coset.bracket_m(hol[a].coords, hol[b].coords);
      M[a * nh + b] = br.transpose() * W;
    }
  HktResidual r;
  for (int a = 0; a < nh; ++a)
    for (int b = a + 1; b < nh; ++b)
      for (int c = b + 1; c < nh; ++c) {
        const Complex v = M[a * nh + b][c] + M[c * nh + a][b] + M[b * nh + c][a];
        r.raw = std::max(r.raw, std::abs(v));
      }
  const double nrm = operator_norm(g);
  r.relative = nrm > 0 ? r.raw / nrm : r.raw;
  return r;
}

double naturally_reductive_residual(const CosetSpace& coset, const InvariantMetric& g) {
  double worst = 0;
  for (int a = 0; a < coset.dim_m(); ++a) {
    const Eigen::MatrixXd& A = coset.ad_m(a);
    worst = std::max(worst, (A.transpose() * g.gram + g.gram * A).cwiseAbs().maxCoeff());
  }
  return worst;
}

double invariance_residual(const CosetSpace& coset, const InvariantMetric& g) {
  double worst = 0;
  for (int k = 0; k < coset.dim_l(); ++k) {
    const Eigen::MatrixXd& A = coset.ad_l(k);
    worst = std::max(worst, (A.transpose() * g.gram + g.gram * A).cwiseAbs().maxCoeff());
  }
  return worst;
}

namespace {

// Frobenius-orthonormal basis of symmetric n x n matrices.
std::vector<Eigen::MatrixXd> symmetric_basis(int n) {
  std::vector<Eigen::MatrixXd> out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
      if (i == j) {
        S(i, i) = 1;
      } else {
        S(i, j) = S(j, i) = 1 / std::sqrt(2.0);
      }
      out.push_back(S);
    }
  return out;
}

Eigen::VectorXd flat(const Eigen::MatrixXd& A) { return Eigen::Map<const Eigen::VectorXd>(A.data(), A.size()); }

void remove_span(Eigen::MatrixXd& S, const std::vector<Eigen::MatrixXd>& basis) {
  for (const auto& B : basis) S -= (S.cwiseProduct(B)).sum() * B;
}

}  // namespace

std::vector<Eigen::MatrixXd> hyperhermitian_invariant_basis(const CosetSpace& coset, const HypercomplexStructure& h,
                                                            bool drop_layers) {
  const int n = coset.dim_m();
  const auto sym = symmetric_basis(n);
  const int ns = static_cast<int>(sym.size());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(ns, ns);
  auto add = [&](auto&& op) {
    Eigen::MatrixXd A(n * n, ns);
    for (int k = 0; k < ns; ++k) A.col(k) = flat(op(sym[k]));
    gram.noalias() += A.transpose() * A;
  };
  add([&](const Eigen::MatrixXd& S) { return Eigen::MatrixXd(h.I.transpose() * S * h.I - S); });
  add([&](const Eigen::MatrixXd& S) { return Eigen::MatrixXd(h.J.transpose() * S * h.J - S); });
  for (int k = 0; k < coset.dim_l(); ++k) {
    const Eigen::MatrixXd& U = coset.ad_l(k);
    add([&](const Eigen::MatrixXd& S) { return Eigen::MatrixXd(U.transpose() * S + S * U); });
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Eigen::MatrixXd> kernel;
  for (int c = 0; c < ns; ++c)
    if (es.eigenvalues()[c] < 1e-10 * scale) {
      Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
      for (int k = 0; k < ns; ++k) S += es.eigenvectors()(k, c) * sym[k];
      kernel.push_back(S);
    }
  if (!drop_layers) return kernel;

  std::vector<Eigen::MatrixXd> layers;
  for (int j = 0; j < coset.m(); ++j) {
    Eigen::MatrixXd L = reference_metric(coset).gram;
    const auto& cl = coset.layers()[j];
    for (int b = 0; b < n; ++b)
      if (b < cl.begin || b >= cl.end) L(b, b) = 0;
    remove_span(L, layers);
    L /= L.norm();
    layers.push_back(L);
  }
  std::vector<Eigen::MatrixXd> out;
  for (auto S : kernel) {
    remove_span(S, layers);
    remove_span(S, out);
    const double nrm = S.norm();
    if (nrm > 1e-8) out.push_back(S / nrm);
  }
  return out;
}

std::optional<InvariantMetric> perturbed_metric(const CosetSpace& coset, const HypercomplexStructure& h,
                                                const InvariantMetric& base, double size, std::uint64_t seed) {
  const auto basis = hyperhermitian_invariant_basis(coset, h, true);
  if (basis.empty()) return std::nullopt;
  const int n = coset.dim_m();
  // Blocks: the quaternionic core of each layer, and each f root.
  std::vector<int> block(n, -1);
  for (int b = 0; b < n; ++b) {
    const auto& v = coset.m_basis()[b];
    block[b] = (v.kind == BasisKind::FRe || v.kind == BasisKind::FIm) ? 1000 + v.root : v.layer;
  }
  const Eigen::MatrixXd href = reference_metric(coset).gram;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd S;
  bool found = false;
  for (int attempt = 0; attempt < 256 && !found; ++attempt) {
    const int a = pick(rng), b = pick(rng);
    if (block[a] == block[b]) continue;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    const double w = normal(rng) / std::sqrt(href(a, a) * href(b, b));
    C(a, b) = C(b, a) = w;
    S = Eigen::MatrixXd::Zero(n, n);
    for (const auto& B : basis) S += C.cwiseProduct(B).sum() * B;
    found = S.norm() > 1e-8 * std::abs(w);
  }
  if (!found) {
    S = Eigen::MatrixXd::Zero(n, n);
    for (const auto& B : basis) S += normal(rng) * B;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  S /= es.eigenvalues().cwiseAbs().maxCoeff();
  InvariantMetric g;
  g.gram = base.gram + size * operator_norm(base) * S;
  return g;
}

}  // namespace joycehkt
