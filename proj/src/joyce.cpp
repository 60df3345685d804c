#include "joycehkt/joyce.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace joycehkt {

namespace {

constexpr double kSpanTol = 1e-9;

double gnorm(const ToralVector& v, const Eigen::MatrixXd& G) { return std::sqrt(std::max(0.0, v.dot(G * v))); }

// G-orthonormal basis of span(vectors); dependent vectors are dropped.
std::vector<ToralVector> orthonormal_span(const std::vector<ToralVector>& vectors, const Eigen::MatrixXd& G,
                                          const std::vector<ToralVector>& against = {}) {
  std::vector<ToralVector> out;
  for (ToralVector v : vectors) {
    const double n0 = gnorm(v, G);
    if (n0 < kSpanTol) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : against) v -= u.dot(G * v) * u;
      for (const auto& u : out) v -= u.dot(G * v) * u;
    }
    const double n = gnorm(v, G);
    if (n / n0 < 1e-7) continue;
    out.push_back(v / n);
  }
  return out;
}

double distance_to_span(const ToralVector& v, const std::vector<ToralVector>& basis, const Eigen::MatrixXd& G) {
  ToralVector r = v;
  for (const auto& u : basis) r -= u.dot(G * r) * u;
  return gnorm(r, G) / std::max(gnorm(v, G), 1e-300);
}

ToralVector coroot(const LieAlgebra& g, int root) {
  const auto& m = g.model();
  ToralVector v = ToralVector::Zero(m.center_dim() + m.rank());
  for (int i = 0; i < m.rank(); ++i) v[m.center_dim() + i] = m.root(root)[i];
  return v;
}

// alpha(v/i) for a toral vector v.
double root_on_toral(const LieAlgebra& g, int root, const ToralVector& v) {
  const auto& m = g.model();
  double s = 0;
  for (int i = 0; i < m.rank(); ++i) {
    RootCoords ai(m.rank(), 0);
    ai[i] = 1;
    s += boost::rational_cast<double>(m.pairing(m.root(root), ai)) * v[m.center_dim() + i];
  }
  return s;
}

// Irreducible component of `roots` containing `seed`.
std::vector<int> component_containing(const AlgebraModel& m, const std::vector<int>& roots, int seed) {
  std::vector<int> comp{seed};
  std::vector<char> taken(roots.size(), 0);
  for (std::size_t k = 0; k < comp.size(); ++k)
    for (std::size_t i = 0; i < roots.size(); ++i)
      if (!taken[i] && m.pairing(comp[k], roots[i]) != Rational(0)) {
        taken[i] = 1;
        comp.push_back(roots[i]);
      }
  std::sort(comp.begin(), comp.end());
  comp.erase(std::unique(comp.begin(), comp.end()), comp.end());
  return comp;
}

std::string fmt_root(const AlgebraModel& m, int a) { return m.label(a); }

}  // namespace

Eigen::MatrixXd toral_gram(const LieAlgebra& g) {
  const auto& m = g.model();
  const int l = m.center_dim(), r = m.rank();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(l + r, l + r);
  G.topLeftCorner(l, l).setIdentity();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) G(l + i, l + j) = boost::rational_cast<double>(m.simple_gram()[i][j]);
  return G;
}

Element toral_element(const LieAlgebra& g, const ToralVector& v) {
  if (v.size() != g.model().center_dim() + g.model().rank())
    throw InvalidInput("toral vector has " + std::to_string(v.size()) + " entries, expected " +
                       std::to_string(g.model().center_dim() + g.model().rank()));
  Element x = g.zero();
  for (int k = 0; k < v.size(); ++k) x[k] = Complex(0, v[k]);
  return x;
}

JoyceDecomposition joyce_decompose(std::shared_ptr<const LieAlgebra> algebra, TieBreak tie) {
  if (!algebra) throw InvalidInput("null algebra");
  const auto& m = algebra->model();
  JoyceDecomposition dec;
  dec.algebra = algebra;
  std::vector<int> theta(m.num_roots());
  std::iota(theta.begin(), theta.end(), 0);
  while (true) {
    int best = -1;
    for (int a : theta) {
      if (!m.is_positive(a)) continue;
      if (best < 0 || m.height(a) > m.height(best) ||
          (tie == TieBreak::LastIndex && m.height(a) == m.height(best)))
        best = a;
    }
    if (best < 0) break;
    JoyceLayer layer;
    layer.alpha = best;
    layer.theta_prev = theta;
    std::vector<int> next;
    for (int a : theta) {
      const Rational p = m.pairing(best, a);
      if (p > Rational(0) && m.is_positive(a)) layer.r_plus.push_back(a);
      if (p == Rational(0)) next.push_back(a);
    }
    dec.layers.push_back(std::move(layer));
    theta = std::move(next);
  }
  dec.theta_final = theta;

  const Eigen::MatrixXd G = toral_gram(*algebra);
  const int dim = m.center_dim() + m.rank();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(std::max(1, dec.d()), dim);
  for (int j = 0; j < dec.d(); ++j)
    for (int i = 0; i < m.rank(); ++i) {
      RootCoords ai(m.rank(), 0);
      ai[i] = 1;
      C(j, m.center_dim() + i) = boost::rational_cast<double>(m.pairing(m.root(dec.layers[j].alpha), ai));
    }
  std::vector<ToralVector> candidates;
  if (dec.d() == 0) {
    for (int k = 0; k < dim; ++k) candidates.push_back(ToralVector::Unit(dim, k));
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
    lu.setThreshold(1e-10);
    const Eigen::MatrixXd ker = lu.kernel();
    if (lu.dimensionOfKernel() > 0)
      for (int c = 0; c < ker.cols(); ++c) candidates.push_back(ker.col(c));
  }
  dec.b_d = orthonormal_span(candidates, G);
  return dec;
}

std::string check_decomposition(const JoyceDecomposition& dec) {
  const auto& m = dec.algebra->model();
  std::ostringstream err;
  for (int i = 0; i < dec.d(); ++i)
    for (int j = i + 1; j < dec.d(); ++j) {
      const int a = dec.layers[i].alpha, b = dec.layers[j].alpha;
      if (m.sum(a, b) || m.sum(a, m.negative(b)) || b == m.negative(a)) {
        err << "alpha_" << i + 1 << " and alpha_" << j + 1 << " are not strongly orthogonal";
        return err.str();
      }
    }
  std::vector<int> seen(m.num_roots(), 0);
  for (int j = 0; j < dec.d(); ++j) {
    const auto& L = dec.layers[j];
    const Rational n2 = m.norm2(L.alpha);
    for (int g : L.r_plus) {
      ++seen[g];
      if (m.component_of(g) != m.component_of(L.alpha)) return "layer root outside the component of alpha_j";
      if (g == L.alpha) continue;
      if (Rational(2) * m.pairing(g, L.alpha) / n2 != Rational(1)) return "Cartan number of a layer root is not 1";
      if (m.sum(g, L.alpha)) return "gamma + alpha_j is a root for a layer root gamma";
      if (!m.sum(g, m.negative(L.alpha))) return "gamma - alpha_j is not a root for a layer root gamma";
    }
  }
  for (int a : dec.theta_final) ++seen[a];
  for (int a = 0; a < m.num_positive(); ++a)
    if (seen[a] != 1) return "layers do not partition the positive roots";
  return {};
}

// ---------------------------------------------------------------------------

std::optional<ToralVector> canonical_frame_direction(const JoyceDecomposition& dec, int j) {
  const auto& g = *dec.algebra;
  const auto& model = g.model();
  const Eigen::MatrixXd G = toral_gram(g);
  const auto& L = dec.layers.at(j);
  const auto comp = component_containing(model, L.theta_prev, L.alpha);
  const std::vector<int>& next = (j + 1 < dec.d()) ? dec.layers[j + 1].theta_prev : dec.theta_final;
  std::vector<ToralVector> span_c, removed{coroot(g, L.alpha)};
  for (int a : comp) {
    span_c.push_back(coroot(g, a));
    if (std::find(next.begin(), next.end(), a) != next.end()) removed.push_back(coroot(g, a));
  }
  const auto dir = orthonormal_span(span_c, G, orthonormal_span(removed, G));
  if (dir.size() != 1) return std::nullopt;
  ToralVector x = dir[0];
  double sign_probe = 0;
  if (L.r_plus.size() > 1) sign_probe = root_on_toral(g, L.r_plus.front() == L.alpha ? L.r_plus[1] : L.r_plus[0], x);
  if (std::abs(sign_probe) < 1e-12)
    for (int k = 0; k < x.size() && sign_probe == 0; ++k)
      if (std::abs(x[k]) > 1e-12) sign_probe = x[k];
  if (sign_probe < 0) x = -x;
  return x;
}

CosetSpace::CosetSpace(const JoyceDecomposition& dec, const IsotropySpec& spec) : algebra_(dec.algebra), dec_(dec) {
  const LieAlgebra& g = *algebra_;
  const auto& model = g.model();
  const Eigen::MatrixXd G = toral_gram(g);
  const int d = dec.d();
  if (d == 0) throw InvalidInput("the algebra has no roots; no Joyce layers");
  if (spec.m < 1 || spec.m > d)
    throw InvalidInput("retained layer count m = " + std::to_string(spec.m) + " outside 1.." + std::to_string(d));
  iso_.m = spec.m;
  const int m = spec.m;

  // v = b_d ∩ l
  if (spec.v_subspace) {
    for (const auto& v : *spec.v_subspace)
      if (v.size() != G.rows() || distance_to_span(v, dec.b_d, G) > 1e-8)
        throw InvalidInput("isotropy vector does not lie in the final centralizer b_d");
    iso_.v_basis = orthonormal_span(*spec.v_subspace, G);
    if (iso_.v_basis.size() != spec.v_subspace->size()) throw InvalidInput("isotropy toral vectors are dependent");
  } else {
    std::vector<ToralVector> s;
    for (int a : (m < d ? dec.layers[m].theta_prev : dec.theta_final)) s.push_back(coroot(g, a));
    const auto sbasis = orthonormal_span(s, G);
    // b_d ∩ span(s): project b_d onto span(s) and keep the fixed part.
    const int nb = static_cast<int>(dec.b_d.size());
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(nb, nb);
    for (int i = 0; i < nb; ++i) {
      ToralVector pi = ToralVector::Zero(G.rows());
      for (const auto& u : sbasis) pi += u.dot(G * dec.b_d[i]) * u;
      for (int k = 0; k < nb; ++k) Q(k, i) = dec.b_d[k].dot(G * pi);
    }
    std::vector<ToralVector> v;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (nb > 0) es.compute(Q);
    for (int c = 0; c < nb; ++c)
      if (std::abs(es.eigenvalues()[c] - 1.0) < 1e-8) {
        ToralVector x = ToralVector::Zero(G.rows());
        for (int k = 0; k < nb; ++k) x += es.eigenvectors()(k, c) * dec.b_d[k];
        v.push_back(x);
      }
    iso_.v_basis = orthonormal_span(v, G);
  }
  if (spec.trivial) {
    if (m != d || !iso_.v_basis.empty())
      throw InvalidInput("trivial isotropy requested, but the decomposition shape forces a nontrivial isotropy "
                         "(m = " + std::to_string(m) + ", d = " + std::to_string(d) +
                         ", dim v = " + std::to_string(iso_.v_basis.size()) + ")");
  }
  const auto u_basis = orthonormal_span(dec.b_d, G, iso_.v_basis);
  if (static_cast<int>(u_basis.size()) != m)
    throw InvalidInput("dim u = " + std::to_string(u_basis.size()) + " but m = " + std::to_string(m) +
                       "; the isotropy does not have the required shape");

  if (spec.u_frame) {
    if (static_cast<int>(spec.u_frame->size()) != m)
      throw InvalidInput("u frame has " + std::to_string(spec.u_frame->size()) + " vectors, expected m = " +
                         std::to_string(m));
    for (const auto& x : *spec.u_frame)
      if (x.size() != G.rows() || distance_to_span(x, u_basis, G) > 1e-8)
        throw InvalidInput("u frame vector is not in u = b_d minus v (or not orthogonal to v)");
    if (orthonormal_span(*spec.u_frame, G).size() != spec.u_frame->size())
      throw InvalidInput("u frame vectors are linearly dependent");
    iso_.u_frame = *spec.u_frame;
  } else {
    for (int j = 0; j < m; ++j) {
      const auto dir = canonical_frame_direction(dec, j);
      if (!dir || distance_to_span(*dir, u_basis, G) > 1e-8)
        throw InvalidInput("no canonical frame vector for layer " + std::to_string(j + 1) +
                           "; supply an explicit u frame");
      const double n2 = boost::rational_cast<double>(model.norm2(dec.layers[j].alpha));
      iso_.u_frame.push_back(*dir * std::sqrt(4.0 / n2));
    }
  }

  // m basis, layer by layer.
  const int n = g.dimension();
  for (int j = 0; j < m; ++j) {
    const auto& L = dec.layers[j];
    CosetLayer cl;
    cl.alpha = L.alpha;
    cl.norm2 = boost::rational_cast<double>(model.norm2(L.alpha));
    for (int r : L.r_plus)
      if (r != L.alpha) cl.f_roots.push_back(r);
    cl.begin = dim_m();
    const std::string tag = std::to_string(j + 1);
    const double a = std::sqrt(cl.norm2);
    const int na = model.negative(L.alpha);
    cl.x1 = dim_m();
    m_basis_.push_back({toral_element(g, iso_.u_frame[j]), "X1^" + tag, j, BasisKind::X1, -1});
    cl.x2 = dim_m();
    m_basis_.push_back({Complex(0, 2.0 / cl.norm2) * g.t(L.alpha), "X2^" + tag, j, BasisKind::X2, L.alpha});
    cl.x3 = dim_m();
    m_basis_.push_back({(std::sqrt(2.0) / a) * (g.E(L.alpha) - g.E(na)), "X3^" + tag, j, BasisKind::X3, L.alpha});
    cl.x4 = dim_m();
    m_basis_.push_back(
        {Complex(0, std::sqrt(2.0) / a) * (g.E(L.alpha) + g.E(na)), "X4^" + tag, j, BasisKind::X4, L.alpha});
    for (int r : cl.f_roots) {
      const int nr = model.negative(r);
      m_basis_.push_back({(g.E(r) - g.E(nr)) / std::sqrt(2.0), "Re[" + fmt_root(model, r) + "]", j, BasisKind::FRe, r});
      m_basis_.push_back(
          {Complex(0, 1.0 / std::sqrt(2.0)) * (g.E(r) + g.E(nr)), "Im[" + fmt_root(model, r) + "]", j, BasisKind::FIm, r});
    }
    cl.end = dim_m();
    layers_.push_back(cl);
  }
  for (std::size_t k = 0; k < iso_.v_basis.size(); ++k)
    l_basis_.push_back({toral_element(g, iso_.v_basis[k]), "V" + std::to_string(k + 1), -1, BasisKind::Toral, -1});
  for (int j = m; j < d; ++j) {
    const auto& L = dec.layers[j];
    const int na = model.negative(L.alpha);
    const double a = std::sqrt(boost::rational_cast<double>(model.norm2(L.alpha)));
    const std::string tag = std::to_string(j + 1);
    l_basis_.push_back({Complex(0, 1.0 / (a * a)) * g.t(L.alpha), "T^" + tag, j, BasisKind::LRoot, L.alpha});
    l_basis_.push_back({(g.E(L.alpha) - g.E(na)) / std::sqrt(2.0), "Re[" + fmt_root(model, L.alpha) + "]", j,
                        BasisKind::LRoot, L.alpha});
    l_basis_.push_back({Complex(0, 1.0 / std::sqrt(2.0)) * (g.E(L.alpha) + g.E(na)), "Im[" + fmt_root(model, L.alpha) + "]",
                        j, BasisKind::LRoot, L.alpha});
    for (int r : L.r_plus) {
      if (r == L.alpha) continue;
      const int nr = model.negative(r);
      l_basis_.push_back({(g.E(r) - g.E(nr)) / std::sqrt(2.0), "Re[" + fmt_root(model, r) + "]", j, BasisKind::LRoot, r});
      l_basis_.push_back(
          {Complex(0, 1.0 / std::sqrt(2.0)) * (g.E(r) + g.E(nr)), "Im[" + fmt_root(model, r) + "]", j, BasisKind::LRoot, r});
    }
  }
  if (dim_m() + dim_l() != n)
    throw InternalError("coset basis has " + std::to_string(dim_m() + dim_l()) + " vectors, algebra has dimension " +
                        std::to_string(n));
  basis_.resize(n, n);
  for (int k = 0; k < dim_m(); ++k) basis_.col(k) = m_basis_[k].element;
  for (int k = 0; k < dim_l(); ++k) basis_.col(dim_m() + k) = l_basis_[k].element;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(basis_);
  if (!lu.isInvertible()) throw InternalError("coset basis is singular");
  inverse_ = lu.inverse();

  // Structure tables.
  const int N = dim_m(), L = dim_l();
  std::vector<Eigen::MatrixXcd> all(n, Eigen::MatrixXcd::Zero(n, n));
  double imag = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const Eigen::VectorXcd c = inverse_ * g.bracket(basis_.col(a), basis_.col(b));
      all[a].col(b) = c;
      all[b].col(a) = -c;
      imag = std::max(imag, c.imag().cwiseAbs().maxCoeff());
    }
  if (imag > 1e-9) throw InternalError("structure constants of the real basis are not real");
  for (int a = 0; a < N; ++a) {
    ad_m_.push_back(all[a].topLeftCorner(N, N).real());
    to_l_.push_back(all[a].bottomLeftCorner(L, N).real());
  }
  double l_closure = 0;
  for (int k = 0; k < L; ++k) {
    ad_l_.push_back(all[N + k].topLeftCorner(N, N).real());
    leak_ = std::max(leak_, L > 0 && N > 0 ? all[N + k].bottomLeftCorner(L, N).cwiseAbs().maxCoeff() : 0.0);
    if (L > 0 && N > 0) l_closure = std::max(l_closure, all[N + k].topRightCorner(N, L).cwiseAbs().maxCoeff());
  }
  if (l_closure > 1e-8)
    throw InvalidInput("the isotropy subspace is not a subalgebra (bracket leaves l by " + std::to_string(l_closure) +
                       ")");
  if (leak_ > 1e-8) throw InvalidInput("m is not ad(l)-invariant");

  // Root bookkeeping and the (1,0) basis.
  root_layer_.assign(model.num_roots(), -1);
  for (int j = 0; j < m; ++j)
    for (int r : dec.layers[j].r_plus) {
      root_layer_[r] = j;
      root_layer_[model.negative(r)] = j;
      hat_positive_.push_back(r);
    }
  std::sort(hat_positive_.begin(), hat_positive_.end());
  for (int j = 0; j < m; ++j) {
    const auto& cl = layers_[j];
    Eigen::VectorXcd h = m_part(g.t(cl.alpha));
    h[cl.x1] += cl.norm2 / 2.0;
    hol_.push_back({h, "H_" + std::to_string(j + 1), j, -1});
  }
  for (int r : hat_positive_) hol_.push_back({root_vector(r), "E[" + fmt_root(model, r) + "]", root_layer_[r], r});
}

Element CosetSpace::from_m(const Eigen::VectorXcd& c) const { return basis_.leftCols(dim_m()) * c; }

Eigen::VectorXcd CosetSpace::bracket_m(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim_m());
  for (int a = 0; a < dim_m(); ++a)
    if (x[a] != 0.0) out += x[a] * (ad_m_[a].cast<Complex>() * y);
  return out;
}

Eigen::VectorXcd CosetSpace::bracket_l(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim_l());
  for (int a = 0; a < dim_m(); ++a)
    if (x[a] != 0.0) out += x[a] * (to_l_[a].cast<Complex>() * y);
  return out;
}

Eigen::MatrixXcd CosetSpace::ad_m(const Eigen::VectorXcd& x) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_m(), dim_m());
  for (int a = 0; a < dim_m(); ++a)
    if (x[a] != 0.0) out += x[a] * ad_m_[a].cast<Complex>();
  return out;
}

Eigen::MatrixXcd CosetSpace::ad_l(const Eigen::VectorXcd& u) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_m(), dim_m());
  for (int k = 0; k < dim_l(); ++k)
    if (u[k] != 0.0) out += u[k] * ad_l_[k].cast<Complex>();
  return out;
}

Eigen::VectorXcd CosetSpace::root_vector(int root) const {
  if (root_layer_.at(root) < 0) throw InvalidInput("root is not in R-hat");
  return m_part(algebra_->E(root));
}

std::vector<int> CosetSpace::toral_m_indices() const {
  std::vector<int> out;
  for (const auto& L : layers_) {
    out.push_back(L.x1);
    out.push_back(L.x2);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Complex> default_k(const CosetSpace& coset) {
  std::vector<Complex> k;
  for (const auto& L : coset.layers()) k.emplace_back(1.0 / std::sqrt(2.0 * L.norm2), 0.0);
  return k;
}

std::pair<Element, Element> x3_x4(const CosetSpace& coset, int layer, Complex k) {
  const auto& g = coset.algebra();
  const int a = coset.layers().at(layer).alpha;
  const int na = g.model().negative(a);
  const Element x3 = 2.0 * (std::conj(k) * g.E(a) - k * g.E(na));
  const Element x4 = Complex(0, 2.0) * (std::conj(k) * g.E(a) + k * g.E(na));
  return {x3, x4};
}

HypercomplexStructure hypercomplex_structure(const CosetSpace& coset, std::optional<std::vector<Complex>> k_in,
                                             bool validate) {
  const int N = coset.dim_m();
  HypercomplexStructure H;
  H.k = k_in ? *k_in : default_k(coset);
  if (static_cast<int>(H.k.size()) != coset.m())
    throw InvalidInput("expected " + std::to_string(coset.m()) + " k parameters, got " + std::to_string(H.k.size()));
  H.I = Eigen::MatrixXd::Zero(N, N);
  H.J = Eigen::MatrixXd::Zero(N, N);
  H.layer_of.assign(N, -1);
  for (int j = 0; j < coset.m(); ++j) {
    const auto& L = coset.layers()[j];
    const double target = 1.0 / (2.0 * L.norm2);
    if (validate && std::abs(std::norm(H.k[j]) - target) > 1e-9 * target)
      throw InvalidInput("k_" + std::to_string(j + 1) + " violates |k|^2 = 1/(2|alpha|^2)");
    for (int b = L.begin; b < L.end; ++b) H.layer_of[b] = j;
    const auto [x3, x4] = x3_x4(coset, j, H.k[j]);
    const Eigen::VectorXcd c3 = coset.m_part(x3), c4 = coset.m_part(x4);
    if (validate) {
      const auto& g = coset.algebra();
      const Element& x2 = coset.m_basis()[L.x2].element;
      const double res = std::max({(g.bracket(x2, x3) - 2.0 * x4).cwiseAbs().maxCoeff(),
                                   (g.bracket(x3, x4) - 2.0 * x2).cwiseAbs().maxCoeff(),
                                   (g.bracket(x4, x2) - 2.0 * x3).cwiseAbs().maxCoeff()});
      if (res > 1e-9) throw InvalidInput("su(2) basis of layer " + std::to_string(j + 1) + " fails the bracket relations");
    }
    // I: X1 -> X2, X3 -> X4 (also for X3(k), X4(k)); ad(X2) on f.
    H.I(L.x2, L.x1) = 1;
    H.I(L.x1, L.x2) = -1;
    H.I(L.x4, L.x3) = 1;
    H.I(L.x3, L.x4) = -1;
    // J on d + RX1 in the frame (X1, X2, X3(k), X4(k)).
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    const int idx[4] = {L.x1, L.x2, L.x3, L.x4};
    M(0, 0) = 1;
    M(1, 1) = 1;
    for (int r = 0; r < 4; ++r) {
      M(r, 2) += c3[idx[r]].real();
      M(r, 3) += c4[idx[r]].real();
    }
    Eigen::Matrix4d Jstd = Eigen::Matrix4d::Zero();
    Jstd(2, 0) = 1;   // X1 -> X3
    Jstd(0, 2) = -1;  // X3 -> -X1
    Jstd(3, 1) = -1;  // X2 -> -X4
    Jstd(1, 3) = 1;   // X4 -> X2
    const Eigen::Matrix4d Jblock = M * Jstd * M.inverse();
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) H.J(idx[r], idx[c]) = Jblock(r, c);
    const Eigen::MatrixXd ad2 = coset.ad_m(L.x2);
    const Eigen::MatrixXd ad3 = coset.ad_m(c3).real();
    for (int b = L.x4 + 1; b < L.end; ++b) {
      H.I.col(b) = ad2.col(b);
      H.J.col(b) = ad3.col(b);
    }
  }
  H.K = H.I * H.J;
  return H;
}

Eigen::MatrixXcd projector_10(const Eigen::MatrixXd& P) {
  const int N = static_cast<int>(P.rows());
  return 0.5 * (Eigen::MatrixXcd::Identity(N, N) - Complex(0, 1) * P.cast<Complex>());
}

Eigen::MatrixXcd projector_01(const Eigen::MatrixXd& P) {
  const int N = static_cast<int>(P.rows());
  return 0.5 * (Eigen::MatrixXcd::Identity(N, N) + Complex(0, 1) * P.cast<Complex>());
}

double HypercomplexReport::max_residual() const {
  return std::max({i_squared, j_squared, k_squared, anticommute, k_is_ij, commute_l_i, commute_l_j, closure_i,
                   closure_j, k_normalization, su2_brackets});
}

namespace {

double closure_residual(const CosetSpace& coset, const Eigen::MatrixXd& P) {
  const Eigen::MatrixXcd p10 = projector_10(P), p01 = projector_01(P);
  const int N = coset.dim_m();
  double worst = 0;
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b) {
      const Eigen::VectorXcd w = p01 * coset.bracket_m(p10.col(a), p10.col(b));
      worst = std::max(worst, w.cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace

HypercomplexReport verify_hypercomplex(const CosetSpace& coset, const HypercomplexStructure& h) {
  const int N = coset.dim_m();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(N, N);
  auto mx = [](const Eigen::MatrixXd& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; };
  HypercomplexReport r;
  r.i_squared = mx(h.I * h.I + id);
  r.j_squared = mx(h.J * h.J + id);
  r.k_squared = mx(h.K * h.K + id);
  r.anticommute = mx(h.I * h.J + h.J * h.I);
  r.k_is_ij = mx(h.K - h.I * h.J);
  for (int k = 0; k < coset.dim_l(); ++k) {
    const auto& A = coset.ad_l(k);
    r.commute_l_i = std::max(r.commute_l_i, mx(A * h.I - h.I * A));
    r.commute_l_j = std::max(r.commute_l_j, mx(A * h.J - h.J * A));
  }
  r.closure_i = closure_residual(coset, h.I);
  r.closure_j = closure_residual(coset, h.J);
  const auto& g = coset.algebra();
  for (int j = 0; j < coset.m(); ++j) {
    const auto& L = coset.layers()[j];
    r.k_normalization = std::max(r.k_normalization, std::abs(std::norm(h.k[j]) * 2.0 * L.norm2 - 1.0));
    const auto [x3, x4] = x3_x4(coset, j, h.k[j]);
    const Element& x2 = coset.m_basis()[L.x2].element;
    r.su2_brackets = std::max({r.su2_brackets, (g.bracket(x2, x3) - 2.0 * x4).cwiseAbs().maxCoeff(),
                               (g.bracket(x3, x4) - 2.0 * x2).cwiseAbs().maxCoeff(),
                               (g.bracket(x4, x2) - 2.0 * x3).cwiseAbs().maxCoeff()});
  }
  return r;
}

}  // namespace joycehkt
