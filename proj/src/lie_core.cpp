#include "joycehkt/lie_core.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace joycehkt {

namespace {

using Gram = std::vector<std::vector<Rational>>;

Gram zero_gram(int n) { return Gram(n, std::vector<Rational>(n, Rational(0))); }

void chain(Gram& g, int from, int to) {
  for (int i = from; i + 1 < to; ++i) g[i][i + 1] = g[i + 1][i] = Rational(-1);
}

// Gram matrix of simple roots in an integral normalization; the Killing
// normalization is applied afterwards.
Gram base_gram(SimpleType type, int n) {
  Gram g = zero_gram(n);
  for (int i = 0; i < n; ++i) g[i][i] = Rational(2);
  switch (type) {
    case SimpleType::A:
      chain(g, 0, n);
      break;
    case SimpleType::B:  // a_n = e_n short
      chain(g, 0, n);
      g[n - 1][n - 1] = Rational(1);
      break;
    case SimpleType::C:  // a_n = 2 e_n long
      chain(g, 0, n - 1);
      g[n - 1][n - 1] = Rational(4);
      g[n - 2][n - 1] = g[n - 1][n - 2] = Rational(-2);
      break;
    case SimpleType::D:  // a_n = e_{n-1} + e_n
      chain(g, 0, n - 1);
      g[n - 3][n - 1] = g[n - 1][n - 3] = Rational(-1);
      break;
    case SimpleType::E6:
    case SimpleType::E7:
    case SimpleType::E8: {
      // Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4.
      auto link = [&](int a, int b) { g[a - 1][b - 1] = g[b - 1][a - 1] = Rational(-1); };
      link(1, 3);
      link(3, 4);
      link(4, 5);
      link(2, 4);
      for (int k = 5; k < n; ++k) link(k, k + 1);
      break;
    }
    case SimpleType::F4:
      g[2][2] = g[3][3] = Rational(1);
      g[0][1] = g[1][0] = Rational(-1);
      g[1][2] = g[2][1] = Rational(-1);
      g[2][3] = g[3][2] = Rational(-1, 2);
      break;
    case SimpleType::G2:  // a_1 short
      g[0][0] = Rational(2);
      g[1][1] = Rational(6);
      g[0][1] = g[1][0] = Rational(-3);
      break;
  }
  return g;
}

int fixed_rank(SimpleType t) {
  switch (t) {
    case SimpleType::E6: return 6;
    case SimpleType::E7: return 7;
    case SimpleType::E8: return 8;
    case SimpleType::F4: return 4;
    case SimpleType::G2: return 2;
    default: return 0;
  }
}

Rational pair_with(const Gram& g, const RootCoords& x, const RootCoords& y) {
  Rational s(0);
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      if (y[j] != 0) s += g[i][j] * Rational(x[i] * y[j]);
  }
  return s;
}

// Positive roots of one simple factor, local simple-root coordinates.
std::vector<RootCoords> positive_roots(const Gram& g) {
  const int n = static_cast<int>(g.size());
  std::set<RootCoords> all;
  std::vector<RootCoords> level;
  for (int i = 0; i < n; ++i) {
    RootCoords c(n, 0);
    c[i] = 1;
    level.push_back(c);
    all.insert(c);
  }
  std::vector<RootCoords> out = level;
  while (!level.empty()) {
    std::set<RootCoords> next;
    for (const auto& beta : level) {
      for (int i = 0; i < n; ++i) {
        RootCoords probe = beta;
        int p = 0;
        while (true) {
          probe[i] -= 1;
          if (!all.count(probe)) break;
          ++p;
        }
        RootCoords ai(n, 0);
        ai[i] = 1;
        const Rational cartan = Rational(2) * pair_with(g, beta, ai) / g[i][i];
        if (cartan.denominator() != 1) throw InternalError("non-integral Cartan number");
        const long long q = p - cartan.numerator();
        if (q >= 1) {
          RootCoords up = beta;
          up[i] += 1;
          next.insert(up);
        }
      }
    }
    level.assign(next.begin(), next.end());
    for (const auto& r : level) {
      all.insert(r);
      out.push_back(r);
    }
  }
  return out;
}

int coord_height(const RootCoords& c) {
  int h = 0;
  for (int v : c) h += v;
  return h;
}

RootCoords add(const RootCoords& a, const RootCoords& b, int sb = 1) {
  RootCoords r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + sb * b[i];
  return r;
}

RootCoords neg(const RootCoords& a) {
  RootCoords r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

}  // namespace

std::string to_string(SimpleType t) {
  switch (t) {
    case SimpleType::A: return "A";
    case SimpleType::B: return "B";
    case SimpleType::C: return "C";
    case SimpleType::D: return "D";
    case SimpleType::E6: return "E6";
    case SimpleType::E7: return "E7";
    case SimpleType::E8: return "E8";
    case SimpleType::F4: return "F4";
    case SimpleType::G2: return "G2";
  }
  return "?";
}

SimpleType parse_simple_type(const std::string& label) {
  static const std::map<std::string, SimpleType> table = {
      {"A", SimpleType::A},   {"B", SimpleType::B},   {"C", SimpleType::C},   {"D", SimpleType::D},
      {"E6", SimpleType::E6}, {"E7", SimpleType::E7}, {"E8", SimpleType::E8}, {"F4", SimpleType::F4},
      {"F", SimpleType::F4},  {"G2", SimpleType::G2}, {"G", SimpleType::G2}};
  auto it = table.find(label);
  if (it == table.end()) throw InvalidInput("unknown type label '" + label + "'");
  return it->second;
}

int AlgebraModel::height(int i) const {
  const int h = coord_height(roots_.at(i));
  return h;
}

std::optional<int> AlgebraModel::find(const RootCoords& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> AlgebraModel::sum(int a, int b) const {
  const int s = sum_table_[a * num_roots() + b];
  if (s < 0) return std::nullopt;
  return s;
}

Rational AlgebraModel::pairing(const RootCoords& x, const RootCoords& y) const { return pair_with(gram_, x, y); }

std::vector<int> AlgebraModel::epsilon(int a) const {
  const auto& f = factors_.at(component_.at(a));
  if (f.type != SimpleType::A) return {};
  std::vector<int> eps(f.rank + 1, 0);
  for (int i = 0; i < f.rank; ++i) {
    const int c = roots_[a][f.offset + i];
    eps[f.epsilon_labels[i].first - 1] += c;
    eps[f.epsilon_labels[i].second - 1] -= c;
  }
  return eps;
}

std::string AlgebraModel::label(int a) const {
  std::ostringstream os;
  if (factors_.size() > 1) os << "f" << component_.at(a) + 1 << ":";
  const auto eps = epsilon(a);
  if (!eps.empty()) {
    int plus = -1, minus = -1;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      if (eps[i] == 1) plus = static_cast<int>(i) + 1;
      if (eps[i] == -1) minus = static_cast<int>(i) + 1;
    }
    os << "e" << plus << "-e" << minus;
    return os.str();
  }
  os << "[";
  for (std::size_t i = 0; i < roots_[a].size(); ++i) os << (i ? "," : "") << roots_[a][i];
  os << "]";
  return os.str();
}

AlgebraModel build_algebra(const std::vector<FactorSpec>& specs, int center_dim, int rank_cap) {
  if (center_dim < 0) throw InvalidInput("center dimension must be non-negative");
  AlgebraModel m;
  m.center_dim_ = center_dim;

  std::vector<Gram> grams;
  for (const auto& spec : specs) {
    int rank = spec.rank;
    const int fixed = fixed_rank(spec.type);
    if (fixed != 0) {
      if (rank != 0 && rank != fixed)
        throw InvalidInput("rank " + std::to_string(rank) + " out of range for " + to_string(spec.type));
      rank = fixed;
    } else {
      int lo = 1;
      if (spec.type == SimpleType::B || spec.type == SimpleType::C) lo = 2;
      if (spec.type == SimpleType::D) lo = 4;
      if (rank < lo || rank > rank_cap)
        throw InvalidInput("rank " + std::to_string(rank) + " out of range for " + to_string(spec.type) + " (allowed " +
                           std::to_string(lo) + ".." + std::to_string(rank_cap) + ")");
    }
    SimpleFactor f{spec.type, rank, m.rank_, {}};
    if (spec.type == SimpleType::A) {
      // Labels eps_1, eps_3, eps_5, ..., eps_6, eps_4, eps_2 along the
      // Dynkin chain, so the highest root is eps_1 - eps_2 and the greedy
      // strongly orthogonal roots are eps_{2j-1} - eps_{2j}.
      const int n = rank + 1;
      std::vector<int> order;
      for (int k = 1; k <= n; k += 2) order.push_back(k);
      for (int k = (n % 2 == 0 ? n : n - 1); k >= 2; k -= 2) order.push_back(k);
      for (int i = 0; i < rank; ++i) f.epsilon_labels.emplace_back(order[i], order[i + 1]);
    }
    m.factors_.push_back(f);
    m.rank_ += rank;
    grams.push_back(base_gram(spec.type, rank));
  }

  // Killing normalization per factor, then global block-diagonal Gram.
  m.gram_ = zero_gram(m.rank_);
  struct Raw {
    RootCoords coords;
    int component;
  };
  std::vector<Raw> pos;
  for (std::size_t k = 0; k < m.factors_.size(); ++k) {
    const auto& f = m.factors_[k];
    const Gram& g0 = grams[k];
    const auto local = positive_roots(g0);
    RootCoords a1(f.rank, 0);
    a1[0] = 1;
    Rational scale(0);
    for (const auto& r : local) {
      const Rational v = pair_with(g0, r, a1);
      scale += Rational(2) * v * v;  // +r and -r
    }
    scale /= g0[0][0];
    for (int i = 0; i < f.rank; ++i)
      for (int j = 0; j < f.rank; ++j) m.gram_[f.offset + i][f.offset + j] = g0[i][j] / scale;
    for (const auto& r : local) {
      RootCoords c(m.rank_, 0);
      for (int i = 0; i < f.rank; ++i) c[f.offset + i] = r[i];
      pos.push_back({c, static_cast<int>(k)});
    }
  }
  std::sort(pos.begin(), pos.end(), [](const Raw& a, const Raw& b) {
    const int ha = coord_height(a.coords), hb = coord_height(b.coords);
    if (ha != hb) return ha < hb;
    return a.coords > b.coords;
  });
  m.num_positive_ = static_cast<int>(pos.size());
  for (const auto& r : pos) {
    m.roots_.push_back(r.coords);
    m.component_.push_back(r.component);
  }
  for (const auto& r : pos) {
    m.roots_.push_back(neg(r.coords));
    m.component_.push_back(r.component);
  }
  const int nr = m.num_roots();
  for (int i = 0; i < nr; ++i) m.index_[m.roots_[i]] = i;
  m.simple_index_.assign(m.rank_, -1);
  for (int i = 0; i < m.num_positive_; ++i)
    if (coord_height(m.roots_[i]) == 1)
      for (int k = 0; k < m.rank_; ++k)
        if (m.roots_[i][k] == 1) m.simple_index_[k] = i;

  m.sum_table_.assign(static_cast<std::size_t>(nr) * nr, -1);
  m.pairing_cache_.assign(static_cast<std::size_t>(nr) * nr, Rational(0));
  for (int a = 0; a < nr; ++a)
    for (int b = 0; b < nr; ++b) {
      m.pairing_cache_[a * nr + b] = pair_with(m.gram_, m.roots_[a], m.roots_[b]);
      if (m.component_[a] != m.component_[b]) continue;
      auto it = m.index_.find(add(m.roots_[a], m.roots_[b]));
      if (it != m.index_.end()) m.sum_table_[a * nr + b] = it->second;
    }
  return m;
}

Rational killing_form(const AlgebraModel& model, const RootCoords& x, const RootCoords& y) {
  if (static_cast<int>(x.size()) != model.rank() || static_cast<int>(y.size()) != model.rank())
    throw InvalidInput("weight has wrong number of coordinates");
  return model.pairing(x, y);
}

std::pair<int, int> root_string(const AlgebraModel& model, int alpha, int beta) {
  if (beta == alpha || beta == model.negative(alpha)) throw InvalidInput("root string: beta proportional to alpha");
  const auto& a = model.root(alpha);
  int p = 0, q = 0;
  RootCoords probe = model.root(beta);
  while (true) {
    probe = add(probe, a, -1);
    if (!model.find(probe)) break;
    ++p;
  }
  probe = model.root(beta);
  while (true) {
    probe = add(probe, a);
    if (!model.find(probe)) break;
    ++q;
  }
  return {p, q};
}

// Structure constants: Carter's extraspecial-pair construction on the
// height-then-lexicographic order, giving the integral Chevalley table with
// C_{-a,-b} = -C_{a,b}, then E_a = sqrt((a,a)/2) e_a.
StructureConstantTable::StructureConstantTable(const AlgebraModel& model)
    : model_(&model), num_roots_(model.num_roots()) {
  const int nr = num_roots_;
  const int np = model.num_positive();
  constexpr int kUnset = INT_MIN;
  chevalley_.assign(static_cast<std::size_t>(nr) * nr, 0);
  std::vector<int> memo(static_cast<std::size_t>(nr) * nr, kUnset);

  auto len2 = [&](int a) { return model.norm2(a); };

  std::vector<std::pair<int, int>> extraspecial(np, {-1, -1});
  for (int xi = 0; xi < np; ++xi) {
    if (model.height(xi) == 1) continue;
    for (int e = 0; e < np; ++e) {
      auto f = model.find(add(model.root(xi), model.root(e), -1));
      if (f && model.is_positive(*f)) {
        extraspecial[xi] = {e, *f};
        break;
      }
    }
    if (extraspecial[xi].first < 0) throw InternalError("no extraspecial pair");
  }

  std::function<int(int, int)> C = [&](int a, int b) -> int {
    const auto s = model.sum(a, b);
    if (!s) return 0;
    int& slot = memo[a * nr + b];
    if (slot != kUnset) return slot;
    const bool pa = model.is_positive(a), pb = model.is_positive(b);
    int value = 0;
    if (pa && pb) {
      const int xi = *s;
      const auto [e, f] = extraspecial[xi];
      if (a == e && b == f) {
        value = root_string(model, e, f).first + 1;
      } else if (a == f && b == e) {
        value = -(root_string(model, e, f).first + 1);
      } else {
        const int me = model.negative(e), mf = model.negative(f);
        Rational acc(0);
        if (auto be = model.sum(b, me)) acc += Rational(C(b, me) * C(a, mf)) / len2(*be);
        if (auto ae = model.sum(a, me)) acc += Rational(C(me, a) * C(b, mf)) / len2(*ae);
        const Rational v = len2(xi) * acc / Rational(C(e, f));
        if (v.denominator() != 1) throw InternalError("non-integral Chevalley constant");
        value = static_cast<int>(v.numerator());
      }
    } else if (pa && !pb) {
      const int gamma = model.negative(*s);  // a + b + gamma = 0
      Rational v;
      if (model.is_positive(*s)) {
        // C_{a,b} = -(g,g)/(a,a) C_{-b,a+b}
        v = -len2(gamma) / len2(a) * Rational(C(model.negative(b), *s));
      } else {
        // C_{a,b} = (g,g)/(b,b) C_{g,a}
        v = len2(gamma) / len2(b) * Rational(C(gamma, a));
      }
      if (v.denominator() != 1) throw InternalError("non-integral Chevalley constant");
      value = static_cast<int>(v.numerator());
    } else if (!pa && pb) {
      value = -C(b, a);
    } else {
      value = -C(model.negative(a), model.negative(b));
    }
    slot = value;
    return value;
  };

  n_.assign(static_cast<std::size_t>(nr) * nr, 0.0);
  for (int a = 0; a < nr; ++a)
    for (int b = 0; b < nr; ++b) {
      const auto s = model.sum(a, b);
      if (!s) continue;
      const int c = C(a, b);
      const int p = root_string(model, a, b).first;
      if (std::abs(c) != p + 1) throw InternalError("Chevalley constant has wrong magnitude");
      chevalley_[a * nr + b] = c;
      const double la = std::sqrt(boost::rational_cast<double>(len2(a)) / 2.0);
      const double lb = std::sqrt(boost::rational_cast<double>(len2(b)) / 2.0);
      const double ls = std::sqrt(boost::rational_cast<double>(len2(*s)) / 2.0);
      n_[a * nr + b] = c * la * lb / ls;
    }
}

std::vector<Rational> StructureConstantTable::H(int a) const {
  const auto& c = model_->root(a);
  std::vector<Rational> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = Rational(c[i]);
  return out;
}

std::pair<int, int> StructureConstantTable::string(int a, int b) const { return root_string(*model_, a, b); }

// ---------------------------------------------------------------------------

LieAlgebra::LieAlgebra(AlgebraModel model) : model_(std::move(model)), table_(model_) {
  const int r = model_.rank();
  cartan_gram_.resize(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) cartan_gram_(i, j) = boost::rational_cast<double>(model_.simple_gram()[i][j]);
  root_on_cartan_.resize(model_.num_roots(), r);
  for (int a = 0; a < model_.num_roots(); ++a) {
    for (int i = 0; i < r; ++i) {
      RootCoords ai(r, 0);
      ai[i] = 1;
      root_on_cartan_(a, i) = boost::rational_cast<double>(model_.pairing(model_.root(a), ai));
    }
  }
  const double jac = jacobi_residual();
  if (jac > 1e-9) throw InternalError("Jacobi identity fails for the structure constants: residual " + std::to_string(jac));
}

void LieAlgebra::check_size(const Element& x) const {
  if (x.size() != dimension()) throw InvalidInput("element does not belong to this algebra (dimension mismatch)");
}

Element LieAlgebra::E(int a) const {
  Element x = zero();
  x[root_offset() + a] = 1.0;
  return x;
}

Element LieAlgebra::h(int i) const {
  Element x = zero();
  x[cartan_offset() + i] = 1.0;
  return x;
}

Element LieAlgebra::z(int k) const {
  Element x = zero();
  x[center_offset() + k] = 1.0;
  return x;
}

Element LieAlgebra::t(int a) const {
  Element x = zero();
  const auto& c = model_.root(a);
  for (int i = 0; i < model_.rank(); ++i) x[cartan_offset() + i] = c[i];
  return x;
}

Element LieAlgebra::t(const std::vector<Rational>& coords) const {
  if (static_cast<int>(coords.size()) != model_.rank()) throw InvalidInput("weight has wrong number of coordinates");
  Element x = zero();
  for (int i = 0; i < model_.rank(); ++i) x[cartan_offset() + i] = boost::rational_cast<double>(coords[i]);
  return x;
}

Complex LieAlgebra::root_value(int a, const Element& x) const {
  Complex s = 0;
  for (int i = 0; i < model_.rank(); ++i) s += root_on_cartan_(a, i) * x[cartan_offset() + i];
  return s;
}

Element LieAlgebra::bracket(const Element& x, const Element& y) const {
  check_size(x);
  check_size(y);
  Element out = zero();
  const int co = cartan_offset(), ro = root_offset(), r = model_.rank(), nr = model_.num_roots();
  std::vector<int> xr, yr;
  for (int a = 0; a < nr; ++a) {
    if (x[ro + a] != 0.0) xr.push_back(a);
    if (y[ro + a] != 0.0) yr.push_back(a);
  }
  // [h, E_b] terms
  for (int b : yr) out[ro + b] += root_value(b, x) * y[ro + b];
  for (int a : xr) out[ro + a] -= root_value(a, y) * x[ro + a];
  // [E_a, E_b] terms
  for (int a : xr) {
    const int na = model_.negative(a);
    for (int b : yr) {
      const Complex c = x[ro + a] * y[ro + b];
      if (b == na) {
        const auto& coords = model_.root(a);
        for (int i = 0; i < r; ++i)
          if (coords[i] != 0) out[co + i] += c * static_cast<double>(coords[i]);
      } else if (auto s = model_.sum(a, b)) {
        out[ro + *s] += c * table_.N(a, b);
      }
    }
  }
  return out;
}

Element LieAlgebra::conjugate(const Element& x) const {
  check_size(x);
  Element out = zero();
  const int ro = root_offset();
  for (int k = 0; k < ro; ++k) out[k] = -std::conj(x[k]);
  for (int a = 0; a < model_.num_roots(); ++a) out[ro + model_.negative(a)] = -std::conj(x[ro + a]);
  return out;
}

Complex LieAlgebra::killing(const Element& x, const Element& y) const {
  check_size(x);
  check_size(y);
  Complex s = 0;
  for (int k = 0; k < model_.center_dim(); ++k) s += x[k] * y[k];
  const int co = cartan_offset(), r = model_.rank(), ro = root_offset();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (cartan_gram_(i, j) != 0.0) s += x[co + i] * cartan_gram_(i, j) * y[co + j];
  for (int a = 0; a < model_.num_roots(); ++a) s += x[ro + a] * y[ro + model_.negative(a)];
  return s;
}

Eigen::MatrixXcd LieAlgebra::ad(const Element& x) const {
  const int n = dimension();
  Eigen::MatrixXcd m(n, n);
  Element e = zero();
  for (int k = 0; k < n; ++k) {
    e.setZero();
    e[k] = 1.0;
    m.col(k) = bracket(x, e);
  }
  return m;
}

double LieAlgebra::jacobi_residual() const {
  // Sparse basis brackets, then the cyclic sum over all basis triples.
  const int n = dimension();
  std::vector<std::vector<std::pair<int, double>>> table(static_cast<std::size_t>(n) * n);
  const int co = cartan_offset(), ro = root_offset(), r = model_.rank();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto& out = table[i * n + j];
      const bool ri = i >= ro, rj = j >= ro;
      if (i >= co && i < ro && rj) out.emplace_back(j, root_on_cartan_(j - ro, i - co));
      if (ri && j >= co && j < ro) out.emplace_back(i, -root_on_cartan_(i - ro, j - co));
      if (ri && rj) {
        const int a = i - ro, b = j - ro;
        if (b == model_.negative(a)) {
          for (int k = 0; k < r; ++k)
            if (model_.root(a)[k] != 0) out.emplace_back(co + k, model_.root(a)[k]);
        } else if (auto s = model_.sum(a, b)) {
          out.emplace_back(ro + *s, table_.N(a, b));
        }
      }
    }
  double worst = 0;
  std::vector<double> acc(n, 0.0);
  auto apply = [&](int i, int j, int k) {
    // [[e_i, e_j], e_k]
    for (const auto& [idx, c] : table[i * n + j])
      for (const auto& [idx2, c2] : table[idx * n + k]) acc[idx2] += c * c2;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        std::fill(acc.begin(), acc.end(), 0.0);
        apply(i, j, k);
        apply(j, k, i);
        apply(k, i, j);
        for (double v : acc) worst = std::max(worst, std::abs(v));
      }
  return worst;
}

std::shared_ptr<const LieAlgebra> make_algebra(const std::vector<FactorSpec>& factors, int center_dim, int rank_cap) {
  return std::make_shared<const LieAlgebra>(build_algebra(factors, center_dim, rank_cap));
}

Element bracket(const LieAlgebra& g, const Element& x, const Element& y) { return g.bracket(x, y); }
Element conjugate(const LieAlgebra& g, const Element& x) { return g.conjugate(x); }

StructureConstantReport verify_structure_constants(const LieAlgebra& g, unsigned seed) {
  const auto& m = g.model();
  const auto& T = g.constants();
  const int nr = m.num_roots();
  StructureConstantReport rep;
  auto Nz = [&](int a, int b) { return T.N(a, b); };
  auto rel = [](double diff, double scale) { return std::abs(diff) / std::max(1.0, std::abs(scale)); };

  for (int a = 0; a < nr; ++a)
    for (int b = 0; b < nr; ++b) {
      auto s = m.sum(a, b);
      if (s) {
        const int c = m.negative(*s);
        const double v = Nz(a, b);
        rep.antisymmetry = std::max({rep.antisymmetry, rel(v - Nz(b, c), v), rel(v - Nz(c, a), v),
                                     rel(v + Nz(b, a), v), rel(v + Nz(m.negative(a), m.negative(b)), v)});
        const auto [p, q] = root_string(m, a, b);
        const double expect = q * (p + 1) * boost::rational_cast<double>(m.norm2(a)) / 2.0;
        rep.string_magnitude = std::max(rep.string_magnitude, std::abs(v * v - expect));
      }
      if (b != a && b != m.negative(a)) {
        const double nm = Nz(a, m.negative(b)), np = Nz(a, b);
        const double ab = boost::rational_cast<double>(m.pairing(a, b));
        rep.quadratic_minus = std::max(rep.quadratic_minus, std::abs(nm * nm - np * np - ab));
        rep.quadratic_plus = std::max(rep.quadratic_plus, std::abs(nm * nm + np * np - ab));
      }
    }

  for (int a = 0; a < nr; ++a)
    for (int b = 0; b < nr; ++b) {
      if (b == m.negative(a)) continue;
      for (int c = 0; c < nr; ++c) {
        if (c == m.negative(a) || c == m.negative(b)) continue;
        auto ab = m.sum(a, b), ac = m.sum(a, c), bc = m.sum(b, c);
        double lhs = ab ? Nz(*ab, c) * Nz(a, b) : 0.0;
        double rhs = (ac ? Nz(*ac, b) * Nz(a, c) : 0.0) + (bc ? Nz(b, c) * Nz(a, *bc) : 0.0);
        rep.cocycle = std::max(rep.cocycle, std::abs(lhs - rhs));
      }
    }

  rep.jacobi = g.jacobi_residual();

  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 8; ++trial) {
    Element x(g.dimension()), y(g.dimension());
    for (int k = 0; k < g.dimension(); ++k) {
      x[k] = Complex(dist(rng), dist(rng));
      y[k] = Complex(dist(rng), dist(rng));
    }
    const Element lhs = g.conjugate(g.bracket(x, y));
    const Element rhs = g.bracket(g.conjugate(x), g.conjugate(y));
    rep.conjugation = std::max(rep.conjugation, (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, lhs.norm()));
  }
  return rep;
}

}  // namespace joycehkt
