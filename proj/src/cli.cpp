#include "joycehkt/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "joycehkt/connections.hpp"
#include "joycehkt/forms.hpp"
#include "joycehkt/joyce.hpp"

namespace joycehkt::cli {

namespace {

struct Errors {
  std::vector<std::string> list;
  void add(const std::string& path, const std::string& msg) { list.push_back(path + ": " + msg); }
};

void check_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed, Errors& err) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) err.add(path + "." + it.key(), "unknown key");
  }
}

std::optional<long long> get_int(const Json& j, const std::string& path, Errors& err) {
  if (!j.is_number_integer()) {
    err.add(path, "expected an integer");
    return std::nullopt;
  }
  return j.get<long long>();
}

std::optional<double> get_number(const Json& j, const std::string& path, Errors& err) {
  if (!j.is_number()) {
    err.add(path, "expected a number");
    return std::nullopt;
  }
  const double x = j.get<double>();
  if (!std::isfinite(x)) {
    err.add(path, "expected a finite number");
    return std::nullopt;
  }
  return x;
}

std::optional<std::vector<double>> get_numbers(const Json& j, const std::string& path, Errors& err) {
  if (!j.is_array()) {
    err.add(path, "expected an array of numbers");
    return std::nullopt;
  }
  std::vector<double> out;
  bool ok = true;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto x = get_number(j[i], path + "[" + std::to_string(i) + "]", err);
    if (x)
      out.push_back(*x);
    else
      ok = false;
  }
  if (!ok) return std::nullopt;
  return out;
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

std::optional<Verdict> parse_verdict(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "n/a") return Verdict::NA;
  return std::nullopt;
}

bool is_check(const std::string& s) {
  const auto& names = check_names();
  return std::find(names.begin(), names.end(), s) != names.end();
}

std::optional<MetricSpec> parse_metric(const Json& j, const std::string& path, bool allow_perturbed, Errors& err) {
  MetricSpec spec;
  if (j.is_string()) {
    spec.kind = j.get<std::string>();
    if (spec.kind == "reference" || spec.kind == "einstein") return spec;
    err.add(path, "'" + spec.kind + "' needs an object form or is not a metric kind (reference, einstein, layer, perturbed)");
    return std::nullopt;
  }
  if (!j.is_object()) {
    err.add(path, "expected a metric name or object");
    return std::nullopt;
  }
  if (!j.contains("kind") || !j["kind"].is_string()) {
    err.add(path + ".kind", "required string");
    return std::nullopt;
  }
  spec.kind = j["kind"].get<std::string>();
  const std::size_t before = err.list.size();
  if (spec.kind == "reference" || spec.kind == "einstein") {
    check_keys(j, path, {"kind"}, err);
  } else if (spec.kind == "layer") {
    check_keys(j, path, {"kind", "coeffs"}, err);
    if (!j.contains("coeffs")) {
      err.add(path + ".coeffs", "required for a layer metric");
    } else if (auto c = get_numbers(j["coeffs"], path + ".coeffs", err)) {
      for (std::size_t i = 0; i < c->size(); ++i)
        if (!((*c)[i] > 0)) err.add(path + ".coeffs[" + std::to_string(i) + "]", "must be positive");
      if (c->empty()) err.add(path + ".coeffs", "must not be empty");
      spec.coeffs = *c;
    }
  } else if (spec.kind == "perturbed") {
    check_keys(j, path, {"kind", "base", "seed", "size"}, err);
    if (!allow_perturbed) err.add(path, "a perturbed metric cannot be the base of another perturbation");
    if (j.contains("base")) {
      if (auto b = parse_metric(j["base"], path + ".base", false, err)) spec.base = std::make_shared<MetricSpec>(*b);
    } else {
      spec.base = std::make_shared<MetricSpec>();
    }
    if (j.contains("seed")) {
      if (auto s = get_int(j["seed"], path + ".seed", err)) {
        if (*s < 0)
          err.add(path + ".seed", "must be non-negative");
        else
          spec.seed = static_cast<std::uint64_t>(*s);
      }
    }
    if (j.contains("size")) {
      if (auto s = get_number(j["size"], path + ".size", err)) {
        if (!(*s > 0))
          err.add(path + ".size", "must be positive");
        else
          spec.size = *s;
      }
    }
  } else {
    err.add(path + ".kind", "unknown metric kind '" + spec.kind + "'");
  }
  if (err.list.size() != before) return std::nullopt;
  return spec;
}

Json metric_echo(const MetricSpec& m) {
  Json j;
  j["kind"] = m.kind;
  if (m.kind == "layer") j["coeffs"] = m.coeffs;
  if (m.kind == "perturbed") {
    j["base"] = metric_echo(*m.base);
    if (m.seed) j["seed"] = *m.seed;
    j["size"] = m.size;
  }
  return j;
}

Json toral_echo(const ToralInput& v) {
  Json j;
  j["center"] = v.center;
  j["cartan"] = v.cartan;
  return j;
}

std::vector<ToralInput> parse_vectors(const Json& j, const std::string& path, int center_dim, int rank, Errors& err) {
  std::vector<ToralInput> out;
  if (j.empty()) err.add(path, "must not be empty");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_object()) {
      err.add(p, "expected an object with 'center' and 'cartan'");
      continue;
    }
    check_keys(j[i], p, {"center", "cartan"}, err);
    ToralInput v;
    v.center.assign(center_dim, 0.0);
    v.cartan.assign(rank, 0.0);
    if (j[i].contains("center"))
      if (auto c = get_numbers(j[i]["center"], p + ".center", err)) {
        if (static_cast<int>(c->size()) != center_dim)
          err.add(p + ".center", "has " + std::to_string(c->size()) + " entries, expected center_dim = " +
                                     std::to_string(center_dim));
        else
          v.center = *c;
      }
    if (j[i].contains("cartan"))
      if (auto c = get_numbers(j[i]["cartan"], p + ".cartan", err)) {
        if (rank >= 0 && static_cast<int>(c->size()) != rank)
          err.add(p + ".cartan", "has " + std::to_string(c->size()) + " entries, expected rank = " + std::to_string(rank));
        else
          v.cartan = *c;
      }
    out.push_back(v);
  }
  return out;
}

ToralVector to_toral(const ToralInput& v) {
  ToralVector x(v.center.size() + v.cartan.size());
  for (std::size_t k = 0; k < v.center.size(); ++k) x[k] = v.center[k];
  for (std::size_t k = 0; k < v.cartan.size(); ++k) x[v.center.size() + k] = v.cartan[k];
  return x;
}

Json merge_preset(const Json& doc, Errors& err) {
  if (!doc.contains("preset")) return doc;
  if (!doc["preset"].is_string()) {
    err.add("preset", "expected a preset name");
    return doc;
  }
  const std::string name = doc["preset"].get<std::string>();
  const Preset* p = find_preset(name);
  if (!p) {
    err.add("preset", "unknown preset '" + name + "'");
    return doc;
  }
  Json merged = p->config;
  for (auto it = doc.begin(); it != doc.end(); ++it) merged[it.key()] = it.value();
  return merged;
}

// Semantic checks that need the root system: layer count, preset frames,
// k and coefficient lengths.
void semantic_checks(const JobConfig& c, Errors& err) {
  std::shared_ptr<const LieAlgebra> alg;
  try {
    alg = make_algebra(c.factors, c.center_dim, c.rank_cap);
  } catch (const InvalidInput& e) {
    err.add("algebra", e.what());
    return;
  }
  const int d = [&] {
    try {
      return joyce_decompose(alg, c.tie_break == "last" ? TieBreak::LastIndex : TieBreak::FirstIndex).d();
    } catch (const InvalidInput&) {
      return 0;
    }
  }();
  if (d == 0) {
    err.add("algebra", "no roots, so no Joyce layers");
    return;
  }
  if (c.m < 1 || c.m > d)
    err.add("isotropy.m", "must lie in 1.." + std::to_string(d) + " (number of Joyce layers)");
  for (const auto& v : c.v_vectors)
    if (static_cast<int>(v.cartan.size()) != alg->model().rank()) err.add("isotropy.v_subspace", "wrong Cartan length");
  if (c.frame_preset == "explicit" && static_cast<int>(c.frame_vectors.size()) != c.m)
    err.add("isotropy.u_frame", "has " + std::to_string(c.frame_vectors.size()) + " vectors, expected m = " +
                                    std::to_string(c.m));
  if (c.v_preset == "center-antidiagonal" && c.center_dim < c.m)
    err.add("isotropy.v_subspace", "center-antidiagonal needs center_dim >= m");
  if (c.frame_preset == "center-diagonal" && c.center_dim < c.m)
    err.add("isotropy.u_frame", "center-diagonal needs center_dim >= m");
  if (c.frame_preset == "u2n-remark") {
    const bool shape = c.factors.size() == 1 && c.factors[0].type == SimpleType::A && c.factors[0].rank % 2 == 1 &&
                       c.center_dim == 1 && c.m == d;
    if (!shape) err.add("isotropy.u_frame", "u2n-remark needs u(2n): one A_{2n-1} factor, center_dim 1 and m = n");
  }
  if (c.k_phases && static_cast<int>(c.k_phases->size()) != c.m)
    err.add("k_phases", "has " + std::to_string(c.k_phases->size()) + " entries, expected m = " + std::to_string(c.m));
  std::function<void(const MetricSpec&, const std::string&)> metric = [&](const MetricSpec& s, const std::string& p) {
    if (s.kind == "layer" && static_cast<int>(s.coeffs.size()) != c.m)
      err.add(p + ".coeffs", "has " + std::to_string(s.coeffs.size()) + " entries, expected m = " + std::to_string(c.m));
    if (s.kind == "perturbed") metric(*s.base, p + ".base");
  };
  metric(c.metric, "metric");
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"hypercomplex", "hkt",    "einstein",           "btp",
                                                 "bas",          "strong", "naturally-reductive", "flag-obstruction"};
  return names;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "n/a";
  }
}

ParseResult parse_config_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    return {std::nullopt, {std::string("syntax: ") + e.what()}};
  }
  return parse_config(doc);
}

ParseResult parse_config(const Json& input) {
  Errors err;
  if (!input.is_object()) return {std::nullopt, {"$: expected a JSON object"}};
  const Json doc = merge_preset(input, err);
  if (!err.list.empty()) return {std::nullopt, err.list};

  check_keys(doc, "$",
             {"preset", "algebra", "isotropy", "k_phases", "metric", "checks", "expect", "tolerance", "seed",
              "tie_break"},
             err);
  JobConfig c;
  if (doc.contains("preset")) c.preset = doc["preset"].get<std::string>();

  int rank = -1;
  bool shape_ok = true;  // algebra and m usable for the semantic checks
  const std::size_t errors_before_algebra = err.list.size();
  if (!doc.contains("algebra") || !doc["algebra"].is_object()) {
    err.add("algebra", "required object");
  } else {
    const Json& a = doc["algebra"];
    check_keys(a, "algebra", {"factors", "center_dim", "rank_cap"}, err);
    if (a.contains("center_dim"))
      if (auto v = get_int(a["center_dim"], "algebra.center_dim", err)) {
        if (*v < 0 || *v > 16)
          err.add("algebra.center_dim", "must lie in 0..16");
        else
          c.center_dim = static_cast<int>(*v);
      }
    if (a.contains("rank_cap"))
      if (auto v = get_int(a["rank_cap"], "algebra.rank_cap", err)) {
        if (*v < 1 || *v > 16)
          err.add("algebra.rank_cap", "must lie in 1..16");
        else
          c.rank_cap = static_cast<int>(*v);
      }
    if (!a.contains("factors") || !a["factors"].is_array()) {
      err.add("algebra.factors", "required array");
    } else {
      rank = 0;
      for (std::size_t i = 0; i < a["factors"].size(); ++i) {
        const Json& f = a["factors"][i];
        const std::string p = "algebra.factors[" + std::to_string(i) + "]";
        if (!f.is_object()) {
          err.add(p, "expected an object with 'type' and 'rank'");
          rank = -1;
          continue;
        }
        check_keys(f, p, {"type", "rank"}, err);
        FactorSpec spec{SimpleType::A, 0};
        bool ok = true;
        if (!f.contains("type") || !f["type"].is_string()) {
          err.add(p + ".type", "required string");
          ok = false;
        } else {
          try {
            spec.type = parse_simple_type(f["type"].get<std::string>());
          } catch (const InvalidInput& e) {
            err.add(p + ".type", e.what());
            ok = false;
          }
        }
        if (f.contains("rank")) {
          if (auto r = get_int(f["rank"], p + ".rank", err))
            spec.rank = static_cast<int>(std::clamp<long long>(*r, -1, 1000));
          else
            ok = false;
        } else if (ok && fixed_rank(spec.type) == 0) {
          err.add(p + ".rank", "required for classical types");
          ok = false;
        }
        if (ok && fixed_rank(spec.type) != 0) {
          if (spec.rank != 0 && spec.rank != fixed_rank(spec.type)) {
            err.add(p + ".rank", "must be " + std::to_string(fixed_rank(spec.type)) + " for " + to_string(spec.type));
            ok = false;
          }
          spec.rank = fixed_rank(spec.type);
        }
        if (ok) {
          c.factors.push_back(spec);
          if (rank >= 0) rank += spec.rank;
        } else {
          rank = -1;
        }
      }
    }
  }

  for (std::size_t i = errors_before_algebra; i < err.list.size(); ++i)
    if (err.list[i].find("unknown key") == std::string::npos) shape_ok = false;
  if (rank < 0) shape_ok = false;

  if (doc.contains("tie_break")) {
    if (!doc["tie_break"].is_string() || (doc["tie_break"] != "first" && doc["tie_break"] != "last"))
      err.add("tie_break", "expected 'first' or 'last'");
    else
      c.tie_break = doc["tie_break"].get<std::string>();
  }

  if (!doc.contains("isotropy") || !doc["isotropy"].is_object()) {
    err.add("isotropy", "required object");
    shape_ok = false;
  } else {
    const Json& iso = doc["isotropy"];
    check_keys(iso, "isotropy", {"m", "trivial", "v_subspace", "u_frame"}, err);
    if (!iso.contains("m")) {
      err.add("isotropy.m", "required");
      shape_ok = false;
    } else if (auto m = get_int(iso["m"], "isotropy.m", err)) {
      c.m = static_cast<int>(std::clamp<long long>(*m, -1, 1000));
    } else {
      shape_ok = false;
    }
    if (iso.contains("trivial")) {
      if (!iso["trivial"].is_boolean())
        err.add("isotropy.trivial", "expected a boolean");
      else
        c.trivial = iso["trivial"].get<bool>();
    }
    if (iso.contains("v_subspace")) {
      const Json& v = iso["v_subspace"];
      if (v.is_string()) {
        c.v_preset = v.get<std::string>();
        if (c.v_preset != "default" && c.v_preset != "center-antidiagonal")
          err.add("isotropy.v_subspace", "unknown preset '" + c.v_preset + "'");
      } else if (v.is_array()) {
        c.v_preset = "explicit";
        c.v_vectors = parse_vectors(v, "isotropy.v_subspace", c.center_dim, rank, err);
      } else {
        err.add("isotropy.v_subspace", "expected a preset name or an array of toral vectors");
      }
    }
    if (iso.contains("u_frame")) {
      const Json& u = iso["u_frame"];
      if (u.is_string()) {
        c.frame_preset = u.get<std::string>();
        if (c.frame_preset != "default" && c.frame_preset != "u2n-remark" && c.frame_preset != "center-diagonal")
          err.add("isotropy.u_frame", "unknown preset '" + c.frame_preset + "'");
      } else if (u.is_array()) {
        c.frame_preset = "explicit";
        c.frame_vectors = parse_vectors(u, "isotropy.u_frame", c.center_dim, rank, err);
      } else {
        err.add("isotropy.u_frame", "expected a preset name or an array of toral vectors");
      }
    }
    if (c.trivial && c.v_preset != "default") err.add("isotropy.trivial", "conflicts with a nonempty v_subspace");
  }

  if (doc.contains("k_phases")) c.k_phases = get_numbers(doc["k_phases"], "k_phases", err);

  if (doc.contains("metric"))
    if (auto m = parse_metric(doc["metric"], "metric", true, err)) c.metric = *m;

  if (doc.contains("checks")) {
    if (!doc["checks"].is_array() || doc["checks"].empty()) {
      err.add("checks", "expected a nonempty array of check names");
    } else {
      std::set<std::string> seen;
      for (std::size_t i = 0; i < doc["checks"].size(); ++i) {
        const Json& x = doc["checks"][i];
        const std::string p = "checks[" + std::to_string(i) + "]";
        if (!x.is_string()) {
          err.add(p, "expected a check name");
        } else if (!is_check(x.get<std::string>())) {
          err.add(p, "unknown check '" + x.get<std::string>() + "'");
        } else if (!seen.insert(x.get<std::string>()).second) {
          err.add(p, "duplicate check '" + x.get<std::string>() + "'");
        }
      }
      for (const auto& name : check_names())
        if (seen.count(name)) c.checks.push_back(name);
    }
  } else {
    c.checks = check_names();
  }

  if (doc.contains("expect")) {
    if (!doc["expect"].is_object()) {
      err.add("expect", "expected an object mapping check names to pass, fail or n/a");
    } else {
      for (auto it = doc["expect"].begin(); it != doc["expect"].end(); ++it) {
        const std::string p = "expect." + it.key();
        if (!is_check(it.key())) {
          err.add(p, "unknown check");
          continue;
        }
        std::optional<Verdict> v;
        if (it.value().is_string()) v = parse_verdict(it.value().get<std::string>());
        if (!v)
          err.add(p, "expected 'pass', 'fail' or 'n/a'");
        else
          c.expected[it.key()] = *v;
      }
    }
  }

  if (doc.contains("tolerance"))
    if (auto t = get_number(doc["tolerance"], "tolerance", err)) {
      if (!(*t > 0))
        err.add("tolerance", "must be positive");
      else
        c.tolerance = *t;
    }
  if (doc.contains("seed"))
    if (auto s = get_int(doc["seed"], "seed", err)) {
      if (*s < 0)
        err.add("seed", "must be non-negative");
      else
        c.seed = static_cast<std::uint64_t>(*s);
    }

  if (shape_ok) semantic_checks(c, err);
  if (!err.list.empty()) return {std::nullopt, err.list};

  Json& e = c.echo;
  if (!c.preset.empty()) e["preset"] = c.preset;
  Json factors = Json::array();
  for (const auto& f : c.factors) factors.push_back(Json{{"type", to_string(f.type)}, {"rank", f.rank}});
  e["algebra"] = Json{{"factors", factors}, {"center_dim", c.center_dim}, {"rank_cap", c.rank_cap}};
  Json iso;
  iso["m"] = c.m;
  iso["trivial"] = c.trivial;
  if (c.v_preset == "explicit") {
    iso["v_subspace"] = Json::array();
    for (const auto& v : c.v_vectors) iso["v_subspace"].push_back(toral_echo(v));
  } else {
    iso["v_subspace"] = c.v_preset;
  }
  if (c.frame_preset == "explicit") {
    iso["u_frame"] = Json::array();
    for (const auto& v : c.frame_vectors) iso["u_frame"].push_back(toral_echo(v));
  } else {
    iso["u_frame"] = c.frame_preset;
  }
  e["isotropy"] = iso;
  e["tie_break"] = c.tie_break;
  e["k_phases"] = c.k_phases ? Json(*c.k_phases) : Json(nullptr);
  e["metric"] = metric_echo(c.metric);
  e["checks"] = c.checks;
  Json expect = Json::object();
  for (const auto& name : c.checks) {
    auto it = c.expected.find(name);
    expect[name] = to_string(it == c.expected.end() ? Verdict::Pass : it->second);
  }
  e["expect"] = expect;
  e["tolerance"] = c.tolerance;
  e["seed"] = c.seed;
  return {c, {}};
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

Json algebra_json(std::initializer_list<std::pair<const char*, int>> factors, int center) {
  Json f = Json::array();
  for (const auto& [t, r] : factors) f.push_back(Json{{"type", t}, {"rank", r}});
  return Json{{"factors", f}, {"center_dim", center}};
}

Preset make_preset(std::string name, std::string description, Json config, Json expect, bool interpretive = false,
                   std::string note = "") {
  config["expect"] = std::move(expect);
  return Preset{std::move(name), std::move(description), interpretive, std::move(note), std::move(config)};
}

}  // namespace

const std::vector<Preset>& catalog() {
  static const std::vector<Preset> presets = [] {
    std::vector<Preset> p;
    p.push_back(make_preset(
        "su3-group", "SU(3) as a group manifold, one layer, reference metric (bi-invariant)",
        Json{{"algebra", algebra_json({{"A", 2}}, 0)}, {"isotropy", {{"m", 1}, {"trivial", true}}}, {"metric", "reference"}},
        Json::object()));
    p.push_back(make_preset(
        "su5-group", "SU(5) as a group manifold, two layers, reference metric",
        Json{{"algebra", algebra_json({{"A", 4}}, 0)}, {"isotropy", {{"m", 2}, {"trivial", true}}}, {"metric", "reference"}},
        Json{{"einstein", "fail"}}));
    p.push_back(make_preset(
        "su5-einstein", "SU(5) with its HKT-Einstein metric, layer coefficients (2/5, 1/5)",
        Json{{"algebra", algebra_json({{"A", 4}}, 0)}, {"isotropy", {{"m", 2}, {"trivial", true}}}, {"metric", "einstein"}},
        Json{{"btp", "fail"}, {"bas", "fail"}, {"strong", "fail"}, {"naturally-reductive", "fail"}}));
    p.push_back(make_preset(
        "su5-perturbed", "SU(5) with a non-layer hyperhermitian perturbation of the reference metric (not HKT)",
        Json{{"algebra", algebra_json({{"A", 4}}, 0)},
             {"isotropy", {{"m", 2}, {"trivial", true}}},
             {"metric", {{"kind", "perturbed"}, {"base", "reference"}, {"size", 1e-2}}}},
        Json{{"hkt", "fail"},
             {"einstein", "n/a"},
             {"btp", "fail"},
             {"bas", "fail"},
             {"strong", "n/a"},
             {"naturally-reductive", "fail"}}));
    p.push_back(make_preset(
        "su4-mod-su2", "SU(4)/SU(2), one retained layer, HKT-Einstein metric",
        Json{{"algebra", algebra_json({{"A", 3}}, 0)}, {"isotropy", {{"m", 1}}}, {"metric", "einstein"}},
        Json{{"strong", "fail"}}));
    p.push_back(make_preset(
        "su3xsu3-product", "SU(3) x SU(3) with per-factor coefficients (5, 2)",
        Json{{"algebra", algebra_json({{"A", 2}, {"A", 2}}, 0)},
             {"isotropy", {{"m", 2}, {"trivial", true}}},
             {"metric", {{"kind", "layer"}, {"coeffs", {5, 2}}}}},
        Json{{"einstein", "fail"}}));
    p.push_back(make_preset(
        "su3xsu3-center2",
        "T^2 x SU(3) x SU(3) modulo the torus pairing each factor's frame direction with a center direction",
        Json{{"algebra", algebra_json({{"A", 2}, {"A", 2}}, 2)},
             {"isotropy", {{"m", 2}, {"v_subspace", "center-antidiagonal"}, {"u_frame", "center-diagonal"}}},
             {"metric", "reference"}},
        Json{{"strong", "fail"}}, false,
        "strong verdict is measured (dc is about 2e-2), not derived; the isotropy torus mixes center and semisimple "
        "directions, so no classification result applies"));
    p.push_back(make_preset(
        "u4-remark-frame", "U(4) with the frame X_1^1 = (2/|a|)Y^1, X_1^2 = (2/|a|)(Y^1 + Y^2), reference metric",
        Json{{"algebra", algebra_json({{"A", 3}}, 1)},
             {"isotropy", {{"m", 2}, {"trivial", true}, {"u_frame", "u2n-remark"}}},
             {"metric", "reference"}},
        Json{{"einstein", "fail"}, {"naturally-reductive", "fail"}}, true,
        "interpretive: the printed last frame vector omits the u(1) generator Y^n, which would make the frame "
        "degenerate; here X_1^n = (2/|a|)(Y^1 + ... + Y^(n-1) + Y^n) with Y^n the unit center vector. With this "
        "reading h is strong but not bi-invariant"));
    return p;
  }();
  return presets;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : catalog())
    if (p.name == name) return &p;
  return nullptr;
}

Json catalog_report() {
  Json list = Json::array();
  for (const auto& p : catalog()) {
    Json e;
    e["name"] = p.name;
    e["description"] = p.description;
    e["interpretive"] = p.interpretive;
    if (!p.note.empty()) e["note"] = p.note;
    e["config"] = p.config;
    auto parsed = parse_config(Json{{"preset", p.name}});
    if (parsed.config) e["expected"] = parsed.config->echo["expect"];
    list.push_back(e);
  }
  Json r;
  r["schema_version"] = kSchemaVersion;
  r["tool"] = Json{{"name", "hktverify"}, {"version", kToolVersion}};
  r["command"] = "catalog";
  r["presets"] = list;
  return r;
}

// ---------------------------------------------------------------------------
// Running

namespace {

double alpha_length(const JoyceDecomposition& dec, int j) {
  return std::sqrt(boost::rational_cast<double>(dec.algebra->model().norm2(dec.layers[j].alpha)));
}

ToralVector center_unit(const JoyceDecomposition& dec, int k) {
  const auto& model = dec.algebra->model();
  ToralVector z = ToralVector::Zero(model.center_dim() + model.rank());
  z[k] = 1;
  return z;
}

ToralVector frame_direction(const JoyceDecomposition& dec, int j) {
  auto dir = canonical_frame_direction(dec, j);
  if (!dir) throw InvalidInput("layer " + std::to_string(j + 1) + " has no canonical frame direction");
  return *dir;
}

IsotropySpec isotropy_spec(const JobConfig& c, const JoyceDecomposition& dec) {
  IsotropySpec iso;
  iso.m = c.m;
  iso.trivial = c.trivial;
  if (c.v_preset == "explicit") {
    std::vector<ToralVector> v;
    for (const auto& x : c.v_vectors) v.push_back(to_toral(x));
    iso.v_subspace = v;
  } else if (c.v_preset == "center-antidiagonal") {
    std::vector<ToralVector> v;
    for (int j = 0; j < c.m; ++j) v.push_back(frame_direction(dec, j) - center_unit(dec, j));
    iso.v_subspace = v;
  }
  if (c.frame_preset == "explicit") {
    std::vector<ToralVector> u;
    for (const auto& x : c.frame_vectors) u.push_back(to_toral(x));
    iso.u_frame = u;
  } else if (c.frame_preset == "center-diagonal") {
    std::vector<ToralVector> u;
    for (int j = 0; j < c.m; ++j)
      u.push_back((2 / alpha_length(dec, j)) * (frame_direction(dec, j) + center_unit(dec, j)) / std::sqrt(2.0));
    iso.u_frame = u;
  } else if (c.frame_preset == "u2n-remark") {
    // Y^1..Y^(n-1): frame directions of the layers with f_j != 0; Y^n: center.
    std::vector<ToralVector> u;
    const auto& model = dec.algebra->model();
    ToralVector sum = ToralVector::Zero(model.center_dim() + model.rank());
    for (int j = 0; j + 1 < c.m; ++j) {
      const ToralVector y = frame_direction(dec, j);
      u.push_back((2 / alpha_length(dec, j)) * y);
      sum += y;
    }
    u.push_back((2 / alpha_length(dec, c.m - 1)) * (sum + center_unit(dec, 0)));
    iso.u_frame = u;
  }
  return iso;
}

BuiltJob build(const JobConfig& c) {
  BuiltJob b;
  b.algebra = make_algebra(c.factors, c.center_dim, c.rank_cap);
  b.dec = joyce_decompose(b.algebra, c.tie_break == "last" ? TieBreak::LastIndex : TieBreak::FirstIndex);
  b.coset = std::make_unique<CosetSpace>(b.dec, isotropy_spec(c, b.dec));
  std::optional<std::vector<Complex>> k;
  if (c.k_phases) {
    auto base = default_k(*b.coset);
    for (std::size_t j = 0; j < base.size(); ++j) base[j] *= std::polar(1.0, (*c.k_phases)[j]);
    k = base;
  }
  b.h = hypercomplex_structure(*b.coset, k);
  return b;
}

InvariantMetric make_metric(const MetricSpec& s, const BuiltJob& b, std::uint64_t seed) {
  if (s.kind == "reference") return reference_metric(*b.coset);
  if (s.kind == "einstein") return layer_metric(*b.coset, einstein_coefficients(*b.coset).coeffs);
  if (s.kind == "layer") return layer_metric(*b.coset, s.coeffs);
  const InvariantMetric base = make_metric(*s.base, b, seed);
  auto g = perturbed_metric(*b.coset, b.h, base, s.size, s.seed.value_or(seed));
  if (!g) throw InvalidInput("the coset admits no non-layer invariant hyperhermitian direction to perturb along");
  return *g;
}

std::string algebra_name(const JobConfig& c) {
  std::string s;
  for (const auto& f : c.factors) s += (s.empty() ? "" : "+") + to_string(f.type) + (fixed_rank(f.type) ? "" : std::to_string(f.rank));
  if (c.center_dim > 0) s += (s.empty() ? "" : "+") + std::string("u1^") + std::to_string(c.center_dim);
  return s;
}

std::string rational_string(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Json decomposition_json(const JoyceDecomposition& dec) {
  const auto& model = dec.algebra->model();
  Json layers = Json::array();
  for (const auto& l : dec.layers) {
    Json r = Json::array();
    for (int a : l.r_plus) r.push_back(model.label(a));
    layers.push_back(Json{{"alpha", model.label(l.alpha)},
                          {"norm2", rational_string(model.norm2(l.alpha))},
                          {"r_plus_size", l.r_plus.size()},
                          {"r_plus", r}});
  }
  return Json{{"d", dec.d()}, {"layers", layers}, {"theta_final_size", dec.theta_final.size()}, {"dim_b_d", dec.b_d.size()}};
}

Json coset_json(const CosetSpace& cs) {
  return Json{{"m", cs.m()}, {"dim_m", cs.dim_m()}, {"dim_l", cs.dim_l()}};
}

struct CheckResult {
  Verdict verdict = Verdict::NA;
  Json residuals = Json::object();
  Json witnesses = Json::array();
  double threshold = 0;
  std::string error;
};

Verdict below(double x, double thr) { return x <= thr ? Verdict::Pass : Verdict::Fail; }

struct Context {
  const JobConfig& config;
  const BuiltJob& b;
  const InvariantMetric& g;
  double norm;
  std::optional<ConnectionModel> bismut;

  const ConnectionModel& bismut_connection_() {
    if (!bismut)
      bismut = g.layer_coeffs ? bismut_connection(*b.coset, g, b.h) : bismut_connection_general(*b.coset, g, b.h.I);
    return *bismut;
  }
};

CheckResult run_check(const std::string& name, Context& ctx) {
  const double tol = ctx.config.tolerance;
  const CosetSpace& cs = *ctx.b.coset;
  CheckResult r;
  r.threshold = tol;
  if (name == "hypercomplex") {
    const auto rep = verify_hypercomplex(cs, ctx.b.h);
    r.residuals = Json{{"max", rep.max_residual()},       {"i_squared", rep.i_squared},   {"j_squared", rep.j_squared},
                       {"k_squared", rep.k_squared},      {"anticommute", rep.anticommute}, {"k_is_ij", rep.k_is_ij},
                       {"commute_l", std::max(rep.commute_l_i, rep.commute_l_j)},
                       {"integrability", std::max(rep.closure_i, rep.closure_j)},
                       {"k_normalization", rep.k_normalization}, {"su2_brackets", rep.su2_brackets}};
    r.verdict = below(rep.max_residual(), tol);
  } else if (name == "hkt") {
    const auto hkt = hkt_residual(cs, ctx.g, ctx.b.h);
    const double herm = hyperhermitian_residual(ctx.g, ctx.b.h) / ctx.norm;
    const double inv = invariance_residual(cs, ctx.g) / ctx.norm;
    r.residuals = Json{{"relative", hkt.relative}, {"raw", hkt.raw}, {"hyperhermitian", herm}, {"invariance", inv}};
    r.verdict = below(std::max({hkt.relative, herm, inv}), tol);
  } else if (name == "einstein") {
    const auto e = hkt_einstein_residual(cs, ctx.g, ctx.b.h, tol);
    r.residuals = Json{{"residual", e.residual}, {"lambda", e.lambda}};
    const auto sol = einstein_coefficients(cs);
    Json exact = Json::array();
    for (const auto& q : sol.exact) exact.push_back(rational_string(q));
    r.witnesses.push_back(Json{{"einstein_coefficients", exact}, {"lambda", sol.lambda_constant}});
    r.verdict = below(e.residual, tol);
  } else if (name == "btp") {
    const double t = nabla_torsion_residual(cs, ctx.bismut_connection_());
    r.residuals = Json{{"nabla_torsion", t}};
    if (ctx.g.layer_coeffs)
      r.witnesses.push_back(Json{{"predicate", btp_predicate(cs, *ctx.g.layer_coeffs, tol)}});
    r.verdict = below(t, tol);
  } else if (name == "bas") {
    const auto& B = ctx.bismut_connection_();
    const double t = nabla_torsion_residual(cs, B);
    const double c = nabla_curvature_residual(cs, B);
    r.residuals = Json{{"max", std::max(t, c)}, {"nabla_torsion", t}, {"nabla_curvature", c}};
    r.verdict = below(std::max(t, c), tol);
  } else if (name == "strong") {
    const auto s = strong_residual(cs, ctx.g, ctx.b.h, tol);
    r.residuals = Json{{"relative", s.relative},
                       {"raw", s.raw},
                       {"skew", s.skew},
                       {"quadruple_factor", s.quadruple_factor},
                       {"quadruple_residual", s.quadruple_residual},
                       {"quadruples_checked", s.quadruples_checked}};
    r.verdict = below(s.relative, tol);
  } else if (name == "naturally-reductive") {
    const double x = naturally_reductive_residual(cs, ctx.g) / ctx.norm;
    r.residuals = Json{{"relative", x}};
    r.verdict = below(x, tol);
  } else if (name == "flag-obstruction") {
    const auto w = flag_kahler_obstruction(cs, ctx.g);
    if (w) {
      const auto& model = cs.algebra().model();
      const double spread = std::max({w->values[0], w->values[1], w->values[2]}) -
                            std::min({w->values[0], w->values[1], w->values[2]});
      r.residuals = Json{{"spread", spread}};
      r.witnesses.push_back(Json{{"layer", w->layer + 1},
                                 {"alpha", model.label(w->alpha)},
                                 {"beta", model.label(w->beta)},
                                 {"sum", model.label(w->sum)},
                                 {"values", {w->values[0], w->values[1], w->values[2]}}});
      r.verdict = Verdict::Pass;
    } else {
      r.verdict = Verdict::Fail;
    }
  }
  return r;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double headline(const std::string& name, const Json& res) {
  static const std::map<std::string, std::string> key = {
      {"hypercomplex", "max"}, {"hkt", "relative"},           {"einstein", "residual"},  {"btp", "nabla_torsion"},
      {"bas", "max"},          {"strong", "relative"},        {"naturally-reductive", "relative"},
      {"flag-obstruction", "spread"}};
  auto it = key.find(name);
  if (it != key.end() && res.contains(it->second)) return res[it->second].get<double>();
  return std::nan("");
}

}  // namespace

BuiltJob build_job(const JobConfig& c) {
  BuiltJob b = build(c);
  b.metric = make_metric(c.metric, b, c.seed);
  return b;
}

RunOutcome run(const JobConfig& c) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  Json timing;
  timing["checks"] = Json::object();

  const BuiltJob b = build_job(c);
  const InvariantMetric& g = b.metric;
  const double norm = operator_norm(g);

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["tool"] = Json{{"name", "hktverify"}, {"version", kToolVersion}};
  report["command"] = "verify";
  report["config"] = c.echo;
  report["seed"] = c.seed;
  Json coset = coset_json(*b.coset);
  coset["algebra"] = algebra_name(c);
  coset["decomposition"] = decomposition_json(b.dec);
  report["coset"] = coset;
  Json metric;
  metric["kind"] = c.metric.kind;
  metric["layer_coeffs"] = g.layer_coeffs ? Json(*g.layer_coeffs) : Json(nullptr);
  metric["operator_norm"] = norm;
  report["metric"] = metric;

  Context ctx{c, b, g, norm, std::nullopt};
  Json checks = Json::array();
  std::ostringstream table;
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %-8s %-8s %-11s %-10s %s\n", "check", "verdict", "expected", "residual",
                "threshold", "match");
  table << line;
  int passed = 0, failed = 0, na = 0;
  Json mismatches = Json::array();
  for (const auto& name : c.checks) {
    const auto tc = Clock::now();
    CheckResult r;
    try {
      r = run_check(name, ctx);
    } catch (const InvalidInput& e) {
      r = CheckResult{};
      r.threshold = c.tolerance;
      r.error = e.what();
    } catch (const InternalError& e) {
      throw InternalError("check " + name + ": " + e.what());
    }
    timing["checks"][name] = std::chrono::duration<double, std::milli>(Clock::now() - tc).count();
    auto it = c.expected.find(name);
    const Verdict expected = it == c.expected.end() ? Verdict::Pass : it->second;
    const bool match = r.verdict == expected;
    if (!match) mismatches.push_back(name);
    (r.verdict == Verdict::Pass ? passed : r.verdict == Verdict::Fail ? failed : na)++;
    Json e;
    e["name"] = name;
    e["verdict"] = to_string(r.verdict);
    e["expected"] = to_string(expected);
    e["matches"] = match;
    e["threshold"] = r.threshold;
    e["residuals"] = r.residuals;
    e["witnesses"] = r.witnesses;
    e["error"] = r.error.empty() ? Json(nullptr) : Json(r.error);
    checks.push_back(e);
    const double h = headline(name, r.residuals);
    std::snprintf(line, sizeof line, "%-20s %-8s %-8s %-11s %-10s %s\n", name.c_str(), to_string(r.verdict).c_str(),
                  to_string(expected).c_str(), std::isnan(h) ? "-" : format_double(h).c_str(),
                  format_double(r.threshold).c_str(), match ? "yes" : "NO");
    table << line;
    if (!r.error.empty()) table << "    error: " << r.error << "\n";
  }
  report["checks"] = checks;
  report["summary"] = Json{{"requested", c.checks.size()},
                           {"passed", passed},
                           {"failed", failed},
                           {"not_applicable", na},
                           {"mismatches", mismatches},
                           {"all_match", mismatches.empty()}};
  timing["total_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  report["timing"] = timing;

  RunOutcome out;
  out.report = std::move(report);
  out.table = table.str();
  out.exit_code = mismatches.empty() ? 0 : 1;
  return out;
}

Json decompose_report(const JobConfig& c) {
  Json report;
  report["schema_version"] = kSchemaVersion;
  report["tool"] = Json{{"name", "hktverify"}, {"version", kToolVersion}};
  report["command"] = "decompose";
  report["config"] = c.echo;
  report["algebra"] = algebra_name(c);
  auto alg = make_algebra(c.factors, c.center_dim, c.rank_cap);
  const auto dec = joyce_decompose(alg, c.tie_break == "last" ? TieBreak::LastIndex : TieBreak::FirstIndex);
  report["dimension"] = alg->dimension();
  report["decomposition"] = decomposition_json(dec);
  try {
    CosetSpace cs(dec, isotropy_spec(c, dec));
    Json coset = coset_json(cs);
    Json ei;
    const auto sol = einstein_coefficients(cs);
    for (const auto& q : sol.exact) ei.push_back(rational_string(q));
    coset["einstein_coefficients"] = ei;
    Json hat = Json::array();
    for (int a : cs.hat_positive()) hat.push_back(cs.algebra().model().label(a));
    coset["hat_positive_roots"] = hat;
    report["coset"] = coset;
  } catch (const InvalidInput& e) {
    report["coset"] = Json{{"error", e.what()}};
  }
  return report;
}

Json without_timing(Json report) {
  report.erase("timing");
  return report;
}

}  // namespace joycehkt::cli
