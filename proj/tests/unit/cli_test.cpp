#include <doctest.h>

#include <algorithm>
#include <chrono>

#include "joycehkt/cli.hpp"

using namespace joycehkt;
using namespace joycehkt::cli;

namespace {

JobConfig parse_ok(const Json& doc) {
  auto r = parse_config(doc);
  INFO((r.errors.empty() ? std::string() : r.errors.front()));
  REQUIRE(r.config);
  return *r.config;
}

const Json& check_of(const Json& report, const std::string& name) {
  for (const auto& c : report["checks"])
    if (c["name"] == name) return c;
  FAIL("missing check " << name);
  static Json none;
  return none;
}

bool mentions(const std::vector<std::string>& errors, const std::string& needle) {
  return std::any_of(errors.begin(), errors.end(), [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("catalog contents") {
  for (const char* name : {"su3-group", "su5-group", "su5-einstein", "su4-mod-su2", "su3xsu3-product", "u4-remark-frame"})
    CHECK(find_preset(name) != nullptr);
  const Preset* u4 = find_preset("u4-remark-frame");
  REQUIRE(u4);
  CHECK(u4->interpretive);
  CHECK_FALSE(u4->note.empty());
  const Json cat = catalog_report();
  CHECK(cat["presets"].size() == catalog().size());
  for (const auto& p : cat["presets"]) CHECK(p["expected"].size() == check_names().size());
}

TEST_CASE("preset expansion") {
  const auto c = parse_ok(Json{{"preset", "su5-einstein"}});
  REQUIRE(c.factors.size() == 1);
  CHECK(c.factors[0].type == SimpleType::A);
  CHECK(c.factors[0].rank == 4);
  CHECK(c.m == 2);
  CHECK(c.metric.kind == "einstein");
  CHECK(c.checks == check_names());
  CHECK(c.tolerance == 1e-9);
}

TEST_CASE("coefficient length mismatch is reported") {
  const Json doc = Json::parse(R"({"algebra":{"factors":[{"type":"A","rank":4}]},"isotropy":{"m":2},
                                   "metric":{"kind":"layer","coeffs":[1,2,3]}})");
  const auto r = parse_config(doc);
  CHECK_FALSE(r.config);
  CHECK(mentions(r.errors, "metric.coeffs: has 3 entries, expected m = 2"));
}

TEST_CASE("all errors are collected") {
  const Json doc = Json::parse(R"({"algebra":{"factors":[{"type":"Q","rank":2}],"extra":1},
                                   "isotropy":{"m":"two"},"checks":["hkt","hkt","sideways"],
                                   "expect":{"strong":"maybe"},"tolerance":0,"seed":-4,"colour":"blue"})");
  const auto r = parse_config(doc);
  CHECK_FALSE(r.config);
  CHECK(mentions(r.errors, "algebra.factors[0].type"));
  CHECK(mentions(r.errors, "algebra.extra: unknown key"));
  CHECK(mentions(r.errors, "isotropy.m"));
  CHECK(mentions(r.errors, "duplicate check"));
  CHECK(mentions(r.errors, "unknown check 'sideways'"));
  CHECK(mentions(r.errors, "expect.strong"));
  CHECK(mentions(r.errors, "tolerance"));
  CHECK(mentions(r.errors, "seed"));
  CHECK(mentions(r.errors, "$.colour: unknown key"));
  CHECK(r.errors.size() >= 9);
}

TEST_CASE("syntax errors and semantic limits") {
  CHECK_FALSE(parse_config_text("{\"algebra\": ").config);
  CHECK(mentions(parse_config_text("[1]").errors, "expected a JSON object"));
  CHECK(mentions(parse_config(Json{{"preset", "su3-group"}, {"isotropy", {{"m", 4}}}}).errors, "isotropy.m"));
  CHECK(mentions(parse_config(Json{{"preset", "nope"}}).errors, "unknown preset"));
  CHECK(mentions(parse_config(Json{{"preset", "su5-group"}, {"k_phases", {0.1}}}).errors, "k_phases"));
  CHECK(mentions(parse_config(Json{{"preset", "su3-group"}, {"isotropy", {{"m", 1}, {"u_frame", "u2n-remark"}}}}).errors,
                 "u2n-remark"));
  const Json explicit_frame = Json::parse(R"({"algebra":{"factors":[{"type":"A","rank":2}]},"isotropy":{"m":1,
      "u_frame":[{"cartan":[1,2,3]}]}})");
  CHECK(mentions(parse_config(explicit_frame).errors, "expected rank = 2"));
}

TEST_CASE("su3-group passes every check") {
  const auto out = run(parse_ok(Json{{"preset", "su3-group"}}));
  CHECK(out.exit_code == 0);
  for (const auto& c : out.report["checks"]) CHECK(c["verdict"] == "pass");
  CHECK(out.report["summary"]["passed"] == 8);
  CHECK(out.report["schema_version"] == kSchemaVersion);
}

TEST_CASE("expected failures are first class") {
  const auto out = run(parse_ok(Json{{"preset", "su5-einstein"}, {"checks", {"strong"}}}));
  const auto& strong = check_of(out.report, "strong");
  CHECK(strong["verdict"] == "fail");
  CHECK(strong["expected"] == "fail");
  CHECK(out.exit_code == 0);

  const auto wrong = run(parse_ok(Json{{"preset", "su5-einstein"}, {"checks", {"strong"}}, {"expect", {{"strong", "pass"}}}}));
  CHECK(wrong.exit_code == 1);
  CHECK(wrong.report["summary"]["mismatches"] == Json::array({"strong"}));
}

TEST_CASE("SU(4)/SU(2) Einstein metric has lambda 1") {
  const auto out = run(parse_ok(Json{{"preset", "su4-mod-su2"}, {"checks", {"hkt", "einstein"}}}));
  CHECK(out.exit_code == 0);
  CHECK(check_of(out.report, "hkt")["verdict"] == "pass");
  const auto& e = check_of(out.report, "einstein");
  CHECK(e["verdict"] == "pass");
  CHECK(e["residuals"]["lambda"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("not-applicable checks carry the error") {
  const auto out = run(parse_ok(Json{{"preset", "su5-perturbed"}}));
  CHECK(out.exit_code == 0);
  const auto& e = check_of(out.report, "einstein");
  CHECK(e["verdict"] == "n/a");
  CHECK(e["error"].get<std::string>().find("not HKT") != std::string::npos);
  CHECK(check_of(out.report, "hkt")["verdict"] == "fail");
}

TEST_CASE("every preset matches its expectations quickly") {
  for (const auto& p : catalog()) {
    CAPTURE(p.name);
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = run(parse_ok(Json{{"preset", p.name}}));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(out.exit_code == 0);
    CHECK(secs < 60);
  }
}

TEST_CASE("reports are deterministic and round-trip") {
  const Json doc = {{"preset", "su5-perturbed"}, {"seed", 12}};
  const auto a = run(parse_ok(doc)), b = run(parse_ok(doc));
  CHECK(without_timing(a.report).dump() == without_timing(b.report).dump());
  CHECK(a.report.contains("timing"));
  CHECK(Json::parse(a.report.dump()) == a.report);
  const auto c = run(parse_ok(Json{{"preset", "su5-perturbed"}, {"seed", 13}}));
  CHECK(without_timing(a.report)["checks"].dump() != without_timing(c.report)["checks"].dump());
}

TEST_CASE("construction errors surface as invalid input") {
  const auto c = parse_ok(Json::parse(R"({"algebra":{"factors":[{"type":"A","rank":3}]},"isotropy":{"m":1,"trivial":true}})"));
  CHECK_THROWS_AS(run(c), InvalidInput);
}

TEST_CASE("decompose report") {
  const Json r = decompose_report(parse_ok(Json{{"preset", "su5-group"}}));
  CHECK(r["decomposition"]["d"] == 2);
  CHECK(r["decomposition"]["layers"][0]["r_plus_size"] == 7);
  CHECK(r["coset"]["einstein_coefficients"] == Json::array({"2/5", "1/5"}));
}

}
