#pragma once

// Job configuration, preset catalog and report generation for hktverify.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "joycehkt/forms.hpp"

namespace joycehkt::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

/// Canonical check order; checks run in this order whatever the config says.
const std::vector<std::string>& check_names();

enum class Verdict { Pass, Fail, NA };
std::string to_string(Verdict v);

struct MetricSpec {
  std::string kind = "reference";  // reference | einstein | layer | perturbed
  std::vector<double> coeffs;      // layer
  std::shared_ptr<MetricSpec> base;
  std::optional<std::uint64_t> seed;
  double size = 1e-2;
};

/// Toral vector as written in a config: center and Cartan (simple coroot) parts.
struct ToralInput {
  std::vector<double> center, cartan;
};

struct JobConfig {
  std::string preset;
  std::vector<FactorSpec> factors;
  int center_dim = 0;
  int rank_cap = 8;
  std::string tie_break = "first";
  int m = 1;
  bool trivial = false;
  std::string v_preset = "default";  // default | center-antidiagonal | explicit
  std::vector<ToralInput> v_vectors;
  std::string frame_preset = "default";  // default | u2n-remark | center-diagonal | explicit
  std::vector<ToralInput> frame_vectors;
  std::optional<std::vector<double>> k_phases;
  MetricSpec metric;
  std::vector<std::string> checks;
  std::map<std::string, Verdict> expected;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  Json echo;  // normalized configuration
};

struct ParseResult {
  std::optional<JobConfig> config;
  std::vector<std::string> errors;
};

/// Validates the whole document and reports every problem found.
ParseResult parse_config(const Json& doc);
ParseResult parse_config_text(const std::string& text);

struct Preset {
  std::string name;
  std::string description;
  bool interpretive = false;
  std::string note;
  Json config;
};

const std::vector<Preset>& catalog();
const Preset* find_preset(const std::string& name);
Json catalog_report();

/// Algebra, coset, hypercomplex structure and metric of a job.
struct BuiltJob {
  std::shared_ptr<const LieAlgebra> algebra;
  JoyceDecomposition dec;
  std::unique_ptr<CosetSpace> coset;
  HypercomplexStructure h;
  InvariantMetric metric;
};

/// Throws InvalidInput when the configuration does not define a coset.
BuiltJob build_job(const JobConfig& config);

struct RunOutcome {
  Json report;          // includes a separate "timing" member
  std::string table;    // human-readable summary
  int exit_code = 0;    // 0 all verdicts as expected, 1 otherwise
};

/// Runs the requested checks. Throws InvalidInput when the algebra, isotropy
/// or metric cannot be built, InternalError on consistency failures.
RunOutcome run(const JobConfig& config);

/// Decomposition summary for the configured algebra (no checks).
Json decompose_report(const JobConfig& config);

/// Report without its timing member, as used for determinism comparisons.
Json without_timing(Json report);

}  // namespace joycehkt::cli
