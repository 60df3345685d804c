#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "joycehkt/cli.hpp"

using joycehkt::cli::Json;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitInternal = 3;

int report_errors(const std::vector<std::string>& errors) {
  std::cerr << "invalid configuration:\n";
  for (const auto& e : errors) std::cerr << "  " << e << "\n";
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joyce hypercomplex structures and HKT metric checks"};
  app.require_subcommand(1, 1);

  std::string config_path, preset;
  std::optional<double> tolerance;
  std::optional<long long> seed;
  bool json_only = false, quiet = false;

  auto add_job_options = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON job configuration")->check(CLI::ExistingFile);
    sub->add_option("--preset", preset, "catalog preset name");
    sub->add_option("--tolerance", tolerance, "residual threshold (default 1e-9)");
    sub->add_option("--seed", seed, "seed for randomized metrics and sampling");
  };
  auto* decompose = app.add_subcommand("decompose", "Joyce decomposition and coset data");
  auto* verify = app.add_subcommand("verify", "run the configured checks");
  auto* catalog = app.add_subcommand("catalog", "list the built-in presets");
  add_job_options(decompose);
  add_job_options(verify);
  for (auto* sub : {decompose, verify, catalog}) {
    sub->add_flag("--json-only", json_only, "suppress the table on stderr");
    sub->add_flag("--quiet", quiet, "suppress the JSON report on stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  if (catalog->parsed()) {
    const Json r = joycehkt::cli::catalog_report();
    if (!quiet) std::cout << r.dump(2) << "\n";
    if (!json_only)
      for (const auto& p : joycehkt::cli::catalog())
        std::cerr << p.name << (p.interpretive ? " [interpretive]" : "") << ": " << p.description << "\n";
    return 0;
  }

  Json doc = Json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      doc = Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
      return report_errors({std::string("syntax: ") + e.what()});
    }
    if (!doc.is_object()) return report_errors({"$: expected a JSON object"});
  }
  if (!preset.empty()) doc["preset"] = preset;
  if (doc.empty()) return report_errors({"$: give --config or --preset"});
  if (tolerance) doc["tolerance"] = *tolerance;
  if (seed) doc["seed"] = *seed;

  const auto parsed = joycehkt::cli::parse_config(doc);
  if (!parsed.config) return report_errors(parsed.errors);

  try {
    if (decompose->parsed()) {
      const Json r = joycehkt::cli::decompose_report(*parsed.config);
      if (!quiet) std::cout << r.dump(2) << "\n";
      return 0;
    }
    const auto out = joycehkt::cli::run(*parsed.config);
    if (!quiet) std::cout << out.report.dump(2) << "\n";
    if (!json_only) std::cerr << out.table;
    return out.exit_code;
  } catch (const joycehkt::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const joycehkt::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
