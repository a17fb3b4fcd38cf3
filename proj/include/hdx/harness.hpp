#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hdx/analysis.hpp"
#include "hdx/complex.hpp"
#include "hdx/face_function.hpp"
#include "hdx/operators.hpp"

namespace hdx {

/// Command-line values that take precedence over the config document.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  std::optional<std::uint64_t> samples;
};

struct CheckSpec {
  std::string id;
  nlohmann::json params = nlohmann::json::object();
};

struct ExperimentConfig {
  nlohmann::json complex = nlohmann::json::object();
  nlohmann::json function = nlohmann::json::object();
  std::vector<CheckSpec> checks;
  /// Axis name and its values, in config order; the sweep is their product.
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> sweep;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 100'000;
  int jobs = 1;
};

const std::vector<std::string>& known_checks();

/// Validates and normalizes; every problem is a kInvalidArgument error.
ExperimentConfig parse_config(const nlohmann::json& doc, const RunOverrides& overrides = {});

struct RunSummary {
  std::size_t points = 0;
  std::size_t verdicts = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t not_applicable = 0;
  std::size_t hypothesis_not_met = 0;
  /// 0 iff every pass/fail verdict passed, else 1.
  int exit_code = 0;
  nlohmann::json to_json() const;
};

/// Runs every sweep point: one JSON file per point and one CSV row per check
/// under config.out. Output bytes depend only on the config.
RunSummary run_experiment(const ExperimentConfig& config);

/// Config-level builders shared with the C API.
ComplexPtr build_complex(const nlohmann::json& source, std::optional<std::uint64_t> seed = std::nullopt);
FaceFunction build_function(const ComplexPtr& complex, const nlohmann::json& source,
                            std::optional<std::uint64_t> seed = std::nullopt);
/// "lower", "identity", {"canonical": i}, {"noise": rho} or {"terms": [{"coefficient", "word"}]}.
WalkSpec parse_walk(const nlohmann::json& spec, int level);
/// assemble_walk, reusing a matrix stored under $HDX_CACHE_DIR when set.
LinearMap cached_walk(const ComplexPtr& complex, const WalkSpec& spec);

void save_function(const std::string& path, const FaceFunction& f);
FaceFunction load_function(const ComplexPtr& complex, const std::string& path);

}  // namespace hdx
