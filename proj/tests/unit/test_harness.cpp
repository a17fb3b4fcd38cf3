#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "hdx/error.hpp"
#include "hdx/harness.hpp"

using namespace hdx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hdx-harness-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("config validation") {
  const json base = {{"complex", {{"generator", "complete"}, {"n", 6}, {"d", 3}}}, {"checks", {"garland"}}};
  CHECK_NOTHROW(parse_config(base));
  json bad = base;
  bad["checks"] = {"foo"};
  CHECK(code_of([&] { parse_config(bad); }) == ErrorCode::kInvalidArgument);
  bad = base;
  bad["checks"] = json::array();
  CHECK(code_of([&] { parse_config(bad); }) == ErrorCode::kInvalidArgument);
  bad = base;
  bad["function"] = {{"generator", "random_sparse"}, {"alpha", 0.2}};
  CHECK(code_of([&] { parse_config(bad); }) == ErrorCode::kInvalidArgument);
  bad["seed"] = 4;
  CHECK_NOTHROW(parse_config(bad));
  bad = base;
  bad["sweep"] = {{"n", json::array()}};
  CHECK(code_of([&] { parse_config(bad); }) == ErrorCode::kInvalidArgument);
  bad = base;
  bad["complex"]["generator"] = "moebius";
  CHECK(code_of([&] { parse_config(bad); }) == ErrorCode::kInvalidArgument);
  bad = base;
  bad["checks"] = {{{"id", "anti_tribes"}, {"mode", "monte_carlo"}}};
  CHECK(code_of([&] { parse_config(bad); }) == ErrorCode::kInvalidArgument);

  RunOverrides o;
  o.seed = 9;
  o.jobs = 2;
  o.out = "elsewhere";
  const auto cfg = parse_config(base, o);
  CHECK(cfg.seed == 9u);
  CHECK(cfg.jobs == 2);
  CHECK(cfg.out == "elsewhere");
  CHECK(known_checks().size() == 18);
}

TEST_CASE("garland run on the complete complex") {
  const auto out = scratch("garland");
  json doc = {{"complex", {{"generator", "complete"}, {"n", 8}, {"d", 3}}},
              {"function", {{"generator", "random_real"}, {"level", 2}}},
              {"checks", {"garland", "adjointness", "bottom_up"}},
              {"seed", 5},
              {"out", out.string()}};
  const auto summary = run_experiment(parse_config(doc));
  CHECK(summary.exit_code == 0);
  CHECK(summary.passed == 3);
  CHECK(fs::exists(out / "point-0000.json"));
  const auto csv = slurp(out / "verdicts.csv");
  CHECK(csv.rfind("# hdx-verdicts v1\n", 0) == 0);
}

TEST_CASE("sweeps are deterministic across worker counts") {
  json doc = {{"complex", {{"generator", "complete"}, {"n", 6}, {"d", 3}}},
              {"function", {{"generator", "random_sparse"}, {"alpha", 0.3}}},
              {"checks", {"influence_bounds", {{"id", "hypercontractivity"}, {"i", 1}}, "level_i"}},
              {"sweep", {{"n", {6, 7, 8}}, {"seed", {1, 2}}}},
              {"seed", 1}};
  const auto a = scratch("sweep-a");
  const auto b = scratch("sweep-b");
  doc["out"] = a.string();
  doc["jobs"] = 1;
  const auto sa = run_experiment(parse_config(doc));
  doc["out"] = b.string();
  doc["jobs"] = 4;
  const auto sb = run_experiment(parse_config(doc));
  CHECK(sa.points == 6);
  CHECK(sa.verdicts == 18);
  CHECK(slurp(a / "verdicts.csv") == slurp(b / "verdicts.csv"));
  for (int p = 0; p < 6; ++p) {
    char name[32];
    std::snprintf(name, sizeof name, "point-%04d.json", p);
    CHECK(slurp(a / name) == slurp(b / name));
  }
  const auto point = json::parse(slurp(a / "point-0005.json"));
  CHECK(point["complex"]["n"] == 8);
  CHECK(point["function"]["seed"] == 2);
}

TEST_CASE("anti-tribes Monte Carlo is byte-identical across runs") {
  json doc = {{"checks", {{{"id", "anti_tribes"}, {"mode", "monte_carlo"}, {"n", 60}, {"k", 15}, {"K", 2.0}}}},
              {"seed", 2024},
              {"samples", 20000}};
  const auto a = scratch("mc-a");
  const auto b = scratch("mc-b");
  doc["out"] = a.string();
  run_experiment(parse_config(doc));
  doc["out"] = b.string();
  run_experiment(parse_config(doc));
  CHECK(slurp(a / "verdicts.csv") == slurp(b / "verdicts.csv"));
}

TEST_CASE("error codes") {
  json infeasible = {{"checks", {{{"id", "anti_tribes"}, {"n", 6}, {"k", 3}, {"K", 4.0}}}},
                     {"out", scratch("infeasible").string()}};
  CHECK(code_of([&] { run_experiment(parse_config(infeasible)); }) == ErrorCode::kInfeasible);
  json singular = {{"complex", {{"generator", "hypercube"}, {"n", 2}}},
                   {"function", {{"generator", "dictator"}, {"bit", 1}}},
                   {"checks", {{{"id", "expansion"}, {"walk", "lower"}}}},
                   {"out", scratch("singular").string()}};
  CHECK(code_of([&] { run_experiment(parse_config(singular)); }) == ErrorCode::kNumerical);
}

TEST_CASE("walk cache") {
  const auto dir = scratch("cache");
  setenv("HDX_CACHE_DIR", dir.c_str(), 1);
  auto cx = complete_complex(7, 3);
  const auto first = cached_walk(cx, canonical_walk(2, 1));
  const auto second = cached_walk(cx, canonical_walk(2, 1));
  unsetenv("HDX_CACHE_DIR");
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);
  CHECK((first.dense() - second.dense()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((first.dense() - assemble_walk(cx, canonical_walk(2, 1)).dense()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("function files") {
  auto cx = complete_complex(6, 3);
  const auto f = random_real(cx, 2, 3);
  const auto path = (fs::temp_directory_path() / "hdx-function.json").string();
  save_function(path, f);
  const auto g = load_function(cx, path);
  CHECK(g.level() == 2);
  CHECK((f.values() - g.values()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(code_of([&] { load_function(complete_complex(5, 3), path); }) == ErrorCode::kIo);
}
