// Command-line front end. Talks to the library only through hdx.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdx/hdx.h"

using nlohmann::json;

namespace {

struct Failure {
  int code;
};

// Throws Failure after printing the library's message.
void check(hdx_status status, const char* step) {
  if (status == HDX_OK) return;
  std::cerr << "hdx: " << step << ": " << hdx_last_error() << '\n';
  throw Failure{static_cast<int>(status)};
}

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  hdx_string_free(s);
  return out;
}

json read_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) {
    std::cerr << "hdx: cannot read config " << path << '\n';
    throw Failure{HDX_IO};
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    std::cerr << "hdx: config " << path << " is not valid JSON: " << e.what() << '\n';
    throw Failure{HDX_INVALID_ARGUMENT};
  }
}

// Flags shared by subcommands that need a complex; set values override the config's "complex".
struct ComplexFlags {
  std::string generator;
  std::string file;
  std::optional<int> n, d, k, num_top;
  std::optional<std::uint64_t> seed;
  std::optional<double> K, c, c1;

  void attach(CLI::App* app) {
    app->add_option("--complex", file, "Complex file (overrides any generator)");
    app->add_option("--n", n, "Number of vertices or hypercube coordinates");
    app->add_option("--d", d, "Top-face size");
    app->add_option("--k", k, "Anti-tribes level");
    app->add_option("--num-top", num_top, "Top faces of a random complex");
    app->add_option("--seed", seed, "Seed for random generators");
    app->add_option("--K", K, "Anti-tribes influence parameter");
    app->add_option("--c", c, "Anti-tribes level parameter");
    app->add_option("--c1", c1, "Anti-tribes tribe-size parameter");
  }

  json spec(json base) const {
    if (!base.is_object()) base = json::object();
    if (!generator.empty()) base["generator"] = generator;
    if (n) base["n"] = *n;
    if (d) base["d"] = *d;
    if (k) base["k"] = *k;
    if (num_top) base["num_top"] = *num_top;
    if (seed) base["seed"] = *seed;
    if (K) base["K"] = *K;
    if (c) base["c"] = *c;
    if (c1) base["c1"] = *c1;
    if (!file.empty()) base = json{{"generator", "file"}, {"path", file}};
    return base;
  }
};

struct ComplexHandle {
  hdx_complex* ptr = nullptr;
  ~ComplexHandle() { hdx_complex_free(ptr); }
};

struct FunctionHandle {
  hdx_function* ptr = nullptr;
  ~FunctionHandle() { hdx_function_free(ptr); }
};

void load_complex(const json& spec, ComplexHandle& out) {
  check(hdx_complex_generate(spec.dump().c_str(), &out.ptr), "building complex");
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out || !(out << text)) {
    std::cerr << "hdx: cannot write " << path << '\n';
    throw Failure{HDX_IO};
  }
}

int run_config(const std::string& config_path, bool sweep, std::optional<std::uint64_t> seed,
               std::optional<int> jobs, const std::string& out, std::optional<std::uint64_t> samples) {
  json config = read_config(config_path);
  if (!sweep) {
    config.erase("sweep");
  } else if (!config.contains("sweep")) {
    std::cerr << "hdx: sweep needs a 'sweep' section in the config\n";
    return HDX_INVALID_ARGUMENT;
  }
  json overrides = json::object();
  if (seed) overrides["seed"] = *seed;
  if (jobs) overrides["jobs"] = *jobs;
  if (!out.empty()) overrides["out"] = out;
  if (samples) overrides["samples"] = *samples;
  char* summary = nullptr;
  const hdx_status status = hdx_run(config.dump().c_str(), overrides.dump().c_str(), &summary);
  if (status != HDX_OK && status != HDX_CHECKS_FAILED) check(status, sweep ? "sweep" : "verify");
  std::cout << take(summary) << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis and verification toolkit for weighted high-dimensional expanders"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hdx_version()));

  std::string config_path;
  std::string out_path;

  ComplexFlags gen_flags;
  auto* generate = app.add_subcommand("generate", "Write a complex file");
  generate->add_option("generator", gen_flags.generator, "complete | hypercube | random | anti_tribes");
  generate->add_option("--config", config_path, "Config whose 'complex' section supplies defaults");
  generate->add_option("-o,--out", out_path, "Output file (default stdout)");
  gen_flags.attach(generate);

  ComplexFlags dec_flags;
  std::string function_spec;
  std::string function_file;
  std::string basis = "bottom_up";
  auto* decompose = app.add_subcommand("decompose", "Emit a decomposition as JSON");
  decompose->add_option("--config", config_path, "Config supplying 'complex' and 'function'");
  decompose->add_option("--generator", dec_flags.generator, "Complex generator");
  decompose->add_option("--function", function_spec, "Function spec as JSON");
  decompose->add_option("--function-file", function_file, "Function file");
  decompose->add_option("--basis", basis, "bottom_up | hd_level_set")->check(CLI::IsMember({"bottom_up", "hd_level_set"}));
  decompose->add_option("-o,--out", out_path, "Output file (default stdout)");
  dec_flags.attach(decompose);

  ComplexFlags spec_flags;
  std::string walk_spec;
  int level = -1;
  int spectrum_jobs = 1;
  auto* spectrum = app.add_subcommand("spectrum", "Emit link spectra, gamma and optional walk strips");
  spectrum->add_option("--config", config_path, "Config supplying 'complex'");
  spectrum->add_option("--generator", spec_flags.generator, "Complex generator");
  spectrum->add_option("--walk", walk_spec, R"(Walk as JSON: "lower", {"canonical": i}, {"noise": rho})");
  spectrum->add_option("--level", level, "Walk level (default d)");
  spectrum->add_option("--jobs", spectrum_jobs, "Threads for link spectra");
  spectrum->add_option("-o,--out", out_path, "Output file (default stdout)");
  spec_flags.attach(spectrum);

  std::optional<std::uint64_t> run_seed;
  std::optional<int> run_jobs;
  std::optional<std::uint64_t> run_samples;
  std::string run_out;
  auto add_run = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
    cmd->add_option("--seed", run_seed, "Seed for stochastic generators and estimators");
    cmd->add_option("--jobs", run_jobs, "Worker threads");
    cmd->add_option("--out", run_out, "Output directory");
    cmd->add_option("--samples", run_samples, "Monte Carlo sample count");
    return cmd;
  };
  auto* verify = add_run("verify", "Run the config's checks once (sweep axes ignored)");
  auto* sweep = add_run("sweep", "Run the config's checks over its sweep grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : HDX_INVALID_ARGUMENT;
  }

  try {
    if (*generate) {
      ComplexHandle cx;
      load_complex(gen_flags.spec(read_config(config_path).value("complex", json::object())), cx);
      char* text = nullptr;
      check(hdx_complex_write(cx.ptr, &text), "writing complex");
      emit(take(text), out_path);
      return 0;
    }
    if (*decompose) {
      const json config = read_config(config_path);
      ComplexHandle cx;
      load_complex(dec_flags.spec(config.value("complex", json::object())), cx);
      FunctionHandle f;
      if (!function_file.empty()) {
        check(hdx_function_load(cx.ptr, function_file.c_str(), &f.ptr), "loading function");
      } else {
        json fspec = config.value("function", json{{"generator", "constant"}, {"value", 1.0}});
        if (!function_spec.empty()) {
          try {
            fspec = json::parse(function_spec);
          } catch (const json::exception& e) {
            std::cerr << "hdx: --function is not valid JSON: " << e.what() << '\n';
            return HDX_INVALID_ARGUMENT;
          }
        }
        if (!fspec.contains("seed") && config.contains("seed")) fspec["seed"] = config["seed"];
        check(hdx_function_generate(cx.ptr, fspec.dump().c_str(), &f.ptr), "building function");
      }
      char* text = nullptr;
      check(hdx_decompose(f.ptr, basis.c_str(), &text), "decomposing");
      emit(take(text), out_path);
      return 0;
    }
    if (*spectrum) {
      ComplexHandle cx;
      load_complex(spec_flags.spec(read_config(config_path).value("complex", json::object())), cx);
      if (level < 0) {
        char* info = nullptr;
        check(hdx_complex_info(cx.ptr, &info), "reading complex");
        level = json::parse(take(info)).at("dimension").get<int>();
      }
      char* text = nullptr;
      check(hdx_spectrum(cx.ptr, walk_spec.empty() ? nullptr : walk_spec.c_str(), level, spectrum_jobs, &text),
            "spectrum");
      emit(take(text), out_path);
      return 0;
    }
    if (*verify) return run_config(config_path, false, run_seed, run_jobs, run_out, run_samples);
    if (*sweep) return run_config(config_path, true, run_seed, run_jobs, run_out, run_samples);
  } catch (const Failure& f) {
    return f.code;
  }
  return HDX_INTERNAL;
}
