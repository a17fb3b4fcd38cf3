#include "hdx/hdx.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "hdx/analysis.hpp"
#include "hdx/decomposition.hpp"
#include "hdx/error.hpp"
#include "hdx/harness.hpp"
#include "hdx/io.hpp"

struct hdx_complex {
  hdx::ComplexPtr ptr;
};

struct hdx_function {
  hdx::FaceFunction value;
};

namespace {

thread_local std::string last_error;

hdx_status record(hdx_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs body, mapping exceptions to status codes.
template <class Body>
hdx_status guarded(Body&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const hdx::Error& e) {
    return record(static_cast<hdx_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return record(HDX_INVALID_ARGUMENT, std::string("bad JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return record(HDX_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(HDX_INTERNAL, e.what());
  }
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse(const char* text, const char* what) {
  if (text == nullptr) hdx::fail(hdx::ErrorCode::kInvalidArgument, std::string(what) + " is null");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    hdx::fail(hdx::ErrorCode::kInvalidArgument, std::string(what) + " is not valid JSON: " + e.what());
  }
}

template <class T>
void need(const T* p, const char* what) {
  if (p == nullptr) hdx::fail(hdx::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* hdx_last_error(void) { return last_error.c_str(); }

void hdx_string_free(char* s) { std::free(s); }

const char* hdx_version(void) { return "1.0.0"; }

hdx_status hdx_complex_generate(const char* spec_json, hdx_complex** out) {
  return guarded([&] {
    need(out, "output handle");
    *out = new hdx_complex{hdx::build_complex(parse(spec_json, "complex spec"))};
    return HDX_OK;
  });
}

hdx_status hdx_complex_load(const char* path, hdx_complex** out) {
  return guarded([&] {
    need(out, "output handle");
    need(path, "path");
    *out = new hdx_complex{hdx::load_complex(path)};
    return HDX_OK;
  });
}

hdx_status hdx_complex_save(const hdx_complex* complex, const char* path) {
  return guarded([&] {
    need(complex, "complex");
    need(path, "path");
    hdx::save_complex(path, *complex->ptr);
    return HDX_OK;
  });
}

hdx_status hdx_complex_write(const hdx_complex* complex, char** text) {
  return guarded([&] {
    need(complex, "complex");
    need(text, "output string");
    std::ostringstream out;
    hdx::write_complex(out, *complex->ptr);
    *text = copy_out(out.str());
    return HDX_OK;
  });
}

hdx_status hdx_complex_info(const hdx_complex* complex, char** json) {
  return guarded([&] {
    need(complex, "complex");
    need(json, "output string");
    const auto& cx = *complex->ptr;
    std::vector<std::size_t> sizes;
    for (int i = 0; i <= cx.dimension(); ++i) sizes.push_back(cx.level_size(i));
    *json = copy_out(nlohmann::json{{"dimension", cx.dimension()},
                                    {"levels", sizes},
                                    {"vertex_bound", cx.vertex_bound()}}
                         .dump());
    return HDX_OK;
  });
}

void hdx_complex_free(hdx_complex* complex) { delete complex; }

hdx_status hdx_function_generate(const hdx_complex* complex, const char* spec_json, hdx_function** out) {
  return guarded([&] {
    need(complex, "complex");
    need(out, "output handle");
    *out = new hdx_function{hdx::build_function(complex->ptr, parse(spec_json, "function spec"))};
    return HDX_OK;
  });
}

hdx_status hdx_function_load(const hdx_complex* complex, const char* path, hdx_function** out) {
  return guarded([&] {
    need(complex, "complex");
    need(path, "path");
    need(out, "output handle");
    *out = new hdx_function{hdx::load_function(complex->ptr, path)};
    return HDX_OK;
  });
}

hdx_status hdx_function_save(const hdx_function* f, const char* path) {
  return guarded([&] {
    need(f, "function");
    need(path, "path");
    hdx::save_function(path, f->value);
    return HDX_OK;
  });
}

void hdx_function_free(hdx_function* f) { delete f; }

hdx_status hdx_decompose(const hdx_function* f, const char* basis, char** json) {
  return guarded([&] {
    need(f, "function");
    need(json, "output string");
    const std::string which = basis == nullptr ? "bottom_up" : basis;
    nlohmann::json doc;
    if (which == "bottom_up") {
      doc["decomposition"] = hdx::to_json(hdx::bottom_up_explicit(f->value));
      doc["norms"] = hdx::to_json(hdx::norm_relations(f->value));
    } else if (which == "hd_level_set") {
      const hdx::HdLevelSetSolver solver(f->value.complex(), f->value.level());
      doc["decomposition"] = hdx::to_json(solver.decompose(f->value));
      doc["norms"] = hdx::to_json(hdx::norm_relations(f->value, &solver));
    } else {
      hdx::fail(hdx::ErrorCode::kInvalidArgument, "basis must be 'bottom_up' or 'hd_level_set'");
    }
    *json = copy_out(doc.dump(2));
    return HDX_OK;
  });
}

hdx_status hdx_spectrum(const hdx_complex* complex, const char* walk_json, int level, int jobs, char** json) {
  return guarded([&] {
    need(complex, "complex");
    need(json, "output string");
    auto profile = hdx::measure_gamma(complex->ptr, jobs < 1 ? 1 : jobs);
    if (walk_json != nullptr) {
      const auto walk = hdx::cached_walk(complex->ptr, hdx::parse_walk(parse(walk_json, "walk spec"), level));
      const hdx::HdLevelSetSolver solver(complex->ptr, level);
      auto strips = hdx::approximate_eigenvalues(walk, solver);
      strips.gamma = profile.gamma;
      strips.links = std::move(profile.links);
      strips.disconnected = std::move(profile.disconnected);
      profile = std::move(strips);
    }
    *json = copy_out(hdx::to_json(profile).dump(2));
    return HDX_OK;
  });
}

hdx_status hdx_run(const char* config_json, const char* overrides_json, char** summary) {
  return guarded([&] {
    need(summary, "output string");
    hdx::RunOverrides overrides;
    if (overrides_json != nullptr) {
      const auto o = parse(overrides_json, "overrides");
      if (o.contains("seed")) overrides.seed = o.at("seed").get<std::uint64_t>();
      if (o.contains("jobs")) overrides.jobs = o.at("jobs").get<int>();
      if (o.contains("out")) overrides.out = o.at("out").get<std::string>();
      if (o.contains("samples")) overrides.samples = o.at("samples").get<std::uint64_t>();
    }
    const auto config = hdx::parse_config(parse(config_json, "config"), overrides);
    const auto result = hdx::run_experiment(config);
    auto doc = result.to_json();
    doc["out"] = config.out;
    *summary = copy_out(doc.dump(2));
    return result.exit_code == 0 ? HDX_OK : HDX_CHECKS_FAILED;
  });
}

}  // extern "C"
