#include "hdx/harness.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "hdx/decomposition.hpp"
#include "hdx/error.hpp"
#include "hdx/generators.hpp"
#include "hdx/io.hpp"
#include "hdx/link.hpp"

namespace hdx {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kMaxPoints = 100'000;
constexpr const char* kCsvHeader = "# hdx-verdicts v1";

[[noreturn]] void invalid(const std::string& what) { fail(ErrorCode::kInvalidArgument, what); }

template <class T>
T field(const json& obj, const char* key, T fallback) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
T required(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) invalid(where + " needs field '" + key + "'");
  return field<T>(obj, key, T{});
}

std::optional<std::uint64_t> seed_of(const json& source, std::optional<std::uint64_t> fallback) {
  if (source.contains("seed")) return field<std::uint64_t>(source, "seed", 0);
  return fallback;
}

std::uint64_t require_seed(const json& source, std::optional<std::uint64_t> fallback, const std::string& what) {
  const auto seed = seed_of(source, fallback);
  if (!seed) invalid(what + " is stochastic and needs a seed");
  return *seed;
}

bool is_stochastic_function(const json& f) {
  const auto gen = field<std::string>(f, "generator", "constant");
  return gen == "random_sparse" || gen == "random_real";
}

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Lazily built per-point state; checks share the complex, function and gamma.
class PointContext {
 public:
  PointContext(json complex, json function, std::optional<std::uint64_t> seed, std::uint64_t samples)
      : complex_spec_(std::move(complex)), function_spec_(std::move(function)), seed_(seed), samples_(samples) {}

  const ComplexPtr& complex() {
    if (!complex_) complex_ = build_complex(complex_spec_, seed_);
    return complex_;
  }
  const FaceFunction& function() {
    if (!function_) function_.emplace(build_function(complex(), function_spec_, seed_));
    return *function_;
  }
  double gamma() {
    if (!gamma_) gamma_ = measure_gamma(complex()).gamma;
    return *gamma_;
  }
  const json& complex_spec() const { return complex_spec_; }
  const json& function_spec() const { return function_spec_; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  std::uint64_t samples() const { return samples_; }

 private:
  json complex_spec_;
  json function_spec_;
  std::optional<std::uint64_t> seed_;
  std::uint64_t samples_;
  ComplexPtr complex_;
  std::optional<FaceFunction> function_;
  std::optional<double> gamma_;
};

TheoremVerdict identity_verdict(const std::string& name, double residual, double tolerance) {
  TheoremVerdict v;
  v.theorem = name;
  v.lhs = residual;
  v.rhs_terms = {{"tolerance", tolerance}};
  v.status = residual <= tolerance ? Status::kPass : Status::kFail;
  return v;
}

TheoremVerdict run_garland(PointContext& ctx, const json& p) {
  const auto& f = ctx.function();
  const int k = f.level();
  const int d = ctx.complex()->dimension();
  const double scale = std::max(1.0, inner_product(f, f));
  double worst = 0.0;
  json sides = json::array();
  for (int i = 0; i <= k; ++i) {
    const auto r = garland_check_restrict(f, i);
    worst = std::max(worst, std::abs(r.lhs - r.rhs) / scale);
    sides.push_back({{"kind", "restrict"}, {"i", i}, {"lhs", r.lhs}, {"rhs", r.rhs}});
    if (k + i <= d) {
      const auto l = garland_check_localize(f, i);
      worst = std::max(worst, std::abs(l.lhs - l.rhs) / scale);
      sides.push_back({{"kind", "localize"}, {"i", i}, {"lhs", l.lhs}, {"rhs", l.rhs}});
    }
  }
  auto v = identity_verdict("garland", worst, field<double>(p, "tolerance", 1e-12));
  v.params = {{"k", k}, {"d", d}};
  v.witnesses = {{"sides", std::move(sides)}};
  return v;
}

TheoremVerdict run_adjointness(PointContext& ctx, const json& p) {
  const auto& f = ctx.function();
  const auto& cx = ctx.complex();
  const auto seed = field<std::uint64_t>(p, "seed", ctx.seed().value_or(1));
  double worst = 0.0;
  for (int j = 1; j <= f.level(); ++j) {
    const FaceFunction top = compose_down(cx, f.level(), j)(f);
    const FaceFunction below = random_real(cx, j - 1, seed + static_cast<std::uint64_t>(j));
    const double lhs = inner_product(up(below), top);
    const double rhs = inner_product(below, down(top));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  auto v = identity_verdict("adjointness", worst, field<double>(p, "tolerance", 1e-12));
  v.params = {{"k", f.level()}};
  v.seed = seed;
  return v;
}

TheoremVerdict run_bottom_up(PointContext& ctx, const json& p) {
  const auto& f = ctx.function();
  const auto rec = bottom_up_recursive(f);
  const auto exp = bottom_up_explicit(f);
  double worst = 0.0;
  for (std::size_t i = 0; i < rec.g.size(); ++i) {
    worst = std::max(worst, (rec.g[i].values() - exp.g[i].values()).cwiseAbs().maxCoeff());
  }
  const double tol = field<double>(p, "tolerance", 1e-12);
  const double recon_tol = field<double>(p, "reconstruction_tolerance", 1e-9);
  TheoremVerdict v;
  v.theorem = "bottom_up";
  v.params = {{"k", f.level()}};
  v.lhs = worst;
  v.rhs_terms = {{"tolerance", tol}, {"reconstruction_tolerance", recon_tol}};
  v.witnesses = {{"reconstruction_residual", exp.reconstruction_residual}};
  v.status = worst <= tol && exp.reconstruction_residual <= recon_tol ? Status::kPass : Status::kFail;
  return v;
}

TheoremVerdict run_g_restriction(PointContext& ctx, const json& p) {
  const auto& f = ctx.function();
  const auto& cx = ctx.complex();
  const int i = field<int>(p, "i", f.level());
  const int j = field<int>(p, "j", 1);
  if (!(0 <= j && j <= i && i <= f.level())) invalid("g_restriction needs 0 <= j <= i <= k");
  double worst = 0.0;
  Face witness;
  for (std::size_t t = 0; t < cx->level_size(j); ++t) {
    const auto r = g_restriction_check(f, i, cx->face(j, t));
    if (r.max_abs_diff >= worst) {
      worst = std::max(worst, r.max_abs_diff);
      if (witness.empty() || r.max_abs_diff > 0.0) witness = cx->face_copy(j, t);
    }
  }
  auto v = identity_verdict("g_restriction", worst, field<double>(p, "tolerance", 1e-10));
  v.params = {{"k", f.level()}, {"i", i}, {"j", j}};
  v.witnesses = {{"face", witness}};
  return v;
}

TheoremVerdict run_gamma(PointContext& ctx, const json& p) {
  const auto profile = measure_gamma(ctx.complex(), 1);
  TheoremVerdict v;
  v.theorem = "gamma";
  v.lhs = profile.gamma;
  v.params = {{"d", ctx.complex()->dimension()}};
  json disconnected = json::array();
  for (const auto& face : profile.disconnected) disconnected.push_back(face);
  v.witnesses = {{"disconnected", std::move(disconnected)}, {"links", profile.links.size()}};
  if (p.contains("expected")) {
    const double expected = field<double>(p, "expected", 0.0);
    const double tol = field<double>(p, "tolerance", 1e-9);
    v.rhs_terms = {{"expected", expected}, {"tolerance", tol}};
    v.status = std::abs(profile.gamma - expected) <= tol ? Status::kPass : Status::kFail;
  } else {
    v.status = profile.disconnected.empty() ? Status::kPass : Status::kFail;
    if (!profile.disconnected.empty()) v.note = "disconnected link";
  }
  return v;
}

TheoremVerdict run_pseudorandomness(PointContext& ctx, const json& p) {
  const auto& f = ctx.function();
  const auto r = pseudorandomness(f, field<int>(p, "i", std::min(1, f.level())));
  TheoremVerdict v;
  v.theorem = "pseudorandomness";
  v.params = {{"k", f.level()}, {"i", r.level}};
  v.lhs = r.eps;
  v.witnesses = to_json(r);
  v.status = r.monotone ? Status::kPass : Status::kFail;
  return v;
}

TheoremVerdict run_norms(PointContext& ctx, const json&) {
  const auto& f = ctx.function();
  std::optional<HdLevelSetSolver> solver;
  std::string note;
  try {
    solver.emplace(ctx.complex(), f.level());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNumerical) throw;
    note = std::string("HD-Level-Set unavailable: ") + e.what();
  }
  const auto report = norm_relations(f, solver ? &*solver : nullptr);
  TheoremVerdict v;
  v.theorem = "decomposition_norms";
  v.params = {{"k", f.level()}};
  v.lhs = report.max_cross_inner;
  v.witnesses = to_json(report);
  v.status = report.lp_claim_holds ? Status::kPass : Status::kFail;
  v.note = note;
  return v;
}

TheoremVerdict run_expansion(PointContext& ctx, const json& p) {
  const auto& f = ctx.function();
  const auto& cx = ctx.complex();
  const auto walk = cached_walk(cx, parse_walk(field<json>(p, "walk", json{{"canonical", 1}}), f.level()));
  const HdLevelSetSolver solver(cx, f.level());
  const auto strips = approximate_eigenvalues(walk, solver);
  std::optional<ExpansionConstants> constants;
  if (p.contains("level_constant") || p.contains("gamma_constant")) {
    constants = ExpansionConstants{field<double>(p, "level_constant", 1.0), field<double>(p, "gamma_constant", 0.0)};
  }
  return check_expansion_theorem(f, walk, strips, field<double>(p, "delta", 0.3), ctx.gamma(), constants);
}

AntiTribesParams anti_tribes_params(PointContext& ctx, const json& p) {
  const json& fs = ctx.function_spec();
  const json& cs = ctx.complex_spec();
  const bool from_function = field<std::string>(fs, "generator", "") == "anti_tribes";
  const json& base = from_function ? fs : json::object();
  AntiTribesParams params;
  params.n = field<int>(p, "n", field<int>(base, "n", field<int>(cs, "n", 0)));
  params.k = field<int>(p, "k", field<int>(base, "k", field<int>(fs, "level", field<int>(cs, "d", 0))));
  params.K = field<double>(p, "K", field<double>(base, "K", field<double>(cs, "K", 1.0)));
  params.c = field<double>(p, "c", field<double>(base, "c", field<double>(cs, "c", 1.0)));
  params.c1 = field<double>(p, "c1", field<double>(base, "c1", field<double>(cs, "c1", 1.0)));
  return params;
}

TheoremVerdict run_anti_tribes(PointContext& ctx, const json& p) {
  const auto params = anti_tribes_params(ctx, p);
  const auto mode = field<std::string>(p, "mode", "exact");
  AntiTribesReport report;
  if (mode == "exact") {
    report = anti_tribes_exact(params);
  } else if (mode == "monte_carlo") {
    const auto seed = require_seed(p, ctx.seed(), "anti_tribes monte_carlo");
    report = anti_tribes_monte_carlo(params, field<std::uint64_t>(p, "samples", ctx.samples()), seed);
  } else {
    invalid("anti_tribes mode must be 'exact' or 'monte_carlo'");
  }
  auto v = anti_tribes_verdict(report);
  v.witnesses["report"] = to_json(report);
  return v;
}

using CheckFn = TheoremVerdict (*)(PointContext&, const json&);

const std::map<std::string, CheckFn>& check_table() {
  static const std::map<std::string, CheckFn> table = {
      {"garland", run_garland},
      {"adjointness", run_adjointness},
      {"bottom_up", run_bottom_up},
      {"g_restriction", run_g_restriction},
      {"localization",
       [](PointContext& ctx, const json& p) {
         return check_localization(ctx.function(), field<int>(p, "j", 1), ctx.gamma());
       }},
      {"gamma", run_gamma},
      {"pseudorandomness", run_pseudorandomness},
      {"decomposition_norms", run_norms},
      {"hypercontractivity",
       [](PointContext& ctx, const json& p) {
         return check_hypercontractivity(ctx.function(), field<int>(p, "i", 1), ctx.gamma());
       }},
      {"level_i",
       [](PointContext& ctx, const json& p) { return check_level_i(ctx.function(), field<int>(p, "i", 1)); }},
      {"expansion", run_expansion},
      {"bourgain",
       [](PointContext& ctx, const json& p) { return check_bourgain(ctx.function(), field<double>(p, "K", 1.0)); }},
      {"noise_sensitivity",
       [](PointContext& ctx, const json& p) {
         return check_noise_sensitivity(ctx.function(), field<double>(p, "rho", 0.5), field<double>(p, "eps", 0.3),
                                        ctx.gamma());
       }},
      {"noise_hypercontractivity",
       [](PointContext& ctx, const json&) { return check_noise_hypercontractivity(ctx.function()); }},
      {"influence_bounds",
       [](PointContext& ctx, const json&) { return check_influence_bounds(ctx.function(), ctx.gamma()); }},
      {"swap_bound",
       [](PointContext& ctx, const json& p) {
         return check_swap_bound(ctx.complex(), field<int>(p, "i", 1), field<int>(p, "j", 1), ctx.gamma());
       }},
      {"ddfh_bound",
       [](PointContext& ctx, const json& p) {
         return check_ddfh_bound(ctx.complex(), field<int>(p, "i", 2), field<int>(p, "j", 1), ctx.gamma());
       }},
      {"anti_tribes", run_anti_tribes},
  };
  return table;
}

struct Point {
  json axes = json::object();
  json complex;
  json function;
  std::vector<CheckSpec> checks;
};

// Axis values land on every spec object that already names the key; the
// shorthand axes n, d, k and alpha also reach their usual homes.
void apply_axis(Point& point, const std::string& axis, const json& value) {
  bool placed = false;
  auto place = [&](json& obj, const std::string& key) {
    obj[key] = value;
    placed = true;
  };
  if (point.complex.contains(axis)) place(point.complex, axis);
  if (point.function.contains(axis)) place(point.function, axis);
  for (auto& c : point.checks) {
    if (c.params.contains(axis)) place(c.params, axis);
  }
  if (axis == "n" && !point.complex.contains("n")) place(point.complex, "n");
  if (axis == "d" && !point.complex.contains("d")) place(point.complex, "d");
  if (axis == "k") place(point.function, "level");
  if (axis == "alpha" && !point.function.contains("alpha")) place(point.function, "alpha");
  if (axis == "seed") {
    if (!point.function.contains("seed")) place(point.function, "seed");
    if (field<std::string>(point.complex, "generator", "") == "random" && !point.complex.contains("seed")) {
      place(point.complex, "seed");
    }
  }
  if (!placed) {
    for (auto& c : point.checks) c.params[axis] = value;
  }
}

std::vector<Point> expand(const ExperimentConfig& config) {
  std::vector<Point> points(1);
  points[0].complex = config.complex;
  points[0].function = config.function;
  points[0].checks = config.checks;
  for (const auto& [axis, values] : config.sweep) {
    std::vector<Point> next;
    for (const auto& base : points) {
      for (const auto& value : values) {
        Point p = base;
        p.axes[axis] = value;
        apply_axis(p, axis, value);
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
    if (points.size() > kMaxPoints) invalid("sweep has more than 100000 points");
  }
  return points;
}

struct PointResult {
  json doc;
  std::vector<std::string> rows;
  std::vector<Status> statuses;
};

PointResult run_point(const ExperimentConfig& config, std::size_t index, const Point& point) {
  PointContext ctx(point.complex, point.function, config.seed, config.samples);
  PointResult result;
  json verdicts = json::array();
  for (const auto& check : point.checks) {
    const TheoremVerdict v = check_table().at(check.id)(ctx, check.params);
    json vj = to_json(v);
    vj["check"] = check.id;
    verdicts.push_back(vj);
    result.statuses.push_back(v.status);
    const std::string bound =
        v.rhs_terms.is_object() && v.rhs_terms.contains("bound") && v.rhs_terms["bound"].is_number()
            ? format_number(v.rhs_terms["bound"].get<double>())
            : "";
    std::ostringstream row;
    row << index << ',' << check.id << ',' << v.theorem << ',' << status_name(v.status) << ','
        << (v.passed() ? 1 : 0) << ',' << format_number(v.lhs) << ',' << bound << ','
        << csv_quote(point.axes.dump()) << ',' << csv_quote(v.fitted_constants.dump());
    result.rows.push_back(row.str());
  }
  result.doc = {{"point", index},
                {"axes", point.axes},
                {"complex", point.complex},
                {"function", point.function},
                {"seed", config.seed ? json(*config.seed) : json(nullptr)},
                {"verdicts", std::move(verdicts)}};
  return result;
}

void validate_complex_spec(const json& c, std::optional<std::uint64_t> seed) {
  if (!c.is_object()) invalid("'complex' must be an object");
  const auto gen = field<std::string>(c, "generator", "");
  if (gen == "random") require_seed(c, seed, "random complex");
  if (gen != "complete" && gen != "hypercube" && gen != "random" && gen != "anti_tribes" && gen != "file" &&
      gen != "none") {
    invalid("unknown complex generator '" + gen + "'");
  }
}

void validate_function_spec(const json& f, std::optional<std::uint64_t> seed) {
  if (!f.is_object()) invalid("'function' must be an object");
  const auto gen = field<std::string>(f, "generator", "constant");
  static const std::vector<std::string> known = {"constant",  "random_sparse", "random_real", "link_indicator",
                                                 "dictator",  "anti_tribes",   "file"};
  if (std::find(known.begin(), known.end(), gen) == known.end()) invalid("unknown function generator '" + gen + "'");
  if (is_stochastic_function(f)) require_seed(f, seed, gen + " function");
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, fn] : check_table()) out.push_back(id);
    return out;
  }();
  return ids;
}

ExperimentConfig parse_config(const json& doc, const RunOverrides& overrides) {
  if (!doc.is_object()) invalid("config must be a JSON object");
  ExperimentConfig config;
  config.complex = field<json>(doc, "complex", json{{"generator", "none"}});
  config.function = field<json>(doc, "function", json{{"generator", "constant"}, {"value", 1.0}});
  if (doc.contains("seed")) config.seed = field<std::uint64_t>(doc, "seed", 0);
  config.samples = field<std::uint64_t>(doc, "samples", config.samples);
  config.jobs = field<int>(doc, "jobs", static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  config.out = field<std::string>(doc, "out", "hdx-out");
  if (overrides.seed) config.seed = overrides.seed;
  if (overrides.samples) config.samples = *overrides.samples;
  if (overrides.jobs) config.jobs = *overrides.jobs;
  if (overrides.out) config.out = *overrides.out;
  if (config.jobs < 1) invalid("jobs must be positive");
  if (config.out.empty()) invalid("output directory must be non-empty");

  const json checks = field<json>(doc, "checks", json::array());
  if (!checks.is_array() || checks.empty()) invalid("config needs a non-empty 'checks' array");
  for (const auto& c : checks) {
    CheckSpec spec;
    if (c.is_string()) {
      spec.id = c.get<std::string>();
    } else if (c.is_object()) {
      spec.id = required<std::string>(c, "id", "check");
      spec.params = c;
      spec.params.erase("id");
    } else {
      invalid("each check must be an id string or an object with 'id'");
    }
    if (!check_table().count(spec.id)) invalid("unknown check id '" + spec.id + "'");
    if (spec.id == "anti_tribes" && field<std::string>(spec.params, "mode", "exact") == "monte_carlo") {
      require_seed(spec.params, config.seed, "anti_tribes monte_carlo");
    }
    config.checks.push_back(std::move(spec));
  }

  const json sweep = field<json>(doc, "sweep", json::object());
  if (!sweep.is_object()) invalid("'sweep' must be an object of axis arrays");
  for (const auto& [axis, values] : sweep.items()) {
    if (!values.is_array() || values.empty()) invalid("sweep axis '" + axis + "' must be a non-empty array");
    for (const auto& v : values) {
      if (v.is_number_float() && !std::isfinite(v.get<double>())) invalid("sweep axis '" + axis + "' is not finite");
      if (!v.is_number() && !v.is_string() && !v.is_array()) invalid("sweep axis '" + axis + "' has a bad value");
    }
    config.sweep.emplace_back(axis, values.get<std::vector<json>>());
  }
  // Validate every expanded point so that axis values reaching a generator are checked too.
  for (const auto& point : expand(config)) {
    validate_complex_spec(point.complex, config.seed);
    validate_function_spec(point.function, config.seed);
  }
  return config;
}

json RunSummary::to_json() const {
  return {{"points", points},       {"verdicts", verdicts},
          {"passed", passed},       {"failed", failed},
          {"not_applicable", not_applicable}, {"hypothesis_not_met", hypothesis_not_met},
          {"exit_code", exit_code}};
}

RunSummary run_experiment(const ExperimentConfig& config) {
  const auto points = expand(config);
  const fs::path out(config.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create output directory " + out.string() + ": " + ec.message());
  std::ofstream csv(out / "verdicts.csv", std::ios::binary | std::ios::trunc);
  if (!csv) fail(ErrorCode::kIo, "cannot write " + (out / "verdicts.csv").string());
  csv << kCsvHeader << "\npoint,check,theorem,status,pass,lhs,bound,axes,fitted_constants\n";

  // Workers compute points in any order; this thread is the single writer and
  // emits them in point order, so output bytes do not depend on scheduling.
  std::vector<std::optional<PointResult>> slots(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::vector<bool> done(points.size(), false);
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    while (!stop) {
      const std::size_t index = next++;
      if (index >= points.size()) return;
      std::optional<PointResult> result;
      std::exception_ptr error;
      try {
        result = run_point(config, index, points[index]);
      } catch (...) {
        error = std::current_exception();
      }
      {
        std::lock_guard lock(mutex);
        slots[index] = std::move(result);
        errors[index] = error;
        done[index] = true;
      }
      ready.notify_all();
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), points.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);

  RunSummary summary;
  summary.points = points.size();
  std::exception_ptr failure;
  for (std::size_t index = 0; index < points.size() && !failure; ++index) {
    PointResult result;
    {
      std::unique_lock lock(mutex);
      ready.wait(lock, [&] { return done[index]; });
      if (errors[index]) {
        failure = errors[index];
        stop = true;
        break;
      }
      result = std::move(*slots[index]);
      slots[index].reset();
    }
    char name[32];
    std::snprintf(name, sizeof name, "point-%04zu.json", index);
    std::ofstream doc(out / name, std::ios::binary | std::ios::trunc);
    if (!doc) {
      failure = std::make_exception_ptr(Error(ErrorCode::kIo, "cannot write " + (out / name).string()));
      stop = true;
      break;
    }
    doc << result.doc.dump(2) << '\n';
    for (const auto& row : result.rows) csv << row << '\n';
    for (Status s : result.statuses) {
      ++summary.verdicts;
      switch (s) {
        case Status::kPass:
          ++summary.passed;
          break;
        case Status::kFail:
          ++summary.failed;
          break;
        case Status::kNotApplicable:
          ++summary.not_applicable;
          break;
        case Status::kHypothesisNotMet:
          ++summary.hypothesis_not_met;
          break;
      }
    }
  }
  for (auto& t : pool) t.join();
  csv.flush();
  if (failure) std::rethrow_exception(failure);
  if (!csv) fail(ErrorCode::kIo, "failed writing verdicts.csv");
  summary.exit_code = summary.failed == 0 ? 0 : 1;
  return summary;
}

ComplexPtr build_complex(const json& source, std::optional<std::uint64_t> seed) {
  const auto gen = field<std::string>(source, "generator", "");
  if (gen == "complete") {
    return complete_complex(required<int>(source, "n", "complete complex"), required<int>(source, "d", "complete complex"));
  }
  if (gen == "hypercube") return hypercube_complex(required<int>(source, "n", "hypercube complex"));
  if (gen == "random") {
    return random_complex(required<int>(source, "n", "random complex"), required<int>(source, "d", "random complex"),
                          required<int>(source, "num_top", "random complex"),
                          require_seed(source, seed, "random complex"));
  }
  if (gen == "anti_tribes") {
    return complete_complex(required<int>(source, "n", "anti-tribes complex"),
                            required<int>(source, "k", "anti-tribes complex"));
  }
  if (gen == "file") return load_complex(required<std::string>(source, "path", "complex file"));
  if (gen == "none") invalid("this check needs a complex source");
  invalid("unknown complex generator '" + gen + "'");
}

FaceFunction build_function(const ComplexPtr& complex, const json& source, std::optional<std::uint64_t> seed) {
  const auto gen = field<std::string>(source, "generator", "constant");
  if (gen == "file") return load_function(complex, required<std::string>(source, "path", "function file"));
  const int level = field<int>(source, "level", complex->dimension());
  if (level < 0 || level > complex->dimension()) invalid("function level must lie in 0..d");
  if (gen == "constant") return FaceFunction::constant(complex, level, field<double>(source, "value", 1.0));
  if (gen == "random_sparse") {
    return random_sparse(complex, level, required<double>(source, "alpha", "random_sparse"),
                         require_seed(source, seed, "random_sparse"));
  }
  if (gen == "random_real") return random_real(complex, level, require_seed(source, seed, "random_real"));
  if (gen == "link_indicator") {
    return link_indicator(complex, level, make_face(required<std::vector<VertexId>>(source, "tau", "link_indicator")));
  }
  if (gen == "dictator") return dictator(complex, level, required<int>(source, "bit", "dictator"));
  if (gen == "anti_tribes") {
    AntiTribesParams p;
    p.n = static_cast<int>(complex->vertex_bound());
    p.k = level;
    p.K = field<double>(source, "K", 1.0);
    p.c = field<double>(source, "c", 1.0);
    p.c1 = field<double>(source, "c1", 1.0);
    return anti_tribes_function(complex, level, anti_tribes_tribes(p));
  }
  invalid("unknown function generator '" + gen + "'");
}

WalkSpec parse_walk(const json& spec, int level) {
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    if (name == "lower") return lower_walk(level);
    if (name == "identity") return identity_walk(level);
    invalid("unknown walk '" + name + "'");
  }
  if (!spec.is_object()) invalid("walk must be a name or an object");
  if (spec.contains("canonical")) return canonical_walk(level, field<int>(spec, "canonical", 1));
  if (spec.contains("noise")) return noise_operator(level, field<double>(spec, "noise", 0.5));
  if (spec.contains("terms")) {
    WalkSpec w;
    w.level = level;
    for (const auto& t : spec.at("terms")) {
      w.terms.push_back({field<double>(t, "coefficient", 1.0), required<std::string>(t, "word", "walk term")});
    }
    return w;
  }
  invalid("walk object needs 'canonical', 'noise' or 'terms'");
}

LinearMap cached_walk(const ComplexPtr& complex, const WalkSpec& spec) {
  const char* dir = std::getenv("HDX_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return assemble_walk(complex, spec);
  std::ostringstream key;
  write_complex(key, *complex);
  key << "walk " << spec.level;
  for (const auto& t : spec.terms) key << ' ' << format_number(t.coefficient) << ' ' << t.word;
  char name[40];
  std::snprintf(name, sizeof name, "walk-%016llx.txt", static_cast<unsigned long long>(fnv1a(key.str())));
  const fs::path path = fs::path(dir) / name;
  if (std::ifstream in(path); in) {
    try {
      return read_operator(in, complex);
    } catch (const Error&) {
      // A corrupt entry is rebuilt below.
    }
  }
  LinearMap walk = assemble_walk(complex, spec);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path tmp = path.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (out) write_operator(out, walk);
  }
  fs::rename(tmp, path, ec);
  if (ec) fs::remove(tmp, ec);
  return walk;
}

void save_function(const std::string& path, const FaceFunction& f) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  const auto& v = f.values();
  out << json{{"level", f.level()}, {"values", std::vector<double>(v.data(), v.data() + v.size())}}.dump() << '\n';
  if (!out) fail(ErrorCode::kIo, "failed writing " + path);
}

FaceFunction load_function(const ComplexPtr& complex, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read " + path);
  json doc;
  try {
    in >> doc;
    const int level = doc.at("level").get<int>();
    const auto values = doc.at("values").get<std::vector<double>>();
    if (level < 0 || level > complex->dimension() || values.size() != complex->level_size(level)) {
      fail(ErrorCode::kIo, path + ": values do not match the complex level size");
    }
    return FaceFunction(complex, level, Eigen::Map<const Eigen::VectorXd>(values.data(), values.size()));
  } catch (const json::exception& e) {
    fail(ErrorCode::kIo, path + ": " + e.what());
  }
}

}  // namespace hdx
