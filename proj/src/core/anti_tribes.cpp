#include <algorithm>
#include <cmath>
#include <numeric>

#include "hdx/analysis.hpp"
#include "hdx/error.hpp"
#include "hdx/rng.hpp"

namespace hdx {

namespace {

constexpr double kExactFaceLimit = 2e5;
constexpr std::uint64_t kMinSamples = 10'000;
constexpr double kZ95 = 1.96;

int tribe_size_of(const std::vector<Face>& tribes) { return tribes.empty() ? 0 : static_cast<int>(tribes[0].size()); }

// Anchor used for Monte Carlo link estimates: one vertex from each of the first
// `level` tribes, then untribed vertices, then the remaining tribe vertices.
Face canonical_anchor(int n, int level, const std::vector<Face>& tribes) {
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  Face anchor;
  for (std::size_t t = 0; t < tribes.size() && static_cast<int>(anchor.size()) < level; ++t) {
    anchor.push_back(tribes[t][0]);
    used[tribes[t][0]] = true;
  }
  std::vector<bool> tribal(static_cast<std::size_t>(n), false);
  for (const auto& tribe : tribes) {
    for (VertexId v : tribe) tribal[v] = true;
  }
  for (int pass = 0; pass < 2; ++pass) {
    for (int v = 0; v < n && static_cast<int>(anchor.size()) < level; ++v) {
      if (used[v] || tribal[v] != (pass == 1)) continue;
      anchor.push_back(static_cast<VertexId>(v));
      used[v] = true;
    }
  }
  std::sort(anchor.begin(), anchor.end());
  return anchor;
}

class TribeCounter {
 public:
  TribeCounter(int n, const std::vector<Face>& tribes)
      : tribe_of_(static_cast<std::size_t>(n), -1), hits_(tribes.size(), 0) {
    for (std::size_t t = 0; t < tribes.size(); ++t) {
      for (VertexId v : tribes[t]) tribe_of_[v] = static_cast<int>(t);
    }
  }
  bool meets_all(const std::vector<VertexId>& set) {
    std::fill(hits_.begin(), hits_.end(), 0);
    std::size_t covered = 0;
    for (VertexId v : set) {
      const int t = tribe_of_[v];
      if (t >= 0 && hits_[t]++ == 0) ++covered;
    }
    return covered == hits_.size();
  }

 private:
  std::vector<int> tribe_of_;
  std::vector<int> hits_;
};

// Uniform `size`-subset of `pool` via a partial Fisher-Yates shuffle; `pool` is permuted in place.
void sample_subset(std::vector<VertexId>& pool, int size, CounterRng& rng, std::vector<VertexId>& out) {
  out.clear();
  for (int j = 0; j < size; ++j) {
    const auto pick = j + rng.below(pool.size() - static_cast<std::size_t>(j));
    std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
    out.push_back(pool[static_cast<std::size_t>(j)]);
  }
}

double se_bernoulli(double p, double trials) { return trials > 0.0 ? std::sqrt(std::max(p * (1.0 - p), 0.0) / trials) : 0.0; }

int density_top_level(const AntiTribesParams& p) {
  return std::min(static_cast<int>(std::floor(p.c * p.K + 1e-9)), p.k);
}

}  // namespace

double anti_tribes_link_density(const AntiTribesParams& params, int level, int covered) {
  const auto tribes = anti_tribes_tribes(params);
  const int m = static_cast<int>(tribes.size());
  const int t = tribe_size_of(tribes);
  if (level < 0 || level > params.k) fail(ErrorCode::kInvalidArgument, "link level must lie in 0..k");
  if (covered < 0 || covered > std::min(level, m)) fail(ErrorCode::kInvalidArgument, "covered tribes out of range");
  const int pool = params.n - level;
  const int draws = params.k - level;
  const int open = m - covered;
  const double total = binomial(pool, draws);
  double sum = 0.0;
  for (int s = 0; s <= open; ++s) {
    const double term = binomial(open, s) * binomial(pool - s * t, draws);
    sum += (s % 2 == 0) ? term : -term;
  }
  return std::clamp(sum / total, 0.0, 1.0);
}

AntiTribesReport anti_tribes_exact(const AntiTribesParams& params) {
  if (binomial(params.n, params.k) > kExactFaceLimit) {
    fail(ErrorCode::kInfeasible, "exact anti-tribes mode needs C(n, k) <= 200000");
  }
  const auto at = generate_anti_tribes(params);
  const auto& cx = at.complex;
  const auto& f = at.function;
  const int k = params.k;
  AntiTribesReport r;
  r.params = params;
  r.tribes = static_cast<int>(at.tribes.size());
  r.tribe_size = tribe_size_of(at.tribes);
  r.mean = f.mean();
  r.variance = f.variance();
  r.influence = influence(f);
  r.expansion = r.mean > 0.0 ? r.influence / (k * r.mean) : 0.0;
  r.slack = params.K * (1.0 - r.mean) - k * r.expansion;
  for (int i = 0; i <= density_top_level(params); ++i) {
    const Eigen::VectorXd dens = compose_down(cx, k, i)(f).values();
    Eigen::Index best = 0;
    for (Eigen::Index t = 1; t < dens.size(); ++t) {
      if (dens[t] > dens[best] + 1e-12) best = t;
    }
    LinkDensity ld;
    ld.level = i;
    ld.witness = cx->face_copy(i, static_cast<std::size_t>(best));
    ld.density = dens[best];
    ld.analytic = anti_tribes_link_density(params, i, std::min(i, r.tribes));
    r.densities.push_back(std::move(ld));
  }
  return r;
}

AntiTribesReport anti_tribes_monte_carlo(const AntiTribesParams& params, std::uint64_t samples, std::uint64_t seed) {
  if (samples < kMinSamples) fail(ErrorCode::kInvalidArgument, "Monte Carlo anti-tribes needs at least 10000 samples");
  const auto tribes = anti_tribes_tribes(params);
  const int n = params.n;
  const int k = params.k;
  AntiTribesReport r;
  r.monte_carlo = true;
  r.params = params;
  r.tribes = static_cast<int>(tribes.size());
  r.tribe_size = tribe_size_of(tribes);
  r.samples = samples;
  r.seed = seed;
  TribeCounter counter(n, tribes);

  std::vector<VertexId> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), VertexId{0});
  std::vector<VertexId> set;
  std::vector<bool> in_set(static_cast<std::size_t>(n), false);
  CounterRng rng(seed, 1);
  std::uint64_t hits = 0;
  std::uint64_t leaves = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    sample_subset(pool, k, rng, set);
    if (!counter.meets_all(set)) continue;
    ++hits;
    // One lower-walk step: drop a uniform vertex, add a uniform vertex outside the rest.
    const auto drop = rng.below(static_cast<std::uint64_t>(k));
    const VertexId removed = set[drop];
    for (VertexId v : set) in_set[v] = true;
    VertexId added;
    do {
      added = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(n)));
    } while (in_set[added] && added != removed);
    for (VertexId v : set) in_set[v] = false;
    set[drop] = added;
    if (!counter.meets_all(set)) ++leaves;
  }
  const double trials = static_cast<double>(samples);
  r.mean = hits / trials;
  r.mean_se = se_bernoulli(r.mean, trials);
  r.variance = r.mean * (1.0 - r.mean);
  r.variance_se = std::abs(1.0 - 2.0 * r.mean) * r.mean_se;
  r.expansion = hits > 0 ? static_cast<double>(leaves) / hits : 0.0;
  r.expansion_se = se_bernoulli(r.expansion, static_cast<double>(hits));
  r.influence = k * r.mean * r.expansion;
  r.influence_se = k * std::hypot(r.expansion * r.mean_se, r.mean * r.expansion_se);
  r.slack = params.K * (1.0 - r.mean) - k * r.expansion;
  r.slack_se = std::hypot(params.K * r.mean_se, k * r.expansion_se);

  for (int i = 0; i <= density_top_level(params); ++i) {
    LinkDensity ld;
    ld.level = i;
    ld.witness = canonical_anchor(n, i, tribes);
    std::vector<VertexId> rest;
    std::vector<bool> anchored(static_cast<std::size_t>(n), false);
    for (VertexId v : ld.witness) anchored[v] = true;
    for (int v = 0; v < n; ++v) {
      if (!anchored[v]) rest.push_back(static_cast<VertexId>(v));
    }
    CounterRng link_rng(seed, 2 + static_cast<std::uint64_t>(i));
    std::uint64_t link_hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
      sample_subset(rest, k - i, link_rng, set);
      set.insert(set.end(), ld.witness.begin(), ld.witness.end());
      if (counter.meets_all(set)) ++link_hits;
    }
    ld.density = link_hits / trials;
    ld.standard_error = se_bernoulli(ld.density, trials);
    int covered = 0;
    for (const auto& tribe : tribes) {
      if (std::any_of(tribe.begin(), tribe.end(), [&](VertexId v) { return anchored[v]; })) ++covered;
    }
    ld.analytic = anti_tribes_link_density(params, i, std::min(i, r.tribes));
    // The canonical anchor covers min(i, m) tribes, so its exact density is the maximum.
    if (covered != std::min(i, r.tribes)) fail(ErrorCode::kInternal, "canonical anchor misses a tribe");
    r.densities.push_back(std::move(ld));
  }
  return r;
}

TheoremVerdict anti_tribes_verdict(const AntiTribesReport& r) {
  TheoremVerdict v;
  v.theorem = "anti_tribes";
  v.params = {{"n", r.params.n}, {"k", r.params.k}, {"K", r.params.K}, {"c", r.params.c}, {"c1", r.params.c1},
              {"tribes", r.tribes}, {"tribe_size", r.tribe_size},
              {"mode", r.monte_carlo ? "monte_carlo" : "exact"}};
  if (r.monte_carlo) {
    v.seed = r.seed;
    v.params["samples"] = r.samples;
  }
  v.lhs = r.influence;
  v.rhs_terms = {{"K_variance", r.params.K * r.variance}, {"slack", r.slack}, {"slack_se", r.slack_se}};
  const bool influence_ok =
      r.monte_carlo ? r.slack - kZ95 * r.slack_se >= 0.0 : r.influence <= r.params.K * r.variance + 1e-12;
  bool density_ok = true;
  double densest = 0.0;
  nlohmann::json links = nlohmann::json::array();
  for (const auto& d : r.densities) {
    const bool ok = r.monte_carlo ? d.density - kZ95 * d.standard_error <= d.analytic
                                  : d.density <= d.analytic + 1e-12;
    density_ok = density_ok && ok;
    densest = std::max(densest, d.analytic);
    links.push_back({{"level", d.level}, {"witness", d.witness}, {"density", d.density},
                     {"standard_error", d.standard_error}, {"analytic", d.analytic}, {"consistent", ok}});
  }
  v.witnesses = {{"links", std::move(links)}, {"influence_inequality", influence_ok}, {"densities_consistent", density_ok}};
  const double exponent = r.params.K > 0.0 && densest > 0.0 ? -std::log2(densest) / r.params.K
                                                            : std::numeric_limits<double>::quiet_NaN();
  v.fitted_constants = {{"density_exponent", std::isfinite(exponent) ? nlohmann::json(exponent) : nlohmann::json(nullptr)}};
  v.status = influence_ok && density_ok ? Status::kPass : Status::kFail;
  if (!influence_ok) v.note = "I[f] exceeds K Var(f)";
  return v;
}

nlohmann::json to_json(const AntiTribesReport& r) {
  nlohmann::json dens = nlohmann::json::array();
  for (const auto& d : r.densities) {
    dens.push_back({{"level", d.level}, {"witness", d.witness}, {"density", d.density},
                    {"standard_error", d.standard_error}, {"analytic", d.analytic}});
  }
  return {{"mode", r.monte_carlo ? "monte_carlo" : "exact"},
          {"n", r.params.n}, {"k", r.params.k}, {"K", r.params.K}, {"c", r.params.c}, {"c1", r.params.c1},
          {"tribes", r.tribes}, {"tribe_size", r.tribe_size}, {"samples", r.samples}, {"seed", r.seed},
          {"mean", r.mean}, {"mean_se", r.mean_se}, {"variance", r.variance}, {"variance_se", r.variance_se},
          {"expansion", r.expansion}, {"expansion_se", r.expansion_se},
          {"influence", r.influence}, {"influence_se", r.influence_se},
          {"slack", r.slack}, {"slack_se", r.slack_se}, {"densities", std::move(dens)}};
}

}  // namespace hdx
