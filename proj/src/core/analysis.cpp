#include "hdx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/Dense>

#include "hdx/error.hpp"
#include "hdx/link.hpp"

namespace hdx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json num(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json face_json(FaceView f) { return nlohmann::json(std::vector<VertexId>(f.begin(), f.end())); }

LinkSpectrum link_spectrum(const SimplicialComplex& cx, int level, std::size_t index) {
  LinkSpectrum out;
  out.face = cx.face_copy(level, index);
  const auto vertices = cx.cofaces(level, index);
  const auto m = static_cast<Eigen::Index>(vertices.size());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  const auto& pi_edge = cx.pi(level + 2);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (std::uint32_t e : cx.cofaces(level + 1, vertices[a])) {
      for (std::uint32_t q : cx.subfaces(level + 2, e)) {
        if (q == vertices[a]) continue;
        const auto it = std::lower_bound(vertices.begin(), vertices.end(), q);
        if (it != vertices.end() && *it == q) w(a, it - vertices.begin()) += pi_edge[e];
      }
    }
  }
  const Eigen::VectorXd deg = w.rowwise().sum();
  if (m < 2 || (deg.array() <= 0.0).any()) {
    out.connected = false;
    out.gamma = 1.0;
    out.second = 1.0;
    out.smallest = m < 2 ? 1.0 : -1.0;
    return out;
  }
  const Eigen::VectorXd inv = deg.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd sym = inv.asDiagonal() * w * inv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) fail(ErrorCode::kNumerical, "link eigen-solve failed");
  const auto& ev = eig.eigenvalues();  // ascending
  out.second = ev[m - 2];
  out.smallest = ev[0];
  out.connected = out.second < 1.0 - 1e-9;
  out.gamma = out.connected ? std::max(std::abs(out.second), std::abs(out.smallest)) : 1.0;
  return out;
}

/// Runs fn(index) for index in [0, count) on up to `jobs` threads.
template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count < 2) {
    for (std::size_t j = 0; j < count; ++j) fn(j);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t j = w; j < count; j += workers) fn(j);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double ratio_or_inf(double num, double den) {
  if (den > 0.0) return num / den;
  return std::abs(num) > 1e-300 ? kInf : 0.0;
}

FaceFunction lift_of(const Decomposition& d, int i) { return d.lifts.at(static_cast<std::size_t>(i)); }

double fourth_moment(const FaceFunction& f) {
  const auto sq = f.values().cwiseProduct(f.values());
  return f.complex()->pi(f.level()).dot(sq.cwiseProduct(sq));
}

}  // namespace

SpectralProfile measure_gamma(const ComplexPtr& complex, int jobs) {
  const int d = complex->dimension();
  if (d < 2) fail(ErrorCode::kInvalidArgument, "local spectral expansion needs dimension d >= 2");
  std::vector<std::pair<int, std::size_t>> faces;
  for (int level = 0; level <= d - 2; ++level) {
    for (std::size_t t = 0; t < complex->level_size(level); ++t) faces.emplace_back(level, t);
  }
  SpectralProfile profile;
  profile.links.resize(faces.size());
  parallel_for(faces.size(), jobs, [&](std::size_t j) {
    profile.links[j] = link_spectrum(*complex, faces[j].first, faces[j].second);
  });
  for (const auto& l : profile.links) {
    profile.gamma = std::max(profile.gamma, l.gamma);
    if (!l.connected) profile.disconnected.push_back(l.face);
  }
  return profile;
}

SpectralProfile approximate_eigenvalues(const LinearMap& walk, const HdLevelSetSolver& solver) {
  require(walk.source_level() == walk.target_level(), "approximate eigenvalues need a square walk");
  if (walk.complex() != solver.complex() || walk.source_level() != solver.level()) {
    fail(ErrorCode::kInvalidArgument, "walk and HD-Level-Set solver disagree on complex or level");
  }
  const auto& cx = walk.complex();
  const int k = walk.source_level();
  const Eigen::VectorXd s = cx->pi(k).cwiseSqrt();
  Eigen::MatrixXd a = s.asDiagonal() * walk.dense() * s.cwiseInverse().asDiagonal();
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.info() != Eigen::Success) fail(ErrorCode::kNumerical, "walk eigen-solve failed");
  const Eigen::Index n = a.rows();
  SpectralProfile profile;
  profile.eigenvalues = eig.eigenvalues().reverse();
  const Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();
  const auto lifts = solver.lifts_of(vectors);
  const auto& pi = cx->pi(k);
  profile.assignment.assign(static_cast<std::size_t>(n), 0);
  profile.top_mass.assign(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index c = 0; c < n; ++c) {
    double total = 0.0;
    double best = -1.0;
    int best_level = 0;
    for (int i = 0; i <= k; ++i) {
      const double mass = pi.dot(lifts[i].col(c).cwiseAbs2());
      total += mass;
      if (mass > best) {
        best = mass;
        best_level = i;
      }
    }
    profile.assignment[c] = best_level;
    profile.top_mass[c] = total > 0.0 ? best / total : 0.0;
    if (profile.top_mass[c] < 0.5) ++profile.ambiguous;
  }
  for (int i = 0; i <= k; ++i) {
    Strip strip;
    strip.level = i;
    double sum = 0.0;
    strip.low = kInf;
    strip.high = -kInf;
    for (Eigen::Index c = 0; c < n; ++c) {
      if (profile.assignment[c] != i) continue;
      const double x = profile.eigenvalues[c];
      sum += x;
      strip.low = std::min(strip.low, x);
      strip.high = std::max(strip.high, x);
      ++strip.count;
    }
    if (strip.count == 0) {
      strip.center = strip.low = strip.high = kNaN;
      strip.width = kNaN;
    } else {
      strip.center = sum / strip.count;
      strip.width = strip.high - strip.low;
    }
    profile.strips.push_back(strip);
  }
  return profile;
}

int st_rank(const SpectralProfile& profile, double delta) {
  int r = 0;
  for (const auto& s : profile.strips) {
    if (std::isfinite(s.center) && s.center > delta) ++r;
  }
  return r;
}

PseudorandomnessReport pseudorandomness(const FaceFunction& f, int i) {
  const auto& cx = f.complex();
  const int k = f.level();
  if (i < 0 || i > k) fail(ErrorCode::kInvalidArgument, "pseudorandomness level must lie in 0..k");
  PseudorandomnessReport out;
  out.level = i;
  out.sup_norm = f.sup_norm();
  if (out.sup_norm == 0.0) {
    out.by_level.assign(static_cast<std::size_t>(i + 1), 0.0);
    out.witness = cx->face_copy(i, 0);
    return out;
  }
  const FaceFunction sq = pointwise(f, f);
  for (int j = 0; j <= i; ++j) {
    const Eigen::VectorXd means = compose_down(cx, k, j)(f).values();
    const Eigen::VectorXd second = compose_down(cx, k, j)(sq).values();
    double eps = 0.0;
    double eps_mean = 0.0;
    double eps_sq = 0.0;
    Eigen::Index witness = 0;
    for (Eigen::Index t = 0; t < means.size(); ++t) {
      const double m = std::abs(means[t]) / out.sup_norm;
      const double q = second[t] / (out.sup_norm * out.sup_norm);
      eps_mean = std::max(eps_mean, m);
      eps_sq = std::max(eps_sq, q);
      if (std::max(m, q) > eps) {
        eps = std::max(m, q);
        witness = t;
      }
    }
    out.by_level.push_back(eps);
    if (j == i) {
      out.eps_mean = eps_mean;
      out.eps_sq = eps_sq;
      out.eps = eps;
      out.witness = cx->face_copy(i, static_cast<std::size_t>(witness));
    }
  }
  for (std::size_t j = 1; j < out.by_level.size(); ++j) {
    if (out.by_level[j - 1] > out.by_level[j] + 1e-12) out.monotone = false;
  }
  return out;
}

const char* status_name(Status status) {
  switch (status) {
    case Status::kPass:
      return "pass";
    case Status::kFail:
      return "fail";
    case Status::kNotApplicable:
      return "not_applicable";
    case Status::kHypothesisNotMet:
      return "hypothesis_not_met";
  }
  return "unknown";
}

nlohmann::json to_json(const TheoremVerdict& v) {
  nlohmann::json out{{"theorem", v.theorem},
                     {"params", v.params},
                     {"lhs", num(v.lhs)},
                     {"rhs_terms", v.rhs_terms},
                     {"fitted_constants", v.fitted_constants},
                     {"pass", v.passed()},
                     {"status", status_name(v.status)},
                     {"witnesses", v.witnesses},
                     {"seed", v.seed ? nlohmann::json(*v.seed) : nlohmann::json(nullptr)}};
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

nlohmann::json to_json(const SpectralProfile& p) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : p.links) {
    links.push_back({{"face", face_json(l.face)},
                     {"second", l.second},
                     {"smallest", l.smallest},
                     {"gamma", l.gamma},
                     {"connected", l.connected}});
  }
  nlohmann::json disconnected = nlohmann::json::array();
  for (const auto& f : p.disconnected) disconnected.push_back(face_json(f));
  nlohmann::json out{{"gamma", p.gamma}, {"links", std::move(links)}, {"disconnected", std::move(disconnected)}};
  if (!p.strips.empty()) {
    nlohmann::json strips = nlohmann::json::array();
    for (const auto& s : p.strips) {
      strips.push_back({{"level", s.level},
                        {"center", num(s.center)},
                        {"low", num(s.low)},
                        {"high", num(s.high)},
                        {"width", num(s.width)},
                        {"count", s.count}});
    }
    out["strips"] = std::move(strips);
    out["eigenvalues"] = std::vector<double>(p.eigenvalues.data(), p.eigenvalues.data() + p.eigenvalues.size());
    out["assignment"] = p.assignment;
    out["ambiguous"] = p.ambiguous;
  }
  return out;
}

nlohmann::json to_json(const PseudorandomnessReport& r) {
  return {{"level", r.level},   {"eps_mean", r.eps_mean}, {"eps_sq", r.eps_sq},     {"eps", r.eps},
          {"witness", face_json(r.witness)}, {"sup_norm", r.sup_norm}, {"by_level", r.by_level},
          {"monotone", r.monotone}};
}

TheoremVerdict check_hypercontractivity(const FaceFunction& f, int i, double gamma) {
  const int k = f.level();
  if (i < 0 || i > k) fail(ErrorCode::kInvalidArgument, "hypercontractivity level must lie in 0..k");
  TheoremVerdict v;
  v.theorem = "hypercontractivity";
  v.params = {{"k", k}, {"i", i}, {"gamma", gamma}};
  const auto pr = pseudorandomness(f, i);
  const Decomposition d = bottom_up_explicit(f);
  const FaceFunction fi = lift_of(d, i);
  const FaceFunction down_f = compose_down(f.complex(), k, i)(f);
  const double sup_sq = pr.sup_norm * pr.sup_norm;
  v.lhs = fourth_moment(fi);
  const double second = inner_product(fi, fi);
  const double main = pr.eps * second * sup_sq;
  const double gamma_term = pr.eps * std::sqrt(gamma) * inner_product(down_f, down_f) * sup_sq;
  v.params["eps"] = pr.eps;
  v.rhs_terms = {{"eps_second_moment", main}, {"eps_sqrt_gamma_down", gamma_term}};
  v.witnesses = {{"pseudorandomness", to_json(pr)}};
  const double ratio = ratio_or_inf(v.lhs, main);
  v.fitted_constants = {{"ratio", num(ratio)}};
  if (second <= 1e-24 * sup_sq) {
    v.status = Status::kPass;
    v.note = "f_i vanishes";
  } else if (pr.eps >= 1.0 - 1e-12) {
    v.status = Status::kNotApplicable;
    v.note = "eps = 1: the inequality is uninformative";
  } else if (!std::isfinite(ratio)) {
    v.status = Status::kFail;
    v.note = "eps E[f_i^2] vanishes while E[f_i^4] does not";
  } else {
    v.status = Status::kPass;
    v.rhs_terms["bound"] = ratio * main;
  }
  return v;
}

TheoremVerdict check_level_i(const FaceFunction& f, int i) {
  require(f.is_boolean(), "the level-i inequality needs a Boolean function");
  const int k = f.level();
  if (i < 0 || i > k) fail(ErrorCode::kInvalidArgument, "level must lie in 0..k");
  TheoremVerdict v;
  v.theorem = "level_i";
  const auto pr = pseudorandomness(f, i);
  const Decomposition d = bottom_up_explicit(f);
  v.lhs = inner_product(f, lift_of(d, i));
  const double base = std::cbrt(pr.eps) * f.mean();
  v.params = {{"k", k}, {"i", i}, {"eps", pr.eps}};
  v.rhs_terms = {{"eps_cbrt_mean", base}};
  v.witnesses = {{"pseudorandomness", to_json(pr)}};
  const double ratio = ratio_or_inf(v.lhs, base);
  v.fitted_constants = {{"ratio", num(ratio)}};
  v.status = std::isfinite(ratio) ? Status::kPass : Status::kFail;
  if (std::isfinite(ratio)) v.rhs_terms["bound"] = std::max(ratio, 0.0) * base;
  return v;
}

TheoremVerdict check_expansion_theorem(const FaceFunction& set, const LinearMap& walk, const SpectralProfile& strips,
                                       double delta, double gamma, std::optional<ExpansionConstants> constants) {
  require(set.is_boolean(), "expansion needs a 0/1 set indicator");
  const int k = set.level();
  TheoremVerdict v;
  v.theorem = "expansion";
  if (strips.strips.empty()) fail(ErrorCode::kInvalidArgument, "expansion check needs the walk's strips");
  const int rank = st_rank(strips, delta);
  const int r = std::min(rank - 1, k);
  v.params = {{"k", k}, {"delta", delta}, {"gamma", gamma}, {"st_rank", rank}, {"r", r}, {"density", set.mean()}};
  v.lhs = edge_expansion(set, walk);
  if (r < 0) {
    v.status = Status::kNotApplicable;
    v.note = "no strip center above delta";
    return v;
  }
  const auto pr = pseudorandomness(set, r);
  v.params["eps"] = pr.eps;
  v.witnesses = {{"pseudorandomness", to_json(pr)}};
  const ExpansionConstants used = constants.value_or(ExpansionConstants{1.0, 0.0});
  const double base = 1.0 - delta - (1.0 - delta) * used.level_constant * std::cbrt(pr.eps);
  v.rhs_terms = {{"one_minus_delta", 1.0 - delta},
                 {"eps_cbrt_term", (1.0 - delta) * used.level_constant * std::cbrt(pr.eps)}};
  if (pr.eps >= 1.0 - 1e-12) {
    v.status = Status::kNotApplicable;
    v.note = "consistent (non-pseudorandom witness)";
    const int level = static_cast<int>(pr.witness.size());
    if (level < static_cast<int>(strips.strips.size()) && std::isfinite(strips.strips[level].center)) {
      v.rhs_terms["one_minus_lambda"] = 1.0 - strips.strips[level].center;
    }
    return v;
  }
  double c = used.gamma_constant;
  if (!constants) {
    const double gap = base - v.lhs;
    c = gap <= 0.0 ? 0.0 : (gamma > 0.0 ? gap / gamma : kInf);
  }
  v.fitted_constants = {{"level_constant", used.level_constant}, {"gamma_constant", num(c)}};
  const double bound = base - c * gamma;
  v.rhs_terms["gamma_term"] = num(c * gamma);
  v.rhs_terms["bound"] = num(bound);
  v.status = std::isfinite(bound) && v.lhs >= bound - 1e-12 ? Status::kPass : Status::kFail;
  return v;
}

TheoremVerdict check_bourgain(const FaceFunction& f, double K) {
  require(f.is_boolean(), "Bourgain's theorem needs a Boolean function");
  const auto& cx = f.complex();
  const int k = f.level();
  TheoremVerdict v;
  v.theorem = "bourgain";
  const double infl = influence(f);
  const double var = f.variance();
  v.params = {{"k", k}, {"K", K}};
  v.rhs_terms = {{"influence", infl}, {"K_variance", K * var}};
  if (var <= 1e-15) {
    v.status = Status::kNotApplicable;
    v.note = "constant function";
    return v;
  }
  if (infl > K * var + 1e-12) {
    v.status = Status::kHypothesisNotMet;
    v.note = "I[f] > K Var(f)";
    return v;
  }
  const int top = std::min(static_cast<int>(std::ceil(K - 1e-12)), k);
  double best = -1.0;
  int best_level = 0;
  std::size_t best_index = 0;
  for (int i = 0; i <= top; ++i) {
    const Eigen::VectorXd dens = compose_down(cx, k, i)(f).values();
    for (Eigen::Index t = 0; t < dens.size(); ++t) {
      if (dens[t] > best + 1e-12) {
        best = dens[t];
        best_level = i;
        best_index = static_cast<std::size_t>(t);
      }
    }
  }
  v.lhs = best;
  v.witnesses = {{"level", best_level}, {"face", face_json(cx->face(best_level, best_index))}, {"density", best}};
  const double c = best > 0.0 ? (K > 0.0 ? -std::log2(best) / K : 0.0) : kInf;
  v.fitted_constants = {{"exponent", num(c)}};
  v.rhs_terms["bound"] = std::isfinite(c) ? std::exp2(-c * K) : 0.0;
  v.status = std::isfinite(c) ? Status::kPass : Status::kFail;
  return v;
}

TheoremVerdict check_noise_sensitivity(const FaceFunction& f, double rho, double eps, double gamma) {
  require(f.is_boolean(), "noise sensitivity needs a Boolean function");
  if (!(rho >= 0.0 && rho < 1.0)) fail(ErrorCode::kInvalidArgument, "noise sensitivity needs 0 <= rho < 1");
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::kInvalidArgument, "noise sensitivity needs 0 < eps < 1");
  const int k = f.level();
  TheoremVerdict v;
  v.theorem = "noise_sensitivity";
  const double raw_r = rho == 0.0 ? 2.0 : std::log(2.0 / eps) / std::log(1.0 / rho) + 2.0;
  const int r = std::max(0, std::min(static_cast<int>(std::ceil(raw_r - 1e-12)), k - 1));
  v.params = {{"k", k}, {"rho", rho}, {"eps", eps}, {"gamma", gamma}, {"r", r}, {"r_unclamped", raw_r}};
  const double mean = f.mean();
  if (mean <= 0.0) {
    v.lhs = 0.0;
    v.status = Status::kPass;
    v.note = "f = 0";
    return v;
  }
  const auto pr = pseudorandomness(f, r);
  v.lhs = stability(f, rho) / mean;
  v.witnesses = {{"pseudorandomness", to_json(pr)}};
  v.params["delta"] = pr.eps;
  const double omega = pr.eps > 0.0 ? std::log2(eps * eps * eps / pr.eps) / std::max(r, 1) : kInf;
  v.fitted_constants = {{"hypothesis_exponent", num(omega)}};
  v.rhs_terms = {{"eps", eps}};
  if (pr.eps > eps * eps * eps) {
    v.status = Status::kHypothesisNotMet;
    v.note = "delta exceeds eps^3";
    return v;
  }
  const double gap = v.lhs - eps;
  const double c = gap <= 0.0 ? 0.0 : (gamma > 0.0 ? gap / gamma : kInf);
  v.fitted_constants["gamma_constant"] = num(c);
  v.rhs_terms["gamma_term"] = num(c * gamma);
  v.status = std::isfinite(c) ? Status::kPass : Status::kFail;
  return v;
}

TheoremVerdict check_noise_hypercontractivity(const FaceFunction& f) {
  TheoremVerdict v;
  v.theorem = "noise_hypercontractivity";
  const int deg = degree(f);
  const double mean = f.mean();
  v.params = {{"k", f.level()}, {"degree", deg}};
  v.rhs_terms = {{"rho_zero_limit", mean * mean * mean * mean}};
  if (deg == 0) {
    v.lhs = mean * mean * mean * mean;
    v.status = Status::kNotApplicable;
    v.note = "constant function: LHS = E[f]^4 <= RHS iff E[f]^2 <= eps";
    return v;
  }
  const auto pr = pseudorandomness(f, deg);
  const double sup = pr.sup_norm;
  const double rhs = pr.eps * inner_product(f, f) * sup * sup;
  v.params["eps"] = pr.eps;
  v.rhs_terms["bound"] = rhs;
  nlohmann::json sweep = nlohmann::json::array();
  double best_rho = kNaN;
  double previous = -kInf;
  bool monotone = true;
  double first_lhs = kNaN;
  for (int step = 1; step <= 9; ++step) {
    const double rho = step / 10.0;
    const double lhs = fourth_moment(walk_apply(noise_operator(f.level(), rho), f));
    if (step == 1) first_lhs = lhs;
    if (lhs < previous - 1e-15) monotone = false;
    previous = lhs;
    const bool ok = lhs <= rhs + 1e-15;
    if (ok) best_rho = rho;
    sweep.push_back({{"rho", rho}, {"lhs", lhs}, {"pass", ok}});
  }
  v.witnesses = {{"sweep", std::move(sweep)}, {"lhs_monotone_in_rho", monotone}};
  v.fitted_constants = {{"largest_passing_rho", num(best_rho)}};
  v.lhs = first_lhs;
  v.status = std::isfinite(best_rho) ? Status::kPass : Status::kFail;
  return v;
}

TheoremVerdict check_influence_bounds(const FaceFunction& f, double gamma) {
  const int k = f.level();
  TheoremVerdict v;
  v.theorem = "influence_bounds";
  v.lhs = influence(f);
  const double var = f.variance();
  const double norm_sq = inner_product(f, f);
  v.params = {{"k", k}, {"gamma", gamma}};
  v.rhs_terms = {{"k_variance", k * var}, {"variance", var}};
  const double gap = var - v.lhs;
  const double c = gap <= 0.0 ? 0.0 : ratio_or_inf(gap, k * gamma * norm_sq);
  v.fitted_constants = {{"lower_constant", num(c)}};
  v.status = v.lhs <= k * var + 1e-12 ? Status::kPass : Status::kFail;
  return v;
}

TheoremVerdict check_swap_bound(const ComplexPtr& complex, int i, int j, double gamma) {
  TheoremVerdict v;
  v.theorem = "swap_bound";
  v.params = {{"i", i}, {"j", j}, {"gamma", gamma}};
  v.lhs = swap_walk(complex, i, j).second_singular_value;
  v.rhs_terms = {{"bound", i * j * gamma}};
  v.status = v.lhs <= i * j * gamma + 1e-9 ? Status::kPass : Status::kFail;
  return v;
}

TheoremVerdict check_ddfh_bound(const ComplexPtr& complex, int i, int j, double gamma) {
  TheoremVerdict v;
  v.theorem = "ddfh_bound";
  v.params = {{"i", i}, {"j", j}, {"gamma", gamma}};
  v.lhs = ddfh_residual(complex, i, j).norm;
  v.rhs_terms = {{"bound", (i - j) * gamma}};
  v.status = v.lhs <= (i - j) * gamma + 1e-9 ? Status::kPass : Status::kFail;
  return v;
}

TheoremVerdict check_localization(const FaceFunction& f, int j, double gamma) {
  const auto& cx = f.complex();
  const int i = f.level();
  TheoremVerdict v;
  v.theorem = "localization";
  v.params = {{"i", i}, {"j", j}, {"gamma", gamma}};
  const LinearMap op = localization_gamma(cx, i, j);
  const Eigen::VectorXd applied = op.apply(f.values());
  double worst = 0.0;
  for (std::size_t t = 0; t < cx->level_size(j); ++t) {
    const double shift = localize(f, cx->face(j, t)).mean() - f.mean();
    worst = std::max(worst, std::abs(shift - applied[static_cast<Eigen::Index>(t)]));
  }
  const double norm = weighted_norm(op);
  v.lhs = norm;
  v.rhs_terms = {{"bound", i * j * gamma}};
  v.witnesses = {{"identity_residual", worst}};
  v.status = worst <= 1e-9 && norm <= i * j * gamma + 1e-9 ? Status::kPass : Status::kFail;
  return v;
}

}  // namespace hdx
