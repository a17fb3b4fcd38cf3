#include "hdx/decomposition.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "hdx/error.hpp"
#include "hdx/link.hpp"
#include "hdx/operators.hpp"

namespace hdx {

const char* basis_name(Basis basis) { return basis == Basis::kBottomUp ? "bottom_up" : "hd_level_set"; }

namespace {

double weighted_l2(const ComplexPtr& cx, int level, const Eigen::VectorXd& v) {
  return std::sqrt(cx->pi(level).dot(v.cwiseProduct(v)));
}

void finish_bottom_up(Decomposition& out, const FaceFunction& f) {
  const auto& cx = f.complex();
  const int k = f.level();
  Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.size()));
  for (int i = 0; i <= k; ++i) {
    FaceFunction lift = compose_up(cx, i, k)(out.g[i]);
    lift *= binomial(k, i);
    total += lift.values();
    out.lifts.push_back(std::move(lift));
  }
  out.reconstruction_residual = weighted_l2(cx, k, f.values() - total);
}

}  // namespace

Decomposition bottom_up_recursive(const FaceFunction& f) {
  const auto& cx = f.complex();
  const int k = f.level();
  Decomposition out;
  out.basis = Basis::kBottomUp;
  out.level = k;
  for (int i = 0; i <= k; ++i) {
    FaceFunction gi = compose_down(cx, k, i)(f);
    for (int j = 0; j < i; ++j) {
      FaceFunction lifted = compose_up(cx, j, i)(out.g[j]);
      lifted *= binomial(i, j);
      gi -= lifted;
    }
    out.g.push_back(std::move(gi));
  }
  finish_bottom_up(out, f);
  return out;
}

Decomposition bottom_up_explicit(const FaceFunction& f) {
  const auto& cx = f.complex();
  const int k = f.level();
  Decomposition out;
  out.basis = Basis::kBottomUp;
  out.level = k;
  std::vector<FaceFunction> down;
  for (int j = 0; j <= k; ++j) down.push_back(compose_down(cx, k, j)(f));
  for (int i = 0; i <= k; ++i) {
    FaceFunction gi(cx, i);
    for (int j = 0; j <= i; ++j) {
      FaceFunction term = compose_up(cx, j, i)(down[j]);
      term *= ((i - j) % 2 == 0 ? 1.0 : -1.0) * binomial(i, j);
      gi += term;
    }
    out.g.push_back(std::move(gi));
  }
  finish_bottom_up(out, f);
  return out;
}

HdLevelSetSolver::HdLevelSetSolver(ComplexPtr complex, int level) : complex_(std::move(complex)), level_(level) {
  require(complex_ != nullptr, "HD-Level-Set solver needs a complex");
  if (level < 0 || level > complex_->dimension()) fail(ErrorCode::kInvalidArgument, "HD-Level-Set level out of range");
  const auto rows = static_cast<Eigen::Index>(complex_->level_size(level));
  Eigen::Index total = 0;
  for (int i = 0; i <= level; ++i) {
    Eigen::MatrixXd kernel;
    if (i == 0) {
      kernel = Eigen::MatrixXd::Ones(1, 1);  // pi_0 = 1, so the constant is unit length
    } else {
      const Eigen::VectorXd inv_sqrt = complex_->pi(i).cwiseSqrt().cwiseInverse();
      const Eigen::MatrixXd a = down_map(complex_, i).dense() * inv_sqrt.asDiagonal();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const double cutoff = kNullspaceCutoff * (sv.size() > 0 ? sv[0] : 0.0);
      Eigen::Index rank = 0;
      while (rank < sv.size() && sv[rank] > cutoff) ++rank;
      const Eigen::Index nullity = a.cols() - rank;
      kernel = inv_sqrt.asDiagonal() * svd.matrixV().rightCols(nullity);
    }
    dims_.push_back(kernel.cols());
    total += kernel.cols();
    lifted_.push_back(compose_up(complex_, i, level).dense() * kernel);
    kernels_.push_back(std::move(kernel));
  }
  if (total != rows) {
    fail(ErrorCode::kNumerical, "HD-Level-Set system is singular: kernel dimensions sum to " + std::to_string(total) +
                                    " but level " + std::to_string(level) + " has " + std::to_string(rows) +
                                    " faces (local expansion too weak for a unique decomposition)");
  }
  Eigen::MatrixXd w(rows, rows);
  Eigen::Index col = 0;
  const Eigen::VectorXd sqrt_pi = complex_->pi(level).cwiseSqrt();
  for (const auto& block : lifted_) {
    w.middleCols(col, block.cols()) = sqrt_pi.asDiagonal() * block;
    col += block.cols();
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(w).singularValues();
  condition_ = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
  if (!(condition_ <= kMaxCondition)) {
    fail(ErrorCode::kNumerical, "HD-Level-Set system is numerically singular (condition " +
                                    std::to_string(condition_) + ")");
  }
  qr_.compute(w);
}

Decomposition HdLevelSetSolver::decompose(const FaceFunction& f) const {
  if (f.complex() != complex_ || f.level() != level_) {
    fail(ErrorCode::kInvalidArgument, "function does not match the HD-Level-Set solver's complex and level");
  }
  const Eigen::VectorXd rhs = complex_->pi(level_).cwiseSqrt().cwiseProduct(f.values());
  const Eigen::VectorXd coeffs = qr_.solve(rhs);
  Decomposition out;
  out.basis = Basis::kHdLevelSet;
  out.level = level_;
  out.condition = condition_;
  Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.size()));
  Eigen::Index offset = 0;
  for (int i = 0; i <= level_; ++i) {
    const auto c = coeffs.segment(offset, dims_[i]);
    offset += dims_[i];
    FaceFunction gi(complex_, i, kernels_[i] * c);
    FaceFunction lift(complex_, level_, lifted_[i] * c);
    if (i > 0) out.kernel_residual = std::max(out.kernel_residual, down(gi).norm(2.0));
    total += lift.values();
    out.g.push_back(std::move(gi));
    out.lifts.push_back(std::move(lift));
  }
  out.reconstruction_residual = weighted_l2(complex_, level_, f.values() - total);
  return out;
}

std::vector<Eigen::MatrixXd> HdLevelSetSolver::lifts_of(const Eigen::MatrixXd& weighted_columns) const {
  require(weighted_columns.rows() == static_cast<Eigen::Index>(complex_->level_size(level_)),
          "lifts_of: wrong number of rows");
  const Eigen::MatrixXd coeffs = qr_.solve(weighted_columns);
  std::vector<Eigen::MatrixXd> out;
  Eigen::Index offset = 0;
  for (int i = 0; i <= level_; ++i) {
    out.push_back(lifted_[i] * coeffs.middleRows(offset, dims_[i]));
    offset += dims_[i];
  }
  return out;
}

Decomposition hd_level_set(const FaceFunction& f) { return HdLevelSetSolver(f.complex(), f.level()).decompose(f); }

int degree(const FaceFunction& f) {
  // HD-Level-Set spaces are exact; Bottom-Up lifts carry O(gamma) leakage into every level.
  Decomposition d;
  try {
    d = hd_level_set(f);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNumerical) throw;
    d = bottom_up_explicit(f);
  }
  int deg = 0;
  for (int i = 0; i <= d.level; ++i) {
    if (d.lifts[i].norm(2.0) > 1e-10) deg = i;
  }
  return deg;
}

RestrictionCheck g_restriction_check(const FaceFunction& f, int i, FaceView tau) {
  const auto& cx = f.complex();
  const int k = f.level();
  const int j = static_cast<int>(tau.size());
  if (!(j <= i && i <= k)) fail(ErrorCode::kInvalidArgument, "g-restriction check needs |tau| <= i <= k");
  if (!cx->contains(tau)) fail(ErrorCode::kInvalidArgument, "g-restriction anchor is not a face");
  const Decomposition whole = bottom_up_explicit(f);
  const LinkView tau_link = link(cx, tau);
  FaceFunction lhs = restrict_to(whole.g[i], tau_link);
  const auto& target = tau_link.complex();
  const int out_level = i - j;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(target->level_size(out_level)));
  const Face anchor(tau.begin(), tau.end());
  for (int size = 0; size <= j; ++size) {
    for_each_subset(anchor, size, [&](const Face& sigma) {
      const Face rest = face_difference(anchor, sigma);
      const LinkView rest_link = link(cx, rest);
      const Decomposition local = bottom_up_explicit(restrict_to(f, rest_link));
      const FaceFunction& g_local = local.g[out_level];
      const auto& host = rest_link.complex();
      const double sign = sigma.size() % 2 == 0 ? 1.0 : -1.0;
      for (std::size_t s = 0; s < target->level_size(out_level); ++s) {
        rhs[static_cast<Eigen::Index>(s)] += sign * g_local[host->index_of(target->face(out_level, s))];
      }
    });
  }
  FaceFunction rhs_fn(target, out_level, std::move(rhs));
  const double diff = (lhs.values() - rhs_fn.values()).cwiseAbs().maxCoeff();
  return {std::move(lhs), std::move(rhs_fn), diff};
}

NormReport norm_relations(const FaceFunction& f, const HdLevelSetSolver* hd) {
  const auto& cx = f.complex();
  const int k = f.level();
  const Decomposition bu = bottom_up_explicit(f);
  std::optional<Decomposition> top;
  if (hd != nullptr) top = hd->decompose(f);
  const double f_sq = inner_product(f, f);
  NormReport report;
  double lift_total = 0.0;
  for (int i = 0; i <= k; ++i) {
    LevelNorms row;
    row.level = i;
    const FaceFunction down_f = compose_down(cx, k, i)(f);
    row.g_sq = inner_product(bu.g[i], bu.g[i]);
    row.lift_sq = inner_product(bu.lifts[i], bu.lifts[i]);
    row.lift_sq_over_binom = row.lift_sq / binomial(k, i);
    row.down_sq = inner_product(down_f, down_f);
    const double scale = std::ldexp(1.0, i);
    auto ratio = [](double num, double den) {
      if (den > 0.0) return num / den;
      return num > 1e-14 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    if (i > 0) {
      row.kernel_norm = down(bu.g[i]).norm(2.0);
      row.kernel_ratio = ratio(row.kernel_norm, std::sqrt(row.down_sq));
    }
    row.lp_ratio_1 = ratio(bu.g[i].norm(1.0), scale * down_f.norm(1.0));
    row.lp_ratio_2 = ratio(bu.g[i].norm(2.0), scale * down_f.norm(2.0));
    row.lp_ratio_inf = ratio(bu.g[i].sup_norm(), scale * down_f.sup_norm());
    const double slack = 1.0 + 1e-12;
    if (row.lp_ratio_1 > slack || row.lp_ratio_2 > slack || row.lp_ratio_inf > slack) report.lp_claim_holds = false;
    row.g_sup = bu.g[i].sup_norm();
    if (top) {
      const FaceFunction gap = bu.lifts[i] - top->lifts[i];
      row.top_bottom_gap = f_sq > 0.0 ? inner_product(gap, gap) / f_sq : 0.0;
    } else {
      row.top_bottom_gap = std::numeric_limits<double>::quiet_NaN();
    }
    lift_total += row.lift_sq;
    report.levels.push_back(row);
  }
  if (f_sq > 0.0) {
    for (int i = 0; i <= k; ++i) {
      for (int j = i + 1; j <= k; ++j) {
        report.max_cross_inner =
            std::max(report.max_cross_inner, std::abs(inner_product(bu.lifts[i], bu.lifts[j])) / f_sq);
      }
    }
    report.parseval_drift = std::abs(f_sq - lift_total) / f_sq;
  }
  return report;
}

namespace {

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json to_json(const Decomposition& d) {
  nlohmann::json levels = nlohmann::json::array();
  for (int i = 0; i <= d.level; ++i) {
    const auto& g = d.g[i].values();
    const auto& lift = d.lifts[i].values();
    levels.push_back({{"level", i},
                      {"g", std::vector<double>(g.data(), g.data() + g.size())},
                      {"f", std::vector<double>(lift.data(), lift.data() + lift.size())}});
  }
  nlohmann::json out{{"basis", basis_name(d.basis)},
                     {"level", d.level},
                     {"levels", std::move(levels)},
                     {"reconstruction_residual", d.reconstruction_residual}};
  if (d.basis == Basis::kHdLevelSet) {
    out["kernel_residual"] = d.kernel_residual;
    out["condition"] = finite_or_null(d.condition);
  }
  return out;
}

nlohmann::json to_json(const NormReport& r) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& row : r.levels) {
    levels.push_back({{"level", row.level},
                      {"g_sq", row.g_sq},
                      {"lift_sq", row.lift_sq},
                      {"lift_sq_over_binom", row.lift_sq_over_binom},
                      {"down_sq", row.down_sq},
                      {"kernel_norm", row.kernel_norm},
                      {"kernel_ratio", finite_or_null(row.kernel_ratio)},
                      {"lp_ratio_1", finite_or_null(row.lp_ratio_1)},
                      {"lp_ratio_2", finite_or_null(row.lp_ratio_2)},
                      {"lp_ratio_inf", finite_or_null(row.lp_ratio_inf)},
                      {"top_bottom_gap", finite_or_null(row.top_bottom_gap)},
                      {"g_sup", row.g_sup}});
  }
  return {{"levels", std::move(levels)},
          {"max_cross_inner", r.max_cross_inner},
          {"parseval_drift", r.parseval_drift},
          {"lp_claim_holds", r.lp_claim_holds}};
}

}  // namespace hdx
