#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>
#include <json.hpp>

#include "hdx/complex.hpp"
#include "hdx/face_function.hpp"

namespace hdx {

enum class Basis { kBottomUp, kHdLevelSet };
const char* basis_name(Basis basis);

/// f = sum_i lifts[i], with level functions g[i] in C_i and lifts[i] in C_k.
struct Decomposition {
  Basis basis = Basis::kBottomUp;
  int level = 0;
  std::vector<FaceFunction> g;
  std::vector<FaceFunction> lifts;
  /// Weighted l2 norm of f - sum_i lifts[i].
  double reconstruction_residual = 0.0;
  /// HD-Level-Set only: max_i ||D_i g_i||_2 and the condition number of the block system.
  double kernel_residual = 0.0;
  double condition = 0.0;
};

/// g_i = D^k_i f - sum_{j<i} C(i,j) U^i_j g_j; lifts C(k,i) U^k_i g_i.
Decomposition bottom_up_recursive(const FaceFunction& f);
/// g_i = sum_j (-1)^(i-j) C(i,j) U^i_j D^k_j f.
Decomposition bottom_up_explicit(const FaceFunction& f);

/// Orthonormal kernel bases of D_1..D_k lifted to level k and factored once,
/// so many functions on one complex can be decomposed cheaply.
class HdLevelSetSolver {
 public:
  static constexpr double kNullspaceCutoff = 1e-10;
  static constexpr double kMaxCondition = 1e12;

  HdLevelSetSolver(ComplexPtr complex, int level);

  const ComplexPtr& complex() const { return complex_; }
  int level() const { return level_; }
  double condition() const { return condition_; }
  /// Kernel dimension per level.
  const std::vector<Eigen::Index>& dimensions() const { return dims_; }

  Decomposition decompose(const FaceFunction& f) const;
  /// Per-level lifts of many functions at once. Column c of the input is a
  /// function already multiplied entrywise by sqrt(pi_k).
  std::vector<Eigen::MatrixXd> lifts_of(const Eigen::MatrixXd& weighted_columns) const;

 private:
  ComplexPtr complex_;
  int level_;
  std::vector<Eigen::MatrixXd> kernels_;  // pi_i-orthonormal columns spanning Ker(D_i)
  std::vector<Eigen::MatrixXd> lifted_;   // U^k_i applied to each kernel basis
  std::vector<Eigen::Index> dims_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  double condition_ = 0.0;
};

Decomposition hd_level_set(const FaceFunction& f);

/// Largest i whose HD-Level-Set lift has weighted l2 norm above 1e-10
/// (Bottom-Up when the HD-Level-Set system is singular).
int degree(const FaceFunction& f);

struct RestrictionCheck {
  FaceFunction lhs;
  FaceFunction rhs;
  double max_abs_diff = 0.0;
};
/// g_i|_tau against sum_{sigma subset tau} (-1)^{|sigma|} g^{(tau \ sigma)}_{i-j},
/// where g^{(rho)} is the Bottom-Up decomposition of f|_rho inside X_rho.
RestrictionCheck g_restriction_check(const FaceFunction& f, int i, FaceView tau);

/// Per-level norm comparisons between the two bases.
struct LevelNorms {
  int level = 0;
  double g_sq = 0.0;              // <g_i, g_i>
  double lift_sq = 0.0;           // <f_i, f_i> (Bottom-Up)
  double lift_sq_over_binom = 0.0;
  double down_sq = 0.0;           // ||D^k_i f||^2
  double kernel_norm = 0.0;       // ||D_i g_i|| (Bottom-Up g)
  double kernel_ratio = 0.0;      // ||D_i g_i|| / ||D^k_i f||
  double lp_ratio_1 = 0.0;        // ||g_i||_p / (2^i ||D^k_i f||_p)
  double lp_ratio_2 = 0.0;
  double lp_ratio_inf = 0.0;
  double top_bottom_gap = 0.0;    // ||f_i(BU) - f_i(HD)||^2 / ||f||^2, NaN without HD
  double g_sup = 0.0;             // ||g_i||_inf
};

struct NormReport {
  std::vector<LevelNorms> levels;
  double max_cross_inner = 0.0;   // max_{i != j} |<f_i, f_j>| / ||f||^2 (Bottom-Up)
  double parseval_drift = 0.0;    // | ||f||^2 - sum ||f_i||^2 | / ||f||^2
  bool lp_claim_holds = true;
};
/// `hd` may be null when the HD-Level-Set system is unavailable.
NormReport norm_relations(const FaceFunction& f, const HdLevelSetSolver* hd = nullptr);

nlohmann::json to_json(const Decomposition& d);
nlohmann::json to_json(const NormReport& r);

}  // namespace hdx
