#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "hdx/complex.hpp"
#include "hdx/face_function.hpp"

namespace hdx {

/// Levels at or above this many faces keep their operators sparse.
inline constexpr std::size_t kDenseThreshold = 40'000;

/// A linear map C_source -> C_target stored as a |X(target)| x |X(source)| matrix.
class LinearMap {
 public:
  LinearMap(ComplexPtr complex, int source, int target, Eigen::MatrixXd matrix);
  LinearMap(ComplexPtr complex, int source, int target, SparseMatrix matrix);

  static LinearMap identity(ComplexPtr complex, int level);

  const ComplexPtr& complex() const { return complex_; }
  int source_level() const { return source_; }
  int target_level() const { return target_; }
  Eigen::Index rows() const;
  Eigen::Index cols() const;
  bool is_dense() const { return std::holds_alternative<Eigen::MatrixXd>(matrix_); }

  Eigen::MatrixXd dense() const;
  SparseMatrix sparse() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  FaceFunction operator()(const FaceFunction& f) const;

  /// Number of stored entries (all entries for dense storage).
  std::size_t nonzeros() const;
  double max_abs() const;

  LinearMap& operator*=(double scale);
  LinearMap& operator+=(const LinearMap& other);
  LinearMap& operator-=(const LinearMap& other);

 private:
  ComplexPtr complex_;
  int source_;
  int target_;
  std::variant<Eigen::MatrixXd, SparseMatrix> matrix_;
};

/// after o before.
LinearMap compose(const LinearMap& after, const LinearMap& before);
LinearMap operator+(LinearMap a, const LinearMap& b);
LinearMap operator-(LinearMap a, const LinearMap& b);
LinearMap operator*(double scale, LinearMap m);

/// U_k : C_k -> C_{k+1}.
LinearMap up_map(const ComplexPtr& complex, int k);
/// D_k : C_k -> C_{k-1}.
LinearMap down_map(const ComplexPtr& complex, int k);
/// U^k_i : C_i -> C_k.
LinearMap compose_up(const ComplexPtr& complex, int i, int k);
/// D^k_i : C_k -> C_i.
LinearMap compose_down(const ComplexPtr& complex, int k, int i);

FaceFunction up(const FaceFunction& f);
FaceFunction down(const FaceFunction& f);

/// A pure walk word; letters act on the function in the order listed.
struct WalkTerm {
  double coefficient = 1.0;
  std::string word;  // 'U' and 'D' letters
};

struct WalkSpec {
  int level = 0;
  std::vector<WalkTerm> terms;

  double weight() const;
  int height() const;
};

/// N_k^i: i up steps, then i down steps.
WalkSpec canonical_walk(int k, int i);
/// U_{k-1} D_k.
WalkSpec lower_walk(int k);
WalkSpec identity_walk(int k);
/// T_rho = sum_i C(k,i) (1-rho)^i rho^(k-i) U^k_{k-i} D^k_{k-i}.
WalkSpec noise_operator(int k, double rho);

/// Sum of word products; rejects maps that are not row-stochastic or not
/// self-adjoint under pi_k, both to 1e-9.
LinearMap assemble_walk(const ComplexPtr& complex, const WalkSpec& spec);
FaceFunction walk_apply(const WalkSpec& spec, const FaceFunction& f);

/// Row sum deviation and pi-asymmetry of a square map at one level.
struct WalkDefects {
  double row_sum = 0.0;
  double asymmetry = 0.0;
};
WalkDefects walk_defects(const LinearMap& m);

/// N_{i,j} = D^{i+j}_i U^{i+j}_j : C_j -> C_i.
LinearMap rectangular_canonical(const ComplexPtr& complex, int i, int j);

struct SwapWalk {
  LinearMap map;  // C_j -> C_i
  /// Second singular value of diag(pi_i)^{1/2} S diag(pi_j)^{-1/2}.
  double second_singular_value = 0.0;
};
/// N_{i,j} restricted to disjoint pairs, rows renormalized.
SwapWalk swap_walk(const ComplexPtr& complex, int i, int j);

/// L = k (I - U_{k-1} D_k).
LinearMap laplacian(const ComplexPtr& complex, int k);
/// <f, L f>.
double influence(const FaceFunction& f);
/// <f, T_rho f>.
double stability(const FaceFunction& f, double rho);
/// 1 - <1_S, M 1_S> / E[1_S].
double edge_expansion(const FaceFunction& indicator, const LinearMap& walk);
double edge_expansion(const FaceFunction& indicator, const WalkSpec& walk);

/// Singular values of diag(pi_target)^{1/2} M diag(pi_source)^{-1/2}, descending.
Eigen::VectorXd weighted_singular_values(const LinearMap& m);
/// Largest of the above: the operator norm between the weighted l2 spaces.
double weighted_norm(const LinearMap& m);
/// Eigenvalues of a pi-self-adjoint square map, descending.
Eigen::VectorXd walk_eigenvalues(const LinearMap& m);

/// Gamma = S_{j,i} - U^j_0 D^i_0 : C_i -> C_j.
LinearMap localization_gamma(const ComplexPtr& complex, int i, int j);

struct LocalizationResidual {
  double local_mean_shift = 0.0;  // E_{X_tau}[localized f] - E[f]
  double gamma_value = 0.0;       // (Gamma f)(tau)
  double residual = 0.0;
};
LocalizationResidual localization_residual(const FaceFunction& f, FaceView tau);

struct DdfhResidual {
  LinearMap residual;  // C_j -> C_{i-1}
  double norm = 0.0;
};
/// E_{i,j} = D_i U^i_j - (j/i) U^{i-1}_{j-1} D_j - ((i-j)/i) U^{i-1}_j, for 1 <= j <= i.
DdfhResidual ddfh_residual(const ComplexPtr& complex, int i, int j);

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};
/// <f,f> against E_{tau ~ pi_i} <f|_tau, f|_tau>.
IdentitySides garland_check_restrict(const FaceFunction& f, int i);
/// <f,f> against E_{tau ~ pi_i} <f|^tau, f|^tau>.
IdentitySides garland_check_localize(const FaceFunction& f, int i);

/// Text export: header `level_src level_dst rows cols nnz`, then `row col value` lines.
void write_operator(std::ostream& out, const LinearMap& m);
LinearMap read_operator(std::istream& in, const ComplexPtr& complex);

}  // namespace hdx
