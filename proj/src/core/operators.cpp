#include "hdx/operators.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>

#include <Eigen/Dense>

#include "hdx/error.hpp"
#include "hdx/link.hpp"

namespace hdx {

namespace {

bool prefer_dense(Eigen::Index rows, Eigen::Index cols) {
  return static_cast<std::size_t>(rows) < kDenseThreshold && static_cast<std::size_t>(cols) < kDenseThreshold;
}

void check_level(const ComplexPtr& cx, int level, const char* what) {
  if (level < 0 || level > cx->dimension()) {
    fail(ErrorCode::kInvalidArgument, std::string(what) + ": level " + std::to_string(level) +
                                          " outside 0.." + std::to_string(cx->dimension()));
  }
}

Eigen::VectorXd sqrt_pi(const ComplexPtr& cx, int level) { return cx->pi(level).cwiseSqrt(); }

}  // namespace

LinearMap::LinearMap(ComplexPtr complex, int source, int target, Eigen::MatrixXd matrix)
    : complex_(std::move(complex)), source_(source), target_(target), matrix_(std::move(matrix)) {
  const auto& m = std::get<Eigen::MatrixXd>(matrix_);
  if (static_cast<std::size_t>(m.rows()) != complex_->level_size(target) ||
      static_cast<std::size_t>(m.cols()) != complex_->level_size(source)) {
    fail(ErrorCode::kInternal, "operator shape does not match its levels");
  }
}

LinearMap::LinearMap(ComplexPtr complex, int source, int target, SparseMatrix matrix)
    : complex_(std::move(complex)), source_(source), target_(target) {
  if (static_cast<std::size_t>(matrix.rows()) != complex_->level_size(target) ||
      static_cast<std::size_t>(matrix.cols()) != complex_->level_size(source)) {
    fail(ErrorCode::kInternal, "operator shape does not match its levels");
  }
  if (prefer_dense(matrix.rows(), matrix.cols())) {
    matrix_ = Eigen::MatrixXd(matrix);
  } else {
    matrix.makeCompressed();
    matrix_ = std::move(matrix);
  }
}

LinearMap LinearMap::identity(ComplexPtr complex, int level) {
  const auto n = static_cast<Eigen::Index>(complex->level_size(level));
  SparseMatrix id(n, n);
  id.setIdentity();
  return LinearMap(std::move(complex), level, level, std::move(id));
}

Eigen::Index LinearMap::rows() const {
  return std::visit([](const auto& m) { return m.rows(); }, matrix_);
}

Eigen::Index LinearMap::cols() const {
  return std::visit([](const auto& m) { return m.cols(); }, matrix_);
}

Eigen::MatrixXd LinearMap::dense() const {
  if (is_dense()) return std::get<Eigen::MatrixXd>(matrix_);
  return Eigen::MatrixXd(std::get<SparseMatrix>(matrix_));
}

SparseMatrix LinearMap::sparse() const {
  if (!is_dense()) return std::get<SparseMatrix>(matrix_);
  return std::get<Eigen::MatrixXd>(matrix_).sparseView();
}

Eigen::VectorXd LinearMap::apply(const Eigen::VectorXd& x) const {
  require(x.size() == cols(), "operator applied to a vector of the wrong length");
  return std::visit([&](const auto& m) -> Eigen::VectorXd { return m * x; }, matrix_);
}

FaceFunction LinearMap::operator()(const FaceFunction& f) const {
  if (f.complex() != complex_) fail(ErrorCode::kInvalidArgument, "operator and function live on different complexes");
  if (f.level() != source_) {
    fail(ErrorCode::kInvalidArgument, "operator expects level " + std::to_string(source_) + ", got " +
                                          std::to_string(f.level()));
  }
  return FaceFunction(complex_, target_, apply(f.values()));
}

std::size_t LinearMap::nonzeros() const {
  if (is_dense()) return static_cast<std::size_t>(rows() * cols());
  return static_cast<std::size_t>(std::get<SparseMatrix>(matrix_).nonZeros());
}

double LinearMap::max_abs() const {
  if (is_dense()) {
    const auto& m = std::get<Eigen::MatrixXd>(matrix_);
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  }
  const auto& m = std::get<SparseMatrix>(matrix_);
  double best = 0.0;
  for (Eigen::Index j = 0; j < m.nonZeros(); ++j) best = std::max(best, std::abs(m.valuePtr()[j]));
  return best;
}

LinearMap& LinearMap::operator*=(double scale) {
  std::visit([&](auto& m) { m *= scale; }, matrix_);
  return *this;
}

LinearMap& LinearMap::operator+=(const LinearMap& other) {
  if (other.complex_ != complex_ || other.source_ != source_ || other.target_ != target_) {
    fail(ErrorCode::kInvalidArgument, "cannot add operators with different shapes");
  }
  if (is_dense()) {
    std::get<Eigen::MatrixXd>(matrix_) += other.dense();
  } else {
    auto& m = std::get<SparseMatrix>(matrix_);
    m = m + other.sparse();
  }
  return *this;
}

LinearMap& LinearMap::operator-=(const LinearMap& other) {
  LinearMap neg = other;
  neg *= -1.0;
  return *this += neg;
}

LinearMap compose(const LinearMap& after, const LinearMap& before) {
  if (after.complex() != before.complex() || after.source_level() != before.target_level()) {
    fail(ErrorCode::kInvalidArgument, "operators do not compose");
  }
  if (after.is_dense() && before.is_dense()) {
    return LinearMap(after.complex(), before.source_level(), after.target_level(),
                     Eigen::MatrixXd(after.dense() * before.dense()));
  }
  SparseMatrix product = after.sparse() * before.sparse();
  return LinearMap(after.complex(), before.source_level(), after.target_level(), std::move(product));
}

LinearMap operator+(LinearMap a, const LinearMap& b) { return a += b; }
LinearMap operator-(LinearMap a, const LinearMap& b) { return a -= b; }
LinearMap operator*(double scale, LinearMap m) { return m *= scale; }

LinearMap up_map(const ComplexPtr& complex, int k) {
  if (k < 0 || k >= complex->dimension()) {
    fail(ErrorCode::kInvalidArgument, "no up operator from level " + std::to_string(k));
  }
  return LinearMap(complex, k, k + 1, SparseMatrix(*complex->up_matrix(k)));
}

LinearMap down_map(const ComplexPtr& complex, int k) {
  if (k <= 0 || k > complex->dimension()) {
    fail(ErrorCode::kInvalidArgument, "no down operator from level " + std::to_string(k));
  }
  return LinearMap(complex, k, k - 1, SparseMatrix(*complex->down_matrix(k)));
}

LinearMap compose_up(const ComplexPtr& complex, int i, int k) {
  check_level(complex, i, "compose_up");
  check_level(complex, k, "compose_up");
  if (i > k) fail(ErrorCode::kInvalidArgument, "compose_up needs i <= k");
  LinearMap m = LinearMap::identity(complex, i);
  for (int level = i; level < k; ++level) m = compose(up_map(complex, level), m);
  return m;
}

LinearMap compose_down(const ComplexPtr& complex, int k, int i) {
  check_level(complex, i, "compose_down");
  check_level(complex, k, "compose_down");
  if (i > k) fail(ErrorCode::kInvalidArgument, "compose_down needs i <= k");
  LinearMap m = LinearMap::identity(complex, k);
  for (int level = k; level > i; --level) m = compose(down_map(complex, level), m);
  return m;
}

FaceFunction up(const FaceFunction& f) { return up_map(f.complex(), f.level())(f); }
FaceFunction down(const FaceFunction& f) { return down_map(f.complex(), f.level())(f); }

double WalkSpec::weight() const {
  double w = 0.0;
  for (const auto& t : terms) w += std::abs(t.coefficient);
  return w;
}

int WalkSpec::height() const {
  int h = 0;
  for (const auto& t : terms) h = std::max(h, static_cast<int>(t.word.size() / 2));
  return h;
}

WalkSpec canonical_walk(int k, int i) {
  require(k >= 0 && i >= 0, "canonical walk needs k, i >= 0");
  return {k, {{1.0, std::string(static_cast<std::size_t>(i), 'U') + std::string(static_cast<std::size_t>(i), 'D')}}};
}

WalkSpec lower_walk(int k) {
  require(k >= 1, "the lower walk needs k >= 1");
  return {k, {{1.0, "DU"}}};
}

WalkSpec identity_walk(int k) { return {k, {{1.0, ""}}}; }

WalkSpec noise_operator(int k, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) fail(ErrorCode::kInvalidArgument, "noise rate rho must lie in [0, 1]");
  require(k >= 0, "noise operator needs k >= 0");
  WalkSpec spec{k, {}};
  for (int i = 0; i <= k; ++i) {
    const double c = binomial(k, i) * std::pow(1.0 - rho, i) * std::pow(rho, k - i);
    if (c == 0.0) continue;
    spec.terms.push_back({c, std::string(static_cast<std::size_t>(i), 'D') + std::string(static_cast<std::size_t>(i), 'U')});
  }
  return spec;
}

namespace {

LinearMap word_map(const ComplexPtr& complex, int level, const std::string& word) {
  LinearMap m = LinearMap::identity(complex, level);
  int at = level;
  for (char letter : word) {
    if (letter == 'U') {
      if (at >= complex->dimension()) fail(ErrorCode::kInvalidArgument, "walk word '" + word + "' climbs above the top level");
      m = compose(up_map(complex, at), m);
      ++at;
    } else if (letter == 'D') {
      if (at <= 0) fail(ErrorCode::kInvalidArgument, "walk word '" + word + "' descends below level 0");
      m = compose(down_map(complex, at), m);
      --at;
    } else {
      fail(ErrorCode::kInvalidArgument, std::string("walk words use U and D only, got '") + letter + "'");
    }
  }
  if (at != level) fail(ErrorCode::kInvalidArgument, "walk word '" + word + "' does not return to its level");
  return m;
}

}  // namespace

WalkDefects walk_defects(const LinearMap& m) {
  require(m.source_level() == m.target_level(), "walk defects need a square operator");
  const Eigen::MatrixXd a = m.dense();
  const auto& pi = m.complex()->pi(m.source_level());
  WalkDefects out;
  if (a.size() == 0) return out;
  out.row_sum = (a.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const Eigen::MatrixXd weighted = pi.asDiagonal() * a;
  out.asymmetry = (weighted - weighted.transpose()).cwiseAbs().maxCoeff();
  return out;
}

LinearMap assemble_walk(const ComplexPtr& complex, const WalkSpec& spec) {
  check_level(complex, spec.level, "walk");
  require(!spec.terms.empty(), "walk has no terms");
  std::optional<LinearMap> total;
  for (const auto& term : spec.terms) {
    LinearMap m = word_map(complex, spec.level, term.word);
    m *= term.coefficient;
    if (total) {
      *total += m;
    } else {
      total = std::move(m);
    }
  }
  const WalkDefects defects = walk_defects(*total);
  if (defects.row_sum > 1e-9) {
    fail(ErrorCode::kInvalidArgument, "walk is not stochastic (row sum deviation " + std::to_string(defects.row_sum) + ")");
  }
  if (defects.asymmetry > 1e-9) {
    fail(ErrorCode::kInvalidArgument, "walk is not self-adjoint (asymmetry " + std::to_string(defects.asymmetry) + ")");
  }
  return *total;
}

FaceFunction walk_apply(const WalkSpec& spec, const FaceFunction& f) {
  if (f.level() != spec.level) fail(ErrorCode::kInvalidArgument, "walk level does not match function level");
  return assemble_walk(f.complex(), spec)(f);
}

LinearMap rectangular_canonical(const ComplexPtr& complex, int i, int j) {
  require(i >= 0 && j >= 0, "rectangular walk needs i, j >= 0");
  if (i + j > complex->dimension()) fail(ErrorCode::kInvalidArgument, "rectangular walk needs i + j <= d");
  return compose(compose_down(complex, i + j, i), compose_up(complex, j, i + j));
}

SwapWalk swap_walk(const ComplexPtr& complex, int i, int j) {
  require(i >= 0 && j >= 0, "swap walk needs i, j >= 0");
  const int top = i + j;
  if (top > complex->dimension()) fail(ErrorCode::kInvalidArgument, "swap walk needs i + j <= d");
  const auto rows = complex->level_size(i);
  const auto& pi_top = complex->pi(top);
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::VectorXd row_mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  for (std::size_t t = 0; t < complex->level_size(top); ++t) {
    const Face face = complex->face_copy(top, t);
    for_each_subset(face, i, [&](const Face& tau) {
      const auto r = complex->index_of(tau);
      const auto c = complex->index_of(face_difference(face, tau));
      entries.emplace_back(static_cast<int>(r), static_cast<int>(c), pi_top[static_cast<Eigen::Index>(t)]);
      row_mass[static_cast<Eigen::Index>(r)] += pi_top[static_cast<Eigen::Index>(t)];
    });
  }
  std::string empty_rows;
  for (std::size_t r = 0; r < rows; ++r) {
    if (row_mass[static_cast<Eigen::Index>(r)] <= 0.0) {
      if (empty_rows.size() < 200) {
        empty_rows += " {";
        for (VertexId v : complex->face(i, r)) empty_rows += std::to_string(v) + ",";
        empty_rows += "}";
      }
    }
  }
  if (!empty_rows.empty()) fail(ErrorCode::kInfeasible, "swap walk rows without a disjoint target:" + empty_rows);
  for (auto& e : entries) e = {e.row(), e.col(), e.value() / row_mass[e.row()]};
  SparseMatrix s(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(complex->level_size(j)));
  s.setFromTriplets(entries.begin(), entries.end());
  LinearMap map(complex, j, i, std::move(s));
  const Eigen::VectorXd sv = weighted_singular_values(map);
  return {std::move(map), sv.size() > 1 ? sv[1] : 0.0};
}

LinearMap laplacian(const ComplexPtr& complex, int k) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "the Laplacian needs level k >= 1");
  LinearMap walk = compose(up_map(complex, k - 1), down_map(complex, k));
  LinearMap id = LinearMap::identity(complex, k);
  return static_cast<double>(k) * (id - walk);
}

double influence(const FaceFunction& f) {
  return inner_product(f, laplacian(f.complex(), f.level())(f));
}

double stability(const FaceFunction& f, double rho) {
  return inner_product(f, walk_apply(noise_operator(f.level(), rho), f));
}

double edge_expansion(const FaceFunction& indicator, const LinearMap& walk) {
  require(indicator.is_boolean(), "edge expansion needs a 0/1 indicator");
  const double mass = indicator.mean();
  if (mass <= 0.0) fail(ErrorCode::kInvalidArgument, "edge expansion of an empty set");
  return 1.0 - inner_product(indicator, walk(indicator)) / mass;
}

double edge_expansion(const FaceFunction& indicator, const WalkSpec& walk) {
  return edge_expansion(indicator, assemble_walk(indicator.complex(), walk));
}

Eigen::VectorXd weighted_singular_values(const LinearMap& m) {
  const auto& cx = m.complex();
  const Eigen::MatrixXd a = sqrt_pi(cx, m.target_level()).asDiagonal() * m.dense() *
                            sqrt_pi(cx, m.source_level()).cwiseInverse().asDiagonal();
  if (a.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues();
}

double weighted_norm(const LinearMap& m) {
  const Eigen::VectorXd sv = weighted_singular_values(m);
  return sv.size() == 0 ? 0.0 : sv[0];
}

Eigen::VectorXd walk_eigenvalues(const LinearMap& m) {
  require(m.source_level() == m.target_level(), "eigenvalues need a square operator");
  const Eigen::VectorXd s = sqrt_pi(m.complex(), m.source_level());
  Eigen::MatrixXd a = s.asDiagonal() * m.dense() * s.cwiseInverse().asDiagonal();
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) fail(ErrorCode::kNumerical, "eigen-solve failed");
  return eig.eigenvalues().reverse();
}

LinearMap localization_gamma(const ComplexPtr& complex, int i, int j) {
  require(i >= 0 && j >= 0, "localization operator needs i, j >= 0");
  if (i + j > complex->dimension()) fail(ErrorCode::kInvalidArgument, "localization operator needs i + j <= d");
  LinearMap swap = swap_walk(complex, j, i).map;
  return swap - compose(compose_up(complex, 0, j), compose_down(complex, i, 0));
}

LocalizationResidual localization_residual(const FaceFunction& f, FaceView tau) {
  const auto& cx = f.complex();
  const int j = static_cast<int>(tau.size());
  LocalizationResidual out;
  out.local_mean_shift = localize(f, tau).mean() - f.mean();
  out.gamma_value = localization_gamma(cx, f.level(), j)(f)[cx->index_of(tau)];
  out.residual = std::abs(out.local_mean_shift - out.gamma_value);
  return out;
}

DdfhResidual ddfh_residual(const ComplexPtr& complex, int i, int j) {
  if (!(1 <= j && j <= i && i <= complex->dimension())) {
    fail(ErrorCode::kInvalidArgument, "DDFH residual needs 1 <= j <= i <= d (got i = " + std::to_string(i) +
                                          ", j = " + std::to_string(j) + ")");
  }
  LinearMap lhs = compose(down_map(complex, i), compose_up(complex, j, i));
  LinearMap first = compose(compose_up(complex, j - 1, i - 1), down_map(complex, j));
  first *= static_cast<double>(j) / i;
  if (j == i) {
    // (i - j)/i = 0 and U^{i-1}_i does not exist.
    LinearMap residual = lhs - first;
    const double norm = weighted_norm(residual);
    return {std::move(residual), norm};
  }
  LinearMap second = compose_up(complex, j, i - 1);
  second *= static_cast<double>(i - j) / i;
  LinearMap residual = lhs - first - second;
  const double norm = weighted_norm(residual);
  return {std::move(residual), norm};
}

IdentitySides garland_check_restrict(const FaceFunction& f, int i) {
  const auto& cx = f.complex();
  if (i < 0 || i > f.level()) fail(ErrorCode::kInvalidArgument, "Garland restriction needs 0 <= i <= k");
  IdentitySides out{inner_product(f, f), 0.0};
  const auto& pi = cx->pi(i);
  for (std::size_t t = 0; t < cx->level_size(i); ++t) {
    const FaceFunction r = restrict_to(f, cx->face(i, t));
    out.rhs += pi[static_cast<Eigen::Index>(t)] * inner_product(r, r);
  }
  return out;
}

IdentitySides garland_check_localize(const FaceFunction& f, int i) {
  const auto& cx = f.complex();
  if (i < 0 || f.level() + i > cx->dimension()) fail(ErrorCode::kInvalidArgument, "Garland localization needs k + i <= d");
  IdentitySides out{inner_product(f, f), 0.0};
  const auto& pi = cx->pi(i);
  for (std::size_t t = 0; t < cx->level_size(i); ++t) {
    const FaceFunction l = localize(f, cx->face(i, t));
    out.rhs += pi[static_cast<Eigen::Index>(t)] * inner_product(l, l);
  }
  return out;
}

void write_operator(std::ostream& out, const LinearMap& m) {
  const SparseMatrix s = m.sparse();
  out << m.source_level() << ' ' << m.target_level() << ' ' << s.rows() << ' ' << s.cols() << ' ' << s.nonZeros()
      << '\n';
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < s.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(s, r); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "failed writing operator");
}

LinearMap read_operator(std::istream& in, const ComplexPtr& complex) {
  int src = 0;
  int dst = 0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index nnz = 0;
  if (!(in >> src >> dst >> rows >> cols >> nnz)) fail(ErrorCode::kIo, "malformed operator header");
  check_level(complex, src, "operator file");
  check_level(complex, dst, "operator file");
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  for (Eigen::Index e = 0; e < nnz; ++e) {
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v)) fail(ErrorCode::kIo, "operator file truncated");
    if (r < 0 || r >= rows || c < 0 || c >= cols) fail(ErrorCode::kIo, "operator entry out of range");
    entries.emplace_back(r, c, v);
  }
  SparseMatrix s(rows, cols);
  s.setFromTriplets(entries.begin(), entries.end());
  return LinearMap(complex, src, dst, std::move(s));
}

}  // namespace hdx
