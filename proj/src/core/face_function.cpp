#include "hdx/face_function.hpp"

#include <cmath>
#include <limits>

#include "hdx/error.hpp"

namespace hdx {

FaceFunction::FaceFunction(ComplexPtr complex, int level)
    : complex_(std::move(complex)), level_(level) {
  require(complex_ != nullptr, "face function needs a complex");
  values_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(complex_->level_size(level)));
}

FaceFunction::FaceFunction(ComplexPtr complex, int level, Eigen::VectorXd values)
    : complex_(std::move(complex)), level_(level), values_(std::move(values)) {
  require(complex_ != nullptr, "face function needs a complex");
  if (static_cast<std::size_t>(values_.size()) != complex_->level_size(level)) {
    fail(ErrorCode::kInvalidArgument, "face function has " + std::to_string(values_.size()) +
                                          " values but level " + std::to_string(level) + " has " +
                                          std::to_string(complex_->level_size(level)) + " faces");
  }
  if (!values_.allFinite()) fail(ErrorCode::kInvalidArgument, "face function values must be finite");
}

FaceFunction FaceFunction::constant(ComplexPtr complex, int level, double value) {
  const auto n = static_cast<Eigen::Index>(complex->level_size(level));
  return FaceFunction(std::move(complex), level, Eigen::VectorXd::Constant(n, value));
}

FaceFunction FaceFunction::indicator(ComplexPtr complex, int level,
                                     const std::function<bool(FaceView)>& pred) {
  FaceFunction f(complex, level);
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (pred(complex->face(level, j))) f.values_[static_cast<Eigen::Index>(j)] = 1.0;
  }
  return f;
}

double FaceFunction::at(FaceView face) const {
  require(static_cast<int>(face.size()) == level_, "face level does not match function level");
  return values_[static_cast<Eigen::Index>(complex_->index_of(face))];
}

double FaceFunction::mean() const { return complex_->pi(level_).dot(values_); }

double FaceFunction::variance() const {
  const double m = mean();
  return complex_->pi(level_).dot(values_.cwiseProduct(values_)) - m * m;
}

double FaceFunction::norm(double p) const {
  if (std::isinf(p)) return sup_norm();
  require(p >= 1.0, "norm order must be at least 1");
  const auto& pi = complex_->pi(level_);
  double s = 0.0;
  for (Eigen::Index j = 0; j < values_.size(); ++j) s += pi[j] * std::pow(std::abs(values_[j]), p);
  return std::pow(s, 1.0 / p);
}

double FaceFunction::sup_norm() const {
  return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff();
}

bool FaceFunction::is_boolean() const {
  for (Eigen::Index j = 0; j < values_.size(); ++j) {
    if (values_[j] != 0.0 && values_[j] != 1.0) return false;
  }
  return true;
}

void FaceFunction::check_compatible(const FaceFunction& other) const {
  if (complex_ != other.complex_) fail(ErrorCode::kInvalidArgument, "functions live on different complexes");
  if (level_ != other.level_) {
    fail(ErrorCode::kInvalidArgument, "level mismatch: " + std::to_string(level_) + " vs " +
                                          std::to_string(other.level_));
  }
}

FaceFunction& FaceFunction::operator+=(const FaceFunction& other) {
  check_compatible(other);
  values_ += other.values_;
  return *this;
}

FaceFunction& FaceFunction::operator-=(const FaceFunction& other) {
  check_compatible(other);
  values_ -= other.values_;
  return *this;
}

FaceFunction& FaceFunction::operator*=(double scale) {
  values_ *= scale;
  return *this;
}

FaceFunction operator+(FaceFunction a, const FaceFunction& b) { return a += b; }
FaceFunction operator-(FaceFunction a, const FaceFunction& b) { return a -= b; }
FaceFunction operator*(double scale, FaceFunction f) { return f *= scale; }

double inner_product(const FaceFunction& f, const FaceFunction& g) {
  if (f.complex() != g.complex()) fail(ErrorCode::kInvalidArgument, "functions live on different complexes");
  if (f.level() != g.level()) {
    fail(ErrorCode::kInvalidArgument, "inner product of levels " + std::to_string(f.level()) +
                                          " and " + std::to_string(g.level()));
  }
  return f.complex()->pi(f.level()).dot(f.values().cwiseProduct(g.values()));
}

FaceFunction pointwise(const FaceFunction& f, const FaceFunction& g) {
  if (f.complex() != g.complex() || f.level() != g.level()) {
    fail(ErrorCode::kInvalidArgument, "pointwise product needs matching functions");
  }
  return FaceFunction(f.complex(), f.level(), f.values().cwiseProduct(g.values()));
}

}  // namespace hdx
