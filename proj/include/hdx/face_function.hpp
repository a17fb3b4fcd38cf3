#pragma once

#include <functional>

#include <Eigen/Core>

#include "hdx/complex.hpp"

namespace hdx {

/// A real function on X(k) for a fixed level k of a fixed complex.
class FaceFunction {
 public:
  FaceFunction(ComplexPtr complex, int level);
  FaceFunction(ComplexPtr complex, int level, Eigen::VectorXd values);

  static FaceFunction constant(ComplexPtr complex, int level, double value);
  /// 1 on faces satisfying `pred`, 0 elsewhere.
  static FaceFunction indicator(ComplexPtr complex, int level,
                                const std::function<bool(FaceView)>& pred);

  int level() const { return level_; }
  const ComplexPtr& complex() const { return complex_; }
  const Eigen::VectorXd& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

  double operator[](std::size_t index) const { return values_[static_cast<Eigen::Index>(index)]; }
  double at(FaceView face) const;

  /// E_{pi_k}[f].
  double mean() const;
  /// E[f^2] - E[f]^2.
  double variance() const;
  /// (E_{pi_k} |f|^p)^{1/p}; p = infinity gives the max norm (over the support of pi_k).
  double norm(double p) const;
  double sup_norm() const;
  bool is_boolean() const;

  FaceFunction& operator+=(const FaceFunction& other);
  FaceFunction& operator-=(const FaceFunction& other);
  FaceFunction& operator*=(double scale);

 private:
  void check_compatible(const FaceFunction& other) const;

  ComplexPtr complex_;
  int level_;
  Eigen::VectorXd values_;
};

FaceFunction operator+(FaceFunction a, const FaceFunction& b);
FaceFunction operator-(FaceFunction a, const FaceFunction& b);
FaceFunction operator*(double scale, FaceFunction f);

/// <f, g>_{X(i)} = E_{pi_i}[f g].
double inner_product(const FaceFunction& f, const FaceFunction& g);

/// Pointwise product (same level and complex).
FaceFunction pointwise(const FaceFunction& f, const FaceFunction& g);

}  // namespace hdx
