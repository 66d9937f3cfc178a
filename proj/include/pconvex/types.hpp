#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace pconvex {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Exponent p in (0, 1] governing every convexity and homogeneity rule in the
/// library. Carries its reciprocal since x^(1/p) shows up in every
/// combination and gauge formula.
class PExponent {
 public:
  explicit PExponent(double p) : p_(p) {
    if (!(p > 0.0) || !(p <= 1.0))
      throw std::domain_error("p must lie in (0,1]");
  }

  double value() const noexcept { return p_; }
  double inv() const noexcept { return 1.0 / p_; }
  bool is_one() const noexcept { return p_ == 1.0; }

 private:
  double p_;
};

inline bool approx_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

}  // namespace pconvex
