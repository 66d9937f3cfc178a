#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pconvex/pcore.hpp"
#include "pconvex/types.hpp"

namespace pconvex {

struct GaugeValue {
  double value = 0.0;
  double tol = 0.0;
};

struct BodyOptions {
  double boundary_tol = 1e-9;  // classification band around gauge 1
  bool circled = false;        // symmetric under x -> -x
  bool validate = true;
  long validation_trials = 64;
  std::uint64_t validation_seed = 0x5eedULL;
};

/**
 * Bounded p-convex body containing 0 in its interior, described by a
 * membership oracle plus a Euclidean bound radius. Construction probes the
 * contract: 0 must be interior (axis probes at a radius found by halving),
 * no member may sit outside the bound radius (spot-checked), and the oracle
 * must pass a p-convexity sample at the body's own p.
 *
 * Built-in bodies attach a closed-form p-homogeneous gauge; oracle-only
 * bodies fall back to bisection. eval_gauge() always takes the bisection
 * path so the closed form stays available as an independent cross-check.
 */
class PBody {
 public:
  PBody(MembershipOracle member, PExponent p, double bound_radius, int dim,
        BodyOptions opts = {});

  PBody& with_closed_form(std::function<double(const Vector&)> gauge);

  bool contains(const Vector& x) const { return member_(x); }

  /// Gauge value: closed form when attached, else bisection at `tol`.
  double gauge(const Vector& x, double tol = 1e-12) const;

  bool has_closed_form() const { return static_cast<bool>(closed_); }
  const std::function<double(const Vector&)>& closed_form() const {
    return closed_;
  }

  /// Gauge-normalized point on the boundary along `direction`.
  Vector boundary_point(const Vector& direction, double tol = 1e-12) const;

  PExponent exponent() const noexcept { return p_; }
  double bound_radius() const noexcept { return bound_radius_; }
  int dim() const noexcept { return dim_; }
  bool circled() const noexcept { return opts_.circled; }
  double boundary_tol() const noexcept { return opts_.boundary_tol; }
  double interior_radius() const noexcept { return interior_radius_; }

 private:
  MembershipOracle member_;
  PExponent p_;
  double bound_radius_;
  int dim_;
  BodyOptions opts_;
  std::function<double(const Vector&)> closed_;
  double interior_radius_ = 0.0;
};

/// Minkowski p-functional by bisection on the membership predicate
/// "alpha^(-1/p) x is a member". Bracket starts at [0,1] and doubles the
/// upper end until the predicate flips, capped at 2^60.
GaugeValue eval_gauge(const PBody& body, const Vector& x, double tol);

struct AxiomWitness {
  std::string axiom;
  Vector x;
  Vector y;       // subadditivity only
  double lambda;  // homogeneity only
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AxiomReport {
  bool origin_ok = false;
  bool homogeneous = true;
  bool subadditive = true;
  bool negative_lambda_checked = false;  // only for circled bodies
  long homogeneity_checks = 0;
  long subadditivity_checks = 0;
  double max_homogeneity_gap = 0.0;
  double max_subadditivity_excess = 0.0;
  std::optional<AxiomWitness> witness;
  bool passed() const { return origin_ok && homogeneous && subadditive; }
};

/// Sampled verification of the gauge axioms: value 0 at the origin,
/// p-homogeneity on (lambda, x) pairs, and subadditivity on pairs drawn from
/// the body. Negative lambda is exercised only when the body is circled;
/// otherwise the report says so.
AxiomReport verify_gauge_axioms(const PBody& body, long samples,
                                std::uint64_t seed);

struct SandwichReport {
  bool passed = true;
  long samples = 0;
  long strict_inside = 0;  // gauge < 1 band
  long members = 0;
  std::optional<Vector> witness;
  std::string failure;
};

/// Checks {gauge < 1} subset of body and body subset of {gauge <= 1} on
/// gauge-targeted samples spread across the boundary.
SandwichReport ball_sandwich_check(const PBody& body, long samples,
                                   std::uint64_t seed);

}  // namespace pconvex
