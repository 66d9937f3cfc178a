#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "pconvex/random.hpp"
#include "pconvex/types.hpp"

namespace pconvex {

using MembershipOracle = std::function<bool(const Vector&)>;

/// Non-negative weights t with sum t_i^p = 1: the coefficients of a p-convex
/// combination. Validated at construction; the 1e-12 tolerance is a
/// representation bound, distinct from any search tolerance.
class WeightVector {
 public:
  static constexpr double kSumTol = 1e-12;

  WeightVector(Vector t, PExponent p);

  const Vector& coeffs() const noexcept { return t_; }
  PExponent exponent() const noexcept { return p_; }
  int size() const noexcept { return static_cast<int>(t_.size()); }
  double sum_defect() const;  // |sum t_i^p - 1|

 private:
  Vector t_;
  PExponent p_;
};

/// Finite generator set of uniform dimension, stored column-wise.
class PointSet {
 public:
  explicit PointSet(const std::vector<Vector>& pts);
  static PointSet from_columns(Matrix pts);

  int dim() const noexcept { return static_cast<int>(pts_.rows()); }
  int size() const noexcept { return static_cast<int>(pts_.cols()); }
  const Matrix& points() const noexcept { return pts_; }
  Vector point(int i) const { return pts_.col(i); }

 private:
  PointSet() = default;
  Matrix pts_;  // dim x n
};

/// Weight pair (u^(1/p), (1-u)^(1/p)); satisfies s^p + t^p = 1.
std::pair<double, double> admissible_pair(PExponent p, double u);

/// sum t_i x_i for validated weights.
Vector p_combination(const PointSet& points, const WeightVector& weights);

struct ConvexityViolation {
  Vector x;
  Vector y;
  double u = 0.0;
  Vector combination;
};

struct ConvexityReport {
  bool passed = true;
  long trials_requested = 0;
  long pairs_tested = 0;
  std::optional<ConvexityViolation> witness;
};

/// Axis box the sampler rejects against when probing an oracle.
struct SampleDomain {
  Vector center;
  double radius = 1.0;
};

/// Randomized p-convexity test: draws member pairs (x, y) and u in [0,1],
/// checks membership of u^(1/p) x + (1-u)^(1/p) y. Every fourth trial probes
/// the degenerate pair (x, x, u=1/2), which catches pure scaling violations.
/// The report carries the full witness triple so failures replay.
ConvexityReport check_p_convex(const MembershipOracle& member, PExponent p,
                               const SampleDomain& domain, RandomSource& rng,
                               long trials);

/// Membership of q in the p-convex hull of the singleton {x}: the segment
/// {t x : t in (0,1]} (open) or [0,1] (closed) when p < 1. For p = 1 the hull
/// collapses to {x} and the check degenerates to equality.
bool singleton_hull_membership(const Vector& x, const Vector& q, PExponent p,
                               bool closed, double tol = 1e-10);

struct HullMembership {
  bool found = false;
  std::optional<WeightVector> witness;
  double residual = 0.0;  // best |sum t_i x_i - q| seen
};

/// One-sided feasibility search for q in the p-convex hull of finitely many
/// generators: seeded multistart pattern search over the weight manifold,
/// plus a dense 1-D grid when there are exactly two generators. A false
/// result means "not found at this budget", never a certificate of absence.
HullMembership finite_hull_membership(const PointSet& points, const Vector& q,
                                      PExponent p, double tol, int multistart,
                                      RandomSource& rng);

}  // namespace pconvex
