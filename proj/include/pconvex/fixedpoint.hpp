#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pconvex/retract.hpp"

namespace pconvex {

enum class MappingClass {
  one_set_contractive,
  semiclosed_one_set_contractive,
  condensing,
  nonexpansive
};

const char* to_string(MappingClass c);
MappingClass mapping_class_from_string(const std::string& s);

/// Benchmark map with an asserted (not verified) class tag. The tag never
/// changes the numerics; it only changes how certificates label their
/// conclusion. Sequential-compactness assumptions behind the solvers are
/// likewise treated as asserted properties, auditable through the residual
/// traces every run keeps.
struct MapSpec {
  std::function<Vector(const Vector&)> F;
  MappingClass asserted_class = MappingClass::one_set_contractive;
  std::string name;
  std::optional<Vector> known_fixed_point;

  /// Probes totality and finiteness on the body's bounding box.
  void validate_on(const PBody& body, long samples = 32,
                   std::uint64_t seed = 0xf00dULL) const;
};

struct SolverOptions {
  double damping = 0.5;        // Picard mixing weight
  long max_inner_iters = 10000;
  double inner_tol = 1e-14;    // step-size stop, relative to max(1, |z|)
  double divergence_factor = 10.0;
  double gauge_tol = 1e-12;
};

struct IterStep {
  int n = 0;
  double lambda = 0.0;
  Vector x;
  double residual = 0.0;        // P_U(F(x) - x)
  double residual_bound = 0.0;  // ((1 - lambda) / lambda)^p
  bool interior = false;
  bool converged = false;
  long inner_iters = 0;
};

struct IterTrace {
  std::vector<IterStep> steps;
  bool completed = true;  // every step's inner solve converged
  const IterStep* last_converged() const;
};

/// lambda_n = 1 - 2^-n for n = 1..count.
std::vector<double> default_lambda_schedule(int count = 30);

/// The approximating scheme: for each lambda_n solve z = lambda_n F(r(z)) by
/// damped Picard iteration, record x_n = r(z_n) and the residual
/// P_U(F(x_n) - x_n). Interior steps satisfy the bound
/// residual <= ((1-lambda_n)/lambda_n)^p, which the trace stores per step.
/// A failed inner solve marks the step and keeps it in the trace.
IterTrace approximate_fixed_point(const MapSpec& map, const PBody& body,
                                  const std::vector<double>& schedule,
                                  const SolverOptions& opts, double tol);

enum class CertificateKind {
  FixedPoint,
  BestApproximation,
  InvariantDirection,
  Inconclusive
};

const char* to_string(CertificateKind k);

/**
 * Outcome of a solver run. Identity checks are stored as scalar gaps so a
 * report re-validates from its own numbers:
 *  - BestApproximation: residual vs (gauge^(1/p) - 1)^p at the boundary point
 *  - InvariantDirection: lambda vs gauge^(1/p)
 */
struct Certificate {
  CertificateKind kind = CertificateKind::Inconclusive;
  Vector point;
  double residual = 0.0;
  double gauge_at_map = 0.0;  // P_U(F(point))
  double lambda = 1.0;        // direction factor / homotopy parameter
  double identity_gap = 0.0;
  bool boundary_case = false;
  MappingClass map_class = MappingClass::one_set_contractive;
  std::string conclusion;
  std::string diagnostics;

  /// Recomputes the kind's identity gap from the stored scalars.
  double revalidate(PExponent p) const;
};

/// Conclusion label: what the run established, qualified by the asserted
/// mapping class (e.g. "fixed_point[semiclosed_one_set_contractive]").
std::string conclusion_tag(CertificateKind kind, MappingClass cls);

/// Runs the approximating scheme and certifies the alternative: a fixed
/// point when the residual closes below tol, otherwise a boundary
/// best-approximation point whose residual matches (gauge^(1/p) - 1)^p and
/// beats every sampled inward competitor.
Certificate best_approx_certificate(const MapSpec& map, const PBody& body,
                                    double tol, const SolverOptions& opts = {},
                                    long inward_samples = 512,
                                    std::uint64_t seed = 0xbead5ULL);

enum class BoundaryCondition {
  rothe,           // P(F(x)) <= P(x)
  petryshyn,       // P(F(x)) <= P(F(x) - x)
  altman,          // P(F(x))^(2/p) <= P(F(x)-x)^(2/p) + P(x)^(2/p)
  leray_schauder,  // no lambda > 1 with F(x) = lambda x
  ineq1,           // P(F(x)) <= P(x)
  ineq2,           // P(F(x)) <= P(F(x) - x)
  ineq3,           // P(F(x) + x) <= P(F(x))
  ineq4,           // P(F(x) + x) <= P(x)
  ineq5,           // P(F(x) + x) <= P(F(x) - x)
  ineq6,           // P(F(x)) P(F(x) + x) <= P(x)^2
  ineq7,           // P(F(x)) P(F(x) + x) <= P(F(x) - x) P(x)
  param1,  // P(F-x)^(a/p) >= P(F)^((a+b)/p) P(x)^(-b/p) - P(x)^(a/p)
  param2,  // P(F+x)^((a+b)/p) <= P(F)^(a/p) P(x)^(b/p) + P(x)^((a+b)/p)
  param3,  // P(F-x)^(a/p) P(x)^(b/p) >= P(F)^(a/p) P(F+x)^(b/p) - P(x)^((a+b)/p)
  param4   // P(F+x)^((a+b)/p) <= P(F-x)^(a/p) P(x)^(b/p) + P(F)^(b/p) P(x)^(a/p)
};

const char* to_string(BoundaryCondition c);
BoundaryCondition boundary_condition_from_string(const std::string& s);

struct ConditionParams {
  double alpha = 2.0;  // must exceed 1 for the parametric family
  double beta = 0.0;   // must be >= 0
};

struct ConditionVerdict {
  BoundaryCondition id;
  bool holds = false;
  long samples = 0;
  double margin = 0.0;  // minimum slack observed across samples
  std::optional<Vector> witness;
  std::string conclusion;  // fixed-point prediction tag when it holds
};

/// Evaluates boundary inequalities on gauge-normalized samples of the
/// boundary. A condition that holds on every sample earns the fixed-point
/// prediction tag for the mapping class; a violation carries its witness.
std::vector<ConditionVerdict> check_boundary_conditions(
    const MapSpec& map, const PBody& body,
    const std::vector<BoundaryCondition>& conditions,
    const ConditionParams& params, long samples, std::uint64_t seed);

/// Multistart search for invariant directions lambda x = F(x) with x on the
/// boundary and lambda in (1, lambda_max]. Solutions are deduplicated within
/// 1e-6 in the max norm on (x, lambda). An empty list is a valid outcome and
/// predicts a fixed point instead.
std::vector<Certificate> birkhoff_kellogg_scan(const MapSpec& map,
                                               const PBody& body,
                                               double lambda_max,
                                               int multistart,
                                               std::uint64_t seed, double tol);

struct EpsPoint {
  double lambda = 0.0;
  Vector x;
  double norm = 0.0;  // Euclidean
  bool resolved = false;
};

struct EpsReport {
  std::vector<EpsPoint> points;
  bool growth_detected = false;
  double max_norm = 0.0;
  double max_gauge = 0.0;    // under the domain gauge, when a domain is given
  double fitted_rate = 0.0;  // c in |x(lambda)| ~ c lambda / (1 - lambda)
};

/// Samples the solution set {x : x = lambda F(x), 0 < lambda < 1} over a
/// lambda grid. Growth beyond r_max (or inner blow-up) flags the unbounded
/// branch of the alternative; otherwise the set stayed bounded. Pass a
/// domain body to restrict solutions, or nullptr for the whole space.
EpsReport leray_schauder_eps_scan(const MapSpec& map, int dim,
                                  const PBody* domain,
                                  const std::vector<double>& lambda_grid,
                                  double r_max,
                                  const SolverOptions& opts = {});

/// Precondition violation carrying the offending point.
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(const std::string& what, Vector witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const Vector& witness() const noexcept { return witness_; }

 private:
  Vector witness_;
};

/// Rothe solver: requires F(boundary) inside the closed body (checked on
/// samples, violation throws with a witness), then runs the approximating
/// scheme to a fixed-point certificate.
Certificate rothe_fixed_point(const MapSpec& map, const PBody& body,
                              long samples, double tol, std::uint64_t seed,
                              const SolverOptions& opts = {});

using Homotopy = std::function<Vector(double, const Vector&)>;

struct HomotopyOptions {
  std::vector<double> eps_schedule;  // defaults to 2^-k, k = 2..30
  double tol = 1e-8;
  long assumption_samples = 64;
  int path_points = 11;
  std::uint64_t seed = 0x607e1ULL;
  SolverOptions inner;
};

struct HomotopyResult {
  Certificate cert;
  std::vector<std::pair<double, Vector>> path;  // continuation trace of
                                                // x = H(t, x) over a t grid
};

/// Implicit continuation: for eps_n down to 0 builds the blended map
///   x -> H((1 - P_B(x)) / eps_n, x / P_B(x))   on the band P_B in [1-eps, 1]
///   x -> H(1, x / (1 - eps_n))                 in the interior
/// and solves each stage with the Rothe machinery. Ends in a fixed point of
/// H(1, .) or in a boundary pair (lambda*, x*) with x* = H(lambda*, x*).
HomotopyResult homotopy_solve(const Homotopy& H, const PBody& body,
                              const HomotopyOptions& opts = {});

enum class NonselfCondition {
  inward_point_closer,   // some inward z is strictly closer to F(x) than x
  interpolate_inward,    // some |lambda| < 1 puts lambda x + (1-lambda) F(x) inward
  maps_into_inward,      // F(x) lies in the closed inward set
  no_outward_direction,  // F(x) is not lambda x for any lambda > 1
  boundary_into_body,    // F(boundary) inside the closed body
  identity_gap_nonzero   // P(F(x)-x) != (P(F(x))^(1/p) - 1)^p
};

const char* to_string(NonselfCondition c);
NonselfCondition nonself_condition_from_string(const std::string& s);

/// Verifies one pointwise boundary predicate on samples, then runs the
/// solver and returns the fixed-point certificate the predicate licenses.
Certificate nonself_condition_dispatch(const MapSpec& map, const PBody& body,
                                       NonselfCondition condition,
                                       long samples, double tol,
                                       std::uint64_t seed,
                                       const SolverOptions& opts = {});

}  // namespace pconvex
