#pragma once

#include <optional>
#include <vector>

#include "pconvex/gauge.hpp"

namespace pconvex {

struct RetractionResult {
  Vector point;
  bool was_inside = false;
  GaugeValue gauge;  // gauge of the input
};

/// Radial retraction r(x) = x / max{1, gauge(x)^(1/p)}. Points whose gauge
/// sits within the body's boundary band are returned unchanged, which makes
/// the retraction exactly idempotent.
RetractionResult radial_retract(const PBody& body, const Vector& x,
                                double gauge_tol = 1e-12);

/// A p-seminorm as a callable, used for distances.
struct PSeminorm {
  std::function<double(const Vector&)> eval;
  PExponent p;
};

/// The body's gauge packaged as a seminorm (closed form when available).
PSeminorm seminorm_of(const PBody& body, double tol = 1e-10);

struct DistanceBudget {
  long samples = 4096;
  int refine_rounds = 80;
};

/// Upper-bound estimate of inf { norm(x - y) : y in target }. Sampling plus
/// axis pattern refinement; the returned value is achieved by a concrete
/// member of the target, never claimed to be the exact infimum.
double p_distance(const PSeminorm& norm, const Vector& x, const PBody& target,
                  const DistanceBudget& budget, RandomSource& rng);

/// Exact minimum over a finite sampled target.
double p_distance(const PSeminorm& norm, const Vector& x,
                  const PointSet& target);

struct InwardWitness {
  double r = 0.0;
  Vector endpoint;  // the y in C with z = x + r (y - x)
  bool admissible = false;
};

struct InwardResult {
  bool member = false;
  InwardWitness witness;
};

/// Grid scan over [0, r_max] for the inward weight equations
///   (1-r)^p + r^p = 1        for r in [0,1],
///   (1/r)^p + (1-1/r)^p = 1  for r >= 1.
/// For p < 1 only r = 0 and r = 1 solve them; for p = 1 every r does.
std::vector<double> admissible_inward_radii(PExponent p, double r_max,
                                            double resolution,
                                            double eq_tol = 1e-9);

/// Membership of z in the p-inward set of C at x. For p < 1 the set
/// collapses to the plain union {x} u C; for p = 1 every r >= 0 is
/// admissible and the test scans the ray from x through z for a hit in C.
InwardResult inward_membership(const PBody& C, const Vector& x,
                               const Vector& z, PExponent p,
                               double r_resolution, double tol = 1e-10);
InwardResult inward_membership(const PointSet& C, const Vector& x,
                               const Vector& z, PExponent p,
                               double r_resolution, double tol = 1e-10);

/// Outward mirror. For p < 1 this implements the characterization
/// {x} u {2x} u -C. Note: solving the weight equations directly gives
/// r in {0, -1}, i.e. {x} u (2x - C); the implemented set replaces the
/// reflected translate with {2x} u -C, and the two agree only when C is
/// circled. Nothing downstream consumes outward sets.
InwardResult outward_membership(const PBody& C, const Vector& x,
                                const Vector& z, PExponent p,
                                double r_resolution, double tol = 1e-10);

}  // namespace pconvex
