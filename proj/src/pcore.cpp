#include "pconvex/pcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pconvex {

WeightVector::WeightVector(Vector t, PExponent p) : t_(std::move(t)), p_(p) {
  if (t_.size() == 0) throw std::invalid_argument("weights must be non-empty");
  if ((t_.array() < 0.0).any())
    throw std::invalid_argument("weights must be non-negative");
  if (sum_defect() > kSumTol)
    throw std::invalid_argument("weights violate sum t_i^p = 1");
}

double WeightVector::sum_defect() const {
  return std::abs(t_.array().pow(p_.value()).sum() - 1.0);
}

PointSet::PointSet(const std::vector<Vector>& pts) {
  if (pts.empty()) throw std::invalid_argument("point set must be non-empty");
  const auto dim = pts.front().size();
  pts_.resize(dim, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != dim)
      throw std::invalid_argument("point set has mixed dimensions");
    pts_.col(static_cast<Eigen::Index>(i)) = pts[i];
  }
}

PointSet PointSet::from_columns(Matrix pts) {
  if (pts.cols() == 0 || pts.rows() == 0)
    throw std::invalid_argument("point set must be non-empty");
  PointSet out;
  out.pts_ = std::move(pts);
  return out;
}

std::pair<double, double> admissible_pair(PExponent p, double u) {
  if (!(u >= 0.0) || !(u <= 1.0))
    throw std::domain_error("u must lie in [0,1]");
  return {std::pow(u, p.inv()), std::pow(1.0 - u, p.inv())};
}

Vector p_combination(const PointSet& points, const WeightVector& weights) {
  if (points.size() != weights.size())
    throw std::invalid_argument("points/weights length mismatch");
  return points.points() * weights.coeffs();
}

ConvexityReport check_p_convex(const MembershipOracle& member, PExponent p,
                               const SampleDomain& domain, RandomSource& rng,
                               long trials) {
  if (trials < 1) throw std::domain_error("trials must be >= 1");
  ConvexityReport rep;
  rep.trials_requested = trials;

  constexpr int kMaxRejects = 256;
  auto draw_member = [&]() -> std::optional<Vector> {
    for (int k = 0; k < kMaxRejects; ++k) {
      Vector c = rng.box_point(domain.center, domain.radius);
      if (member(c)) return c;
    }
    return std::nullopt;
  };

  for (long t = 0; t < trials && rep.passed; ++t) {
    const auto x = draw_member();
    if (!x) continue;
    Vector y;
    double u;
    if (t % 4 == 3) {  // degenerate pair probes pure scaling
      y = *x;
      u = 0.5;
    } else {
      const auto yo = draw_member();
      if (!yo) continue;
      y = *yo;
      u = rng.uniform();
    }
    const auto [s, w] = admissible_pair(p, u);
    Vector comb = s * (*x) + w * y;
    ++rep.pairs_tested;
    if (!member(comb)) {
      rep.passed = false;
      rep.witness = ConvexityViolation{*x, y, u, std::move(comb)};
    }
  }
  return rep;
}

bool singleton_hull_membership(const Vector& x, const Vector& q, PExponent p,
                               bool closed, double tol) {
  if (x.size() != q.size())
    throw std::invalid_argument("dimension mismatch");
  const double scale = std::max(1.0, x.norm());
  if (p.is_one()) {
    // hull of {x} collapses to {x}
    return (q - x).norm() <= tol * scale;
  }
  if (x.norm() <= tol) return q.norm() <= tol;
  const double t = x.dot(q) / x.squaredNorm();
  if ((q - t * x).norm() > tol * scale) return false;  // not collinear
  if (t > 1.0 + tol) return false;
  return closed ? t >= -tol : t > tol;
}

namespace {

// residual of the candidate simplex weights u (t_i = u_i^(1/p))
double hull_residual(const PointSet& pts, const Vector& q, PExponent p,
                     const Vector& u) {
  const Vector t = u.array().max(0.0).pow(p.inv());
  return (pts.points() * t - q).norm();
}

// shift simplex mass between coordinate pairs while it keeps improving
void pattern_refine(const PointSet& pts, const Vector& q, PExponent p,
                    Vector& u, double& best, double tol) {
  const int n = static_cast<int>(u.size());
  double step = 0.25;
  while (step > 1e-14 && best > tol) {
    bool improved = false;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double d = std::min(step, u[i]);
        if (d <= 0.0) continue;
        Vector cand = u;
        cand[i] -= d;
        cand[j] += d;
        const double r = hull_residual(pts, q, p, cand);
        if (r < best) {
          best = r;
          u = std::move(cand);
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
}

}  // namespace

HullMembership finite_hull_membership(const PointSet& points, const Vector& q,
                                      PExponent p, double tol, int multistart,
                                      RandomSource& rng) {
  if (tol <= 0.0) throw std::domain_error("tol must be positive");
  if (points.dim() != q.size())
    throw std::invalid_argument("dimension mismatch");

  const int n = points.size();
  Vector best_u = Vector::Unit(n, 0);
  double best = hull_residual(points, q, p, best_u);

  auto consider = [&](const Vector& u) {
    const double r = hull_residual(points, q, p, u);
    if (r < best) {
      best = r;
      best_u = u;
    }
  };

  for (int i = 0; i < n; ++i) consider(Vector::Unit(n, i));

  if (n == 2) {
    // the two-generator manifold is a curve; a dense grid nearly solves it
    constexpr int kGrid = 4096;
    for (int k = 0; k <= kGrid; ++k) {
      Vector u(2);
      u[0] = static_cast<double>(k) / kGrid;
      u[1] = 1.0 - u[0];
      consider(u);
    }
    pattern_refine(points, q, p, best_u, best, tol);
  } else {
    for (int s = 0; s < std::max(1, multistart); ++s) {
      // uniform simplex point via exponential spacings
      Vector u(n);
      for (int i = 0; i < n; ++i) u[i] = -std::log(1.0 - rng.uniform());
      u /= u.sum();
      double r = hull_residual(points, q, p, u);
      pattern_refine(points, q, p, u, r, tol);
      consider(u);
      if (best <= tol) break;
    }
    pattern_refine(points, q, p, best_u, best, tol);
  }

  HullMembership result;
  result.residual = best;
  if (best <= tol) {
    result.found = true;
    Vector t = best_u.array().max(0.0).pow(p.inv());
    // compensate pow round-off so the witness passes weight validation
    const double mass = t.array().pow(p.value()).sum();
    if (mass > 0.0) t *= std::pow(1.0 / mass, p.inv());
    result.witness = WeightVector(std::move(t), p);
  }
  return result;
}

}  // namespace pconvex
