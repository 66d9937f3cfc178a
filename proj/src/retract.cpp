#include "pconvex/retract.hpp"

#include <cmath>

namespace pconvex {

RetractionResult radial_retract(const PBody& body, const Vector& x,
                                double gauge_tol) {
  GaugeValue g{body.gauge(x, gauge_tol), gauge_tol};
  if (g.value <= 1.0 + body.boundary_tol()) return {x, true, g};
  return {x / std::pow(g.value, body.exponent().inv()), false, g};
}

PSeminorm seminorm_of(const PBody& body, double tol) {
  // captures a copy so the seminorm can outlive the body handle it came from
  return {[body, tol](const Vector& v) { return body.gauge(v, tol); },
          body.exponent()};
}

double p_distance(const PSeminorm& norm, const Vector& x, const PBody& target,
                  const DistanceBudget& budget, RandomSource& rng) {
  if (budget.samples < 1) throw std::domain_error("sample budget is empty");
  if (x.size() != target.dim())
    throw std::invalid_argument("dimension mismatch");
  if (target.contains(x)) return 0.0;

  const double inv_p = target.exponent().inv();
  Vector best_y = radial_retract(target, x).point;
  double best = norm.eval(x - best_y);

  auto consider = [&](const Vector& y) {
    if (!target.contains(y)) return;
    const double d = norm.eval(x - y);
    if (d < best) {
      best = d;
      best_y = y;
    }
  };

  for (long k = 0; k < budget.samples; ++k) {
    const Vector b = target.boundary_point(rng.direction(target.dim()));
    consider(b * std::pow(rng.uniform(), inv_p));
  }

  // axis pattern refinement, constrained to the target
  double step = 0.5 * target.bound_radius();
  for (int round = 0; round < budget.refine_rounds; ++round) {
    bool improved = false;
    for (int i = 0; i < x.size(); ++i) {
      for (const double sgn : {1.0, -1.0}) {
        Vector cand = best_y;
        cand[i] += sgn * step;
        if (target.contains(cand)) {
          const double d = norm.eval(x - cand);
          if (d < best) {
            best = d;
            best_y = std::move(cand);
            improved = true;
          }
        }
      }
    }
    if (!improved) step *= 0.5;
    if (step < 1e-13) break;
  }
  return best;
}

double p_distance(const PSeminorm& norm, const Vector& x,
                  const PointSet& target) {
  if (x.size() != target.dim())
    throw std::invalid_argument("dimension mismatch");
  double best = norm.eval(x - target.point(0));
  for (int i = 1; i < target.size(); ++i)
    best = std::min(best, norm.eval(x - target.point(i)));
  return best;
}

std::vector<double> admissible_inward_radii(PExponent p, double r_max,
                                            double resolution,
                                            double eq_tol) {
  if (resolution <= 0.0) throw std::domain_error("resolution must be > 0");
  std::vector<double> out;
  const double pe = p.value();
  // fuzz the quotient so grids like 10 / 1e-4 keep their last node
  const long steps = static_cast<long>(
      std::floor(r_max / resolution * (1.0 + 1e-12) + 1e-12));
  for (long k = 0; k <= steps; ++k) {
    const double r = static_cast<double>(k) * resolution;
    double defect;
    if (r <= 1.0)
      defect = std::abs(std::pow(1.0 - r, pe) + std::pow(r, pe) - 1.0);
    else
      defect = std::abs(std::pow(1.0 / r, pe) +
                        std::pow(1.0 - 1.0 / r, pe) - 1.0);
    if (defect <= eq_tol) {
      // dedup within 1e-8
      if (out.empty() || r - out.back() > 1e-8) out.push_back(r);
    }
  }
  return out;
}

namespace {

template <typename Contains>
InwardResult inward_impl(const Contains& in_C, const Vector& x,
                         const Vector& z, PExponent p, double r_resolution,
                         double tol, double ray_reach) {
  InwardResult res;
  const double scale = std::max(1.0, x.norm());
  if ((z - x).norm() <= tol * scale) {  // z = x, weight r = 0
    res.member = true;
    res.witness = {0.0, z, true};
    return res;
  }
  if (!p.is_one()) {
    // only r = 0 and r = 1 are admissible, so the set is {x} u C
    if (in_C(z)) {
      res.member = true;
      res.witness = {1.0, z, true};
    }
    return res;
  }
  // p = 1: every r >= 0 works; scan y(s) = x + s (z - x) for a hit in C,
  // where s = 1/r sweeps the ray from x through z
  if (r_resolution <= 0.0)
    throw std::domain_error("r resolution must be > 0");
  const double s_max = std::max(1.0, ray_reach / (z - x).norm());
  const long steps = static_cast<long>(std::ceil(s_max / r_resolution));
  for (long k = 1; k <= steps; ++k) {
    const double s = static_cast<double>(k) * r_resolution;
    const Vector y = x + s * (z - x);
    if (in_C(y)) {
      res.member = true;
      res.witness = {1.0 / s, y, true};
      return res;
    }
  }
  return res;
}

}  // namespace

InwardResult inward_membership(const PBody& C, const Vector& x,
                               const Vector& z, PExponent p,
                               double r_resolution, double tol) {
  const auto in_C = [&](const Vector& v) { return C.contains(v); };
  return inward_impl(in_C, x, z, p, r_resolution, tol,
                     2.0 * C.bound_radius() + x.norm());
}

InwardResult inward_membership(const PointSet& C, const Vector& x,
                               const Vector& z, PExponent p,
                               double r_resolution, double tol) {
  const auto in_C = [&](const Vector& v) {
    for (int i = 0; i < C.size(); ++i)
      if ((v - C.point(i)).norm() <= tol * std::max(1.0, v.norm()))
        return true;
    return false;
  };
  double reach = x.norm();
  for (int i = 0; i < C.size(); ++i)
    reach = std::max(reach, 2.0 * C.point(i).norm());
  return inward_impl(in_C, x, z, p, r_resolution, tol, reach);
}

InwardResult outward_membership(const PBody& C, const Vector& x,
                                const Vector& z, PExponent p,
                                double r_resolution, double tol) {
  InwardResult res;
  const double scale = std::max(1.0, x.norm());
  if ((z - x).norm() <= tol * scale) {
    res.member = true;
    res.witness = {0.0, z, true};
    return res;
  }
  if (!p.is_one()) {
    if ((z - 2.0 * x).norm() <= tol * scale) {
      res.member = true;
      res.witness = {-1.0, x, true};
      return res;
    }
    if (C.contains(-z)) {
      res.member = true;
      res.witness = {-1.0, Vector(-z), true};
      return res;
    }
    return res;
  }
  // p = 1: z = x + r (y - x) with r <= 0, i.e. y sweeps the opposite ray
  if (r_resolution <= 0.0)
    throw std::domain_error("r resolution must be > 0");
  const double reach = 2.0 * C.bound_radius() + x.norm();
  const double s_max = std::max(1.0, reach / (z - x).norm());
  const long steps = static_cast<long>(std::ceil(s_max / r_resolution));
  for (long k = 1; k <= steps; ++k) {
    const double s = static_cast<double>(k) * r_resolution;
    const Vector y = x - s * (z - x);
    if (C.contains(y)) {
      res.member = true;
      res.witness = {-1.0 / s, y, true};
      return res;
    }
  }
  return res;
}

}  // namespace pconvex
