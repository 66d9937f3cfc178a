#include "pconvex/gauge.hpp"

#include <cmath>

namespace pconvex {

PBody::PBody(MembershipOracle member, PExponent p, double bound_radius,
             int dim, BodyOptions opts)
    : member_(std::move(member)),
      p_(p),
      bound_radius_(bound_radius),
      dim_(dim),
      opts_(opts) {
  if (!member_) throw std::invalid_argument("body needs a membership oracle");
  if (dim_ < 1) throw std::invalid_argument("dim must be >= 1");
  if (!(bound_radius_ > 0.0))
    throw std::invalid_argument("bound_radius must be positive");
  if (!opts_.validate) return;

  const Vector zero = Vector::Zero(dim_);
  if (!member_(zero)) throw std::invalid_argument("0 must be a member");

  // interior probe: halve an axis cross until it fits inside
  double delta = bound_radius_;
  for (int round = 0;; ++round) {
    bool ok = true;
    for (int i = 0; i < dim_ && ok; ++i) {
      ok = member_(delta * Vector::Unit(dim_, i)) &&
           member_(-delta * Vector::Unit(dim_, i));
    }
    if (ok) break;
    delta *= 0.5;
    if (round > 200)
      throw std::invalid_argument("0 is not interior to the body");
  }
  interior_radius_ = delta;

  RandomSource rng(opts_.validation_seed);

  // boundedness spot-check
  for (long k = 0; k < opts_.validation_trials; ++k) {
    const Vector far = rng.direction(dim_) * bound_radius_ *
                       (1.0 + 0.5 * (1.0 + rng.uniform()));
    if (member_(far))
      throw std::invalid_argument("member found outside bound_radius");
  }

  // p-convexity spot-check at the body's own p
  const auto rep = check_p_convex(member_, p_, {zero, bound_radius_}, rng,
                                  opts_.validation_trials);
  if (!rep.passed)
    throw std::invalid_argument("membership oracle is not p-convex");
}

PBody& PBody::with_closed_form(std::function<double(const Vector&)> gauge) {
  closed_ = std::move(gauge);
  return *this;
}

double PBody::gauge(const Vector& x, double tol) const {
  if (closed_) return closed_(x);
  return eval_gauge(*this, x, tol).value;
}

Vector PBody::boundary_point(const Vector& direction, double tol) const {
  const double g = gauge(direction, tol);
  if (!(g > 0.0))
    throw std::invalid_argument("direction has zero gauge");
  return direction / std::pow(g, p_.inv());
}

GaugeValue eval_gauge(const PBody& body, const Vector& x, double tol) {
  if (tol <= 0.0) throw std::domain_error("tol must be positive");
  if (x.size() != body.dim())
    throw std::invalid_argument("dimension mismatch");
  if (x.isZero(0.0)) return {0.0, tol};

  const double inv_p = body.exponent().inv();
  const auto inside_at = [&](double alpha) {
    return body.contains(x / std::pow(alpha, inv_p));
  };

  double lo = 0.0;
  double hi = 1.0;
  if (inside_at(1.0)) {
    // membership at alpha implies membership at every larger alpha, so the
    // infimum sits in [0, 1]
  } else {
    constexpr double kCap = 1152921504606846976.0;  // 2^60
    do {
      lo = hi;
      hi *= 2.0;
      if (hi > kCap)
        throw std::runtime_error(
            "gauge bracket exceeded 2^60: set does not absorb the point");
    } while (!inside_at(hi));
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // tol below representable spacing
    (inside_at(mid) ? hi : lo) = mid;
  }
  return {0.5 * (lo + hi), tol};
}

AxiomReport verify_gauge_axioms(const PBody& body, long samples,
                                std::uint64_t seed) {
  if (samples < 1) throw std::domain_error("samples must be >= 1");
  AxiomReport rep;
  RandomSource rng(seed);
  const double p = body.exponent().value();
  const double tol_g = 1e-10;
  const double slack = 1e-8;

  const Vector zero = Vector::Zero(body.dim());
  rep.origin_ok = eval_gauge(body, zero, tol_g).value == 0.0;
  rep.negative_lambda_checked = body.circled();

  auto body_sample = [&]() {
    const Vector b = body.boundary_point(rng.direction(body.dim()), tol_g);
    return Vector(b * std::pow(rng.uniform(), body.exponent().inv()));
  };

  for (long k = 0; k < samples; ++k) {
    // homogeneity on a sampled ray point
    Vector x = rng.box_point(zero, body.bound_radius());
    double lambda = rng.uniform(0.0, 2.0);
    if (body.circled() && k % 2 == 1) lambda = -lambda;
    const double px = eval_gauge(body, x, tol_g).value;
    const double plx = eval_gauge(body, lambda * x, tol_g).value;
    const double expected = std::pow(std::abs(lambda), p) * px;
    const double gap = std::abs(plx - expected);
    ++rep.homogeneity_checks;
    rep.max_homogeneity_gap = std::max(rep.max_homogeneity_gap, gap);
    if (gap > slack * (1.0 + std::abs(expected))) {
      rep.homogeneous = false;
      if (!rep.witness)
        rep.witness = AxiomWitness{"homogeneity", x, {}, lambda, plx, expected};
    }

    // subadditivity on pairs drawn from the body
    const Vector a = body_sample();
    const Vector b = body_sample();
    const double lhs = eval_gauge(body, a + b, tol_g).value;
    const double rhs =
        eval_gauge(body, a, tol_g).value + eval_gauge(body, b, tol_g).value;
    ++rep.subadditivity_checks;
    rep.max_subadditivity_excess =
        std::max(rep.max_subadditivity_excess, lhs - rhs);
    if (lhs > rhs + slack * (1.0 + rhs)) {
      rep.subadditive = false;
      if (!rep.witness)
        rep.witness = AxiomWitness{"subadditivity", a, b, 0.0, lhs, rhs};
    }
  }
  return rep;
}

SandwichReport ball_sandwich_check(const PBody& body, long samples,
                                   std::uint64_t seed) {
  SandwichReport rep;
  RandomSource rng(seed);
  const double tol_g = 1e-10;
  const double band = 10.0 * tol_g;

  for (long k = 0; k < samples; ++k) {
    // spread targets across the boundary: gauges in [0.8, 1.2]
    const double target = rng.uniform(0.8, 1.2);
    const Vector b = body.boundary_point(rng.direction(body.dim()), tol_g);
    const Vector x = b * std::pow(target, body.exponent().inv());
    const double g = eval_gauge(body, x, tol_g).value;
    const bool member = body.contains(x);
    ++rep.samples;
    if (g < 1.0 - band) {
      ++rep.strict_inside;
      if (!member) {
        rep.passed = false;
        rep.witness = x;
        rep.failure = "point with gauge < 1 rejected by the oracle";
        break;
      }
    }
    if (member) {
      ++rep.members;
      if (g > 1.0 + band) {
        rep.passed = false;
        rep.witness = x;
        rep.failure = "member with gauge > 1";
        break;
      }
    }
  }
  return rep;
}

}  // namespace pconvex
