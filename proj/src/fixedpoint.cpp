#include "pconvex/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pconvex {

const char* to_string(MappingClass c) {
  switch (c) {
    case MappingClass::one_set_contractive: return "one_set_contractive";
    case MappingClass::semiclosed_one_set_contractive:
      return "semiclosed_one_set_contractive";
    case MappingClass::condensing: return "condensing";
    case MappingClass::nonexpansive: return "nonexpansive";
  }
  return "";
}

MappingClass mapping_class_from_string(const std::string& s) {
  if (s == "one_set_contractive") return MappingClass::one_set_contractive;
  if (s == "semiclosed_one_set_contractive")
    return MappingClass::semiclosed_one_set_contractive;
  if (s == "condensing") return MappingClass::condensing;
  if (s == "nonexpansive") return MappingClass::nonexpansive;
  throw std::invalid_argument("unknown mapping class '" + s + "'");
}

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::FixedPoint: return "FixedPoint";
    case CertificateKind::BestApproximation: return "BestApproximation";
    case CertificateKind::InvariantDirection: return "InvariantDirection";
    case CertificateKind::Inconclusive: return "Inconclusive";
  }
  return "";
}

void MapSpec::validate_on(const PBody& body, long samples,
                          std::uint64_t seed) const {
  if (!F) throw std::invalid_argument("map has no evaluator");
  RandomSource rng(seed);
  const Vector zero = Vector::Zero(body.dim());
  for (long k = 0; k < samples; ++k) {
    const Vector x = rng.box_point(zero, body.bound_radius());
    const Vector y = F(x);
    if (y.size() != body.dim() || !y.allFinite())
      throw std::invalid_argument("map '" + name +
                                  "' is not finite on the body box");
  }
}

const IterStep* IterTrace::last_converged() const {
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    if (it->converged) return &*it;
  return nullptr;
}

std::vector<double> default_lambda_schedule(int count) {
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(count));
  for (int n = 1; n <= count; ++n) s.push_back(1.0 - std::pow(2.0, -n));
  return s;
}

namespace {

struct InnerSolve {
  Vector z;
  bool converged = false;
  long iters = 0;
};

// damped Picard on z = lambda F(r(z)); damping keeps isometries from cycling
InnerSolve solve_inner(const MapSpec& map, const PBody& body, double lambda,
                       const SolverOptions& opt, Vector z0) {
  InnerSolve out;
  out.z = std::move(z0);
  const double blowup = opt.divergence_factor * body.bound_radius();
  for (long k = 0; k < opt.max_inner_iters; ++k) {
    const Vector rx = radial_retract(body, out.z, opt.gauge_tol).point;
    Vector next =
        (1.0 - opt.damping) * out.z + opt.damping * (lambda * map.F(rx));
    const double step = (next - out.z).lpNorm<Eigen::Infinity>();
    out.z = std::move(next);
    out.iters = k + 1;
    if (!out.z.allFinite()) return out;
    if (out.z.norm() > blowup) return out;
    if (step <= opt.inner_tol *
                    std::max(1.0, out.z.lpNorm<Eigen::Infinity>())) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

double gauge_of(const PBody& body, const Vector& v, double tol) {
  return body.gauge(v, tol);
}

}  // namespace

IterTrace approximate_fixed_point(const MapSpec& map, const PBody& body,
                                  const std::vector<double>& schedule,
                                  const SolverOptions& opts, double tol) {
  if (schedule.empty())
    throw std::invalid_argument("schedule must be non-empty");
  double prev = 0.0;
  for (const double lam : schedule) {
    if (!(lam > prev) || !(lam < 1.0))
      throw std::invalid_argument(
          "schedule must be strictly increasing within (0,1)");
    prev = lam;
  }

  const double p = body.exponent().value();
  IterTrace trace;
  Vector warm = Vector::Zero(body.dim());
  int n = 0;
  for (const double lam : schedule) {
    ++n;
    auto sol = solve_inner(map, body, lam, opts, warm);
    IterStep st;
    st.n = n;
    st.lambda = lam;
    st.converged = sol.converged;
    st.inner_iters = sol.iters;
    st.residual_bound = std::pow((1.0 - lam) / lam, p);
    if (!sol.converged) {
      // keep the failed step; restart the next stage from scratch
      trace.completed = false;
      st.x = sol.z.allFinite() ? radial_retract(body, sol.z, opts.gauge_tol).point
                               : Vector(Vector::Zero(body.dim()));
      st.residual = std::numeric_limits<double>::quiet_NaN();
      trace.steps.push_back(std::move(st));
      warm = Vector::Zero(body.dim());
      continue;
    }
    warm = sol.z;
    const auto rr = radial_retract(body, sol.z, opts.gauge_tol);
    st.x = rr.point;
    st.interior = rr.was_inside;  // z inside means x = z = lambda F(x)
    st.residual = gauge_of(body, map.F(st.x) - st.x, opts.gauge_tol);
    trace.steps.push_back(std::move(st));
  }
  (void)tol;
  return trace;
}

double Certificate::revalidate(PExponent p) const {
  switch (kind) {
    case CertificateKind::BestApproximation:
      return std::abs(residual -
                      std::pow(std::pow(gauge_at_map, p.inv()) - 1.0,
                               p.value()));
    case CertificateKind::InvariantDirection:
      return std::abs(lambda - std::pow(gauge_at_map, p.inv()));
    case CertificateKind::FixedPoint:
    case CertificateKind::Inconclusive: return residual;
  }
  return 0.0;
}

std::string conclusion_tag(CertificateKind kind, MappingClass cls) {
  std::string base;
  switch (kind) {
    case CertificateKind::FixedPoint: base = "fixed_point"; break;
    case CertificateKind::BestApproximation:
      base = "best_approximation";
      break;
    case CertificateKind::InvariantDirection:
      base = "invariant_direction";
      break;
    case CertificateKind::Inconclusive: base = "inconclusive"; break;
  }
  return base + "[" + to_string(cls) + "]";
}

Certificate best_approx_certificate(const MapSpec& map, const PBody& body,
                                    double tol, const SolverOptions& opts,
                                    long inward_samples, std::uint64_t seed) {
  const auto trace =
      approximate_fixed_point(map, body, default_lambda_schedule(), opts, tol);
  Certificate cert;
  cert.map_class = map.asserted_class;

  const IterStep* last = trace.last_converged();
  if (last == nullptr) {
    cert.kind = CertificateKind::Inconclusive;
    cert.diagnostics = "no stage of the approximating scheme converged";
    cert.conclusion = conclusion_tag(cert.kind, cert.map_class);
    return cert;
  }

  const PExponent p = body.exponent();
  cert.point = last->x;
  cert.residual = last->residual;
  cert.gauge_at_map = gauge_of(body, map.F(last->x), opts.gauge_tol);
  cert.boundary_case = !last->interior;

  if (cert.residual <= tol) {
    cert.kind = CertificateKind::FixedPoint;
    cert.identity_gap = cert.residual;
    cert.conclusion = conclusion_tag(cert.kind, cert.map_class);
    return cert;
  }

  // boundary alternative: the residual must equal (gauge^(1/p) - 1)^p and no
  // sampled inward point may come closer to F(x0)
  cert.kind = CertificateKind::BestApproximation;
  cert.identity_gap = cert.revalidate(p);

  RandomSource rng(seed);
  const Vector fx = map.F(cert.point);
  double inward_best = gauge_of(body, fx - cert.point, opts.gauge_tol);
  for (long k = 0; k < inward_samples; ++k) {
    // for p < 1 the inward set is {x0} u body; body samples cover it
    const Vector b = body.boundary_point(rng.direction(body.dim()));
    const Vector z = b * std::pow(rng.uniform(), p.inv());
    inward_best =
        std::min(inward_best, gauge_of(body, fx - z, opts.gauge_tol));
  }
  if (inward_best < cert.residual - 1e-6) {
    cert.diagnostics =
        "a sampled inward point beat the boundary point; certificate suspect";
  }
  cert.conclusion = conclusion_tag(cert.kind, cert.map_class);
  return cert;
}

const char* to_string(BoundaryCondition c) {
  switch (c) {
    case BoundaryCondition::rothe: return "rothe";
    case BoundaryCondition::petryshyn: return "petryshyn";
    case BoundaryCondition::altman: return "altman";
    case BoundaryCondition::leray_schauder: return "leray_schauder";
    case BoundaryCondition::ineq1: return "inequality(1)";
    case BoundaryCondition::ineq2: return "inequality(2)";
    case BoundaryCondition::ineq3: return "inequality(3)";
    case BoundaryCondition::ineq4: return "inequality(4)";
    case BoundaryCondition::ineq5: return "inequality(5)";
    case BoundaryCondition::ineq6: return "inequality(6)";
    case BoundaryCondition::ineq7: return "inequality(7)";
    case BoundaryCondition::param1: return "parametric(1)";
    case BoundaryCondition::param2: return "parametric(2)";
    case BoundaryCondition::param3: return "parametric(3)";
    case BoundaryCondition::param4: return "parametric(4)";
  }
  return "";
}

BoundaryCondition boundary_condition_from_string(const std::string& s) {
  for (const auto c :
       {BoundaryCondition::rothe, BoundaryCondition::petryshyn,
        BoundaryCondition::altman, BoundaryCondition::leray_schauder,
        BoundaryCondition::ineq1, BoundaryCondition::ineq2,
        BoundaryCondition::ineq3, BoundaryCondition::ineq4,
        BoundaryCondition::ineq5, BoundaryCondition::ineq6,
        BoundaryCondition::ineq7, BoundaryCondition::param1,
        BoundaryCondition::param2, BoundaryCondition::param3,
        BoundaryCondition::param4}) {
    if (s == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown boundary condition '" + s + "'");
}

namespace {

// slack (rhs - lhs) of one condition at a boundary sample; >= 0 means holds
double condition_slack(BoundaryCondition id, const ConditionParams& prm,
                       const PBody& body, const Vector& x, const Vector& fx,
                       double gauge_tol) {
  const double p = body.exponent().value();
  const double Pf = body.gauge(fx, gauge_tol);
  const double Px = body.gauge(x, gauge_tol);
  const double Pdiff = body.gauge(fx - x, gauge_tol);
  const double Psum = body.gauge(fx + x, gauge_tol);
  const double a = prm.alpha, b = prm.beta;
  switch (id) {
    case BoundaryCondition::rothe:
    case BoundaryCondition::ineq1: return Px - Pf;
    case BoundaryCondition::petryshyn:
    case BoundaryCondition::ineq2: return Pdiff - Pf;
    case BoundaryCondition::altman:
      return std::pow(Pdiff, 2.0 / p) + std::pow(Px, 2.0 / p) -
             std::pow(Pf, 2.0 / p);
    case BoundaryCondition::leray_schauder: {
      // holds unless F(x) = lambda x with lambda > 1
      const double xx = x.squaredNorm();
      if (xx == 0.0) return 1.0;
      const double t = x.dot(fx) / xx;
      const bool collinear = (fx - t * x).norm() <= 1e-9 * (1.0 + fx.norm());
      return (collinear && t > 1.0 + 1e-9) ? -1.0 : 1.0;
    }
    case BoundaryCondition::ineq3: return Pf - Psum;
    case BoundaryCondition::ineq4: return Px - Psum;
    case BoundaryCondition::ineq5: return Pdiff - Psum;
    case BoundaryCondition::ineq6: return Px * Px - Pf * Psum;
    case BoundaryCondition::ineq7: return Pdiff * Px - Pf * Psum;
    case BoundaryCondition::param1:
      return std::pow(Pdiff, a / p) -
             (std::pow(Pf, (a + b) / p) * std::pow(Px, -b / p) -
              std::pow(Px, a / p));
    case BoundaryCondition::param2:
      return std::pow(Pf, a / p) * std::pow(Px, b / p) +
             std::pow(Px, (a + b) / p) - std::pow(Psum, (a + b) / p);
    case BoundaryCondition::param3:
      return std::pow(Pdiff, a / p) * std::pow(Px, b / p) -
             (std::pow(Pf, a / p) * std::pow(Psum, b / p) -
              std::pow(Px, (a + b) / p));
    case BoundaryCondition::param4:
      return std::pow(Pdiff, a / p) * std::pow(Px, b / p) +
             std::pow(Pf, b / p) * std::pow(Px, a / p) -
             std::pow(Psum, (a + b) / p);
  }
  return 0.0;
}

bool is_parametric(BoundaryCondition id) {
  return id == BoundaryCondition::param1 || id == BoundaryCondition::param2 ||
         id == BoundaryCondition::param3 || id == BoundaryCondition::param4;
}

}  // namespace

std::vector<ConditionVerdict> check_boundary_conditions(
    const MapSpec& map, const PBody& body,
    const std::vector<BoundaryCondition>& conditions,
    const ConditionParams& params, long samples, std::uint64_t seed) {
  if (samples < 1) throw std::domain_error("samples must be >= 1");
  for (const auto id : conditions) {
    if (is_parametric(id)) {
      if (!(params.alpha > 1.0))
        throw std::invalid_argument("alpha must exceed 1");
      if (!(params.beta >= 0.0))
        throw std::invalid_argument("beta must be >= 0");
    }
  }

  // one shared boundary sample set keeps verdicts comparable across ids
  RandomSource rng(seed);
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (long k = 0; k < samples; ++k)
    pts.push_back(body.boundary_point(rng.direction(body.dim())));

  const double cmp_tol = 1e-9;
  std::vector<ConditionVerdict> verdicts;
  verdicts.reserve(conditions.size());
  for (const auto id : conditions) {
    ConditionVerdict v;
    v.id = id;
    v.holds = true;
    v.samples = samples;
    v.margin = std::numeric_limits<double>::infinity();
    for (const Vector& x : pts) {
      const Vector fx = map.F(x);
      const double slack = condition_slack(id, params, body, x, fx, 1e-10);
      v.margin = std::min(v.margin, slack);
      if (slack < -cmp_tol) {
        v.holds = false;
        v.witness = x;
        break;
      }
    }
    if (v.holds)
      v.conclusion = "fixed_point_predicted[" + std::string(to_string(id)) +
                     "," + to_string(map.asserted_class) + "]";
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

std::vector<Certificate> birkhoff_kellogg_scan(const MapSpec& map,
                                               const PBody& body,
                                               double lambda_max,
                                               int multistart,
                                               std::uint64_t seed,
                                               double tol) {
  if (!(lambda_max > 1.0))
    throw std::invalid_argument("lambda_max must exceed 1");
  RandomSource rng(seed);
  const PExponent p = body.exponent();
  constexpr long kMaxIters = 4000;
  constexpr double kDamping = 0.5;
  constexpr double kDedup = 1e-6;

  std::vector<Certificate> found;
  for (int s = 0; s < std::max(1, multistart); ++s) {
    Vector x = body.boundary_point(rng.direction(body.dim()));
    bool settled = false;
    for (long k = 0; k < kMaxIters; ++k) {
      const Vector fx = map.F(x);
      const double g = body.gauge(fx);
      if (!(g > 0.0)) break;  // F points at the origin: no direction here
      const Vector fb = fx / std::pow(g, p.inv());
      Vector next = (1.0 - kDamping) * x + kDamping * fb;
      const double gn = body.gauge(next);
      if (!(gn > 0.0)) break;
      next /= std::pow(gn, p.inv());
      const double step = (next - x).lpNorm<Eigen::Infinity>();
      x = std::move(next);
      if (step <= 1e-13) {
        settled = true;
        break;
      }
    }
    if (!settled) continue;

    const Vector fx = map.F(x);
    const double g = body.gauge(fx);
    const double lambda = std::pow(g, p.inv());
    if (!(lambda > 1.0) || lambda > lambda_max) continue;
    if ((fx - lambda * x).lpNorm<Eigen::Infinity>() >
        tol * (1.0 + fx.lpNorm<Eigen::Infinity>()))
      continue;

    bool duplicate = false;
    for (const auto& c : found) {
      if ((c.point - x).lpNorm<Eigen::Infinity>() <= kDedup &&
          std::abs(c.lambda - lambda) <= kDedup) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;

    Certificate cert;
    cert.kind = CertificateKind::InvariantDirection;
    cert.point = x;
    cert.lambda = lambda;
    cert.gauge_at_map = g;
    cert.residual = (fx - lambda * x).lpNorm<Eigen::Infinity>();
    cert.boundary_case = true;
    cert.map_class = map.asserted_class;
    cert.identity_gap = cert.revalidate(p);
    cert.conclusion = conclusion_tag(cert.kind, cert.map_class);
    found.push_back(std::move(cert));
  }
  return found;
}

EpsReport leray_schauder_eps_scan(const MapSpec& map, int dim,
                                  const PBody* domain,
                                  const std::vector<double>& lambda_grid,
                                  double r_max, const SolverOptions& opts) {
  for (const double lam : lambda_grid)
    if (!(lam > 0.0) || !(lam < 1.0))
      throw std::invalid_argument("lambda grid must lie in (0,1)");
  if (domain && domain->dim() != dim)
    throw std::invalid_argument("domain dimension mismatch");

  EpsReport rep;
  Vector warm = Vector::Zero(dim);
  for (const double lam : lambda_grid) {
    EpsPoint pt;
    pt.lambda = lam;
    Vector z = warm;
    bool ok = false;
    constexpr long kIters = 2000000;
    for (long k = 0; k < kIters; ++k) {
      Vector next = (1.0 - opts.damping) * z + opts.damping * (lam * map.F(z));
      const double step = (next - z).lpNorm<Eigen::Infinity>();
      z = std::move(next);
      if (!z.allFinite() || z.norm() > 1e9) break;
      if (step <= 1e-13 * std::max(1.0, z.lpNorm<Eigen::Infinity>())) {
        ok = true;
        break;
      }
    }
    pt.resolved = ok;
    if (ok) {
      // keep only genuine solutions of x = lambda F(x); a domain constraint,
      // when given, filters points that escaped the admissible set
      if (domain && !domain->contains(z) &&
          domain->gauge(z) > 1.0 + domain->boundary_tol()) {
        pt.resolved = false;
      } else {
        pt.x = z;
        pt.norm = z.norm();
        if (domain) rep.max_gauge = std::max(rep.max_gauge, domain->gauge(z));
        warm = z;
      }
    } else {
      rep.growth_detected = true;  // inner blow-up counts as growth evidence
    }
    rep.max_norm = std::max(rep.max_norm, pt.norm);
    rep.points.push_back(std::move(pt));
  }
  if (rep.max_norm > r_max) rep.growth_detected = true;

  // least-squares fit of |x| against lambda/(1-lambda)
  double num = 0.0, den = 0.0;
  for (const auto& pt : rep.points) {
    if (!pt.resolved) continue;
    const double g = pt.lambda / (1.0 - pt.lambda);
    num += pt.norm * g;
    den += g * g;
  }
  rep.fitted_rate = den > 0.0 ? num / den : 0.0;
  return rep;
}

Certificate rothe_fixed_point(const MapSpec& map, const PBody& body,
                              long samples, double tol, std::uint64_t seed,
                              const SolverOptions& opts) {
  if (samples < 1) throw std::domain_error("samples must be >= 1");
  RandomSource rng(seed);
  for (long k = 0; k < samples; ++k) {
    const Vector x = body.boundary_point(rng.direction(body.dim()));
    const Vector fx = map.F(x);
    if (body.gauge(fx, opts.gauge_tol) > 1.0 + body.boundary_tol())
      throw PreconditionError(
          "boundary image escapes the closed body (map '" + map.name + "')",
          x);
  }
  Certificate cert = best_approx_certificate(map, body, tol, opts);
  if (cert.kind == CertificateKind::BestApproximation) {
    // with the boundary pre-check verified this cannot happen at exact
    // arithmetic; report it as inconclusive rather than upgrade it
    cert.kind = CertificateKind::Inconclusive;
    cert.diagnostics = "residual did not close under the boundary pre-check";
    cert.conclusion = conclusion_tag(cert.kind, cert.map_class);
  }
  return cert;
}

HomotopyResult homotopy_solve(const Homotopy& H, const PBody& body,
                              const HomotopyOptions& opts) {
  if (!H) throw std::invalid_argument("homotopy is empty");
  std::vector<double> eps = opts.eps_schedule;
  if (eps.empty())
    for (int k = 2; k <= 30; ++k) eps.push_back(std::pow(2.0, -k));

  RandomSource rng(opts.seed);

  // spot-check the boundary assumptions: H(0, .) maps the boundary inside
  // and has no boundary fixed point. A root of x = H(t, x) at interior t is
  // not fatal; it is the boundary alternative the solver may return.
  for (long k = 0; k < opts.assumption_samples; ++k) {
    const Vector x = body.boundary_point(rng.direction(body.dim()));
    const Vector h0 = H(0.0, x);
    if (body.gauge(h0, opts.inner.gauge_tol) > 1.0 + body.boundary_tol())
      throw PreconditionError("H(0, .) must map the boundary into the body",
                              x);
    if ((h0 - x).lpNorm<Eigen::Infinity>() <=
        1e-12 * std::max(1.0, x.lpNorm<Eigen::Infinity>()))
      throw PreconditionError("x = H(0, x) on the boundary", x);
  }

  HomotopyResult out;
  out.cert.map_class = MappingClass::one_set_contractive;

  // unconstrained damped Picard for x = H(t, x); empty on divergence
  const auto picard_point = [&](double t,
                                Vector z) -> std::optional<Vector> {
    const double blow = 100.0 * body.bound_radius();
    for (long k = 0; k < opts.inner.max_inner_iters; ++k) {
      Vector next =
          (1.0 - opts.inner.damping) * z + opts.inner.damping * H(t, z);
      const double step = (next - z).lpNorm<Eigen::Infinity>();
      z = std::move(next);
      if (!z.allFinite() || z.norm() > blow) return std::nullopt;
      if (step <= opts.inner.inner_tol *
                      std::max(1.0, z.lpNorm<Eigen::Infinity>()))
        return z;
    }
    return std::nullopt;
  };

  Vector u = Vector::Zero(body.dim());
  double last_t = 1.0;
  bool have_boundary_candidate = false;
  Vector boundary_candidate;
  double boundary_t = 0.0;

  for (const double e : eps) {
    const auto blended = [&](const Vector& x) -> Vector {
      const double g = body.gauge(x, opts.inner.gauge_tol);
      if (g >= 1.0 - e) {
        const double t = std::clamp((1.0 - g) / e, 0.0, 1.0);
        return H(t, g > 0.0 ? Vector(x / g) : x);
      }
      return H(1.0, x / (1.0 - e));
    };
    // damped Picard with retraction keeps iterates inside the body
    bool converged = false;
    for (long k = 0; k < opts.inner.max_inner_iters; ++k) {
      const Vector ru = radial_retract(body, u, opts.inner.gauge_tol).point;
      Vector next = (1.0 - opts.inner.damping) * ru +
                    opts.inner.damping * blended(ru);
      next = radial_retract(body, next, opts.inner.gauge_tol).point;
      const double step = (next - u).lpNorm<Eigen::Infinity>();
      u = std::move(next);
      if (!u.allFinite()) break;
      if (step <= opts.inner.inner_tol *
                      std::max(1.0, u.lpNorm<Eigen::Infinity>())) {
        converged = true;
        break;
      }
    }
    if (!converged) continue;
    const double g = body.gauge(u, opts.inner.gauge_tol);
    if (g >= 1.0 - e) {
      have_boundary_candidate = true;
      boundary_candidate = g > 0.0 ? Vector(u / g) : u;
      boundary_t = std::clamp((1.0 - g) / e, 0.0, 1.0);
    } else {
      last_t = 1.0;
    }
  }

  // continuation trace of x = H(t, x) over a uniform t grid, warm-started
  Vector warm = Vector::Zero(body.dim());
  for (int i = 0; i < opts.path_points; ++i) {
    const double t = opts.path_points > 1
                         ? static_cast<double>(i) / (opts.path_points - 1)
                         : 1.0;
    if (const auto y = picard_point(t, warm)) {
      out.path.emplace_back(t, *y);
      warm = *y;
    }
  }

  const auto finish = [&](CertificateKind kind) {
    out.cert.kind = kind;
    out.cert.conclusion = conclusion_tag(kind, out.cert.map_class);
  };
  const auto boundary_cert = [&](double t, const Vector& x, double res) {
    out.cert.point = x;
    out.cert.residual = res;
    out.cert.lambda = t;
    out.cert.boundary_case = true;
    out.cert.identity_gap = res;
    finish(CertificateKind::FixedPoint);
  };

  const double res_full = (u - H(1.0, u)).lpNorm<Eigen::Infinity>();
  if (res_full <= opts.tol) {
    out.cert.point = u;
    out.cert.residual = res_full;
    out.cert.lambda = last_t;
    out.cert.identity_gap = res_full;
    finish(CertificateKind::FixedPoint);
    return out;
  }
  if (have_boundary_candidate) {
    const double res_b =
        (boundary_candidate - H(boundary_t, boundary_candidate))
            .lpNorm<Eigen::Infinity>();
    if (res_b <= opts.tol && boundary_t > 0.0 && boundary_t < 1.0) {
      boundary_cert(boundary_t, boundary_candidate, res_b);
      return out;
    }
  }

  // The blended stages cycle when the continuation path exits the body: the
  // band branch has Lipschitz constant ~1/eps there. Fall back to bisecting
  // the exit parameter of the unconstrained path x = H(t, x).
  double t_lo = -1.0, t_hi = -1.0;
  Vector y_lo;
  {
    Vector w = Vector::Zero(body.dim());
    const int grid = 40;
    double prev_t = -1.0;
    for (int i = 0; i <= grid; ++i) {
      const double t = static_cast<double>(i) / grid;
      const auto y = picard_point(t, w);
      if (!y) continue;
      w = *y;
      const double psi = body.gauge(*y, opts.inner.gauge_tol) - 1.0;
      if (psi <= 0.0) {
        prev_t = t;
        y_lo = *y;
      } else if (prev_t >= 0.0) {
        t_lo = prev_t;
        t_hi = t;
        break;
      }
    }
  }
  if (t_hi > 0.0) {
    Vector w = y_lo;
    for (int it = 0; it < 200 && t_hi - t_lo > 1e-14; ++it) {
      const double tm = 0.5 * (t_lo + t_hi);
      const auto y = picard_point(tm, w);
      if (!y) break;
      w = *y;
      ((body.gauge(*y, opts.inner.gauge_tol) <= 1.0) ? t_lo : t_hi) = tm;
    }
    const double t_star = 0.5 * (t_lo + t_hi);
    if (const auto y = picard_point(t_star, w)) {
      const double res = (*y - H(t_star, *y)).lpNorm<Eigen::Infinity>();
      if (res <= opts.tol && t_star > 0.0 && t_star < 1.0 &&
          std::abs(body.gauge(*y, opts.inner.gauge_tol) - 1.0) <=
              1e-6) {
        boundary_cert(t_star, *y, res);
        return out;
      }
    }
  }

  out.cert.diagnostics = "both continuation alternatives missed tol";
  finish(CertificateKind::Inconclusive);
  return out;
}

const char* to_string(NonselfCondition c) {
  switch (c) {
    case NonselfCondition::inward_point_closer: return "inward_point_closer";
    case NonselfCondition::interpolate_inward: return "interpolate_inward";
    case NonselfCondition::maps_into_inward: return "maps_into_inward";
    case NonselfCondition::no_outward_direction:
      return "no_outward_direction";
    case NonselfCondition::boundary_into_body: return "boundary_into_body";
    case NonselfCondition::identity_gap_nonzero:
      return "identity_gap_nonzero";
  }
  return "";
}

NonselfCondition nonself_condition_from_string(const std::string& s) {
  for (const auto c :
       {NonselfCondition::inward_point_closer,
        NonselfCondition::interpolate_inward,
        NonselfCondition::maps_into_inward,
        NonselfCondition::no_outward_direction,
        NonselfCondition::boundary_into_body,
        NonselfCondition::identity_gap_nonzero}) {
    if (s == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown non-self condition '" + s + "'");
}

Certificate nonself_condition_dispatch(const MapSpec& map, const PBody& body,
                                       NonselfCondition condition,
                                       long samples, double tol,
                                       std::uint64_t seed,
                                       const SolverOptions& opts) {
  if (samples < 1) throw std::domain_error("samples must be >= 1");
  RandomSource rng(seed);
  const PExponent p = body.exponent();
  const double r_res = 1e-3;

  const auto predicate = [&](const Vector& x) -> bool {
    const Vector fx = map.F(x);
    switch (condition) {
      case NonselfCondition::inward_point_closer: {
        const double base = body.gauge(fx - x, opts.gauge_tol);
        for (int k = 0; k < 64; ++k) {
          const Vector b = body.boundary_point(rng.direction(body.dim()));
          const Vector z = b * std::pow(rng.uniform(), p.inv());
          if (body.gauge(fx - z, opts.gauge_tol) < base - 1e-12) return true;
        }
        return false;
      }
      case NonselfCondition::interpolate_inward: {
        for (double lam = -0.95; lam < 1.0; lam += 0.05) {
          const Vector z = lam * x + (1.0 - lam) * fx;
          if (inward_membership(body, x, z, p, r_res).member) return true;
        }
        return false;
      }
      case NonselfCondition::maps_into_inward:
        return inward_membership(body, x, fx, p, r_res).member;
      case NonselfCondition::no_outward_direction: {
        const double xx = x.squaredNorm();
        if (xx == 0.0) return true;
        const double t = x.dot(fx) / xx;
        const bool collinear =
            (fx - t * x).norm() <= 1e-9 * (1.0 + fx.norm());
        return !(collinear && t > 1.0 + 1e-9);
      }
      case NonselfCondition::boundary_into_body:
        return body.gauge(fx, opts.gauge_tol) <= 1.0 + body.boundary_tol();
      case NonselfCondition::identity_gap_nonzero: {
        const double g = body.gauge(fx, opts.gauge_tol);
        if (g <= 1.0) return true;  // the boundary identity needs g > 1
        const double identity =
            std::pow(std::pow(g, p.inv()) - 1.0, p.value());
        return std::abs(body.gauge(fx - x, opts.gauge_tol) - identity) > tol;
      }
    }
    return false;
  };

  for (long k = 0; k < samples; ++k) {
    const Vector x = body.boundary_point(rng.direction(body.dim()));
    if (!predicate(x))
      throw PreconditionError("boundary predicate '" +
                                  std::string(to_string(condition)) +
                                  "' fails (map '" + map.name + "')",
                              x);
  }

  Certificate cert = best_approx_certificate(map, body, tol, opts);
  if (cert.kind == CertificateKind::BestApproximation) {
    cert.kind = CertificateKind::Inconclusive;
    cert.diagnostics =
        "predicate verified on samples but the residual did not close";
    cert.conclusion = conclusion_tag(cert.kind, cert.map_class);
  }
  return cert;
}

}  // namespace pconvex
