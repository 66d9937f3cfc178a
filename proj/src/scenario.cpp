#include "pconvex/scenario.hpp"

#include <Eigen/Core>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

namespace pconvex {

namespace {

using registry::json;

json to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
  return v;
}

json to_json(const Certificate& c, PExponent p) {
  json j;
  j["kind"] = to_string(c.kind);
  j["point"] = to_json(c.point);
  j["residual"] = c.residual;
  j["gauge_at_map"] = c.gauge_at_map;
  j["lambda"] = c.lambda;
  j["identity_gap"] = c.identity_gap;
  j["identity_gap_recheck"] = c.revalidate(p);
  j["boundary_case"] = c.boundary_case;
  j["map_class"] = to_string(c.map_class);
  j["conclusion"] = c.conclusion;
  if (!c.diagnostics.empty()) j["diagnostics"] = c.diagnostics;
  return j;
}

json to_json(const MncBracket& b, double tol) {
  json j;
  j["lower"] = b.lower;
  j["upper"] = b.upper;
  j["gap"] = b.gap();
  j["truncation_level"] = b.truncation_level;
  if (const auto s = b.scalar(tol)) j["value"] = *s;
  return j;
}

struct Tolerances {
  double gauge = 1e-9;
  double solver = 1e-8;
  double identity = 1e-6;
};

struct Scenario {
  int dim = 2;
  PExponent p{1.0};
  std::uint64_t seed = 0;
  Tolerances tol;
  std::optional<PBody> body;
  std::optional<MapSpec> map;
  json config;
};

const PBody& need_body(const Scenario& sc) {
  if (!sc.body) throw std::invalid_argument("task needs a scenario body");
  return *sc.body;
}

const MapSpec& need_map(const Scenario& sc) {
  if (!sc.map) throw std::invalid_argument("task needs a scenario map");
  return *sc.map;
}

SeqSet seqset_from(const json& spec, PExponent p) {
  const std::string kind = spec.value("kind", "scaled_ball");
  if (kind == "scaled_ball")
    return SeqSet::scaled_ball(spec.value("kappa", 1.0), p);
  if (kind == "tail_box")
    return SeqSet::tail_box(registry::make_seqgen(spec.at("edges")), p);
  throw std::invalid_argument("set.kind: unknown kind '" + kind + "'");
}

Homotopy homotopy_from(const json& spec, const Scenario& sc) {
  const std::string kind = spec.value("kind", "t_times_map");
  if (kind == "t_times_map") {
    const auto F = need_map(sc).F;
    return [F](double t, const Vector& x) { return Vector(t * F(x)); };
  }
  if (kind == "map_plus_t_shift") {
    const auto F = need_map(sc).F;
    const Vector v = vector_from(spec.at("v"));
    return [F, v](double t, const Vector& x) { return Vector(F(x) + t * v); };
  }
  throw std::invalid_argument("homotopy.kind: unknown kind '" + kind + "'");
}

// one task; returns the JSON result plus an optional CSV trace
struct TaskOutput {
  json result;
  std::string trace_name;
  std::string trace_csv;
};

std::string format_csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

TaskOutput run_task(const Scenario& sc, const json& task, std::size_t index,
                    bool want_traces) {
  const std::string op = task.at("op").get<std::string>();
  const std::uint64_t task_seed =
      task.contains("seed") ? task.at("seed").get<std::uint64_t>()
                            : mix_seed(sc.seed, index);
  RandomSource rng(task_seed);
  TaskOutput out;
  json& res = out.result;

  SolverOptions solver;
  solver.gauge_tol = std::min(sc.tol.gauge, 1e-10);
  const double tol = task.value("tol", sc.tol.solver);

  if (op == "eval_gauge") {
    const double gtol = task.value("tol", sc.tol.gauge);
    json items = json::array();
    for (const auto& pj : task.at("points")) {
      const Vector x = vector_from(pj);
      const auto g = eval_gauge(need_body(sc), x, gtol);
      items.push_back({{"point", to_json(x)},
                       {"value", g.value},
                       {"tol", g.tol}});
    }
    res["gauges"] = std::move(items);
  } else if (op == "verify_gauge_axioms") {
    const auto rep = verify_gauge_axioms(
        need_body(sc), task.value("samples", 1000L), task_seed);
    res["passed"] = rep.passed();
    res["origin_ok"] = rep.origin_ok;
    res["homogeneous"] = rep.homogeneous;
    res["subadditive"] = rep.subadditive;
    res["negative_lambda_checked"] = rep.negative_lambda_checked;
    res["max_homogeneity_gap"] = rep.max_homogeneity_gap;
    res["max_subadditivity_excess"] = rep.max_subadditivity_excess;
  } else if (op == "ball_sandwich_check") {
    const auto rep = ball_sandwich_check(need_body(sc),
                                         task.value("samples", 1000L),
                                         task_seed);
    res["passed"] = rep.passed;
    res["samples"] = rep.samples;
    res["strict_inside"] = rep.strict_inside;
    res["members"] = rep.members;
    if (rep.witness) {
      res["witness"] = to_json(*rep.witness);
      res["failure"] = rep.failure;
    }
  } else if (op == "radial_retract") {
    json items = json::array();
    for (const auto& pj : task.at("points")) {
      const Vector x = vector_from(pj);
      const auto r = radial_retract(need_body(sc), x);
      items.push_back({{"point", to_json(x)},
                       {"image", to_json(r.point)},
                       {"was_inside", r.was_inside},
                       {"gauge", r.gauge.value}});
    }
    res["retractions"] = std::move(items);
  } else if (op == "check_p_convex") {
    const auto& body = need_body(sc);
    SampleDomain domain{Vector::Zero(sc.dim), body.bound_radius()};
    if (task.contains("domain_center"))
      domain.center = vector_from(task.at("domain_center"));
    if (task.contains("domain_radius"))
      domain.radius = task.at("domain_radius").get<double>();
    const auto rep = check_p_convex(
        [&body](const Vector& v) { return body.contains(v); }, sc.p, domain,
        rng, task.value("trials", 1000L));
    res["passed"] = rep.passed;
    res["pairs_tested"] = rep.pairs_tested;
    if (rep.witness) {
      res["witness"] = {{"x", to_json(rep.witness->x)},
                        {"y", to_json(rep.witness->y)},
                        {"u", rep.witness->u},
                        {"combination", to_json(rep.witness->combination)}};
    }
  } else if (op == "singleton_hull_membership") {
    res["member"] = singleton_hull_membership(
        vector_from(task.at("x")), vector_from(task.at("q")), sc.p,
        task.value("closed", true));
  } else if (op == "finite_hull_membership") {
    std::vector<Vector> pts;
    for (const auto& pj : task.at("points")) pts.push_back(vector_from(pj));
    const auto hm = finite_hull_membership(
        PointSet(pts), vector_from(task.at("q")), sc.p,
        task.value("tol", 1e-8), task.value("multistart", 32), rng);
    res["found"] = hm.found;
    res["residual"] = hm.residual;
    if (hm.witness) res["weights"] = to_json(hm.witness->coeffs());
  } else if (op == "p_distance") {
    const auto& body = need_body(sc);
    DistanceBudget budget;
    budget.samples = task.value("samples", 4096L);
    res["distance"] = p_distance(seminorm_of(body), vector_from(task.at("x")),
                                 body, budget, rng);
  } else if (op == "inward_membership") {
    const auto r = inward_membership(
        need_body(sc), vector_from(task.at("x")), vector_from(task.at("z")),
        sc.p, task.value("resolution", 1e-3));
    res["member"] = r.member;
    if (r.member) {
      res["witness_r"] = r.witness.r;
      res["witness_endpoint"] = to_json(r.witness.endpoint);
    }
  } else if (op == "admissible_inward_radii") {
    const auto radii =
        admissible_inward_radii(sc.p, task.value("r_max", 10.0),
                                task.value("resolution", 1e-4));
    res["count"] = radii.size();
    json head = json::array();
    for (std::size_t i = 0; i < radii.size() && i < 32; ++i)
      head.push_back(radii[i]);
    res["values_head"] = std::move(head);
    if (!radii.empty()) res["last"] = radii.back();
  } else if (op == "approximate_fixed_point") {
    const auto schedule = default_lambda_schedule(task.value("schedule_n", 30));
    const auto trace =
        approximate_fixed_point(need_map(sc), need_body(sc), schedule, solver,
                                tol);
    res["completed"] = trace.completed;
    res["steps"] = trace.steps.size();
    if (const auto* last = trace.last_converged()) {
      res["final_x"] = to_json(last->x);
      res["final_residual"] = last->residual;
      res["final_interior"] = last->interior;
    }
    long bound_violations = 0;
    for (const auto& st : trace.steps)
      if (st.converged && st.interior &&
          st.residual > st.residual_bound + 10.0 * sc.tol.solver)
        ++bound_violations;
    res["interior_bound_violations"] = bound_violations;
    if (want_traces) {
      std::ostringstream csv;
      csv << "n,lambda,converged,interior,residual,residual_bound,"
             "inner_iters";
      for (int d = 0; d < sc.dim; ++d) csv << ",x" << d;
      csv << "\n";
      for (const auto& st : trace.steps) {
        csv << st.n << ',' << format_csv_double(st.lambda) << ','
            << (st.converged ? 1 : 0) << ',' << (st.interior ? 1 : 0) << ','
            << format_csv_double(st.residual) << ','
            << format_csv_double(st.residual_bound) << ',' << st.inner_iters;
        for (int d = 0; d < sc.dim; ++d)
          csv << ',' << format_csv_double(st.x[d]);
        csv << "\n";
      }
      out.trace_name = "task" + std::to_string(index) + "_trace.csv";
      out.trace_csv = csv.str();
      res["trace_csv"] = out.trace_name;
    }
  } else if (op == "best_approx_certificate") {
    const auto cert =
        best_approx_certificate(need_map(sc), need_body(sc), tol, solver,
                                task.value("inward_samples", 512L), task_seed);
    res["certificate"] = to_json(cert, sc.p);
    res["identity_within_tol"] =
        cert.identity_gap <= task.value("identity_tol", sc.tol.identity);
  } else if (op == "check_boundary_conditions") {
    std::vector<BoundaryCondition> conditions;
    for (const auto& cj : task.at("conditions"))
      conditions.push_back(
          boundary_condition_from_string(cj.get<std::string>()));
    ConditionParams params;
    params.alpha = task.value("alpha", 2.0);
    params.beta = task.value("beta", 0.0);
    const auto verdicts = check_boundary_conditions(
        need_map(sc), need_body(sc), conditions, params,
        task.value("samples", 1000L), task_seed);
    json items = json::array();
    for (const auto& v : verdicts) {
      json vj;
      vj["condition"] = to_string(v.id);
      vj["holds"] = v.holds;
      vj["samples"] = v.samples;
      vj["margin"] = v.margin;
      if (v.witness) vj["witness"] = to_json(*v.witness);
      if (!v.conclusion.empty()) vj["conclusion"] = v.conclusion;
      items.push_back(std::move(vj));
    }
    res["verdicts"] = std::move(items);
  } else if (op == "birkhoff_kellogg_scan") {
    const auto certs = birkhoff_kellogg_scan(
        need_map(sc), need_body(sc), task.value("lambda_max", 4.0),
        task.value("multistart", 16), task_seed,
        task.value("tol", 1e-9));
    json items = json::array();
    for (const auto& c : certs) items.push_back(to_json(c, sc.p));
    res["directions"] = std::move(items);
    res["count"] = certs.size();
  } else if (op == "leray_schauder_eps_scan") {
    std::vector<double> grid;
    if (task.contains("lambda_grid"))
      for (const auto& lj : task.at("lambda_grid"))
        grid.push_back(lj.get<double>());
    else
      for (int k = 1; k <= task.value("grid_n", 12); ++k)
        grid.push_back(1.0 - std::pow(2.0, -k));
    const bool whole_space = task.value("whole_space", true);
    const auto rep = leray_schauder_eps_scan(
        need_map(sc), sc.dim, whole_space ? nullptr : &need_body(sc), grid,
        task.value("r_max", 100.0), solver);
    res["growth_detected"] = rep.growth_detected;
    res["max_norm"] = rep.max_norm;
    res["max_gauge"] = rep.max_gauge;
    res["fitted_rate"] = rep.fitted_rate;
    json items = json::array();
    for (const auto& pt : rep.points)
      items.push_back({{"lambda", pt.lambda},
                       {"resolved", pt.resolved},
                       {"norm", pt.norm},
                       {"x", to_json(pt.x)}});
    res["points"] = std::move(items);
  } else if (op == "rothe_fixed_point") {
    try {
      const auto cert =
          rothe_fixed_point(need_map(sc), need_body(sc),
                            task.value("samples", 256L), tol, task_seed,
                            solver);
      res["certificate"] = to_json(cert, sc.p);
    } catch (const PreconditionError& e) {
      res["precondition_violation"] = e.what();
      res["witness"] = to_json(e.witness());
    }
  } else if (op == "homotopy_solve") {
    HomotopyOptions hopts;
    hopts.tol = task.value("tol", sc.tol.solver);
    hopts.seed = task_seed;
    hopts.inner = solver;
    try {
      const auto hr =
          homotopy_solve(homotopy_from(task.at("homotopy"), sc),
                         need_body(sc), hopts);
      res["certificate"] = to_json(hr.cert, sc.p);
      json path = json::array();
      for (const auto& [t, x] : hr.path)
        path.push_back({{"t", t}, {"x", to_json(x)}});
      res["path"] = std::move(path);
    } catch (const PreconditionError& e) {
      res["precondition_violation"] = e.what();
      res["witness"] = to_json(e.witness());
    }
  } else if (op == "nonself_condition_dispatch") {
    try {
      const auto cert = nonself_condition_dispatch(
          need_map(sc), need_body(sc),
          nonself_condition_from_string(
              task.at("condition").get<std::string>()),
          task.value("samples", 256L), tol, task_seed, solver);
      res["certificate"] = to_json(cert, sc.p);
    } catch (const PreconditionError& e) {
      res["precondition_violation"] = e.what();
      res["witness"] = to_json(e.witness());
    }
  } else if (op == "hausdorff_mnc" || op == "kuratowski_mnc") {
    const auto set = seqset_from(task.at("set"), sc.p);
    const long truncation = task.value("truncation", 1000L);
    const double btol = task.value("tol", 1e-9);
    const auto bracket = op == "hausdorff_mnc"
                             ? hausdorff_mnc(set, truncation, btol)
                             : kuratowski_mnc(set, truncation, btol);
    res["bracket"] = to_json(bracket, btol);
  } else if (op == "classify_operator") {
    const DiagOperator diag{registry::make_seqgen(task.at("coefficients"))};
    const auto set = task.contains("set")
                         ? seqset_from(task.at("set"), sc.p)
                         : SeqSet::scaled_ball(1.0, sc.p);
    const auto cls = classify_operator(diag, set, sc.p);
    res["k"] = cls.k;
    res["class"] = to_string(cls.cls);
    res["condensing"] = cls.condensing;
    res["limit_attained"] = cls.limit_attained;
  } else if (op == "kkm_verify") {
    std::vector<Vector> gens;
    for (const auto& gj : task.at("generators"))
      gens.push_back(vector_from(gj));
    KkmFamily family{PointSet(gens), {}};
    for (const auto& pj : task.at("predicates"))
      family.sets.push_back(registry::make_predicate(pj));
    const SimplexGrid grid(static_cast<int>(gens.size()) - 1,
                           task.value("resolution", 12));
    const auto rep = kkm_verify(family, grid, sc.p);
    res["covering_holds"] = rep.covering_holds;
    res["resolution"] = rep.resolution;
    if (rep.violation) {
      res["violation"] = {{"face", rep.violation->face},
                          {"barycentric", to_json(rep.violation->barycentric)},
                          {"image", to_json(rep.violation->image)}};
    }
    res["intersection_count"] = rep.intersections.size();
    json inter = json::array();
    for (std::size_t i = 0; i < rep.intersections.size() && i < 64; ++i)
      inter.push_back(
          {{"barycentric", to_json(rep.intersections[i].barycentric)},
           {"image", to_json(rep.intersections[i].image)}});
    res["intersections_head"] = std::move(inter);
  } else if (op == "phi_simplex") {
    std::vector<Vector> gens;
    for (const auto& gj : task.at("generators"))
      gens.push_back(vector_from(gj));
    res["image"] = to_json(
        phi_simplex(PointSet(gens), vector_from(task.at("t")), sc.p));
  } else {
    throw std::invalid_argument("tasks[" + std::to_string(index) +
                                "].op: unknown operation '" + op + "'");
  }
  return out;
}

}  // namespace

nlohmann::json list_builtins_json(const std::string& filter) {
  json out;
  out["builtins"] = json::array();
  for (const auto& b : registry::list_builtins(filter))
    out["builtins"].push_back({{"category", b.category},
                               {"key", b.key},
                               {"signature", b.signature}});
  return out;
}

std::string report_body_string(const nlohmann::json& report) {
  return report.at("body").dump(2);
}

RunResult run_scenario(const std::string& config_path,
                       const RunOptions& options) {
  RunResult rr;

  std::ifstream in(config_path);
  if (!in) {
    rr.status = RunStatus::io_error;
    rr.error = "config file not found: " + config_path;
    return rr;
  }

  const auto started = std::chrono::steady_clock::now();
  Scenario sc;
  try {
    json config = json::parse(in);
    sc.config = config;

    const auto& space = config.at("space");
    sc.dim = space.at("dim").get<int>();
    if (sc.dim < 1) throw std::invalid_argument("space.dim: must be >= 1");
    const double p = space.at("p").get<double>();
    if (!(p > 0.0) || !(p <= 1.0))
      throw std::invalid_argument("space.p: p must lie in (0,1]");
    sc.p = PExponent(p);

    if (options.seed_override)
      sc.seed = *options.seed_override;
    else if (config.contains("seed"))
      sc.seed = config.at("seed").get<std::uint64_t>();
    else
      throw std::invalid_argument(
          "seed: required for reproducible reports");

    if (config.contains("tolerances")) {
      const auto& t = config.at("tolerances");
      sc.tol.gauge = t.value("gauge", sc.tol.gauge);
      sc.tol.solver = t.value("solver", sc.tol.solver);
      sc.tol.identity = t.value("identity", sc.tol.identity);
    }

    if (config.contains("body"))
      sc.body.emplace(registry::make_body(config.at("body"), sc.dim, sc.p));
    if (config.contains("map")) {
      sc.map.emplace(registry::make_map(config.at("map"), sc.dim));
      if (sc.body) sc.map->validate_on(*sc.body);
    }

    const json tasks = config.value("tasks", json::array());
    std::vector<TaskOutput> outputs(tasks.size());
    const bool want_traces = options.write_traces && options.out_dir.has_value();

    if (options.parallel) {
      std::vector<std::future<TaskOutput>> futs;
      futs.reserve(tasks.size());
      for (std::size_t i = 0; i < tasks.size(); ++i)
        futs.push_back(std::async(std::launch::async, [&, i] {
          return run_task(sc, tasks.at(i), i, want_traces);
        }));
      for (std::size_t i = 0; i < tasks.size(); ++i)
        outputs[i] = futs[i].get();
    } else {
      for (std::size_t i = 0; i < tasks.size(); ++i)
        outputs[i] = run_task(sc, tasks.at(i), i, want_traces);
    }

    json body;
    body["schema"] = "pconvex-report/1";
    body["config"] = sc.config;
    body["seed"] = sc.seed;
    body["space"] = {{"dim", sc.dim}, {"p", sc.p.value()}};
    body["versions"] = {
        {"pconvex", "0.1.0"},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)}};
    json jtasks = json::array();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      jtasks.push_back({{"index", i},
                        {"op", tasks.at(i).at("op")},
                        {"result", outputs[i].result}});
    }
    body["tasks"] = std::move(jtasks);

    rr.report["body"] = std::move(body);
    const auto elapsed = std::chrono::steady_clock::now() - started;
    rr.report["wall_clock_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed)
            .count();

    if (options.out_dir) {
      namespace fs = std::filesystem;
      fs::create_directories(*options.out_dir);
      const auto path = fs::path(*options.out_dir) / "report.json";
      std::ofstream rep(path);
      rep << rr.report.dump(2) << "\n";
      rr.report_path = path.string();
      for (const auto& o : outputs) {
        if (o.trace_name.empty()) continue;
        std::ofstream tr(fs::path(*options.out_dir) / o.trace_name);
        tr << o.trace_csv;
      }
    }
  } catch (const json::exception& e) {
    rr.status = RunStatus::invalid_config;
    rr.error = std::string("config: ") + e.what();
    return rr;
  } catch (const std::invalid_argument& e) {
    rr.status = RunStatus::invalid_config;
    rr.error = e.what();
    return rr;
  } catch (const std::domain_error& e) {
    rr.status = RunStatus::invalid_config;
    rr.error = e.what();
    return rr;
  }
  return rr;
}

}  // namespace pconvex
