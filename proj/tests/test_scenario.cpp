#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "pconvex/scenario.hpp"

using namespace pconvex;
using nlohmann::json;

namespace {

std::string write_config(const json& config, const std::string& name) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "pconvex_test";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path);
  out << config.dump(2);
  return path.string();
}

json translation_config() {
  return {
      {"space", {{"dim", 2}, {"p", 1.0}}},
      {"seed", 42},
      {"body", {{"key", "pball"}}},
      {"map", {{"key", "translation"}, {"v", {0.5, 0.0}}}},
      {"tasks", json::array({{{"op", "best_approx_certificate"}}})},
  };
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("a valid config runs to a best-approximation certificate") {
  const auto path = write_config(translation_config(), "translation.json");
  const auto rr = run_scenario(path);
  REQUIRE(rr.status == RunStatus::ok);
  const auto& cert =
      rr.report.at("body").at("tasks").at(0).at("result").at("certificate");
  CHECK(cert.at("kind") == "BestApproximation");
  CHECK(cert.at("residual").get<double>() == doctest::Approx(0.5));
  // stored identity gaps reproduce under re-evaluation
  CHECK(std::abs(cert.at("identity_gap").get<double>() -
                 cert.at("identity_gap_recheck").get<double>()) <= 1e-12);
}

TEST_CASE("validation failures carry the offending field") {
  SUBCASE("p outside (0,1] exits with status 3") {
    auto config = translation_config();
    config["space"]["p"] = 1.5;
    const auto rr = run_scenario(write_config(config, "bad_p.json"));
    CHECK(rr.status == RunStatus::invalid_config);
    CHECK(rr.error.find("p must lie in (0,1]") != std::string::npos);
  }
  SUBCASE("unknown registry key names the field") {
    auto config = translation_config();
    config["body"]["key"] = "xball";
    const auto rr = run_scenario(write_config(config, "bad_body.json"));
    CHECK(rr.status == RunStatus::invalid_config);
    CHECK(rr.error.find("body.key") != std::string::npos);
  }
  SUBCASE("missing file exits with status 2") {
    const auto rr = run_scenario("/nonexistent/config.json");
    CHECK(rr.status == RunStatus::io_error);
  }
  SUBCASE("missing seed is rejected") {
    auto config = translation_config();
    config.erase("seed");
    const auto rr = run_scenario(write_config(config, "no_seed.json"));
    CHECK(rr.status == RunStatus::invalid_config);
    CHECK(rr.error.find("seed") != std::string::npos);
  }
}

TEST_CASE("reports are deterministic for a fixed config and seed") {
  json config = {
      {"space", {{"dim", 2}, {"p", 0.5}}},
      {"seed", 7},
      {"body", {{"key", "pball"}}},
      {"map", {{"key", "translation"}, {"v", {0.2, 0.0}}}},
      {"tasks",
       json::array({
           {{"op", "verify_gauge_axioms"}, {"samples", 100}},
           {{"op", "best_approx_certificate"}},
           {{"op", "birkhoff_kellogg_scan"}, {"multistart", 4}},
           {{"op", "check_boundary_conditions"},
            {"conditions", {"rothe", "petryshyn"}},
            {"samples", 50}},
           {{"op", "hausdorff_mnc"},
            {"set", {{"kind", "scaled_ball"}, {"kappa", 1.0}}},
            {"truncation", 1000}},
       })},
  };
  const auto path = write_config(config, "determinism.json");
  const auto a = run_scenario(path);
  const auto b = run_scenario(path);
  REQUIRE(a.status == RunStatus::ok);
  CHECK(report_body_string(a.report) == report_body_string(b.report));

  SUBCASE("parallel execution produces the identical body") {
    RunOptions par;
    par.parallel = true;
    const auto c = run_scenario(path, par);
    REQUIRE(c.status == RunStatus::ok);
    CHECK(report_body_string(a.report) == report_body_string(c.report));
  }
  SUBCASE("a different seed changes sampled tasks") {
    RunOptions other;
    other.seed_override = 8;
    const auto c = run_scenario(path, other);
    REQUIRE(c.status == RunStatus::ok);
    CHECK(report_body_string(a.report) != report_body_string(c.report));
  }
}

TEST_CASE("report and trace files are written to the output directory") {
  namespace fs = std::filesystem;
  json config = translation_config();
  config["tasks"].push_back({{"op", "approximate_fixed_point"}});
  const auto path = write_config(config, "with_traces.json");
  const auto out = fs::temp_directory_path() / "pconvex_test" / "out";
  fs::remove_all(out);
  RunOptions options;
  options.out_dir = out.string();
  const auto rr = run_scenario(path, options);
  REQUIRE(rr.status == RunStatus::ok);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "task1_trace.csv"));
  // the trace file is referenced from the report body
  const auto& task = rr.report.at("body").at("tasks").at(1);
  CHECK(task.at("result").at("trace_csv") == "task1_trace.csv");
}

TEST_CASE("list_builtins") {
  const auto all = list_builtins_json();
  std::vector<std::string> keys;
  std::vector<std::pair<std::string, std::string>> ordering;
  for (const auto& b : all.at("builtins")) {
    keys.push_back(b.at("key").get<std::string>());
    ordering.emplace_back(b.at("category").get<std::string>(),
                          b.at("key").get<std::string>());
  }
  for (const char* expected : {"pball", "affine", "geometric", "coord_ge"})
    CHECK(std::find(keys.begin(), keys.end(), expected) != keys.end());
  CHECK(std::is_sorted(ordering.begin(), ordering.end()));

  const auto filtered = list_builtins_json("ball");
  REQUIRE(filtered.at("builtins").size() == 2);
  CHECK(filtered.at("builtins").at(0).at("key") == "pball");
  CHECK(filtered.at("builtins").at(1).at("key") == "ball");
}

TEST_CASE("scenario covers the remaining task handlers") {
  json config = {
      {"space", {{"dim", 2}, {"p", 0.5}}},
      {"seed", 21},
      {"body", {{"key", "pball"}}},
      {"map", {{"key", "scale"}, {"c", 0.5}}},
      {"tasks",
       json::array({
           {{"op", "eval_gauge"}, {"points", {{0.25, 0.25}, {4.0, 0.0}}}},
           {{"op", "radial_retract"}, {"points", {{1.0, 1.0}}}},
           {{"op", "ball_sandwich_check"}, {"samples", 200}},
           {{"op", "check_p_convex"}, {"trials", 500}},
           {{"op", "singleton_hull_membership"},
            {"x", {2.0, 0.0}},
            {"q", {1.0, 0.0}},
            {"closed", true}},
           {{"op", "finite_hull_membership"},
            {"points", {{1.0, 0.0}, {0.0, 1.0}}},
            {"q", {0.25, 0.25}}},
           {{"op", "p_distance"}, {"x", {4.0, 0.0}}},
           {{"op", "inward_membership"},
            {"x", {1.0, 0.0}},
            {"z", {0.0, 1.0}}},
           {{"op", "admissible_inward_radii"},
            {"r_max", 2.0},
            {"resolution", 0.001}},
           {{"op", "leray_schauder_eps_scan"}, {"grid_n", 8}},
           {{"op", "rothe_fixed_point"}},
           {{"op", "homotopy_solve"},
            {"homotopy", {{"kind", "t_times_map"}}}},
           {{"op", "nonself_condition_dispatch"},
            {"condition", "boundary_into_body"}},
           {{"op", "kuratowski_mnc"},
            {"set", {{"kind", "scaled_ball"}, {"kappa", 1.0}}}},
           {{"op", "classify_operator"},
            {"coefficients", {{"key", "mobius"}}}},
           // at p = 0.5 the phi map squares barycentric coordinates, so the
           // image of the edge midpoint is (0.25, 0.25)
           {{"op", "kkm_verify"},
            {"generators", {{1.0, 0.0}, {0.0, 1.0}}},
            {"predicates",
             {{{"key", "coord_ge"}, {"index", 0}, {"threshold", 0.2}},
              {{"key", "coord_ge"}, {"index", 1}, {"threshold", 0.2}}}},
            {"resolution", 10}},
           {{"op", "phi_simplex"},
            {"generators", {{1.0, 0.0}, {0.0, 1.0}}},
            {"t", {0.5, 0.5}}},
       })},
  };
  const auto rr = run_scenario(write_config(config, "handlers.json"));
  REQUIRE(rr.status == RunStatus::ok);
  const auto& tasks = rr.report.at("body").at("tasks");

  CHECK(tasks.at(0).at("result").at("gauges").at(0).at("value").get<double>() ==
        doctest::Approx(1.0));
  CHECK(tasks.at(0).at("result").at("gauges").at(1).at("value").get<double>() ==
        doctest::Approx(2.0));
  CHECK(tasks.at(1).at("result").at("retractions").at(0).at("was_inside") ==
        false);
  CHECK(tasks.at(2).at("result").at("passed") == true);
  CHECK(tasks.at(3).at("result").at("passed") == true);
  CHECK(tasks.at(4).at("result").at("member") == true);
  CHECK(tasks.at(5).at("result").at("found") == true);
  CHECK(tasks.at(6).at("result").at("distance").get<double>() ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-2));
  CHECK(tasks.at(7).at("result").at("member") == true);
  CHECK(tasks.at(8).at("result").at("count") == 2);
  CHECK(tasks.at(9).at("result").at("growth_detected") == false);
  CHECK(tasks.at(10).at("result").at("certificate").at("kind") ==
        "FixedPoint");
  CHECK(tasks.at(11).at("result").at("certificate").at("kind") ==
        "FixedPoint");
  CHECK(tasks.at(12).at("result").at("certificate").at("kind") ==
        "FixedPoint");
  CHECK(tasks.at(13).at("result").at("bracket").at("value").get<double>() ==
        doctest::Approx(2.0));
  CHECK(tasks.at(14).at("result").at("class") == "one_set_contractive");
  CHECK(tasks.at(15).at("result").at("covering_holds") == true);
  CHECK(tasks.at(16).at("result").at("image").at(0).get<double>() ==
        doctest::Approx(0.25));
}

TEST_SUITE_END();
