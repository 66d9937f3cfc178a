#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pconvex/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pconvex: a numerical laboratory for p-convex analysis"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  bool parallel = false;

  auto* run = app.add_subcommand("run", "execute a scenario config");
  run->add_option("config", config_path, "scenario JSON file")->required();
  run->add_option("--seed", seed, "override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--out", out_dir, "output directory for report and traces");
  run->add_flag("--parallel", parallel, "run independent tasks in parallel");

  std::string filter;
  auto* list = app.add_subcommand("list", "list built-in registry entries");
  list->add_option("filter", filter, "substring filter");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    std::cout << pconvex::list_builtins_json(filter).dump(2) << "\n";
    return 0;
  }

  pconvex::RunOptions options;
  if (seed_set) options.seed_override = seed;
  if (!out_dir.empty()) options.out_dir = out_dir;
  options.parallel = parallel;

  const auto rr = pconvex::run_scenario(config_path, options);
  if (rr.status != pconvex::RunStatus::ok) {
    std::cerr << "error: " << rr.error << "\n";
    return static_cast<int>(rr.status);
  }
  if (rr.report_path.empty())
    std::cout << rr.report.dump(2) << "\n";
  else
    std::cout << "report written to " << rr.report_path << "\n";
  return 0;
}
