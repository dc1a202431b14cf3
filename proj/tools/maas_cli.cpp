#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_run_flags(CLI::App* app, maas::cli::RunManifest& m) {
  app->add_option("--network", m.network, "Network CSV");
  app->add_option("--demand", m.demand, "Demand CSV");
  app->add_option("--scenario", m.scenario, "Scenario JSON");
  app->add_option("--seed", m.random_seed, "Use a generated random instance");
  app->add_option("--fixture", m.fixture, "Built-in instance")
      ->check(CLI::IsMember({"illustrative", "sioux_falls"}));
  app->add_option("--transfer-cost", m.transfer_cost, "Sioux Falls transfer cost");
  app->add_option("--capacity-scale", m.capacity_scale, "Sioux Falls capacity multiplier");
  app->add_option("--engine", m.engine, "LP/MILP engine");
  app->add_option("--method", m.method, "Matching formulation")->check(CLI::IsMember({"cg", "arc"}));
  app->add_option("--generation", m.generation, "Stability row generation")
      ->check(CLI::IsMember({"algorithm1", "enumeration"}));
  app->add_option("--feasibility-tol", m.feasibility_tolerance);
  app->add_option("--optimality-tol", m.optimality_tolerance);
  app->add_option("--gap", m.gap, "Absolute MILP gap");
  app->add_option("--tie-tol", m.tie_tolerance, "Omega tie tolerance");
  app->add_option("--node-limit", m.node_limit);
  app->add_option("--time-limit", m.time_limit, "Seconds; 0 for none");
  app->add_option("--enumeration-cap", m.enumeration_cap);
  app->add_option("--fixed-fare", m.fixed_fare, "Operators charging one fare on every path");
  app->add_option("--policy", m.policies, "Per-operator objective, id=revenue_max|welfare_max");
  app->add_flag("--demand-weighted", m.demand_weighted, "Weight consumer surplus by demand");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable matching and pricing for multi-operator mobility networks"};
  app.require_subcommand(1);

  maas::cli::RunManifest run;
  std::string run_manifest;
  auto* run_cmd = app.add_subcommand("run", "Solve matching, generate constraints and price outcomes");
  run_cmd->add_option("--manifest", run_manifest, "JSON manifest; flags given later override it");
  add_run_flags(run_cmd, run);
  run_cmd->add_option("-o,--output", run.output_dir, "Directory for artifacts");
  run_cmd->add_flag("-q,--quiet", run.quiet, "Summary only");

  std::string baseline;
  std::string scenario;
  std::string compare_out;
  auto* compare_cmd = app.add_subcommand("compare", "Per-operator deltas between two run directories");
  compare_cmd->add_option("baseline", baseline)->required();
  compare_cmd->add_option("scenario", scenario)->required();
  compare_cmd->add_option("-o,--output", compare_out, "Also write the table here");

  maas::cli::BenchOptions bench;
  std::string bench_manifest;
  auto* bench_cmd = app.add_subcommand("bench", "Shortest excluded-path generation against full enumeration");
  bench_cmd->add_option("--manifest", bench_manifest);
  add_run_flags(bench_cmd, bench.manifest);
  bench_cmd->add_option("--random", bench.random_batch, "Number of random instances");
  bench_cmd->add_option("--first-seed", bench.seed);
  bench_cmd->add_option("--nodes", bench.random_nodes, "Largest random instance size");

  std::string fixtures_dir = "fixtures";
  double fixtures_tc = 0.0;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Write the built-in instances as CSV");
  fixtures_cmd->add_option("-o,--output", fixtures_dir);
  fixtures_cmd->add_option("--transfer-cost", fixtures_tc);

  maas::CoopCompeteInstance l1;
  bool l1_pipeline = false;
  double l1_utility = 1000.0;
  auto* l1_cmd = app.add_subcommand("lemma1", "Price floor for a cooperating small operator");
  l1_cmd->add_option("--t12", l1.t12)->required();
  l1_cmd->add_option("--t23", l1.t23)->required();
  l1_cmd->add_option("--t13", l1.t13)->required();
  l1_cmd->add_option("--c12", l1.c12)->required();
  l1_cmd->add_option("--c23", l1.c23)->required();
  l1_cmd->add_option("--c13", l1.c13)->required();
  l1_cmd->add_option("--d", l1.d)->required();
  l1_cmd->add_flag("--pipeline", l1_pipeline, "Also solve the three-node network");
  l1_cmd->add_option("--utility", l1_utility, "Utility for --pipeline");

  maas::SmallVsLargeInstance l2;
  auto* l2_cmd = app.add_subcommand("lemma2", "Price ceiling for a small operator paralleling a large one");
  l2_cmd->add_option("--t-small", l2.t23_small)->required();
  l2_cmd->add_option("--t-large", l2.t23_large)->required();
  l2_cmd->add_option("--c-large", l2.c23_large)->required();
  l2_cmd->add_option("--x-large", l2.x23_large_flow, "Flow on the large operator's link");

  maas::cli::RunManifest paths;
  std::string paths_manifest;
  std::optional<int> paths_origin;
  std::optional<int> paths_destination;
  auto* paths_cmd = app.add_subcommand("enumerate-paths", "List simple paths with omega and flow");
  paths_cmd->add_option("--manifest", paths_manifest);
  add_run_flags(paths_cmd, paths);
  paths_cmd->add_option("--origin", paths_origin);
  paths_cmd->add_option("--destination", paths_destination);

  // Manifest values are the base; explicit flags are parsed a second time on top.
  auto with_manifest = [&](const std::string& file, maas::cli::RunManifest& m) {
    if (file.empty()) return;
    maas::cli::RunManifest base = maas::cli::load_manifest(file);
    if (!m.output_dir.empty()) base.output_dir = m.output_dir;
    base.quiet = base.quiet || m.quiet;
    m = base;
    std::vector<std::string> rest;
    for (int i = argc - 1; i >= 1; --i) rest.emplace_back(argv[i]);
    auto again = std::make_unique<CLI::App>();
    add_run_flags(again.get(), m);
    std::string ignored;
    again->add_option("--manifest", ignored);
    again->add_option("-o,--output", m.output_dir);
    again->add_flag("-q,--quiet", m.quiet);
    again->allow_extras();
    rest.pop_back();
    again->parse(rest);
  };

  try {
    CLI11_PARSE(app, argc, argv);
    if (run_cmd->parsed()) {
      with_manifest(run_manifest, run);
      return maas::cli::cmd_run(run, std::cout);
    }
    if (compare_cmd->parsed()) return maas::cli::cmd_compare(baseline, scenario, compare_out, std::cout);
    if (bench_cmd->parsed()) {
      with_manifest(bench_manifest, bench.manifest);
      return maas::cli::cmd_bench(bench, std::cout);
    }
    if (fixtures_cmd->parsed()) return maas::cli::cmd_fixtures(fixtures_dir, fixtures_tc, std::cout);
    if (l1_cmd->parsed()) return maas::cli::cmd_lemma1(l1, l1_pipeline, l1_utility, std::cout);
    if (l2_cmd->parsed()) return maas::cli::cmd_lemma2(l2, std::cout);
    if (paths_cmd->parsed()) {
      with_manifest(paths_manifest, paths);
      return maas::cli::cmd_enumerate_paths(paths, paths_origin, paths_destination, std::cout);
    }
  } catch (const std::exception& e) {
    return maas::cli::report_error(e, std::cerr);
  }
  return maas::cli::kExitInternal;
}
