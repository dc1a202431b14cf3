#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "maas/closedform.hpp"
#include "maas/pipeline.hpp"

namespace maas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInfeasibleDemand = 3;
inline constexpr int kExitEmptyCore = 4;
inline constexpr int kExitResourceLimit = 5;

// Inputs and settings of one run. Either files or a random seed.
struct RunManifest {
  std::string network;
  std::string demand;
  std::string scenario;
  std::optional<std::uint64_t> random_seed;
  // "illustrative" or "sioux_falls" instead of files.
  std::string fixture;
  double transfer_cost = 2.0;
  double capacity_scale = 1.0;
  std::string output_dir;
  std::string engine;
  std::string method = "cg";
  std::string generation = "algorithm1";
  double feasibility_tolerance = 1e-6;
  double optimality_tolerance = 1e-6;
  double gap = 1e-6;
  double tie_tolerance = 1e-6;
  long node_limit = 2'000'000;
  double time_limit = 0.0;
  std::size_t enumeration_cap = 100000;
  std::vector<std::uint32_t> fixed_fare;
  // "id=revenue_max" or "id=welfare_max".
  std::vector<std::string> policies;
  bool demand_weighted = false;
  bool quiet = false;
};

// Reads a JSON manifest; keys mirror the field names.
RunManifest load_manifest(const std::string& path);

struct LoadedInputs {
  Network network;
  DemandTable demand;
  PolicyAnnotations annotations;
  std::string name;
};

LoadedInputs load_inputs(const RunManifest& m);
PipelineOptions pipeline_options(const RunManifest& m, const PolicyAnnotations& annotations);

int cmd_run(const RunManifest& m, std::ostream& out);
int cmd_compare(const std::string& baseline_dir, const std::string& scenario_dir,
                const std::string& output, std::ostream& out);

struct BenchOptions {
  RunManifest manifest;
  int random_batch = 0;
  std::uint64_t seed = 1;
  int random_nodes = 10;
};
int cmd_bench(const BenchOptions& b, std::ostream& out);

int cmd_fixtures(const std::string& output_dir, double transfer_cost, std::ostream& out);
int cmd_lemma1(const CoopCompeteInstance& inst, bool pipeline, double utility, std::ostream& out);
int cmd_lemma2(const SmallVsLargeInstance& inst, std::ostream& out);
int cmd_enumerate_paths(const RunManifest& m, std::optional<NodeId> origin,
                        std::optional<NodeId> destination, std::ostream& out);

// Maps an exception to an exit code and prints a JSON error line.
int report_error(const std::exception& e, std::ostream& err);

}  // namespace maas::cli
