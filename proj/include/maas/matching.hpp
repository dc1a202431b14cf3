#pragma once

#include <iosfwd>
#include <vector>

#include "maas/graph.hpp"
#include "maas/network.hpp"
#include "maas/solve/engine.hpp"

namespace maas {

enum class MatchingMethod {
  // Path-flow master with priced columns inside branch-and-bound.
  kColumnGeneration,
  // The arc-flow model from build_mcnd handed to solve_milp.
  kArcFlow,
};

struct MatchingOptions {
  MatchingMethod method = MatchingMethod::kColumnGeneration;
  solve::SolverConfig solver = solve::with_environment({});
  // Adds violated x[s][a] <= d_s y[a] rows to the column-generation master.
  bool linking_cuts = true;
  double flow_tolerance = 1e-9;
  // Duals are read with every operated capacity raised by this fraction of
  // the total demand, which selects the optimal dual with the least sum.
  double dual_perturbation = 1e-7;
};

struct MatchingSolution {
  // flows[s][link]
  std::vector<std::vector<double>> flows;
  std::vector<int> active;
  double objective = 0.0;
  long nodes = 0;

  double link_flow(std::size_t link) const;
};

// Indexing of the arc-flow model.
struct McndLayout {
  std::size_t num_groups = 0;
  std::size_t num_links = 0;
  std::size_t num_nodes = 0;

  int flow_var(std::size_t s, std::size_t a) const { return static_cast<int>(s * num_links + a); }
  int active_var(std::size_t a) const { return static_cast<int>(num_groups * num_links + a); }
  int conservation_row(std::size_t s, std::size_t v) const {
    return static_cast<int>(s * num_nodes + v);
  }
  int capacity_row(std::size_t a) const { return static_cast<int>(num_groups * num_nodes + a); }
};

McndLayout mcnd_layout(const Network& net, const DemandTable& demand);
solve::MixedIntegerProgram build_mcnd(const Network& net, const DemandTable& demand);

// Throws InfeasibleDemandError naming the OD pairs that cannot be routed.
MatchingSolution solve_matching(const Network& net, const DemandTable& demand,
                                const MatchingOptions& options = {});

// Capacity duals of the routing LP with activations fixed; zero on links that
// are not operated.
std::vector<double> extract_duals(const Network& net, const DemandTable& demand,
                                  const std::vector<int>& active,
                                  const MatchingOptions& options = {});

// OD pairs whose demand cannot be carried with every link open.
std::vector<std::size_t> unroutable_groups(const Network& net, const DemandTable& demand,
                                           const MatchingOptions& options = {});

struct PathFlow {
  std::size_t group = 0;
  Path path;
  double flow = 0.0;
};

struct PathFlowSolution {
  std::vector<PathFlow> paths;
  std::vector<double> mu;
};

// Canonical decomposition: cancel residual cycles, then repeatedly follow the
// smallest next node with positive residual flow and extract the bottleneck.
PathFlowSolution decompose_flows(const Network& net, const DemandTable& demand,
                                 const MatchingSolution& solution, std::vector<double> mu = {});

// Residual checks used by tests and reports.
double conservation_residual(const Network& net, const DemandTable& demand,
                             const MatchingSolution& solution);
double capacity_residual(const Network& net, const MatchingSolution& solution);
double recomputed_objective(const Network& net, const MatchingSolution& solution);

void write_link_flows(std::ostream& out, const Network& net, const MatchingSolution& solution);
void write_commodity_flows(std::ostream& out, const Network& net, const DemandTable& demand,
                           const MatchingSolution& solution);
void write_link_duals(std::ostream& out, const Network& net, const MatchingSolution& solution,
                      const std::vector<double>& mu);
void write_path_flows(std::ostream& out, const Network& net, const DemandTable& demand,
                      const PathFlowSolution& paths);

namespace detail {
double duals_perturbation(const DemandTable& demand, const MatchingOptions& options);
struct ColumnGenerationResult {
  bool feasible = false;
  MatchingSolution solution;
  std::vector<double> mu;
  std::vector<std::size_t> unroutable;
};
// Fixed activations solve routing only; otherwise branch-and-bound.
ColumnGenerationResult column_generation(const Network& net, const DemandTable& demand,
                                         const MatchingOptions& options,
                                         const std::vector<int>* fixed_active);
}  // namespace detail

}  // namespace maas
