#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "maas/graph.hpp"
#include "maas/matching.hpp"
#include "maas/network.hpp"

namespace maas {

// Everything constraint generation needs from a solved matching.
struct MatchingArtifacts {
  MatchingSolution solution;
  std::vector<double> mu;
  PathFlowSolution decomposition;
};

MatchingArtifacts solve_matching_artifacts(const Network& net, const DemandTable& demand,
                                           const MatchingOptions& options = {});

// Per-link t + mu + c (1 - y).
std::vector<double> omega_weights(const Network& net, const std::vector<double>& mu,
                                  const std::vector<int>& active);
double omega(const Network& net, const Path& path, const std::vector<double>& mu,
             const std::vector<int>& active);

struct StabilityOptions {
  // Paths within this many dollars of the minimum omega count as optimal.
  double tie_tolerance = 1e-6;
  std::size_t optimal_path_cap = 1000;
  // Simple-path cap per OD for the enumeration oracle.
  std::size_t enumeration_cap = 100000;
  // Skip a subcoalition whenever the best path avoiding it is itself optimal,
  // instead of taking the best non-optimal path avoiding it.
  bool literal_skip = false;
};

struct OptimalPathSet {
  std::size_t group = 0;
  double omega = 0.0;
  std::vector<Path> paths;
  std::vector<OperatorId> operators;
  bool truncated = false;
};

// Throws NumericalError if a positive-flow path of the decomposition is not
// omega-minimal.
std::vector<OptimalPathSet> optimal_path_sets(const Network& net, const DemandTable& demand,
                                              const MatchingArtifacts& artifacts,
                                              const StabilityOptions& options = {});

// Nonempty subsets ordered by size, then lexicographically. Throws
// ResourceLimitError beyond 12 operators.
std::vector<std::vector<OperatorId>> subcoalitions(const std::vector<OperatorId>& operators);

// Omega-shortest simple path avoiding every link owned by a member of `coalition`.
std::optional<Path> excluded_shortest_path(const Network& net, const DemandEntry& group,
                                           const std::vector<OperatorId>& coalition,
                                           const std::vector<double>& weights);

// One optimal path of one group with its flow.
struct RoutedPath {
  std::size_t group = 0;
  Path path;
  double flow = 0.0;
  double travel_cost = 0.0;
  std::vector<OperatorId> operators;
};

// Price variable p[r][f].
struct PriceVariable {
  std::size_t path = 0;
  OperatorId op;
};

// u[s] + sum of p terms >= bound.
struct StabilityRow {
  std::size_t group = 0;
  std::size_t anchor = 0;
  std::vector<OperatorId> coalition;
  Path alternative;
  double alternative_omega = 0.0;
  double bound = 0.0;
  std::vector<std::size_t> prices;
};

// Operated links of one operator and their total operating cost.
struct OperatorCost {
  OperatorId op;
  std::vector<std::size_t> links;
  double operating_cost = 0.0;
};

struct ConstraintSystem {
  Network network;
  DemandTable demand;
  std::vector<RoutedPath> paths;
  std::vector<PriceVariable> prices;
  std::vector<StabilityRow> stability;
  std::vector<OperatorCost> costs;
  std::vector<int> active;

  // Indices into `prices` for one path.
  std::vector<std::size_t> prices_of_path(std::size_t path) const;
  std::string variable_name_u(std::size_t group) const;
  std::string variable_name_p(std::size_t price) const;
};

ConstraintSystem generate_constraints_algorithm1(const Network& net, const DemandTable& demand,
                                                 const MatchingArtifacts& artifacts,
                                                 const StabilityOptions& options = {});

ConstraintSystem generate_constraints_enumeration(const Network& net, const DemandTable& demand,
                                                  const MatchingArtifacts& artifacts,
                                                  const StabilityOptions& options = {});

// One inequality per line.
void write_constraint_text(std::ostream& out, const ConstraintSystem& system);
void write_constraint_json(std::ostream& out, const ConstraintSystem& system);

}  // namespace maas
