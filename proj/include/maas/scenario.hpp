#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "maas/network.hpp"

namespace maas {

enum class OperatorMode { kRevenueMax, kWelfareMax };

const char* to_string(OperatorMode m);
OperatorMode parse_operator_mode(const std::string& s);

// Policy inputs consumed by the outcome model.
struct PolicyAnnotations {
  std::map<OperatorId, OperatorMode> objective_modes;
  std::set<OperatorId> fixed_fare;
  std::map<LinkKey, double> subsidies;
};

namespace edit {
struct SetCapacity {
  LinkKey link;
  double capacity = 0.0;
};
struct ScaleCosts {
  OperatorId op;
  double factor = 1.0;
};
// No operator means every link.
struct ScaleTravel {
  std::optional<OperatorId> op;
  double factor = 1.0;
};
struct Surcharge {
  OperatorId op;
  double delta = 0.0;
};
struct Subsidy {
  LinkKey link;
  double gamma = 0.0;
};
struct AddLinks {
  std::vector<Link> links;
};
struct RemoveLinks {
  std::vector<LinkKey> links;
};
struct MergeOperators {
  std::vector<OperatorId> members;
  OperatorId target;
};
struct SetObjectivePolicy {
  OperatorId op;
  OperatorMode mode = OperatorMode::kRevenueMax;
};
struct SetFixedFare {
  OperatorId op;
  bool flag = true;
};
}  // namespace edit

using ScenarioEdit =
    std::variant<edit::SetCapacity, edit::ScaleCosts, edit::ScaleTravel, edit::Surcharge,
                 edit::Subsidy, edit::AddLinks, edit::RemoveLinks, edit::MergeOperators,
                 edit::SetObjectivePolicy, edit::SetFixedFare>;

struct Scenario {
  std::string name;
  std::vector<ScenarioEdit> edits;
};

// JSON document: {"name": ..., "edits": [{"op": "set_capacity", ...}, ...]}.
Scenario load_scenario(std::istream& in);
Scenario load_scenario_file(const std::string& path);
void write_scenario(std::ostream& out, const Scenario& scenario);

struct ScenarioResult {
  Network network;
  DemandTable demand;
  PolicyAnnotations annotations;
};

// Applies edits left to right. Pure and deterministic.
ScenarioResult apply_scenario(const Network& network, const DemandTable& demand,
                              const Scenario& scenario, PolicyAnnotations base = {});

}  // namespace maas
