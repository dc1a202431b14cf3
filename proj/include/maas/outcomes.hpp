#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "maas/scenario.hpp"
#include "maas/solve/engine.hpp"
#include "maas/stability.hpp"

namespace maas {

enum class GlobalMode { kBuyerOptimal, kSellerOptimal, kPerOperator };

const char* to_string(GlobalMode m);

struct ObjectivePolicy {
  GlobalMode mode = GlobalMode::kBuyerOptimal;
  // Used by kPerOperator; operators without an entry maximize revenue.
  std::map<OperatorId, OperatorMode> operator_modes;
  // Consumer-surplus terms become sum of d_s u_s.
  bool demand_weighted = false;
  // Re-optimize operator revenues in ascending id order at the optimum.
  bool tie_break = true;

  static ObjectivePolicy buyer_optimal(bool demand_weighted = false);
  static ObjectivePolicy seller_optimal();
  static ObjectivePolicy per_operator(std::map<OperatorId, OperatorMode> modes);
};

struct OutcomeOptions {
  // p[r][f] equal across every path r for these operators.
  std::set<OperatorId> fixed_fare;
  std::map<LinkKey, double> subsidies;
  // Operators whose cost covers are pooled into one row.
  std::vector<std::vector<OperatorId>> pooled_covers;
};

OutcomeOptions outcome_options_from(const PolicyAnnotations& annotations);

struct OutcomeModel {
  solve::LinearProgram lp;
  std::vector<int> u_var;
  std::vector<int> p_var;
  // Revenue expression per operator as (variable, coefficient).
  std::map<OperatorId, std::vector<std::pair<int, double>>> revenue;
  std::map<OperatorId, double> subsidy;
};

OutcomeModel build_outcome_lp(const ConstraintSystem& system, const ObjectivePolicy& policy,
                              const OutcomeOptions& options = {});

enum class OutcomeStatus { kOptimal, kEmptyCore };

const char* to_string(OutcomeStatus s);

struct OperatorMetrics {
  OperatorId op;
  double revenue = 0.0;
  double operating_cost = 0.0;
  double subsidy = 0.0;
  double profit = 0.0;
  double ridership = 0.0;
  double average_fare = 0.0;
  double min_fare = 0.0;
  double max_fare = 0.0;
};

struct StableOutcome {
  OutcomeStatus status = OutcomeStatus::kEmptyCore;
  std::vector<double> u;
  std::vector<double> p;
  double objective = 0.0;
  std::vector<OperatorMetrics> operators;
  double consumer_surplus = 0.0;
  double total_revenue = 0.0;
  double services_per_traveler = 0.0;
  double max_violation = 0.0;

  const OperatorMetrics* metrics(OperatorId op) const;
};

StableOutcome solve_outcome(const OutcomeModel& model, const ConstraintSystem& system,
                            const ObjectivePolicy& policy,
                            const solve::SolverConfig& config = solve::with_environment({}));

// Builds and solves in one step.
StableOutcome stable_outcome(const ConstraintSystem& system, const ObjectivePolicy& policy,
                             const OutcomeOptions& options = {},
                             const solve::SolverConfig& config = solve::with_environment({}));

bool check_core_nonempty(const ConstraintSystem& system, const OutcomeOptions& options = {},
                         const solve::SolverConfig& config = solve::with_environment({}));

// Largest violation of any emitted row at the given values.
double system_violation(const ConstraintSystem& system, const OutcomeOptions& options,
                        const std::vector<double>& u, const std::vector<double>& p);

void write_outcome_json(std::ostream& out, const ConstraintSystem& system,
                        const StableOutcome& outcome, const std::string& label);
// Operator, Ridership, Revenue, Operating cost, Subsidy, Profit, Avg. fare, Min fare, Max fare
void write_operator_table(std::ostream& out, const StableOutcome& outcome);

}  // namespace maas
