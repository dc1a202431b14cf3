#include "maas/outcomes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "maas/error.hpp"

namespace maas {

using nlohmann::json;
using solve::kInfinity;
using solve::RowSense;
using solve::SolveStatus;

const char* to_string(GlobalMode m) {
  switch (m) {
    case GlobalMode::kBuyerOptimal: return "buyer_optimal";
    case GlobalMode::kSellerOptimal: return "seller_optimal";
    case GlobalMode::kPerOperator: return "per_operator";
  }
  return "?";
}

const char* to_string(OutcomeStatus s) {
  return s == OutcomeStatus::kOptimal ? "optimal" : "empty_core";
}

ObjectivePolicy ObjectivePolicy::buyer_optimal(bool demand_weighted) {
  ObjectivePolicy p;
  p.mode = GlobalMode::kBuyerOptimal;
  p.demand_weighted = demand_weighted;
  return p;
}

ObjectivePolicy ObjectivePolicy::seller_optimal() {
  ObjectivePolicy p;
  p.mode = GlobalMode::kSellerOptimal;
  return p;
}

ObjectivePolicy ObjectivePolicy::per_operator(std::map<OperatorId, OperatorMode> modes) {
  ObjectivePolicy p;
  p.mode = GlobalMode::kPerOperator;
  p.operator_modes = std::move(modes);
  return p;
}

OutcomeOptions outcome_options_from(const PolicyAnnotations& annotations) {
  OutcomeOptions o;
  o.fixed_fare = annotations.fixed_fare;
  o.subsidies = annotations.subsidies;
  return o;
}

const OperatorMetrics* StableOutcome::metrics(OperatorId op) const {
  for (const auto& m : operators) {
    if (m.op == op) return &m;
  }
  return nullptr;
}

namespace {

std::map<OperatorId, double> subsidy_totals(const ConstraintSystem& cs, const OutcomeOptions& options) {
  std::map<OperatorId, double> out;
  for (const auto& [key, gamma] : options.subsidies) {
    const auto a = cs.network.find_link(key.tail, key.head);
    if (!a) throw InputError("subsidy on unknown link " + to_string(key));
    const Link& l = cs.network.link(*a);
    if (gamma < 0 || gamma > l.operating_cost) {
      throw InputError("subsidy on " + to_string(key) + " must lie in [0, operating cost]");
    }
    if (cs.active[*a]) out[l.owner] += gamma;
  }
  return out;
}

// Cover groups: pooled sets first, then every remaining operator alone.
std::vector<std::vector<OperatorId>> cover_groups(const ConstraintSystem& cs, const OutcomeOptions& options) {
  std::vector<std::vector<OperatorId>> groups;
  std::set<OperatorId> used;
  for (const auto& g : options.pooled_covers) {
    std::vector<OperatorId> members;
    for (OperatorId f : g) {
      if (f == kPlatformOperator) throw InputError("operator 0 cannot join a pooled cover");
      if (!used.insert(f).second) throw InputError("operator " + std::to_string(f.value) + " pooled twice");
      members.push_back(f);
    }
    if (!members.empty()) groups.push_back(std::move(members));
  }
  for (const auto& oc : cs.costs) {
    if (!used.count(oc.op)) groups.push_back({oc.op});
  }
  return groups;
}

}  // namespace

OutcomeModel build_outcome_lp(const ConstraintSystem& cs, const ObjectivePolicy& policy,
                              const OutcomeOptions& options) {
  OutcomeModel m;
  auto& lp = m.lp;
  lp.set_sense(solve::ObjectiveSense::kMaximize);
  for (std::size_t s = 0; s < cs.demand.size(); ++s) {
    m.u_var.push_back(lp.add_variable(0.0, kInfinity, 0.0, cs.variable_name_u(s)));
  }
  for (std::size_t k = 0; k < cs.prices.size(); ++k) {
    const auto& pv = cs.prices[k];
    if (pv.path >= cs.paths.size() || pv.op == kPlatformOperator) {
      throw InputError("price variable references an unknown path or operator 0");
    }
    m.p_var.push_back(lp.add_variable(0.0, kInfinity, 0.0, cs.variable_name_p(k)));
    const double z = cs.paths[pv.path].flow;
    if (z > 0.0) m.revenue[pv.op].emplace_back(m.p_var.back(), z);
  }
  for (const auto& oc : cs.costs) m.revenue.try_emplace(oc.op);

  for (std::size_t r = 0; r < cs.paths.size(); ++r) {
    const auto& rp = cs.paths[r];
    std::vector<int> idx{m.u_var[rp.group]};
    std::vector<double> val{1.0};
    for (std::size_t k : cs.prices_of_path(r)) {
      idx.push_back(m.p_var[k]);
      val.push_back(1.0);
    }
    lp.add_row(std::move(idx), std::move(val), RowSense::kEqual,
               cs.demand[rp.group].utility - rp.travel_cost, "feas_" + std::to_string(r));
  }

  m.subsidy = subsidy_totals(cs, options);
  std::map<OperatorId, double> cost;
  for (const auto& oc : cs.costs) cost[oc.op] = oc.operating_cost;
  for (const auto& g : cover_groups(cs, options)) {
    std::vector<int> idx;
    std::vector<double> val;
    double rhs = 0.0;
    for (OperatorId f : g) {
      rhs += cost[f] - (m.subsidy.count(f) ? m.subsidy[f] : 0.0);
      for (const auto& [v, z] : m.revenue[f]) {
        idx.push_back(v);
        val.push_back(z);
      }
    }
    lp.add_row(std::move(idx), std::move(val), RowSense::kGreaterEqual, rhs,
               "cover_" + std::to_string(g.front().value));
  }

  for (std::size_t i = 0; i < cs.stability.size(); ++i) {
    const auto& row = cs.stability[i];
    std::vector<int> idx{m.u_var[row.group]};
    std::vector<double> val{1.0};
    for (std::size_t k : row.prices) {
      if (k >= m.p_var.size()) throw InputError("stability row references an unknown price");
      idx.push_back(m.p_var[k]);
      val.push_back(1.0);
    }
    lp.add_row(std::move(idx), std::move(val), RowSense::kGreaterEqual, row.bound,
               "stab_" + std::to_string(i));
  }

  for (OperatorId f : options.fixed_fare) {
    int first = -1;
    for (std::size_t k = 0; k < cs.prices.size(); ++k) {
      if (cs.prices[k].op != f) continue;
      if (first < 0) {
        first = m.p_var[k];
        continue;
      }
      lp.add_row({m.p_var[k], first}, {1.0, -1.0}, RowSense::kEqual, 0.0,
                 "fare_" + std::to_string(f.value) + "_" + std::to_string(k));
    }
  }

  auto add_surplus = [&](double scale) {
    for (std::size_t s = 0; s < cs.demand.size(); ++s) {
      const double w = policy.demand_weighted ? cs.demand[s].demand : 1.0;
      lp.set_cost(m.u_var[s], lp.variable(m.u_var[s]).cost + scale * w);
    }
  };
  auto add_revenue = [&](OperatorId f) {
    for (const auto& [v, z] : m.revenue[f]) lp.set_cost(v, lp.variable(v).cost + z);
  };
  switch (policy.mode) {
    case GlobalMode::kBuyerOptimal:
      add_surplus(1.0);
      break;
    case GlobalMode::kSellerOptimal:
      for (const auto& [f, terms] : m.revenue) add_revenue(f);
      break;
    case GlobalMode::kPerOperator: {
      bool welfare = false;
      for (const auto& [f, terms] : m.revenue) {
        auto it = policy.operator_modes.find(f);
        if (it != policy.operator_modes.end() && it->second == OperatorMode::kWelfareMax) {
          welfare = true;
        } else {
          add_revenue(f);
        }
      }
      if (welfare) add_surplus(1.0);
      break;
    }
  }
  return m;
}

StableOutcome solve_outcome(const OutcomeModel& model, const ConstraintSystem& cs,
                            const ObjectivePolicy& policy, const solve::SolverConfig& config) {
  StableOutcome out;
  auto res = solve::solve_lp(model.lp, config);
  if (res.status == SolveStatus::kInfeasible) return out;
  if (res.status == SolveStatus::kUnbounded) throw InternalError("stable outcome LP is unbounded");
  const double primary = res.objective;

  if (policy.tie_break) {
    solve::LinearProgram lp = model.lp;
    std::vector<int> idx;
    std::vector<double> val;
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
      if (lp.variable(j).cost != 0.0) {
        idx.push_back(static_cast<int>(j));
        val.push_back(lp.variable(j).cost);
      }
    }
    if (!idx.empty()) lp.add_row(idx, val, RowSense::kEqual, primary, "primary");
    for (const auto& [f, terms] : model.revenue) {
      if (terms.empty()) continue;
      for (std::size_t j = 0; j < lp.num_variables(); ++j) lp.set_cost(static_cast<int>(j), 0.0);
      std::vector<int> ridx;
      std::vector<double> rval;
      for (const auto& [v, z] : terms) {
        lp.set_cost(v, z);
        ridx.push_back(v);
        rval.push_back(z);
      }
      auto step = solve::solve_lp(lp, config);
      if (step.status != SolveStatus::kOptimal) break;
      res = step;
      lp.add_row(ridx, rval, RowSense::kEqual, step.objective, "tie_" + std::to_string(f.value));
    }
  }

  out.status = OutcomeStatus::kOptimal;
  const auto& x = res.values;
  for (int v : model.u_var) out.u.push_back(std::max(0.0, x[v]));
  for (int v : model.p_var) out.p.push_back(std::max(0.0, x[v]));
  out.objective = model.lp.objective_value(x);
  out.max_violation = model.lp.max_violation(x);

  std::map<OperatorId, OperatorMetrics> ops;
  for (const auto& oc : cs.costs) {
    auto& m = ops[oc.op];
    m.op = oc.op;
    m.operating_cost = oc.operating_cost;
  }
  for (const auto& [f, g] : model.subsidy) ops[f].subsidy = g;
  std::map<OperatorId, std::pair<double, double>> fare_range;
  for (std::size_t k = 0; k < cs.prices.size(); ++k) {
    const auto& pv = cs.prices[k];
    const double z = cs.paths[pv.path].flow;
    auto& m = ops[pv.op];
    m.op = pv.op;
    if (z <= 0.0) continue;
    m.revenue += out.p[k] * z;
    m.ridership += z;
    auto [it, fresh] = fare_range.try_emplace(pv.op, out.p[k], out.p[k]);
    if (!fresh) {
      it->second.first = std::min(it->second.first, out.p[k]);
      it->second.second = std::max(it->second.second, out.p[k]);
    }
  }
  for (auto& [f, m] : ops) {
    m.profit = m.revenue - m.operating_cost + m.subsidy;
    if (m.ridership > 0) m.average_fare = m.revenue / m.ridership;
    if (auto it = fare_range.find(f); it != fare_range.end()) {
      m.min_fare = it->second.first;
      m.max_fare = it->second.second;
    }
    out.total_revenue += m.revenue;
    out.operators.push_back(m);
  }
  double riders = 0.0;
  double services = 0.0;
  for (const auto& rp : cs.paths) {
    riders += rp.flow;
    services += rp.flow * static_cast<double>(rp.operators.size());
  }
  if (riders > 0) out.services_per_traveler = services / riders;
  for (std::size_t s = 0; s < cs.demand.size(); ++s) out.consumer_surplus += cs.demand[s].demand * out.u[s];
  return out;
}

StableOutcome stable_outcome(const ConstraintSystem& system, const ObjectivePolicy& policy,
                             const OutcomeOptions& options, const solve::SolverConfig& config) {
  return solve_outcome(build_outcome_lp(system, policy, options), system, policy, config);
}

bool check_core_nonempty(const ConstraintSystem& system, const OutcomeOptions& options,
                         const solve::SolverConfig& config) {
  auto model = build_outcome_lp(system, ObjectivePolicy::buyer_optimal(), options);
  for (std::size_t j = 0; j < model.lp.num_variables(); ++j) model.lp.set_cost(static_cast<int>(j), 0.0);
  return solve::solve_lp(model.lp, config).status == SolveStatus::kOptimal;
}

double system_violation(const ConstraintSystem& system, const OutcomeOptions& options,
                        const std::vector<double>& u, const std::vector<double>& p) {
  const auto model = build_outcome_lp(system, ObjectivePolicy::buyer_optimal(), options);
  std::vector<double> x(model.lp.num_variables(), 0.0);
  for (std::size_t s = 0; s < u.size(); ++s) x[model.u_var[s]] = u[s];
  for (std::size_t k = 0; k < p.size(); ++k) x[model.p_var[k]] = p[k];
  return model.lp.max_violation(x);
}

void write_outcome_json(std::ostream& out, const ConstraintSystem& cs, const StableOutcome& o,
                        const std::string& label) {
  json j;
  j["policy"] = label;
  j["status"] = to_string(o.status);
  if (o.status == OutcomeStatus::kOptimal) {
    j["objective"] = o.objective;
    j["consumer_surplus"] = o.consumer_surplus;
    j["total_revenue"] = o.total_revenue;
    j["services_per_traveler"] = o.services_per_traveler;
    j["max_violation"] = o.max_violation;
    j["surplus"] = json::array();
    for (std::size_t s = 0; s < o.u.size(); ++s) {
      j["surplus"].push_back({{"origin", cs.demand[s].origin}, {"destination", cs.demand[s].destination}, {"u", o.u[s]}});
    }
    j["prices"] = json::array();
    for (std::size_t k = 0; k < o.p.size(); ++k) {
      const auto& pv = cs.prices[k];
      j["prices"].push_back({{"path", cs.paths[pv.path].path.nodes}, {"operator", pv.op.value},
                             {"price", o.p[k]}, {"flow", cs.paths[pv.path].flow}});
    }
    j["operators"] = json::array();
    for (const auto& m : o.operators) {
      j["operators"].push_back({{"operator", m.op.value}, {"revenue", m.revenue},
                                {"operating_cost", m.operating_cost}, {"subsidy", m.subsidy},
                                {"profit", m.profit}, {"ridership", m.ridership},
                                {"average_fare", m.average_fare}, {"min_fare", m.min_fare},
                                {"max_fare", m.max_fare}});
    }
  }
  out << j.dump(2) << "\n";
}

void write_operator_table(std::ostream& out, const StableOutcome& o) {
  out << "Operator,Ridership,Revenue,Operating cost,Subsidy,Profit,Avg. fare,Min fare,Max fare\n";
  for (const auto& m : o.operators) {
    out << m.op.value << "," << format_number(m.ridership) << "," << format_number(m.revenue) << ","
        << format_number(m.operating_cost) << "," << format_number(m.subsidy) << ","
        << format_number(m.profit) << "," << format_number(m.average_fare) << ","
        << format_number(m.min_fare) << "," << format_number(m.max_fare) << "\n";
  }
}

}  // namespace maas
