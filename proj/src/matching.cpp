#include "maas/matching.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "maas/error.hpp"

namespace maas {

using solve::kInfinity;
using solve::RowSense;
using solve::SolveStatus;

double MatchingSolution::link_flow(std::size_t link) const {
  double s = 0.0;
  for (const auto& f : flows) s += f[link];
  return s;
}

McndLayout mcnd_layout(const Network& net, const DemandTable& demand) {
  return McndLayout{demand.size(), net.num_links(), net.num_nodes()};
}

solve::MixedIntegerProgram build_mcnd(const Network& net, const DemandTable& demand) {
  demand.check_against(net);
  const McndLayout lay = mcnd_layout(net, demand);
  solve::MixedIntegerProgram mip;
  auto& lp = mip.lp;
  for (std::size_t s = 0; s < lay.num_groups; ++s) {
    for (std::size_t a = 0; a < lay.num_links; ++a) {
      const Link& l = net.link(a);
      lp.add_variable(0.0, kInfinity, l.travel_cost,
                      "x_" + std::to_string(s) + "_" + std::to_string(l.tail) + "_" + std::to_string(l.head));
    }
  }
  for (std::size_t a = 0; a < lay.num_links; ++a) {
    const Link& l = net.link(a);
    mip.binaries.push_back(
        lp.add_variable(0.0, 1.0, l.operating_cost, "y_" + std::to_string(l.tail) + "_" + std::to_string(l.head)));
  }
  for (std::size_t s = 0; s < lay.num_groups; ++s) {
    const std::size_t o = net.node_index(demand[s].origin);
    const std::size_t d = net.node_index(demand[s].destination);
    for (std::size_t v = 0; v < lay.num_nodes; ++v) {
      std::vector<int> idx;
      std::vector<double> val;
      for (std::size_t a : net.out_links(v)) {
        idx.push_back(lay.flow_var(s, a));
        val.push_back(1.0);
      }
      for (std::size_t a : net.in_links(v)) {
        idx.push_back(lay.flow_var(s, a));
        val.push_back(-1.0);
      }
      const double rhs = v == o ? demand[s].demand : v == d ? -demand[s].demand : 0.0;
      lp.add_row(std::move(idx), std::move(val), RowSense::kEqual, rhs,
                 "flow_" + std::to_string(s) + "_" + std::to_string(net.nodes()[v]));
    }
  }
  for (std::size_t a = 0; a < lay.num_links; ++a) {
    const Link& l = net.link(a);
    std::vector<int> idx;
    std::vector<double> val;
    for (std::size_t s = 0; s < lay.num_groups; ++s) {
      idx.push_back(lay.flow_var(s, a));
      val.push_back(1.0);
    }
    idx.push_back(lay.active_var(a));
    val.push_back(-l.capacity);
    lp.add_row(std::move(idx), std::move(val), RowSense::kLessEqual, 0.0,
               "cap_" + std::to_string(l.tail) + "_" + std::to_string(l.head));
  }
  return mip;
}

namespace {

MatchingSolution from_arc_values(const Network& net, const DemandTable& demand,
                                 const std::vector<double>& values, double objective) {
  const McndLayout lay = mcnd_layout(net, demand);
  MatchingSolution sol;
  sol.objective = objective;
  sol.flows.assign(lay.num_groups, std::vector<double>(lay.num_links, 0.0));
  for (std::size_t s = 0; s < lay.num_groups; ++s) {
    for (std::size_t a = 0; a < lay.num_links; ++a) {
      sol.flows[s][a] = std::max(0.0, values[lay.flow_var(s, a)]);
    }
  }
  sol.active.resize(lay.num_links);
  for (std::size_t a = 0; a < lay.num_links; ++a) sol.active[a] = values[lay.active_var(a)] > 0.5 ? 1 : 0;
  return sol;
}

[[noreturn]] void throw_unroutable(const DemandTable& demand, const std::vector<std::size_t>& groups) {
  std::vector<std::pair<int, int>> ods;
  std::string msg = "demand cannot be routed for";
  for (std::size_t s : groups) {
    ods.emplace_back(demand[s].origin, demand[s].destination);
    if (ods.size() <= 10) msg += " " + od_label(demand[s]);
  }
  if (ods.size() > 10) msg += " and " + std::to_string(ods.size() - 10) + " more";
  throw InfeasibleDemandError(msg, std::move(ods));
}

}  // namespace

MatchingSolution solve_matching(const Network& net, const DemandTable& demand,
                                const MatchingOptions& options) {
  demand.check_against(net);
  if (options.method == MatchingMethod::kArcFlow) {
    const auto mip = build_mcnd(net, demand);
    const auto res = solve::solve_milp(mip, options.solver);
    if (res.status == SolveStatus::kInfeasible) throw_unroutable(demand, unroutable_groups(net, demand, options));
    if (res.status != SolveStatus::kOptimal) throw NumericalError("matching MILP is unbounded");
    auto sol = from_arc_values(net, demand, res.values, res.objective);
    sol.nodes = res.nodes;
    return sol;
  }
  auto res = detail::column_generation(net, demand, options, nullptr);
  if (!res.feasible) throw_unroutable(demand, unroutable_groups(net, demand, options));
  return std::move(res.solution);
}

namespace detail {
double duals_perturbation(const DemandTable& demand, const MatchingOptions& options) {
  return options.dual_perturbation * std::max(1.0, demand.total_demand());
}
}  // namespace detail

std::vector<double> extract_duals(const Network& net, const DemandTable& demand,
                                  const std::vector<int>& active, const MatchingOptions& options) {
  if (active.size() != net.num_links()) throw InputError("activation vector has the wrong length");
  if (options.method == MatchingMethod::kArcFlow) {
    auto mip = build_mcnd(net, demand);
    const McndLayout lay = mcnd_layout(net, demand);
    for (std::size_t a = 0; a < lay.num_links; ++a) {
      const double y = active[a] ? 1.0 : 0.0;
      mip.lp.set_bounds(lay.active_var(a), y, y);
    }
    const double eps = detail::duals_perturbation(demand, options);
    solve::LinearProgram lp;
    lp.set_sense(mip.lp.sense());
    for (const auto& v : mip.lp.variables()) lp.add_variable(v.lower, v.upper, v.cost, v.name);
    for (std::size_t i = 0; i < mip.lp.num_rows(); ++i) {
      const auto& row = mip.lp.row(i);
      const bool cap = static_cast<int>(i) >= lay.capacity_row(0);
      const bool on = cap && active[i - lay.capacity_row(0)];
      lp.add_row(row.index, row.value, row.sense, on ? row.rhs + eps : row.rhs, row.name);
    }
    if (solve::solve_lp(mip.lp, options.solver).status != SolveStatus::kOptimal) {
      throw InputError("the activation vector cannot carry the demand");
    }
    const auto res = solve::solve_lp(lp, options.solver);
    if (res.status != SolveStatus::kOptimal) throw NumericalError("perturbed routing LP not optimal");
    std::vector<double> mu(lay.num_links, 0.0);
    for (std::size_t a = 0; a < lay.num_links; ++a) {
      if (active[a]) mu[a] = std::max(0.0, -res.row_duals[lay.capacity_row(a)]);
    }
    return mu;
  }
  auto res = detail::column_generation(net, demand, options, &active);
  if (!res.feasible) throw InputError("the activation vector cannot carry the demand");
  return res.mu;
}

std::vector<std::size_t> unroutable_groups(const Network& net, const DemandTable& demand,
                                           const MatchingOptions& options) {
  const std::vector<int> all(net.num_links(), 1);
  auto res = detail::column_generation(net, demand, options, &all);
  if (res.feasible) return {};
  // Groups with no path at all are reported first; the rest are rechecked for capacity.
  std::vector<bool> bad(demand.size(), false);
  for (std::size_t s : res.unroutable) bad[s] = true;
  std::vector<DemandEntry> rest;
  std::vector<std::size_t> back;
  for (std::size_t s = 0; s < demand.size(); ++s) {
    if (!bad[s]) {
      rest.push_back(demand[s]);
      back.push_back(s);
    }
  }
  if (!rest.empty() && rest.size() < demand.size()) {
    const DemandTable sub(rest);
    for (std::size_t t : unroutable_groups(net, sub, options)) {
      const auto s = sub[t];
      for (std::size_t k = 0; k < back.size(); ++k) {
        if (demand[back[k]].origin == s.origin && demand[back[k]].destination == s.destination) bad[back[k]] = true;
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < demand.size(); ++s) {
    if (bad[s]) out.push_back(s);
  }
  return out;
}

namespace {

// Removes flow around directed cycles; DFS starts from the smallest node and
// scans out-links by head.
void cancel_cycles(const Network& net, std::vector<double>& f, double eps) {
  const std::size_t n = net.num_nodes();
  for (;;) {
    std::vector<int> color(n, 0);
    std::vector<std::size_t> stack_links;
    std::vector<std::size_t> cycle;
    auto dfs = [&](auto&& self, std::size_t v) -> bool {
      color[v] = 1;
      for (std::size_t a : net.out_links(v)) {
        if (f[a] <= eps) continue;
        const std::size_t h = net.head_pos(a);
        if (color[h] == 1) {
          cycle.push_back(a);
          for (auto it = stack_links.rbegin(); it != stack_links.rend(); ++it) {
            if (net.head_pos(*it) == h) break;
            cycle.push_back(*it);
          }
          return true;
        }
        if (color[h] == 0) {
          stack_links.push_back(a);
          if (self(self, h)) return true;
          stack_links.pop_back();
        }
      }
      color[v] = 2;
      return false;
    };
    bool found = false;
    for (std::size_t v = 0; v < n && !found; ++v) {
      if (color[v] == 0) found = dfs(dfs, v);
    }
    if (!found) return;
    double m = kInfinity;
    for (std::size_t a : cycle) m = std::min(m, f[a]);
    for (std::size_t a : cycle) {
      f[a] -= m;
      if (f[a] <= eps) f[a] = 0.0;
    }
  }
}

}  // namespace

PathFlowSolution decompose_flows(const Network& net, const DemandTable& demand,
                                 const MatchingSolution& solution, std::vector<double> mu) {
  PathFlowSolution out;
  out.mu = std::move(mu);
  for (std::size_t s = 0; s < demand.size(); ++s) {
    const double eps = 1e-9 * (1.0 + demand[s].demand);
    std::vector<double> f = solution.flows[s];
    for (double& v : f) {
      if (v <= eps) v = 0.0;
    }
    cancel_cycles(net, f, eps);
    const std::size_t o = net.node_index(demand[s].origin);
    const std::size_t d = net.node_index(demand[s].destination);
    for (;;) {
      Path p;
      p.nodes.push_back(net.nodes()[o]);
      std::size_t v = o;
      std::vector<char> seen(net.num_nodes(), 0);
      seen[o] = 1;
      bool ok = true;
      while (v != d) {
        std::size_t next = net.num_links();
        for (std::size_t a : net.out_links(v)) {
          if (f[a] > eps && !seen[net.head_pos(a)]) {
            next = a;
            break;
          }
        }
        if (next == net.num_links()) {
          ok = false;
          break;
        }
        p.links.push_back(next);
        v = net.head_pos(next);
        seen[v] = 1;
        p.nodes.push_back(net.nodes()[v]);
      }
      if (!ok || p.links.empty()) break;
      double z = kInfinity;
      for (std::size_t a : p.links) z = std::min(z, f[a]);
      for (std::size_t a : p.links) {
        f[a] -= z;
        if (f[a] <= eps) f[a] = 0.0;
      }
      if (z > 1e-6) out.paths.push_back(PathFlow{s, std::move(p), z});
    }
  }
  return out;
}

double conservation_residual(const Network& net, const DemandTable& demand,
                             const MatchingSolution& solution) {
  double worst = 0.0;
  for (std::size_t s = 0; s < demand.size(); ++s) {
    const std::size_t o = net.node_index(demand[s].origin);
    const std::size_t d = net.node_index(demand[s].destination);
    for (std::size_t v = 0; v < net.num_nodes(); ++v) {
      double bal = 0.0;
      for (std::size_t a : net.out_links(v)) bal += solution.flows[s][a];
      for (std::size_t a : net.in_links(v)) bal -= solution.flows[s][a];
      const double rhs = v == o ? demand[s].demand : v == d ? -demand[s].demand : 0.0;
      worst = std::max(worst, std::abs(bal - rhs));
    }
  }
  return worst;
}

double capacity_residual(const Network& net, const MatchingSolution& solution) {
  double worst = 0.0;
  for (std::size_t a = 0; a < net.num_links(); ++a) {
    const double cap = solution.active[a] ? net.link(a).capacity : 0.0;
    worst = std::max(worst, solution.link_flow(a) - cap);
  }
  return worst;
}

double recomputed_objective(const Network& net, const MatchingSolution& solution) {
  double obj = 0.0;
  for (std::size_t a = 0; a < net.num_links(); ++a) {
    obj += net.link(a).travel_cost * solution.link_flow(a);
    if (solution.active[a]) obj += net.link(a).operating_cost;
  }
  return obj;
}

void write_link_flows(std::ostream& out, const Network& net, const MatchingSolution& solution) {
  out << "Link,Flow\n";
  for (std::size_t a = 0; a < net.num_links(); ++a) {
    const Link& l = net.link(a);
    out << "\"(" << l.tail << ", " << l.head << ")" << (l.owner == kPlatformOperator ? "*" : "")
        << "\"," << format_number(solution.link_flow(a)) << "\n";
  }
}

void write_commodity_flows(std::ostream& out, const Network& net, const DemandTable& demand,
                           const MatchingSolution& solution) {
  out << "origin,destination,tail,head,flow\n";
  for (std::size_t s = 0; s < demand.size(); ++s) {
    for (std::size_t a = 0; a < net.num_links(); ++a) {
      if (solution.flows[s][a] <= 0.0) continue;
      out << demand[s].origin << "," << demand[s].destination << "," << net.link(a).tail << ","
          << net.link(a).head << "," << format_number(solution.flows[s][a]) << "\n";
    }
  }
}

void write_link_duals(std::ostream& out, const Network& net, const MatchingSolution& solution,
                      const std::vector<double>& mu) {
  out << "tail,head,owner,y,mu\n";
  for (std::size_t a = 0; a < net.num_links(); ++a) {
    const Link& l = net.link(a);
    out << l.tail << "," << l.head << "," << l.owner.value << "," << solution.active[a] << ","
        << format_number(a < mu.size() ? mu[a] : 0.0) << "\n";
  }
}

void write_path_flows(std::ostream& out, const Network& net, const DemandTable& demand,
                      const PathFlowSolution& paths) {
  out << "origin,destination,path,flow,travel_cost\n";
  for (const auto& pf : paths.paths) {
    out << demand[pf.group].origin << "," << demand[pf.group].destination << ",\""
        << to_string(pf.path) << "\"," << format_number(pf.flow) << ","
        << format_number(path_travel_cost(net, pf.path)) << "\n";
  }
}

}  // namespace maas
