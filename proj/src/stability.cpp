#include "maas/stability.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include <json.hpp>

#include "maas/error.hpp"

namespace maas {

using nlohmann::json;

MatchingArtifacts solve_matching_artifacts(const Network& net, const DemandTable& demand,
                                           const MatchingOptions& options) {
  MatchingArtifacts a;
  a.solution = solve_matching(net, demand, options);
  a.mu = extract_duals(net, demand, a.solution.active, options);
  a.decomposition = decompose_flows(net, demand, a.solution, a.mu);
  return a;
}

std::vector<double> omega_weights(const Network& net, const std::vector<double>& mu,
                                  const std::vector<int>& active) {
  std::vector<double> w(net.num_links());
  for (std::size_t a = 0; a < w.size(); ++a) {
    const Link& l = net.link(a);
    w[a] = l.travel_cost + (a < mu.size() ? mu[a] : 0.0) + (active[a] ? 0.0 : l.operating_cost);
  }
  return w;
}

double omega(const Network& net, const Path& path, const std::vector<double>& mu,
             const std::vector<int>& active) {
  return path_weight(path, omega_weights(net, mu, active));
}

std::vector<OptimalPathSet> optimal_path_sets(const Network& net, const DemandTable& demand,
                                              const MatchingArtifacts& artifacts,
                                              const StabilityOptions& options) {
  const auto w = omega_weights(net, artifacts.mu, artifacts.solution.active);
  std::vector<OptimalPathSet> out;
  for (std::size_t s = 0; s < demand.size(); ++s) {
    OptimalPathSet set;
    set.group = s;
    auto list = near_shortest_paths(net, demand[s].origin, demand[s].destination, w,
                                    options.tie_tolerance, options.optimal_path_cap);
    if (list.paths.empty()) throw InputError("no path for OD " + od_label(demand[s]));
    set.paths = std::move(list.paths);
    set.truncated = list.truncated;
    set.omega = path_weight(set.paths.front(), w);
    for (const Path& p : set.paths) set.omega = std::min(set.omega, path_weight(p, w));
    for (const auto& pf : artifacts.decomposition.paths) {
      if (pf.group != s) continue;
      const double om = path_weight(pf.path, w);
      if (om > set.omega + options.tie_tolerance) {
        throw NumericalError("flow path " + to_string(pf.path) + " of OD " + od_label(demand[s]) +
                             " is not omega-minimal");
      }
      if (std::find(set.paths.begin(), set.paths.end(), pf.path) == set.paths.end()) {
        set.paths.push_back(pf.path);
      }
    }
    std::sort(set.paths.begin(), set.paths.end());
    std::set<OperatorId> ops;
    for (const Path& p : set.paths) {
      for (OperatorId f : path_operators(net, p)) ops.insert(f);
    }
    set.operators.assign(ops.begin(), ops.end());
    out.push_back(std::move(set));
  }
  return out;
}

std::vector<std::vector<OperatorId>> subcoalitions(const std::vector<OperatorId>& operators) {
  std::vector<OperatorId> ops = operators;
  std::sort(ops.begin(), ops.end());
  ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
  if (ops.size() > 12) {
    throw ResourceLimitError("more than 2^12 subcoalitions over " + std::to_string(ops.size()) +
                             " operators");
  }
  std::vector<std::vector<OperatorId>> out;
  const std::size_t n = ops.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<OperatorId> sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) sub.push_back(ops[i]);
    }
    out.push_back(std::move(sub));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

namespace {

GraphMask coalition_mask(const Network& net, const std::vector<OperatorId>& coalition) {
  GraphMask m;
  m.link_ok.assign(net.num_links(), 1);
  for (std::size_t a = 0; a < net.num_links(); ++a) {
    if (std::binary_search(coalition.begin(), coalition.end(), net.link(a).owner)) m.link_ok[a] = 0;
  }
  return m;
}

std::vector<OperatorId> intersect(const std::vector<OperatorId>& a, const std::vector<OperatorId>& b) {
  std::vector<OperatorId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct Skeleton {
  ConstraintSystem system;
  std::vector<OptimalPathSet> sets;
  // Global path indices per group.
  std::vector<std::vector<std::size_t>> group_paths;
  std::vector<double> weights;
};

Skeleton build_skeleton(const Network& net, const DemandTable& demand,
                        const MatchingArtifacts& artifacts, const StabilityOptions& options) {
  Skeleton sk;
  sk.sets = optimal_path_sets(net, demand, artifacts, options);
  sk.weights = omega_weights(net, artifacts.mu, artifacts.solution.active);
  ConstraintSystem& cs = sk.system;
  cs.network = net;
  cs.demand = demand;
  cs.active = artifacts.solution.active;
  sk.group_paths.resize(demand.size());
  for (const auto& set : sk.sets) {
    for (const Path& p : set.paths) {
      RoutedPath rp;
      rp.group = set.group;
      rp.path = p;
      rp.travel_cost = path_travel_cost(net, p);
      rp.operators = path_operators(net, p);
      for (const auto& pf : artifacts.decomposition.paths) {
        if (pf.group == set.group && pf.path == p) rp.flow += pf.flow;
      }
      sk.group_paths[set.group].push_back(cs.paths.size());
      for (OperatorId f : rp.operators) cs.prices.push_back(PriceVariable{cs.paths.size(), f});
      cs.paths.push_back(std::move(rp));
    }
  }
  std::set<OperatorId> priced;
  for (const auto& pv : cs.prices) priced.insert(pv.op);
  for (OperatorId f : net.operators()) {
    if (f == kPlatformOperator) continue;
    OperatorCost oc;
    oc.op = f;
    for (std::size_t a : net.links_of(f)) {
      if (!cs.active[a]) continue;
      oc.links.push_back(a);
      oc.operating_cost += net.link(a).operating_cost;
    }
    if (!oc.links.empty() || priced.count(f)) cs.costs.push_back(std::move(oc));
  }
  return sk;
}

StabilityRow make_row(const ConstraintSystem& cs, std::size_t group, std::size_t anchor,
                      std::vector<OperatorId> coalition, const Path& alt, double alt_omega) {
  StabilityRow row;
  row.group = group;
  row.anchor = anchor;
  row.coalition = std::move(coalition);
  row.alternative = alt;
  row.alternative_omega = alt_omega;
  row.bound = cs.demand[group].utility - alt_omega;
  const auto shared = intersect(cs.paths[anchor].operators, path_operators(cs.network, alt));
  for (std::size_t k : cs.prices_of_path(anchor)) {
    if (std::binary_search(shared.begin(), shared.end(), cs.prices[k].op)) row.prices.push_back(k);
  }
  return row;
}

}  // namespace

std::optional<Path> excluded_shortest_path(const Network& net, const DemandEntry& group,
                                           const std::vector<OperatorId>& coalition,
                                           const std::vector<double>& weights) {
  std::vector<OperatorId> sorted = coalition;
  std::sort(sorted.begin(), sorted.end());
  return shortest_path(net, group.origin, group.destination, weights, coalition_mask(net, sorted));
}

std::vector<std::size_t> ConstraintSystem::prices_of_path(std::size_t path) const {
  std::vector<std::size_t> out;
  auto it = std::lower_bound(prices.begin(), prices.end(), path,
                             [](const PriceVariable& v, std::size_t p) { return v.path < p; });
  for (; it != prices.end() && it->path == path; ++it) out.push_back(static_cast<std::size_t>(it - prices.begin()));
  return out;
}

std::string ConstraintSystem::variable_name_u(std::size_t group) const {
  return "u[" + od_label(demand[group]) + "]";
}

std::string ConstraintSystem::variable_name_p(std::size_t price) const {
  const auto& v = prices[price];
  return "p[" + to_string(paths[v.path].path) + "][" + std::to_string(v.op.value) + "]";
}

ConstraintSystem generate_constraints_algorithm1(const Network& net, const DemandTable& demand,
                                                 const MatchingArtifacts& artifacts,
                                                 const StabilityOptions& options) {
  Skeleton sk = build_skeleton(net, demand, artifacts, options);
  ConstraintSystem& cs = sk.system;
  std::vector<StabilityRow> rows;
  for (const auto& set : sk.sets) {
    const std::size_t s = set.group;
    const double limit = set.omega + options.tie_tolerance;
    for (auto& pi : subcoalitions(set.operators)) {
      const GraphMask mask = coalition_mask(net, pi);
      auto alt = shortest_path(net, demand[s].origin, demand[s].destination, sk.weights, mask);
      if (!alt) continue;
      double om = path_weight(*alt, sk.weights);
      if (om <= limit) {
        if (options.literal_skip) continue;
        KShortestPaths ksp(net, demand[s].origin, demand[s].destination, sk.weights, mask);
        alt.reset();
        while (auto p = ksp.next()) {
          om = path_weight(*p, sk.weights);
          if (om > limit) {
            alt = std::move(p);
            break;
          }
        }
        if (!alt) continue;
      }
      for (std::size_t r : sk.group_paths[s]) rows.push_back(make_row(cs, s, r, pi, *alt, om));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const StabilityRow& a, const StabilityRow& b) {
    return std::tie(a.group, a.anchor) < std::tie(b.group, b.anchor);
  });
  // Rows over the same price terms: keep the strongest, first on ties.
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> best;
  std::vector<char> keep(rows.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto key = std::make_pair(rows[i].group, rows[i].prices);
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(std::move(key), i);
      keep[i] = 1;
    } else if (rows[i].bound > rows[it->second].bound + 1e-12) {
      keep[it->second] = 0;
      keep[i] = 1;
      it->second = i;
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (keep[i]) cs.stability.push_back(std::move(rows[i]));
  }
  return std::move(cs);
}

ConstraintSystem generate_constraints_enumeration(const Network& net, const DemandTable& demand,
                                                  const MatchingArtifacts& artifacts,
                                                  const StabilityOptions& options) {
  Skeleton sk = build_skeleton(net, demand, artifacts, options);
  ConstraintSystem& cs = sk.system;
  for (const auto& set : sk.sets) {
    const std::size_t s = set.group;
    const auto all = enumerate_simple_paths(net, demand[s].origin, demand[s].destination,
                                            options.enumeration_cap);
    for (std::size_t r : sk.group_paths[s]) {
      for (const Path& alt : all) {
        if (std::binary_search(set.paths.begin(), set.paths.end(), alt)) continue;
        cs.stability.push_back(make_row(cs, s, r, {}, alt, path_weight(alt, sk.weights)));
      }
    }
  }
  return std::move(cs);
}

namespace {

std::string term(double coef, const std::string& name) {
  if (coef == 1.0) return name;
  return format_number(coef) + " " + name;
}

}  // namespace

void write_constraint_text(std::ostream& out, const ConstraintSystem& cs) {
  out << "# feasibility\n";
  for (std::size_t r = 0; r < cs.paths.size(); ++r) {
    const auto& rp = cs.paths[r];
    std::string line = cs.variable_name_u(rp.group);
    for (std::size_t k : cs.prices_of_path(r)) line += " + " + cs.variable_name_p(k);
    out << line << " = " << format_number(cs.demand[rp.group].utility - rp.travel_cost) << "\n";
  }
  out << "# operator costs\n";
  for (const auto& oc : cs.costs) {
    std::string line;
    for (std::size_t k = 0; k < cs.prices.size(); ++k) {
      if (cs.prices[k].op != oc.op) continue;
      const double z = cs.paths[cs.prices[k].path].flow;
      if (z <= 0.0) continue;
      line += (line.empty() ? "" : " + ") + term(z, cs.variable_name_p(k));
    }
    out << (line.empty() ? "0" : line) << " >= " << format_number(oc.operating_cost) << "\n";
  }
  out << "# stability\n";
  for (const auto& row : cs.stability) {
    std::string line = cs.variable_name_u(row.group);
    for (std::size_t k : row.prices) line += " + " + cs.variable_name_p(k);
    out << line << " >= " << format_number(row.bound) << "\n";
  }
  out << "# bounds: all u and p are non-negative\n";
}

void write_constraint_json(std::ostream& out, const ConstraintSystem& cs) {
  json j;
  j["groups"] = json::array();
  for (const auto& e : cs.demand.entries()) {
    j["groups"].push_back({{"origin", e.origin}, {"destination", e.destination}, {"demand", e.demand},
                           {"utility", e.utility}});
  }
  j["paths"] = json::array();
  for (const auto& rp : cs.paths) {
    json ops = json::array();
    for (OperatorId f : rp.operators) ops.push_back(f.value);
    j["paths"].push_back({{"group", rp.group}, {"nodes", rp.path.nodes}, {"flow", rp.flow},
                          {"travel_cost", rp.travel_cost}, {"operators", ops}});
  }
  j["prices"] = json::array();
  for (const auto& pv : cs.prices) j["prices"].push_back({{"path", pv.path}, {"operator", pv.op.value}});
  j["operator_costs"] = json::array();
  for (const auto& oc : cs.costs) {
    json links = json::array();
    for (std::size_t a : oc.links) links.push_back({cs.network.link(a).tail, cs.network.link(a).head});
    j["operator_costs"].push_back({{"operator", oc.op.value}, {"links", links}, {"operating_cost", oc.operating_cost}});
  }
  j["stability"] = json::array();
  for (const auto& row : cs.stability) {
    json coal = json::array();
    for (OperatorId f : row.coalition) coal.push_back(f.value);
    j["stability"].push_back({{"group", row.group}, {"anchor", row.anchor}, {"coalition", coal},
                              {"alternative", row.alternative.nodes}, {"omega", row.alternative_omega},
                              {"bound", row.bound}, {"prices", row.prices}});
  }
  out << j.dump(2) << "\n";
}

}  // namespace maas
