#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "maas/error.hpp"
#include "maas/matching.hpp"
#include "maas/solve/branch_and_bound.hpp"
#include "maas/solve/simplex.hpp"

namespace maas::detail {

namespace {

using solve::kInfinity;
using solve::SimplexSolver;
using solve::SolveStatus;

// Path-flow master over z_r (path flows), Y_a = w_a y_a and one artificial per
// group:
//   sum_r z_r + art_s = d_s                     (per group)
//   sum_{r through a} z_r - Y_a <= 0            (per link)
//   sum_{r of s through a} z_r - (d_s/w_a) Y_a <= 0   (optional, added lazily)
class PathMaster {
 public:
  PathMaster(const Network& net, const DemandTable& demand, const MatchingOptions& options,
             bool cuts)
      : net_(net), demand_(demand), options_(options), cuts_(cuts), lp_(options.solver.simplex) {
    const std::size_t groups = demand.size();
    const std::size_t links = net.num_links();
    for (std::size_t s = 0; s < groups; ++s) lp_.add_row({}, {}, demand[s].demand, demand[s].demand);
    for (std::size_t a = 0; a < links; ++a) lp_.add_row({}, {}, -kInfinity, 0.0);
    for (std::size_t a = 0; a < links; ++a) {
      const Link& l = net.link(a);
      const int row = cap_row(a);
      const double v = -1.0;
      y_col_.push_back(lp_.add_column(0.0, l.capacity, l.operating_cost / l.capacity, {&row, 1}, {&v, 1}));
    }
    for (std::size_t s = 0; s < groups; ++s) {
      const int row = static_cast<int>(s);
      const double v = 1.0;
      art_col_.push_back(lp_.add_column(0.0, kInfinity, 0.0, {&row, 1}, {&v, 1}));
    }
    strong_rows_.resize(groups);
    hi_.assign(links, 1.0);
    lo_.assign(links, 0.0);

    std::vector<double> travel(links);
    for (std::size_t a = 0; a < links; ++a) travel[a] = net.link(a).travel_cost;
    for (std::size_t s = 0; s < groups; ++s) {
      auto p = shortest_path(net, demand[s].origin, demand[s].destination, travel);
      if (!p) {
        no_path_.push_back(s);
        continue;
      }
      add_path(s, *p);
    }
  }

  const std::vector<std::size_t>& groups_without_path() const { return no_path_; }

  void set_bounds(const std::vector<double>& lo, const std::vector<double>& hi) {
    for (std::size_t a = 0; a < lo.size(); ++a) {
      if (lo[a] == lo_[a] && hi[a] == hi_[a]) continue;
      lo_[a] = lo[a];
      hi_[a] = hi[a];
      const double w = net_.link(a).capacity;
      lp_.set_column_bounds(y_col_[a], lo[a] * w, hi[a] * w);
    }
  }

  // Returns false when the flows cannot be routed under the current bounds.
  bool solve() {
    set_phase(1);
    optimize(1);
    double infeasibility = 0.0;
    for (std::size_t s = 0; s < demand_.size(); ++s) infeasibility += lp_.column_value(art_col_[s]);
    if (infeasibility > options_.solver.feasibility_tolerance * std::max(1.0, demand_.total_demand())) {
      return false;
    }
    set_phase(2);
    optimize(2);
    return true;
  }

  std::vector<std::size_t> infeasible_groups() const {
    std::vector<std::size_t> out = no_path_;
    for (std::size_t s = 0; s < demand_.size(); ++s) {
      if (lp_.column_value(art_col_[s]) > options_.solver.feasibility_tolerance * std::max(1.0, demand_[s].demand)) {
        out.push_back(s);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  double objective() const { return lp_.objective(); }

  std::vector<double> activation() const {
    std::vector<double> y(net_.num_links());
    for (std::size_t a = 0; a < y.size(); ++a) y[a] = lp_.column_value(y_col_[a]) / net_.link(a).capacity;
    return y;
  }

  double path_cost() const {
    double c = 0.0;
    for (const auto& col : columns_) c += col.cost * std::max(0.0, lp_.column_value(col.col));
    return c;
  }

  std::vector<double> link_flows() const {
    std::vector<double> x(net_.num_links(), 0.0);
    for (const auto& col : columns_) {
      const double z = lp_.column_value(col.col);
      if (z <= 0.0) continue;
      for (std::size_t a : col.links) x[a] += z;
    }
    return x;
  }

  std::vector<std::vector<double>> group_flows() const {
    std::vector<std::vector<double>> x(demand_.size(), std::vector<double>(net_.num_links(), 0.0));
    for (const auto& col : columns_) {
      const double z = lp_.column_value(col.col);
      if (z <= 0.0) continue;
      for (std::size_t a : col.links) x[col.group][a] += z;
    }
    return x;
  }

  std::vector<double> capacity_duals() const {
    std::vector<double> mu(net_.num_links());
    for (std::size_t a = 0; a < mu.size(); ++a) mu[a] = std::max(0.0, -lp_.row_dual(cap_row(a)));
    return mu;
  }

 private:
  struct Column {
    std::size_t group;
    std::vector<std::size_t> links;
    double cost;
    int col;
  };

  int cap_row(std::size_t a) const { return static_cast<int>(demand_.size() + a); }

  void add_path(std::size_t s, const Path& p) {
    if (!known_[s].insert(p.links).second) return;
    std::vector<int> rows{static_cast<int>(s)};
    for (std::size_t a : p.links) {
      rows.push_back(cap_row(a));
      if (auto it = strong_rows_[s].find(a); it != strong_rows_[s].end()) rows.push_back(it->second);
    }
    const std::vector<double> vals(rows.size(), 1.0);
    const double cost = path_travel_cost(net_, p);
    const int col = lp_.add_column(0.0, kInfinity, phase_ == 1 ? 0.0 : cost, rows, vals);
    columns_.push_back(Column{s, p.links, cost, col});
    group_columns_[s].push_back(columns_.size() - 1);
  }

  void set_phase(int phase) {
    if (phase == phase_) return;
    phase_ = phase;
    for (std::size_t a = 0; a < y_col_.size(); ++a) {
      const Link& l = net_.link(a);
      lp_.set_column_cost(y_col_[a], phase == 1 ? 0.0 : l.operating_cost / l.capacity);
    }
    for (int c : art_col_) {
      lp_.set_column_cost(c, phase == 1 ? 1.0 : 0.0);
      lp_.set_column_bounds(c, 0.0, phase == 1 ? kInfinity : 0.0);
    }
    for (const auto& col : columns_) lp_.set_column_cost(col.col, phase == 1 ? 0.0 : col.cost);
  }

  void optimize(int phase) {
    for (int round = 0;; ++round) {
      if (round > 100000) throw ResourceLimitError("column generation did not converge");
      const SolveStatus st = lp_.solve();
      if (st != SolveStatus::kOptimal) throw NumericalError("path master not optimal");
      if (price(phase) > 0) continue;
      if (phase == 2 && cuts_ && add_violated_cuts()) continue;
      return;
    }
  }

  int price(int phase) {
    const std::size_t links = net_.num_links();
    std::vector<double> base(links);
    GraphMask mask;
    mask.link_ok.assign(links, 1);
    for (std::size_t a = 0; a < links; ++a) {
      base[a] = (phase == 2 ? net_.link(a).travel_cost : 0.0) - lp_.row_dual(cap_row(a));
      if (hi_[a] <= 0.0) mask.link_ok[a] = 0;
    }
    int added = 0;
    for (std::size_t s = 0; s < demand_.size(); ++s) {
      if (std::binary_search(no_path_.begin(), no_path_.end(), s)) continue;
      std::vector<double> len = base;
      for (const auto& [a, row] : strong_rows_[s]) len[a] -= lp_.row_dual(row);
      for (double& v : len) v = std::max(0.0, v);
      const double pi = lp_.row_dual(static_cast<int>(s));
      auto p = shortest_path(net_, demand_[s].origin, demand_[s].destination, len, mask);
      if (!p) continue;
      const double rc = path_weight(*p, len) - pi;
      if (rc < -1e-9 * (1.0 + std::abs(pi))) {
        const auto before = columns_.size();
        add_path(s, *p);
        if (columns_.size() > before) ++added;
      }
    }
    return added;
  }

  bool add_violated_cuts() {
    bool added = false;
    std::vector<double> x(net_.num_links());
    for (std::size_t s = 0; s < demand_.size(); ++s) {
      std::fill(x.begin(), x.end(), 0.0);
      for (std::size_t ci : group_columns_[s]) {
        const double z = lp_.column_value(columns_[ci].col);
        if (z <= 0.0) continue;
        for (std::size_t a : columns_[ci].links) x[a] += z;
      }
      const double d = demand_[s].demand;
      for (std::size_t a = 0; a < x.size(); ++a) {
        if (x[a] <= 1e-9 || strong_rows_[s].count(a)) continue;
        const double w = net_.link(a).capacity;
        const double y = lp_.column_value(y_col_[a]) / w;
        if (x[a] <= d * y + 1e-7 * std::max(1.0, d)) continue;
        std::vector<int> cols;
        std::vector<double> vals;
        for (std::size_t ci : group_columns_[s]) {
          const auto& c = columns_[ci];
          if (std::find(c.links.begin(), c.links.end(), a) != c.links.end()) {
            cols.push_back(c.col);
            vals.push_back(1.0);
          }
        }
        cols.push_back(y_col_[a]);
        vals.push_back(-d / w);
        strong_rows_[s][a] = lp_.add_row(cols, vals, -kInfinity, 0.0);
        added = true;
      }
    }
    return added;
  }

  const Network& net_;
  const DemandTable& demand_;
  const MatchingOptions& options_;
  bool cuts_;
  SimplexSolver lp_;
  int phase_ = 2;
  std::vector<int> y_col_;
  std::vector<int> art_col_;
  std::vector<Column> columns_;
  std::map<std::size_t, std::vector<std::size_t>> group_columns_;
  std::map<std::size_t, std::set<std::vector<std::size_t>>> known_;
  std::vector<std::map<std::size_t, int>> strong_rows_;
  std::vector<std::size_t> no_path_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

}  // namespace

ColumnGenerationResult column_generation(const Network& net, const DemandTable& demand,
                                         const MatchingOptions& options,
                                         const std::vector<int>* fixed_active) {
  ColumnGenerationResult out;
  const std::size_t links = net.num_links();

  std::vector<int> active;
  MatchingSolution sol;
  if (fixed_active) {
    active = *fixed_active;
  } else {
    PathMaster master(net, demand, options, options.linking_cuts);
    if (!master.groups_without_path().empty()) {
      out.unroutable = master.groups_without_path();
      return out;
    }
    bool root = true;
    auto relax = [&](const solve::Fixing& fixing)
        -> std::optional<solve::Relaxation<std::vector<int>>> {
      std::vector<double> lo(links, 0.0);
      std::vector<double> hi(links, 1.0);
      for (std::size_t a = 0; a < links; ++a) {
        if (fixing[a] == 0) hi[a] = 0.0;
        if (fixing[a] == 1) lo[a] = 1.0;
      }
      master.set_bounds(lo, hi);
      const bool feasible = master.solve();
      if (root) {
        root = false;
        if (!feasible) out.unroutable = master.infeasible_groups();
      }
      if (!feasible) return std::nullopt;
      solve::Relaxation<std::vector<int>> r;
      r.objective = master.objective();
      r.binary_values = master.activation();
      r.payload.resize(links);
      for (std::size_t a = 0; a < links; ++a) r.payload[a] = r.binary_values[a] > 0.5 ? 1 : 0;
      const auto x = master.link_flows();
      solve::Candidate<std::vector<int>> h;
      h.objective = master.path_cost();
      h.payload.resize(links);
      for (std::size_t a = 0; a < links; ++a) {
        h.payload[a] = (x[a] > options.flow_tolerance || lo[a] > 0.0) ? 1 : 0;
        h.objective += h.payload[a] * net.link(a).operating_cost;
      }
      r.heuristic = std::move(h);
      return r;
    };
    auto res = solve::branch_and_bound<std::vector<int>>(links, relax, options.solver.milp);
    if (!res.found) return out;
    active = res.payload;
    sol.nodes = res.nodes;
  }

  PathMaster routing(net, demand, options, false);
  if (!routing.groups_without_path().empty()) {
    out.unroutable = routing.groups_without_path();
    return out;
  }
  std::vector<double> fixed(links);
  for (std::size_t a = 0; a < links; ++a) fixed[a] = active[a] ? 1.0 : 0.0;
  routing.set_bounds(fixed, fixed);
  if (!routing.solve()) {
    out.unroutable = routing.infeasible_groups();
    return out;
  }
  sol.flows = routing.group_flows();
  sol.active = active;
  sol.objective = routing.objective();
  const double eps = duals_perturbation(demand, options);
  for (std::size_t a = 0; a < links; ++a) {
    if (active[a]) fixed[a] = 1.0 + eps / net.link(a).capacity;
  }
  routing.set_bounds(fixed, fixed);
  if (!routing.solve()) throw NumericalError("perturbed routing LP infeasible");
  out.mu = routing.capacity_duals();
  for (std::size_t a = 0; a < links; ++a) {
    if (!active[a]) out.mu[a] = 0.0;
  }
  out.feasible = true;
  out.solution = std::move(sol);
  return out;
}

}  // namespace maas::detail
