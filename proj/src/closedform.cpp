#include "maas/closedform.hpp"

#include <algorithm>
#include <cmath>

#include "maas/error.hpp"

namespace maas {

namespace {

void check_non_negative(double v, const char* name) {
  if (!std::isfinite(v) || v < 0) throw InputError(std::string(name) + " must be finite and non-negative");
}

}  // namespace

double lemma1_lower_bound(const CoopCompeteInstance& i) {
  for (auto [v, n] : {std::pair{i.t12, "t12"}, {i.t23, "t23"}, {i.t13, "t13"}, {i.c12, "c12"},
                      {i.c23, "c23"}, {i.c13, "c13"}}) {
    check_non_negative(v, n);
  }
  if (!std::isfinite(i.d) || !(i.d > 0)) throw InputError("d must be positive");
  const double coop = (i.t12 + i.t23) * i.d + i.c12 + i.c23;
  const double solo = i.t13 * i.d + i.c13;
  if (coop > solo + 1e-9 * (1.0 + std::abs(solo))) {
    throw PreconditionError("cooperation not optimal");
  }
  return (i.c12 + i.c23) / i.d - i.t13 - i.c13 + i.t12 + i.t23;
}

double lemma2_upper_bound(const SmallVsLargeInstance& i) {
  check_non_negative(i.t23_small, "t23_small");
  check_non_negative(i.t23_large, "t23_large");
  check_non_negative(i.c23_large, "c23_large");
  check_non_negative(i.x23_large_flow, "x23_large_flow");
  if (i.t23_small > i.t23_large) throw PreconditionError("small operator path not optimal");
  if (i.x23_large_flow > 0) return 0.0;
  return i.t23_large - i.t23_small + i.c23_large;
}

double clamp_price(double bound) { return std::max(0.0, bound); }

Instance coop_compete_network(const CoopCompeteInstance& i, double utility, double capacity) {
  std::vector<Link> links{
      {1, 2, i.t12, i.c12, capacity, kLargeOperator},
      {2, 3, i.t23, i.c23, capacity, kSmallOperator},
      {1, 3, i.t13, i.c13, capacity, kSmallOperator},
  };
  Network net({1, 2, 3}, std::move(links));
  DemandTable demand({{1, 3, i.d, utility}});
  return {std::move(net), std::move(demand)};
}

Instance small_vs_large_network(const SmallVsLargeInstance& i, const SmallVsLargeExtras& e) {
  std::vector<Link> links{
      {1, 2, e.t12, e.c12, e.capacity, kLargeOperator},
      {2, 3, i.t23_large, i.c23_large, e.capacity, kLargeOperator},
      {3, 4, e.t34, e.c34, e.capacity, kLargeOperator},
      {2, 5, i.t23_small, e.c23_small, e.capacity, kSmallOperator},
      {5, 3, 0.0, 0.0, e.capacity, kPlatformOperator},
  };
  Network net({1, 2, 3, 4, 5}, std::move(links));
  DemandTable demand({{1, 4, e.d, e.utility}});
  return {std::move(net), std::move(demand)};
}

std::optional<double> extreme_price(const ConstraintSystem& system, const OutcomeOptions& options,
                                    const Path& path, OperatorId op, bool maximize,
                                    const solve::SolverConfig& config) {
  std::optional<std::size_t> var;
  for (std::size_t k = 0; k < system.prices.size(); ++k) {
    if (system.prices[k].op == op && system.paths[system.prices[k].path].path == path) var = k;
  }
  if (!var) return std::nullopt;
  auto model = build_outcome_lp(system, ObjectivePolicy::buyer_optimal(), options);
  for (std::size_t j = 0; j < model.lp.num_variables(); ++j) model.lp.set_cost(static_cast<int>(j), 0.0);
  model.lp.set_cost(model.p_var[*var], maximize ? 1.0 : -1.0);
  const auto res = solve::solve_lp(model.lp, config);
  if (res.status == solve::SolveStatus::kInfeasible) return std::nullopt;
  if (res.status != solve::SolveStatus::kOptimal) throw InternalError("price extreme is unbounded");
  return res.values[model.p_var[*var]];
}

}  // namespace maas
