#include <cmath>
#include <vector>

#include "maas/error.hpp"
#include "maas/solve/branch_and_bound.hpp"
#include "maas/solve/engine.hpp"
#include "maas/solve/simplex.hpp"

namespace maas::solve {

namespace detail {

SolveResult bundled_solve_milp(const MixedIntegerProgram& mip, const SolverConfig& config) {
  mip.validate();
  const LinearProgram& lp = mip.lp;
  const bool maximize = lp.sense() == ObjectiveSense::kMaximize;
  const double sign = maximize ? -1.0 : 1.0;

  SimplexSolver solver = SimplexSolver::from_lp(lp, config.simplex);
  std::vector<double> lower(mip.binaries.size());
  std::vector<double> upper(mip.binaries.size());
  for (std::size_t b = 0; b < mip.binaries.size(); ++b) {
    const auto& v = lp.variable(mip.binaries[b]);
    lower[b] = std::max(0.0, v.lower);
    upper[b] = std::min(1.0, v.upper);
  }

  bool unbounded = false;
  long iterations = 0;
  auto relax = [&](const Fixing& fixing) -> std::optional<Relaxation<std::vector<double>>> {
    for (std::size_t b = 0; b < fixing.size(); ++b) {
      double lo = lower[b];
      double up = upper[b];
      if (fixing[b] == 0) up = 0.0;
      if (fixing[b] == 1) lo = 1.0;
      if (lo > up) return std::nullopt;
      solver.set_column_bounds(mip.binaries[b], lo, up);
    }
    const SolveStatus st = solver.solve();
    iterations = solver.iterations();
    if (st == SolveStatus::kInfeasible) return std::nullopt;
    if (st == SolveStatus::kUnbounded) {
      unbounded = true;
      return std::nullopt;
    }
    Relaxation<std::vector<double>> r;
    r.objective = sign * solver.objective();
    r.payload = solver.column_values();
    r.binary_values.reserve(mip.binaries.size());
    for (int b : mip.binaries) r.binary_values.push_back(r.payload[b]);
    return r;
  };

  auto res = branch_and_bound<std::vector<double>>(mip.binaries.size(), relax, config.milp);

  SolveResult out;
  out.nodes = res.nodes;
  out.iterations = iterations;
  if (unbounded && !res.found) {
    out.status = SolveStatus::kUnbounded;
    return out;
  }
  if (!res.found) {
    out.status = SolveStatus::kInfeasible;
    return out;
  }
  out.status = SolveStatus::kOptimal;
  out.values = std::move(res.payload);
  for (int b : mip.binaries) out.values[b] = std::round(out.values[b]);
  out.objective = sign * res.objective;
  out.best_bound = sign * res.bound;
  return out;
}

}  // namespace detail

}  // namespace maas::solve
