#include "maas/solve/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>

#include "maas/error.hpp"

namespace maas::solve {

namespace detail {
SolveResult bundled_solve_milp(const MixedIntegerProgram& mip, const SolverConfig& config);
}  // namespace detail

namespace {

double scale_of(const LinearProgram& lp, const std::vector<double>& x) {
  double s = 1.0;
  for (double v : x) s = std::max(s, std::abs(v));
  for (const auto& r : lp.rows()) s = std::max(s, std::abs(r.rhs));
  return s;
}

SolveResult bundled_solve_lp(const LinearProgram& lp, const SolverConfig& config) {
  SimplexSolver solver = SimplexSolver::from_lp(lp, config.simplex);
  SolveResult out;
  out.status = solver.solve();
  out.iterations = solver.iterations();
  if (out.status != SolveStatus::kOptimal) return out;
  out.values = solver.column_values();
  out.objective = solver.objective();
  out.row_duals = solver.row_duals();
  out.reduced_costs = solver.reduced_costs();
  const double viol = lp.max_violation(out.values);
  if (viol > config.feasibility_tolerance * scale_of(lp, out.values)) {
    throw NumericalError("simplex returned a point violating constraints by " +
                         std::to_string(viol));
  }
  return out;
}

class BundledEngine final : public Engine {
 public:
  explicit BundledEngine(SolverConfig config) : config_(std::move(config)) {}
  std::string name() const override { return kBundledEngine; }
  SolveResult solve_lp(const LinearProgram& lp) override { return bundled_solve_lp(lp, config_); }
  SolveResult solve_milp(const MixedIntegerProgram& mip) override {
    return detail::bundled_solve_milp(mip, config_);
  }

 private:
  SolverConfig config_;
};

struct Registry {
  std::mutex mu;
  std::map<std::string, EngineFactory> factories;
  Registry() {
    factories[kBundledEngine] = [](const SolverConfig& c) {
      return std::make_unique<BundledEngine>(c);
    };
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

SolverConfig with_environment(SolverConfig config) {
  if (const char* env = std::getenv(kEngineEnvVar); env != nullptr && *env != '\0') {
    config.engine = env;
  }
  return config;
}

void register_engine(const std::string& name, EngineFactory factory) {
  auto& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  r.factories[name] = std::move(factory);
}

std::vector<std::string> available_engines() {
  auto& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  std::vector<std::string> names;
  for (const auto& [k, v] : r.factories) names.push_back(k);
  return names;
}

std::unique_ptr<Engine> make_engine(const SolverConfig& config) {
  auto& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.factories.find(config.engine);
  if (it == r.factories.end()) {
    throw InputError("solver engine '" + config.engine + "' is not available");
  }
  return it->second(config);
}

SolveResult solve_lp(const LinearProgram& lp, const SolverConfig& config) {
  return make_engine(config)->solve_lp(lp);
}

SolveResult solve_milp(const MixedIntegerProgram& mip, const SolverConfig& config) {
  return make_engine(config)->solve_milp(mip);
}

}  // namespace maas::solve
