#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "maas/solve/branch_and_bound.hpp"
#include "maas/solve/linear_program.hpp"
#include "maas/solve/simplex.hpp"

namespace maas::solve {

inline constexpr const char* kBundledEngine = "bundled";
inline constexpr const char* kEngineEnvVar = "MAAS_SOLVER_ENGINE";

struct SolverConfig {
  std::string engine = kBundledEngine;
  double feasibility_tolerance = 1e-6;
  double optimality_tolerance = 1e-6;
  SimplexOptions simplex;
  BranchAndBoundOptions milp;
};

// Applies the engine override from the environment, if set.
SolverConfig with_environment(SolverConfig config);

class Engine {
 public:
  virtual ~Engine() = default;
  virtual std::string name() const = 0;
  virtual SolveResult solve_lp(const LinearProgram& lp) = 0;
  virtual SolveResult solve_milp(const MixedIntegerProgram& mip) = 0;
};

using EngineFactory = std::function<std::unique_ptr<Engine>(const SolverConfig&)>;

// Registers an adapter under a name; the bundled engine is always present.
void register_engine(const std::string& name, EngineFactory factory);
std::vector<std::string> available_engines();
std::unique_ptr<Engine> make_engine(const SolverConfig& config);

SolveResult solve_lp(const LinearProgram& lp, const SolverConfig& config = {});
SolveResult solve_milp(const MixedIntegerProgram& mip, const SolverConfig& config = {});

// CPLEX-style LP text with fixed-point coefficients.
void write_lp_file(std::ostream& os, const LinearProgram& lp,
                   const std::vector<int>& binaries = {});

}  // namespace maas::solve
