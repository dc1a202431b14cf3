#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "maas/solve/linear_program.hpp"

namespace maas::solve {

struct SimplexOptions {
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int refactor_interval = 64;
  long iteration_limit = 20'000'000;
  // Consecutive degenerate pivots before bounds are perturbed.
  int stall_threshold = 60;
  std::uint64_t seed = 0x5eed;
};

enum class BasisStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFreeZero };

// Bounded-variable revised primal simplex over minimization problems.
//
// Each row i carries a logical variable r_i with a_i x - r_i = 0 and the row
// bounds on r_i; the initial basis is all logicals. Columns and rows may be
// added and bounds changed between solves; the next solve() resumes from the
// current basis.
class SimplexSolver {
 public:
  explicit SimplexSolver(SimplexOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  // Loads a LinearProgram; maximization is converted by negating costs, and
  // duals/objective are reported back in the LP's own sense.
  static SimplexSolver from_lp(const LinearProgram& lp, SimplexOptions options = {});

  int add_column(double lower, double upper, double cost, std::span<const int> rows,
                 std::span<const double> values);
  int add_row(std::span<const int> columns, std::span<const double> values, double lower,
              double upper);
  void set_column_bounds(int column, double lower, double upper);
  void set_row_bounds(int row, double lower, double upper);
  void set_column_cost(int column, double cost);
  void set_maximize(bool maximize);

  SolveStatus solve();

  std::size_t num_columns() const;
  std::size_t num_rows() const;
  double column_value(int column) const;
  std::vector<double> column_values() const;
  double row_activity(int row) const;
  // Shadow price of the row's active bound in the reporting sense.
  double row_dual(int row) const;
  std::vector<double> row_duals() const;
  double reduced_cost(int column) const;
  std::vector<double> reduced_costs() const;
  double objective() const;
  long iterations() const;

  std::vector<BasisStatus> basis() const;
  void set_basis(const std::vector<BasisStatus>& statuses);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace maas::solve
