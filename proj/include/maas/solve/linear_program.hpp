#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace maas::solve {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ObjectiveSense { kMinimize, kMaximize };
enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class SolveStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(SolveStatus s);

struct Variable {
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
  std::string name;
};

struct Row {
  std::vector<int> index;
  std::vector<double> value;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

class LinearProgram {
 public:
  int add_variable(double lower, double upper, double cost, std::string name = {});
  int add_row(std::vector<int> index, std::vector<double> value, RowSense sense, double rhs,
              std::string name = {});

  void set_sense(ObjectiveSense sense) { sense_ = sense; }
  void set_cost(int var, double cost) { vars_.at(var).cost = cost; }
  void set_bounds(int var, double lower, double upper);

  ObjectiveSense sense() const { return sense_; }
  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const Variable& variable(std::size_t j) const { return vars_[j]; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }

  // Throws InputError on non-finite coefficients or out-of-range indices.
  void validate() const;

  double row_activity(std::size_t i, const std::vector<double>& x) const;
  double objective_value(const std::vector<double>& x) const;
  // Largest bound or row violation of x.
  double max_violation(const std::vector<double>& x) const;

 private:
  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
};

struct MixedIntegerProgram {
  LinearProgram lp;
  std::vector<int> binaries;

  void validate() const;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> values;
  double objective = 0.0;
  // Shadow prices d(objective)/d(rhs) in the LP's own sense; empty for MILPs.
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;
  long iterations = 0;
  long nodes = 0;
  double best_bound = 0.0;
};

}  // namespace maas::solve
