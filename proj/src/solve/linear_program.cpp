#include "maas/solve/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maas/error.hpp"

namespace maas::solve {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

int LinearProgram::add_variable(double lower, double upper, double cost, std::string name) {
  vars_.push_back(Variable{lower, upper, cost, std::move(name)});
  return static_cast<int>(vars_.size()) - 1;
}

int LinearProgram::add_row(std::vector<int> index, std::vector<double> value, RowSense sense,
                           double rhs, std::string name) {
  if (index.size() != value.size()) throw InputError("row index/value length mismatch");
  rows_.push_back(Row{std::move(index), std::move(value), sense, rhs, std::move(name)});
  return static_cast<int>(rows_.size()) - 1;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  auto& v = vars_.at(var);
  v.lower = lower;
  v.upper = upper;
}

void LinearProgram::validate() const {
  const auto n = static_cast<int>(vars_.size());
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const auto& v = vars_[j];
    if (!std::isfinite(v.cost)) throw InputError("non-finite cost on variable " + std::to_string(j));
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper || v.lower == kInfinity ||
        v.upper == -kInfinity) {
      throw InputError("invalid bounds on variable " + std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (!std::isfinite(r.rhs)) throw InputError("non-finite rhs on row " + std::to_string(i));
    for (std::size_t k = 0; k < r.index.size(); ++k) {
      if (r.index[k] < 0 || r.index[k] >= n) {
        throw InputError("row " + std::to_string(i) + " references variable out of range");
      }
      if (!std::isfinite(r.value[k])) {
        throw InputError("non-finite coefficient on row " + std::to_string(i));
      }
    }
  }
}

double LinearProgram::row_activity(std::size_t i, const std::vector<double>& x) const {
  const auto& r = rows_[i];
  double s = 0.0;
  for (std::size_t k = 0; k < r.index.size(); ++k) s += r.value[k] * x[r.index[k]];
  return s;
}

double LinearProgram::objective_value(const std::vector<double>& x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) s += vars_[j].cost * x[j];
  return s;
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max({worst, vars_[j].lower - x[j], x[j] - vars_[j].upper});
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double a = row_activity(i, x);
    const auto& r = rows_[i];
    switch (r.sense) {
      case RowSense::kLessEqual:
        worst = std::max(worst, a - r.rhs);
        break;
      case RowSense::kGreaterEqual:
        worst = std::max(worst, r.rhs - a);
        break;
      case RowSense::kEqual:
        worst = std::max(worst, std::abs(a - r.rhs));
        break;
    }
  }
  return worst;
}

void MixedIntegerProgram::validate() const {
  lp.validate();
  for (int b : binaries) {
    if (b < 0 || b >= static_cast<int>(lp.num_variables())) {
      throw InputError("binary index out of range");
    }
  }
}

}  // namespace maas::solve
