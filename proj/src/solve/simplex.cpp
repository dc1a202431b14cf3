#include "maas/solve/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "maas/error.hpp"

namespace maas::solve {

namespace {

struct Var {
  double lower = 0.0;
  double upper = kInfinity;
  double orig_lower = 0.0;
  double orig_upper = kInfinity;
  double cost = 0.0;
  std::vector<int> rows;
  std::vector<double> vals;
  BasisStatus status = BasisStatus::kAtLower;
  double value = 0.0;
};

// Product-form update B_new^{-1} = E B_old^{-1} for a pivot at position p.
struct Eta {
  int p = 0;
  double alpha_p = 1.0;
  std::vector<int> idx;
  std::vector<double> val;
};

BasisStatus resting_status(double lower, double upper) {
  if (std::isfinite(lower)) return BasisStatus::kAtLower;
  if (std::isfinite(upper)) return BasisStatus::kAtUpper;
  return BasisStatus::kFreeZero;
}

double resting_value(BasisStatus s, double lower, double upper) {
  switch (s) {
    case BasisStatus::kAtLower:
      return lower;
    case BasisStatus::kAtUpper:
      return upper;
    default:
      return 0.0;
  }
}

}  // namespace

struct SimplexSolver::Impl {
  using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

  SimplexOptions opt;
  bool maximize = false;
  std::vector<Var> vars;
  std::vector<int> col_var;
  std::vector<int> row_var;
  std::vector<int> basis;
  std::vector<int> pos;

  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool factor_valid = false;
  bool need_recompute = true;
  std::vector<Eta> etas;

  std::vector<double> y;
  std::vector<double> work;
  long iters = 0;
  int perturb_count = 0;
  bool perturbed = false;
  bool bland = false;
  std::mt19937_64 rng;
  SolveStatus status = SolveStatus::kInfeasible;
  bool have_solution = false;
  std::vector<double> final_duals;
  std::vector<double> final_reduced;

  explicit Impl(SimplexOptions o) : opt(o), rng(o.seed) {}

  std::size_t m() const { return row_var.size(); }

  double tol_for(double bound) const { return opt.primal_tolerance * (1.0 + std::abs(bound)); }

  // ---- factorization ------------------------------------------------------

  void factor_basis() {
    etas.clear();
    const auto mm = static_cast<int>(m());
    if (mm == 0) {
      factor_valid = true;
      return;
    }
    for (int attempt = 0; attempt < 2; ++attempt) {
      std::vector<Eigen::Triplet<double, int>> trip;
      for (int p = 0; p < mm; ++p) {
        const Var& v = vars[basis[p]];
        for (std::size_t k = 0; k < v.rows.size(); ++k) trip.emplace_back(v.rows[k], p, v.vals[k]);
      }
      SpMat b(mm, mm);
      b.setFromTriplets(trip.begin(), trip.end());
      b.makeCompressed();
      lu.compute(b);
      if (lu.info() == Eigen::Success) {
        factor_valid = true;
        return;
      }
      reset_to_logical_basis();
    }
    throw NumericalError("basis factorization failed");
  }

  void reset_to_logical_basis() {
    for (int p = 0; p < static_cast<int>(m()); ++p) {
      const int v = basis[p];
      pos[v] = -1;
      Var& var = vars[v];
      var.status = resting_status(var.lower, var.upper);
      if (std::isfinite(var.lower) && std::isfinite(var.upper) &&
          std::abs(var.value - var.upper) < std::abs(var.value - var.lower)) {
        var.status = BasisStatus::kAtUpper;
      }
      var.value = resting_value(var.status, var.lower, var.upper);
    }
    for (int i = 0; i < static_cast<int>(m()); ++i) {
      const int v = row_var[i];
      basis[i] = v;
      pos[v] = i;
      vars[v].status = BasisStatus::kBasic;
    }
  }

  void ftran(std::vector<double>& v) const {
    if (m() == 0) return;
    Eigen::Map<Eigen::VectorXd> mv(v.data(), static_cast<Eigen::Index>(v.size()));
    Eigen::VectorXd s = lu.solve(mv);
    mv = s;
    for (const Eta& e : etas) {
      const double vp = v[e.p] / e.alpha_p;
      if (vp != 0.0) {
        for (std::size_t k = 0; k < e.idx.size(); ++k) v[e.idx[k]] -= e.val[k] * vp;
      }
      v[e.p] = vp;
    }
  }

  void btran(std::vector<double>& w) const {
    if (m() == 0) return;
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = w[it->p];
      for (std::size_t k = 0; k < it->idx.size(); ++k) s -= w[it->idx[k]] * it->val[k];
      w[it->p] = s / it->alpha_p;
    }
    Eigen::Map<Eigen::VectorXd> mw(w.data(), static_cast<Eigen::Index>(w.size()));
    Eigen::VectorXd s = lu.transpose().solve(mw);
    mw = s;
  }

  void compute_basic_values() {
    std::vector<double> rhs(m(), 0.0);
    for (std::size_t j = 0; j < vars.size(); ++j) {
      const Var& v = vars[j];
      if (v.status == BasisStatus::kBasic || v.value == 0.0) continue;
      for (std::size_t k = 0; k < v.rows.size(); ++k) rhs[v.rows[k]] -= v.vals[k] * v.value;
    }
    ftran(rhs);
    for (std::size_t p = 0; p < m(); ++p) vars[basis[p]].value = rhs[p];
    need_recompute = false;
  }

  void refactor() {
    factor_basis();
    compute_basic_values();
  }

  // ---- model edits --------------------------------------------------------

  int add_var(double lower, double upper, double cost) {
    Var v;
    v.lower = v.orig_lower = lower;
    v.upper = v.orig_upper = upper;
    v.cost = cost;
    v.status = resting_status(lower, upper);
    v.value = resting_value(v.status, lower, upper);
    vars.push_back(std::move(v));
    pos.push_back(-1);
    return static_cast<int>(vars.size()) - 1;
  }

  void move_nonbasic_to_bound(Var& v) {
    if (v.status == BasisStatus::kBasic) return;
    if (v.status == BasisStatus::kAtLower && !std::isfinite(v.lower)) {
      v.status = resting_status(v.lower, v.upper);
    } else if (v.status == BasisStatus::kAtUpper && !std::isfinite(v.upper)) {
      v.status = resting_status(v.lower, v.upper);
    } else if (v.status == BasisStatus::kFreeZero &&
               (std::isfinite(v.lower) || std::isfinite(v.upper))) {
      v.status = resting_status(v.lower, v.upper);
    }
    const double nv = resting_value(v.status, v.lower, v.upper);
    if (nv != v.value) {
      v.value = nv;
      need_recompute = true;
    }
  }

  // ---- perturbation -------------------------------------------------------

  void perturb_bounds() {
    std::uniform_real_distribution<double> unit(0.5, 1.0);
    const double eps = 1e-7;
    for (Var& v : vars) {
      const bool basic = v.status == BasisStatus::kBasic;
      if (std::isfinite(v.lower) && (basic || v.status != BasisStatus::kAtLower)) {
        v.lower -= eps * (1.0 + std::abs(v.lower)) * unit(rng);
      }
      if (std::isfinite(v.upper) && (basic || v.status != BasisStatus::kAtUpper)) {
        v.upper += eps * (1.0 + std::abs(v.upper)) * unit(rng);
      }
    }
    perturbed = true;
    ++perturb_count;
  }

  void restore_bounds() {
    for (Var& v : vars) {
      v.lower = v.orig_lower;
      v.upper = v.orig_upper;
      if (v.status != BasisStatus::kBasic) v.value = resting_value(v.status, v.lower, v.upper);
    }
    perturbed = false;
    compute_basic_values();
  }

  // ---- main loop ----------------------------------------------------------

  double cost_scale() const {
    double s = 1.0;
    for (const Var& v : vars) s = std::max(s, std::abs(v.cost));
    return s;
  }

  SolveStatus run() {
    have_solution = false;
    if (!factor_valid) {
      factor_basis();
      need_recompute = true;
    }
    if (need_recompute) compute_basic_values();
    perturb_count = 0;
    perturbed = false;
    bland = false;
    const std::size_t mm = m();
    const double dtol2 = opt.dual_tolerance * cost_scale();
    const double dtol1 = opt.dual_tolerance;
    int degenerate_run = 0;
    bool fresh = etas.empty();
    std::vector<double> cb(mm);
    std::vector<double> alpha(mm);

    while (true) {
      if (static_cast<int>(etas.size()) >= opt.refactor_interval) {
        refactor();
        fresh = true;
      }
      if (++iters > opt.iteration_limit) {
        throw ResourceLimitError("simplex iteration limit reached");
      }

      // Phase selection per basic variable.
      bool phase1 = false;
      for (std::size_t p = 0; p < mm; ++p) {
        const Var& v = vars[basis[p]];
        if (v.value < v.lower - tol_for(v.lower)) {
          cb[p] = -1.0;
          phase1 = true;
        } else if (v.value > v.upper + tol_for(v.upper)) {
          cb[p] = 1.0;
          phase1 = true;
        } else {
          cb[p] = 0.0;
        }
      }
      if (!phase1) {
        for (std::size_t p = 0; p < mm; ++p) cb[p] = vars[basis[p]].cost;
      }
      y = cb;
      btran(y);

      // Pricing.
      const double dtol = phase1 ? dtol1 : dtol2;
      int q = -1;
      int dir = 0;
      double best = 0.0;
      for (std::size_t j = 0; j < vars.size(); ++j) {
        const Var& v = vars[j];
        if (v.status == BasisStatus::kBasic) continue;
        if (v.lower == v.upper) continue;
        double d = phase1 ? 0.0 : v.cost;
        for (std::size_t k = 0; k < v.rows.size(); ++k) d -= y[v.rows[k]] * v.vals[k];
        int dj = 0;
        if (v.status == BasisStatus::kAtLower) {
          if (d < -dtol) dj = 1;
        } else if (v.status == BasisStatus::kAtUpper) {
          if (d > dtol) dj = -1;
        } else if (std::abs(d) > dtol) {
          dj = d < 0 ? 1 : -1;
        }
        if (dj == 0) continue;
        const double score = std::abs(d);
        if (bland) {
          q = static_cast<int>(j);
          dir = dj;
          break;
        }
        if (score > best) {
          best = score;
          q = static_cast<int>(j);
          dir = dj;
        }
      }

      if (q < 0) {
        if (!fresh) {
          refactor();
          fresh = true;
          continue;
        }
        if (perturbed) {
          restore_bounds();
          degenerate_run = 0;
          continue;
        }
        return phase1 ? SolveStatus::kInfeasible : SolveStatus::kOptimal;
      }

      // Column of the entering variable in the current basis.
      std::fill(alpha.begin(), alpha.end(), 0.0);
      const Var& ent = vars[q];
      for (std::size_t k = 0; k < ent.rows.size(); ++k) alpha[ent.rows[k]] += ent.vals[k];
      ftran(alpha);

      // Harris two-pass ratio test.
      double theta_max = kInfinity;
      for (std::size_t p = 0; p < mm; ++p) {
        const double a = alpha[p];
        if (std::abs(a) <= opt.pivot_tolerance) continue;
        const Var& v = vars[basis[p]];
        const double rate = -dir * a;
        double lim = kInfinity;
        if (rate < 0) {
          if (v.value > v.upper + tol_for(v.upper)) {
            lim = (v.value - (v.upper - tol_for(v.upper))) / -rate;
          } else if (v.value < v.lower - tol_for(v.lower)) {
            continue;
          } else if (std::isfinite(v.lower)) {
            lim = (v.value - (v.lower - tol_for(v.lower))) / -rate;
          }
        } else {
          if (v.value < v.lower - tol_for(v.lower)) {
            lim = ((v.lower + tol_for(v.lower)) - v.value) / rate;
          } else if (v.value > v.upper + tol_for(v.upper)) {
            continue;
          } else if (std::isfinite(v.upper)) {
            lim = ((v.upper + tol_for(v.upper)) - v.value) / rate;
          }
        }
        if (bland) theta_max = std::min(theta_max, std::max(lim, 0.0));
        else theta_max = std::min(theta_max, lim);
      }
      const double range = ent.upper - ent.lower;

      int leave = -1;
      double theta = 0.0;
      bool leave_at_upper = false;
      if (std::isfinite(theta_max)) {
        double best_alpha = -1.0;
        double best_ratio = kInfinity;
        for (std::size_t p = 0; p < mm; ++p) {
          const double a = alpha[p];
          if (std::abs(a) <= opt.pivot_tolerance) continue;
          const Var& v = vars[basis[p]];
          const double rate = -dir * a;
          double target;
          bool at_upper;
          if (rate < 0) {
            if (v.value > v.upper + tol_for(v.upper)) {
              target = v.upper;
              at_upper = true;
            } else if (v.value < v.lower - tol_for(v.lower) || !std::isfinite(v.lower)) {
              continue;
            } else {
              target = v.lower;
              at_upper = false;
            }
          } else {
            if (v.value < v.lower - tol_for(v.lower)) {
              target = v.lower;
              at_upper = false;
            } else if (v.value > v.upper + tol_for(v.upper) || !std::isfinite(v.upper)) {
              continue;
            } else {
              target = v.upper;
              at_upper = true;
            }
          }
          const double ratio = std::max(0.0, (target - v.value) / rate);
          if (ratio > theta_max) continue;
          bool take;
          if (bland) {
            take = ratio < best_ratio - 1e-12 ||
                   (ratio <= best_ratio + 1e-12 && (leave < 0 || basis[p] < basis[leave]));
          } else {
            take = std::abs(a) > best_alpha ||
                   (std::abs(a) == best_alpha && basis[p] < basis[leave]);
          }
          if (take) {
            best_alpha = std::abs(a);
            best_ratio = ratio;
            leave = static_cast<int>(p);
            theta = ratio;
            leave_at_upper = at_upper;
          }
        }
      }

      const bool flip = std::isfinite(range) && (leave < 0 || range <= theta_max);
      if (leave < 0 && !flip) {
        if (!fresh) {
          refactor();
          fresh = true;
          continue;
        }
        if (phase1) throw NumericalError("phase-one ray without breakpoint");
        if (perturbed) {
          restore_bounds();
          continue;
        }
        return SolveStatus::kUnbounded;
      }
      if (flip) {
        theta = range;
        leave = -1;
      }

      // Step.
      if (theta > 0.0) {
        Var& e = vars[q];
        e.value += dir * theta;
        for (std::size_t p = 0; p < mm; ++p) {
          if (alpha[p] != 0.0) vars[basis[p]].value -= dir * theta * alpha[p];
        }
      }
      fresh = false;

      if (theta <= 1e-12) {
        if (++degenerate_run > opt.stall_threshold) {
          degenerate_run = 0;
          if (perturb_count < 3) {
            perturb_bounds();
          } else {
            bland = true;
          }
        }
      } else {
        degenerate_run = 0;
      }

      if (leave < 0) {
        Var& e = vars[q];
        e.status = dir > 0 ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
        e.value = dir > 0 ? e.upper : e.lower;
        continue;
      }

      const int lv = basis[leave];
      Var& out = vars[lv];
      out.status = leave_at_upper ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
      out.value = leave_at_upper ? out.upper : out.lower;
      pos[lv] = -1;
      basis[leave] = q;
      pos[q] = leave;
      vars[q].status = BasisStatus::kBasic;

      Eta eta;
      eta.p = leave;
      eta.alpha_p = alpha[leave];
      for (std::size_t p = 0; p < mm; ++p) {
        if (static_cast<int>(p) != leave && std::abs(alpha[p]) > 1e-14) {
          eta.idx.push_back(static_cast<int>(p));
          eta.val.push_back(alpha[p]);
        }
      }
      etas.push_back(std::move(eta));
    }
  }

  void finalize(SolveStatus st) {
    status = st;
    have_solution = st == SolveStatus::kOptimal;
    final_duals.assign(m(), 0.0);
    final_reduced.assign(col_var.size(), 0.0);
    if (!have_solution) return;
    std::vector<double> cb(m());
    for (std::size_t p = 0; p < m(); ++p) cb[p] = vars[basis[p]].cost;
    btran(cb);
    const double sign = maximize ? -1.0 : 1.0;
    for (std::size_t i = 0; i < m(); ++i) final_duals[i] = sign * cb[i];
    for (std::size_t j = 0; j < col_var.size(); ++j) {
      const Var& v = vars[col_var[j]];
      double d = v.cost;
      if (v.status != BasisStatus::kBasic) {
        for (std::size_t k = 0; k < v.rows.size(); ++k) d -= cb[v.rows[k]] * v.vals[k];
      } else {
        d = 0.0;
      }
      final_reduced[j] = sign * d;
    }
  }
};

SimplexSolver::SimplexSolver(SimplexOptions options) : impl_(std::make_unique<Impl>(options)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

SimplexSolver SimplexSolver::from_lp(const LinearProgram& lp, SimplexOptions options) {
  lp.validate();
  SimplexSolver s(options);
  s.set_maximize(lp.sense() == ObjectiveSense::kMaximize);
  for (const auto& v : lp.variables()) s.add_column(v.lower, v.upper, v.cost, {}, {});
  for (const auto& r : lp.rows()) {
    double lo = -kInfinity;
    double up = kInfinity;
    if (r.sense == RowSense::kLessEqual) up = r.rhs;
    if (r.sense == RowSense::kGreaterEqual) lo = r.rhs;
    if (r.sense == RowSense::kEqual) lo = up = r.rhs;
    s.add_row(r.index, r.value, lo, up);
  }
  return s;
}

int SimplexSolver::add_column(double lower, double upper, double cost, std::span<const int> rows,
                              std::span<const double> values) {
  auto& im = *impl_;
  if (rows.size() != values.size()) throw InputError("column rows/values length mismatch");
  const int v = im.add_var(lower, upper, im.maximize ? -cost : cost);
  Var& var = im.vars[v];
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= static_cast<int>(im.m())) throw InputError("row out of range");
    if (values[k] == 0.0) continue;
    var.rows.push_back(rows[k]);
    var.vals.push_back(values[k]);
  }
  if (var.value != 0.0) im.need_recompute = true;
  im.col_var.push_back(v);
  return static_cast<int>(im.col_var.size()) - 1;
}

int SimplexSolver::add_row(std::span<const int> columns, std::span<const double> values,
                           double lower, double upper) {
  auto& im = *impl_;
  if (columns.size() != values.size()) throw InputError("row columns/values length mismatch");
  const int row = static_cast<int>(im.m());
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const int c = columns[k];
    if (c < 0 || c >= static_cast<int>(im.col_var.size())) throw InputError("column out of range");
    if (values[k] == 0.0) continue;
    Var& var = im.vars[im.col_var[c]];
    if (!var.rows.empty() && var.rows.back() == row) {
      var.vals.back() += values[k];
    } else {
      var.rows.push_back(row);
      var.vals.push_back(values[k]);
    }
  }
  const int lv = im.add_var(lower, upper, 0.0);
  im.vars[lv].rows = {row};
  im.vars[lv].vals = {-1.0};
  im.vars[lv].status = BasisStatus::kBasic;
  im.row_var.push_back(lv);
  im.basis.push_back(lv);
  im.pos[lv] = row;
  im.factor_valid = false;
  im.need_recompute = true;
  return row;
}

void SimplexSolver::set_column_bounds(int column, double lower, double upper) {
  auto& im = *impl_;
  Var& v = im.vars.at(im.col_var.at(column));
  v.lower = v.orig_lower = lower;
  v.upper = v.orig_upper = upper;
  im.move_nonbasic_to_bound(v);
}

void SimplexSolver::set_row_bounds(int row, double lower, double upper) {
  auto& im = *impl_;
  Var& v = im.vars.at(im.row_var.at(row));
  v.lower = v.orig_lower = lower;
  v.upper = v.orig_upper = upper;
  im.move_nonbasic_to_bound(v);
}

void SimplexSolver::set_column_cost(int column, double cost) {
  auto& im = *impl_;
  im.vars.at(im.col_var.at(column)).cost = im.maximize ? -cost : cost;
}

void SimplexSolver::set_maximize(bool maximize) {
  auto& im = *impl_;
  if (maximize == im.maximize) return;
  for (int v : im.col_var) im.vars[v].cost = -im.vars[v].cost;
  im.maximize = maximize;
}

SolveStatus SimplexSolver::solve() {
  const SolveStatus st = impl_->run();
  impl_->finalize(st);
  return st;
}

std::size_t SimplexSolver::num_columns() const { return impl_->col_var.size(); }
std::size_t SimplexSolver::num_rows() const { return impl_->m(); }

double SimplexSolver::column_value(int column) const {
  return impl_->vars.at(impl_->col_var.at(column)).value;
}

std::vector<double> SimplexSolver::column_values() const {
  std::vector<double> x(impl_->col_var.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = impl_->vars[impl_->col_var[j]].value;
  return x;
}

double SimplexSolver::row_activity(int row) const {
  return impl_->vars.at(impl_->row_var.at(row)).value;
}

double SimplexSolver::row_dual(int row) const { return impl_->final_duals.at(row); }
std::vector<double> SimplexSolver::row_duals() const { return impl_->final_duals; }
double SimplexSolver::reduced_cost(int column) const { return impl_->final_reduced.at(column); }
std::vector<double> SimplexSolver::reduced_costs() const { return impl_->final_reduced; }

double SimplexSolver::objective() const {
  double s = 0.0;
  for (int v : impl_->col_var) s += impl_->vars[v].cost * impl_->vars[v].value;
  return impl_->maximize ? -s : s;
}

long SimplexSolver::iterations() const { return impl_->iters; }

std::vector<BasisStatus> SimplexSolver::basis() const {
  std::vector<BasisStatus> out;
  out.reserve(impl_->vars.size());
  for (const Var& v : impl_->vars) out.push_back(v.status);
  return out;
}

void SimplexSolver::set_basis(const std::vector<BasisStatus>& statuses) {
  auto& im = *impl_;
  if (statuses.size() != im.vars.size()) throw InputError("basis size mismatch");
  const auto nbasic = std::count(statuses.begin(), statuses.end(), BasisStatus::kBasic);
  if (nbasic != static_cast<long>(im.m())) throw InputError("basis has wrong number of basics");
  int p = 0;
  for (std::size_t j = 0; j < im.vars.size(); ++j) {
    Var& v = im.vars[j];
    v.status = statuses[j];
    if (v.status == BasisStatus::kBasic) {
      im.basis[p] = static_cast<int>(j);
      im.pos[j] = p++;
    } else {
      im.pos[j] = -1;
      v.status = statuses[j];
      im.move_nonbasic_to_bound(v);
      v.value = resting_value(v.status, v.lower, v.upper);
    }
  }
  im.factor_valid = false;
  im.need_recompute = true;
}

}  // namespace maas::solve
