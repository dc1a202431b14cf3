#pragma once

#include <optional>

#include "maas/fixtures.hpp"
#include "maas/matching.hpp"
#include "maas/outcomes.hpp"

namespace maas {

// Operator 1 owns (1,2) only; operator 2 owns (2,3) and the direct link (1,3).
struct CoopCompeteInstance {
  double t12 = 0.0;
  double t23 = 0.0;
  double t13 = 0.0;
  double c12 = 0.0;
  double c23 = 0.0;
  double c13 = 0.0;
  double d = 1.0;
};

struct SmallVsLargeInstance {
  double t23_small = 0.0;
  double t23_large = 0.0;
  double c23_large = 0.0;
  double x23_large_flow = 0.0;
};

inline constexpr OperatorId kLargeOperator{1};
inline constexpr OperatorId kSmallOperator{2};

// Raw bound on the price of operator 2 on (1,2,3); may be negative. Throws
// PreconditionError when cooperation is not optimal.
double lemma1_lower_bound(const CoopCompeteInstance& inst);
// Throws PreconditionError when t23_small > t23_large.
double lemma2_upper_bound(const SmallVsLargeInstance& inst);
double clamp_price(double bound);

// Nodes 1, 2, 3 with one OD (1,3).
Instance coop_compete_network(const CoopCompeteInstance& inst, double utility, double capacity);

// Link parameters of the small-vs-large network that the bound does not use.
struct SmallVsLargeExtras {
  double t12 = 1.0;
  double t34 = 1.0;
  double c12 = 0.0;
  double c34 = 0.0;
  double c23_small = 0.0;
  double d = 1.0;
  double utility = 100.0;
  double capacity = 1e6;
};

// Operator 1 runs 1-2-3-4; operator 2 runs (2,5) and a free transfer (5,3)
// rejoins the line, so the small service parallels (2,3).
Instance small_vs_large_network(const SmallVsLargeInstance& inst, const SmallVsLargeExtras& extras);

// Minimum or maximum of one price variable over the stable outcome space;
// nullopt when the path is not optimal or the core is empty.
std::optional<double> extreme_price(const ConstraintSystem& system, const OutcomeOptions& options,
                                    const Path& path, OperatorId op, bool maximize,
                                    const solve::SolverConfig& config = solve::with_environment({}));

}  // namespace maas
