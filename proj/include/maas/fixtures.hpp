#pragma once

#include "maas/network.hpp"

namespace maas {

struct Instance {
  Network network;
  DemandTable demand;
};

inline constexpr OperatorId kBusOperator{1};
inline constexpr OperatorId kRailOperator{2};

struct SiouxFallsOptions {
  double transfer_cost = 0.0;
  double utility = 40.0;
  // Multiplies every bus and rail capacity; transfer links stay uncapped.
  double capacity_scale = 1.0;
};

// Bus and rail network over the Sioux Falls grid with the OD matrix scaled
// by 100. Nodes 101-120 are rail stations; a link with both endpoints in the
// same series belongs to that mode and mixed links are transfers owned by
// operator 0.
Instance build_sioux_falls(double transfer_cost);
Instance build_sioux_falls(const SiouxFallsOptions& options);

// Six operators A..F (ids 1..6) serving two OD groups out of node 1; nodes
// 21, 22 and 23 are transfer points.
Instance build_illustrative_instance();

}  // namespace maas
