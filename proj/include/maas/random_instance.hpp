#pragma once

#include <cstdint>

#include "maas/fixtures.hpp"

namespace maas {

struct RandomInstanceOptions {
  int min_nodes = 5;
  int max_nodes = 12;
  int max_operators = 4;
  int max_groups = 3;
  std::size_t max_paths_per_group = 20;
  // Probability that a link is a free transfer owned by operator 0.
  double transfer_share = 0.1;
  // Capacities are drawn relative to the total demand.
  double min_capacity_ratio = 0.4;
  double max_capacity_ratio = 1.5;
};

// Deterministic for a given seed. Every OD is routable within the capacities
// and has at most max_paths_per_group simple paths; all data are small integers.
Instance random_instance(std::uint64_t seed, const RandomInstanceOptions& options = {});

}  // namespace maas
