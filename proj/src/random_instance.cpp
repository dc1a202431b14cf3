#include "maas/random_instance.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "maas/error.hpp"
#include "maas/graph.hpp"
#include "maas/matching.hpp"

namespace maas {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

Instance random_instance(std::uint64_t seed, const RandomInstanceOptions& options) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int n = uniform(rng, options.min_nodes, options.max_nodes);
    const int ops = uniform(rng, 2, options.max_operators);
    std::set<std::pair<int, int>> arcs;
    // A random forward chain keeps every node reachable from node 1.
    for (int v = 1; v < n; ++v) arcs.emplace(v, v + 1);
    const int extra = uniform(rng, n / 2, n + 2);
    for (int k = 0; k < extra; ++k) {
      const int a = uniform(rng, 1, n);
      const int b = uniform(rng, 1, n);
      if (a == b) continue;
      // Mostly forward links so path counts stay small.
      if (a > b && uniform(rng, 0, 3) != 0) {
        arcs.emplace(b, a);
      } else {
        arcs.emplace(a, b);
      }
    }

    const int groups = uniform(rng, 1, options.max_groups);
    std::set<std::pair<int, int>> ods;
    for (int k = 0; k < groups * 4 && static_cast<int>(ods.size()) < groups; ++k) {
      const int o = uniform(rng, 1, std::max(1, n / 2));
      const int d = uniform(rng, o + 1, n);
      ods.emplace(o, d);
    }
    std::vector<DemandEntry> entries;
    double total = 0.0;
    for (auto [o, d] : ods) {
      const double dem = uniform(rng, 1, 10);
      entries.push_back({o, d, dem, 0.0});
      total += dem;
    }

    std::vector<Link> links;
    std::bernoulli_distribution transfer(options.transfer_share);
    for (auto [a, b] : arcs) {
      Link l;
      l.tail = a;
      l.head = b;
      const double ratio = std::uniform_real_distribution<double>(options.min_capacity_ratio,
                                                                 options.max_capacity_ratio)(rng);
      l.capacity = std::max(1.0, std::round(ratio * total));
      if (transfer(rng)) {
        l.owner = kPlatformOperator;
        l.travel_cost = uniform(rng, 0, 2);
        l.operating_cost = 0.0;
        l.capacity = 10 * total;
      } else {
        l.owner = OperatorId{static_cast<std::uint32_t>(uniform(rng, 1, ops))};
        l.travel_cost = uniform(rng, 1, 10);
        l.operating_cost = uniform(rng, 0, 30);
      }
      links.push_back(l);
    }
    std::vector<NodeId> nodes;
    for (int v = 1; v <= n; ++v) nodes.push_back(v);
    Network net(nodes, links);

    bool ok = true;
    std::vector<double> t(net.num_links());
    for (std::size_t a = 0; a < t.size(); ++a) t[a] = net.link(a).travel_cost;
    for (auto& e : entries) {
      std::vector<Path> paths;
      try {
        paths = enumerate_simple_paths(net, e.origin, e.destination, options.max_paths_per_group);
      } catch (const ResourceLimitError&) {
        ok = false;
        break;
      }
      if (paths.empty()) {
        ok = false;
        break;
      }
      double cheapest = 1e300;
      for (const Path& p : paths) cheapest = std::min(cheapest, path_travel_cost(net, p));
      e.utility = cheapest + uniform(rng, 2, 30);
    }
    if (!ok) continue;
    DemandTable demand(std::move(entries));
    if (!unroutable_groups(net, demand).empty()) continue;
    return {std::move(net), std::move(demand)};
  }
  throw InternalError("random instance generator exhausted its attempts");
}

}  // namespace maas
