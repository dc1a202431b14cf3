#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "maas/network.hpp"

namespace maas {

// Simple directed path; `links` holds network link indices.
struct Path {
  std::vector<NodeId> nodes;
  std::vector<std::size_t> links;

  bool operator==(const Path& o) const { return nodes == o.nodes; }
  auto operator<=>(const Path& o) const { return nodes <=> o.nodes; }
};

std::string to_string(const Path& p);
Path make_path(const Network& net, const std::vector<NodeId>& nodes);

// Sorted owners of the path's links, operator 0 excluded.
std::vector<OperatorId> path_operators(const Network& net, const Path& p);
double path_travel_cost(const Network& net, const Path& p);
double path_weight(const Path& p, const std::vector<double>& weights);

// Masks over link indices and node positions; empty means "all allowed".
struct GraphMask {
  std::vector<char> link_ok;
  std::vector<char> node_ok;

  bool link(std::size_t i) const { return link_ok.empty() || link_ok[i]; }
  bool node(std::size_t v) const { return node_ok.empty() || node_ok[v]; }
};

// Distances to `target` (node position) over non-negative link weights.
std::vector<double> distances_to(const Network& net, std::size_t target,
                                 const std::vector<double>& weights, const GraphMask& mask = {});

// Minimum-weight simple path; among paths within `tol` of the minimum the
// lexicographically smallest node sequence is returned.
std::optional<Path> shortest_path(const Network& net, NodeId origin, NodeId destination,
                                  const std::vector<double>& weights, const GraphMask& mask = {},
                                  double tol = 1e-9);

struct PathList {
  std::vector<Path> paths;
  bool truncated = false;
};

// Every simple path whose weight is within `tol` of the minimum, in
// lexicographic order, stopping after `cap` paths.
PathList near_shortest_paths(const Network& net, NodeId origin, NodeId destination,
                             const std::vector<double>& weights, double tol, std::size_t cap,
                             const GraphMask& mask = {});

// Every simple path in lexicographic order. Throws ResourceLimitError when
// more than `cap` paths exist.
std::vector<Path> enumerate_simple_paths(const Network& net, NodeId origin, NodeId destination,
                                         std::size_t cap, const GraphMask& mask = {});

// Simple paths in non-decreasing weight order (Yen); ties by node sequence.
class KShortestPaths {
 public:
  KShortestPaths(const Network& net, NodeId origin, NodeId destination,
                 std::vector<double> weights, GraphMask mask = {});
  std::optional<Path> next();

 private:
  struct Candidate {
    double weight;
    Path path;
    std::partial_ordering operator<=>(const Candidate& o) const {
      if (auto c = weight <=> o.weight; c != 0) return c;
      return path <=> o.path;
    }
    bool operator==(const Candidate& o) const { return weight == o.weight && path == o.path; }
  };

  const Network& net_;
  NodeId origin_;
  NodeId destination_;
  std::vector<double> weights_;
  GraphMask mask_;
  std::vector<Path> found_;
  std::vector<Candidate> candidates_;
  bool started_ = false;
};

}  // namespace maas
