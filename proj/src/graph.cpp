#include "maas/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

#include "maas/error.hpp"
#include "maas/solve/linear_program.hpp"

namespace maas {

using solve::kInfinity;

std::string to_string(const Path& p) {
  std::string s = "(";
  for (std::size_t k = 0; k < p.nodes.size(); ++k) s += (k ? "," : "") + std::to_string(p.nodes[k]);
  return s + ")";
}

Path make_path(const Network& net, const std::vector<NodeId>& nodes) {
  Path p;
  p.nodes = nodes;
  std::set<NodeId> seen;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!seen.insert(nodes[k]).second) throw InputError("path repeats node " + std::to_string(nodes[k]));
    if (k + 1 < nodes.size()) p.links.push_back(net.link_index(nodes[k], nodes[k + 1]));
  }
  return p;
}

std::vector<OperatorId> path_operators(const Network& net, const Path& p) {
  std::vector<OperatorId> ops;
  for (std::size_t l : p.links) {
    const OperatorId o = net.link(l).owner;
    if (o != kPlatformOperator) ops.push_back(o);
  }
  std::sort(ops.begin(), ops.end());
  ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
  return ops;
}

double path_travel_cost(const Network& net, const Path& p) {
  double s = 0.0;
  for (std::size_t l : p.links) s += net.link(l).travel_cost;
  return s;
}

double path_weight(const Path& p, const std::vector<double>& weights) {
  double s = 0.0;
  for (std::size_t l : p.links) s += weights[l];
  return s;
}

std::vector<double> distances_to(const Network& net, std::size_t target,
                                 const std::vector<double>& weights, const GraphMask& mask) {
  std::vector<double> dist(net.num_nodes(), kInfinity);
  if (!mask.node(target)) return dist;
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[target] = 0.0;
  pq.emplace(0.0, target);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (std::size_t l : net.in_links(v)) {
      if (!mask.link(l)) continue;
      const std::size_t u = net.tail_pos(l);
      if (!mask.node(u)) continue;
      const double nd = d + weights[l];
      if (nd < dist[u]) {
        dist[u] = nd;
        pq.emplace(nd, u);
      }
    }
  }
  return dist;
}

namespace {

// Depth-first search over simple paths from `src` to `dst` in lexicographic
// order. `admissible(g, link)` decides whether the link can extend a prefix of
// weight g; `emit` returns false to stop.
void dfs_paths(const Network& net, std::size_t src, std::size_t dst, const GraphMask& mask,
               const std::vector<double>& weights,
               const std::function<bool(double, std::size_t)>& admissible,
               const std::function<bool(const Path&)>& emit) {
  std::vector<char> on_path(net.num_nodes(), 0);
  Path cur;
  cur.nodes.push_back(net.nodes()[src]);
  on_path[src] = 1;
  bool stop = false;
  std::function<void(std::size_t, double)> rec = [&](std::size_t v, double g) {
    if (v == dst) {
      if (!emit(cur)) stop = true;
      return;
    }
    for (std::size_t l : net.out_links(v)) {
      if (stop) return;
      if (!mask.link(l)) continue;
      const std::size_t h = net.head_pos(l);
      if (on_path[h] || !mask.node(h)) continue;
      if (!admissible(g, l)) continue;
      on_path[h] = 1;
      cur.nodes.push_back(net.nodes()[h]);
      cur.links.push_back(l);
      rec(h, g + weights[l]);
      cur.nodes.pop_back();
      cur.links.pop_back();
      on_path[h] = 0;
    }
  };
  rec(src, 0.0);
}

}  // namespace

std::optional<Path> shortest_path(const Network& net, NodeId origin, NodeId destination,
                                  const std::vector<double>& weights, const GraphMask& mask,
                                  double tol) {
  const std::size_t src = net.node_index(origin);
  const std::size_t dst = net.node_index(destination);
  if (!mask.node(src)) return std::nullopt;
  const auto h = distances_to(net, dst, weights, mask);
  if (h[src] == kInfinity) return std::nullopt;
  const double bound = h[src] + tol + 1e-10 * (1.0 + h[src]);
  std::optional<Path> out;
  dfs_paths(
      net, src, dst, mask, weights,
      [&](double g, std::size_t l) { return g + weights[l] + h[net.head_pos(l)] <= bound; },
      [&](const Path& p) {
        out = p;
        return false;
      });
  return out;
}

PathList near_shortest_paths(const Network& net, NodeId origin, NodeId destination,
                             const std::vector<double>& weights, double tol, std::size_t cap,
                             const GraphMask& mask) {
  PathList out;
  const std::size_t src = net.node_index(origin);
  const std::size_t dst = net.node_index(destination);
  if (!mask.node(src)) return out;
  const auto h = distances_to(net, dst, weights, mask);
  if (h[src] == kInfinity) return out;
  const double bound = h[src] + tol + 1e-10 * (1.0 + h[src]);
  dfs_paths(
      net, src, dst, mask, weights,
      [&](double g, std::size_t l) { return g + weights[l] + h[net.head_pos(l)] <= bound; },
      [&](const Path& p) {
        if (out.paths.size() >= cap) {
          out.truncated = true;
          return false;
        }
        out.paths.push_back(p);
        return true;
      });
  return out;
}

std::vector<Path> enumerate_simple_paths(const Network& net, NodeId origin, NodeId destination,
                                         std::size_t cap, const GraphMask& mask) {
  std::vector<Path> out;
  const std::size_t src = net.node_index(origin);
  const std::size_t dst = net.node_index(destination);
  if (!mask.node(src)) return out;
  const std::vector<double> unit(net.num_links(), 1.0);
  const auto h = distances_to(net, dst, unit, mask);
  if (h[src] == kInfinity) return out;
  bool capped = false;
  dfs_paths(
      net, src, dst, mask, unit,
      [&](double, std::size_t l) { return h[net.head_pos(l)] != kInfinity; },
      [&](const Path& p) {
        if (out.size() >= cap) {
          capped = true;
          return false;
        }
        out.push_back(p);
        return true;
      });
  if (capped) {
    throw ResourceLimitError("more than " + std::to_string(cap) + " simple paths from " +
                             std::to_string(origin) + " to " + std::to_string(destination));
  }
  return out;
}

KShortestPaths::KShortestPaths(const Network& net, NodeId origin, NodeId destination,
                               std::vector<double> weights, GraphMask mask)
    : net_(net),
      origin_(origin),
      destination_(destination),
      weights_(std::move(weights)),
      mask_(std::move(mask)) {}

std::optional<Path> KShortestPaths::next() {
  if (!started_) {
    started_ = true;
    auto p = shortest_path(net_, origin_, destination_, weights_, mask_, 0.0);
    if (!p) return std::nullopt;
    found_.push_back(*p);
    return p;
  }
  if (found_.empty()) return std::nullopt;

  const Path& last = found_.back();
  for (std::size_t i = 0; i + 1 < last.nodes.size(); ++i) {
    GraphMask m = mask_;
    if (m.link_ok.empty()) m.link_ok.assign(net_.num_links(), 1);
    if (m.node_ok.empty()) m.node_ok.assign(net_.num_nodes(), 1);
    for (const Path& q : found_) {
      if (q.nodes.size() > i + 1 && std::equal(q.nodes.begin(), q.nodes.begin() + i + 1, last.nodes.begin())) {
        m.link_ok[q.links[i]] = 0;
      }
    }
    for (std::size_t k = 0; k < i; ++k) m.node_ok[net_.node_index(last.nodes[k])] = 0;
    auto spur = shortest_path(net_, last.nodes[i], destination_, weights_, m, 0.0);
    if (!spur) continue;
    Path total;
    total.nodes.assign(last.nodes.begin(), last.nodes.begin() + i);
    total.links.assign(last.links.begin(), last.links.begin() + i);
    total.nodes.insert(total.nodes.end(), spur->nodes.begin(), spur->nodes.end());
    total.links.insert(total.links.end(), spur->links.begin(), spur->links.end());
    Candidate c{path_weight(total, weights_), std::move(total)};
    if (std::find(candidates_.begin(), candidates_.end(), c) == candidates_.end()) {
      candidates_.push_back(std::move(c));
    }
  }
  if (candidates_.empty()) {
    found_.clear();
    return std::nullopt;
  }
  auto best = std::min_element(candidates_.begin(), candidates_.end());
  Path p = best->path;
  candidates_.erase(best);
  found_.push_back(p);
  return p;
}

}  // namespace maas
