#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "maas/error.hpp"
#include "maas/solve/linear_program.hpp"

namespace maas::solve {

struct BranchAndBoundOptions {
  double integrality_tolerance = 1e-6;
  double absolute_gap = 1e-6;
  long node_limit = 2'000'000;
  double time_limit_seconds = kInfinity;
};

// Fixing of each binary: -1 free, 0 or 1 fixed.
using Fixing = std::vector<std::int8_t>;

template <class Payload>
struct Candidate {
  double objective = 0.0;
  Payload payload{};
};

template <class Payload>
struct Relaxation {
  double objective = 0.0;
  std::vector<double> binary_values;
  Payload payload{};
  // Optional integer-feasible point found while solving the node.
  std::optional<Candidate<Payload>> heuristic;
};

template <class Payload>
struct BranchAndBoundResult {
  bool found = false;
  double objective = kInfinity;
  double bound = -kInfinity;
  Payload payload{};
  long nodes = 0;
};

// Best-bound branch-and-bound over binaries for a minimization problem.
// `relax(fixing)` returns std::nullopt when the node is infeasible.
// Branching picks the most fractional binary, lowest index on ties.
template <class Payload, class RelaxFn>
BranchAndBoundResult<Payload> branch_and_bound(std::size_t num_binaries, RelaxFn&& relax,
                                               const BranchAndBoundOptions& options) {
  struct Node {
    double bound;
    std::uint64_t id;
    Fixing fixing;
  };
  struct Worse {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      return a.id > b.id;
    }
  };

  const auto start = std::chrono::steady_clock::now();
  BranchAndBoundResult<Payload> out;
  std::priority_queue<Node, std::vector<Node>, Worse> open;
  std::uint64_t next_id = 0;
  open.push(Node{-kInfinity, next_id++, Fixing(num_binaries, -1)});

  auto offer = [&](double obj, Payload&& payload) {
    if (!out.found || obj < out.objective - 1e-12) {
      out.found = true;
      out.objective = obj;
      out.payload = std::move(payload);
    }
  };

  while (!open.empty()) {
    if (out.found && open.top().bound >= out.objective - options.absolute_gap) break;
    if (out.nodes >= options.node_limit) {
      throw ResourceLimitError("branch-and-bound node limit reached",
                               out.found ? std::optional<double>(out.objective) : std::nullopt,
                               open.top().bound);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > options.time_limit_seconds) {
      throw ResourceLimitError("branch-and-bound time limit reached",
                               out.found ? std::optional<double>(out.objective) : std::nullopt,
                               open.top().bound);
    }
    Node node = open.top();
    open.pop();
    ++out.nodes;

    std::optional<Relaxation<Payload>> rel = relax(node.fixing);
    if (!rel) continue;
    if (rel->heuristic) offer(rel->heuristic->objective, std::move(rel->heuristic->payload));
    if (out.found && rel->objective >= out.objective - options.absolute_gap) continue;

    int branch = -1;
    double best_frac = 0.0;
    for (std::size_t b = 0; b < num_binaries; ++b) {
      if (node.fixing[b] >= 0) continue;
      const double v = rel->binary_values[b];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > options.integrality_tolerance && frac > best_frac + 1e-12) {
        best_frac = frac;
        branch = static_cast<int>(b);
      }
    }
    if (branch < 0) {
      offer(rel->objective, std::move(rel->payload));
      continue;
    }
    for (std::int8_t side : {std::int8_t{0}, std::int8_t{1}}) {
      Node child{rel->objective, next_id++, node.fixing};
      child.fixing[branch] = side;
      open.push(std::move(child));
    }
  }
  out.bound = open.empty() ? out.objective : std::min(out.objective, open.top().bound);
  return out;
}

}  // namespace maas::solve
