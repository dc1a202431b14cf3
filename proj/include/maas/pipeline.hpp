#pragma once

#include <optional>

#include "maas/matching.hpp"
#include "maas/outcomes.hpp"
#include "maas/stability.hpp"

namespace maas {

enum class GenerationMethod { kAlgorithm1, kEnumeration };

const char* to_string(GenerationMethod m);

struct PipelineOptions {
  MatchingOptions matching;
  StabilityOptions stability;
  GenerationMethod generation = GenerationMethod::kAlgorithm1;
  OutcomeOptions outcome;
  bool demand_weighted = false;
  // Extra per-operator policy solved next to the two extremes.
  std::optional<ObjectivePolicy> custom;
};

struct PipelineResult {
  MatchingArtifacts artifacts;
  ConstraintSystem system;
  bool core_nonempty = false;
  StableOutcome buyer;
  StableOutcome seller;
  std::optional<StableOutcome> custom;
  double matching_ms = 0.0;
  double generation_ms = 0.0;
  double solve_ms = 0.0;
};

// Matching, duals and path flows, constraint generation, then the outcome
// extremes.
PipelineResult run_pipeline(const Network& net, const DemandTable& demand,
                            const PipelineOptions& options = {});

ConstraintSystem generate_constraints(const Network& net, const DemandTable& demand,
                                      const MatchingArtifacts& artifacts, GenerationMethod method,
                                      const StabilityOptions& options = {});

}  // namespace maas
