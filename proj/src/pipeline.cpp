#include "maas/pipeline.hpp"

#include <chrono>

namespace maas {

namespace {

double since_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const char* to_string(GenerationMethod m) {
  return m == GenerationMethod::kAlgorithm1 ? "algorithm1" : "enumeration";
}

ConstraintSystem generate_constraints(const Network& net, const DemandTable& demand,
                                      const MatchingArtifacts& artifacts, GenerationMethod method,
                                      const StabilityOptions& options) {
  return method == GenerationMethod::kAlgorithm1
             ? generate_constraints_algorithm1(net, demand, artifacts, options)
             : generate_constraints_enumeration(net, demand, artifacts, options);
}

PipelineResult run_pipeline(const Network& net, const DemandTable& demand,
                            const PipelineOptions& options) {
  PipelineResult r;
  auto t0 = std::chrono::steady_clock::now();
  r.artifacts = solve_matching_artifacts(net, demand, options.matching);
  r.matching_ms = since_ms(t0);

  t0 = std::chrono::steady_clock::now();
  r.system = generate_constraints(net, demand, r.artifacts, options.generation, options.stability);
  r.generation_ms = since_ms(t0);

  t0 = std::chrono::steady_clock::now();
  const auto& cfg = options.matching.solver;
  r.buyer = stable_outcome(r.system, ObjectivePolicy::buyer_optimal(options.demand_weighted),
                           options.outcome, cfg);
  r.core_nonempty = r.buyer.status == OutcomeStatus::kOptimal;
  if (r.core_nonempty) {
    r.seller = stable_outcome(r.system, ObjectivePolicy::seller_optimal(), options.outcome, cfg);
    if (options.custom) {
      ObjectivePolicy p = *options.custom;
      p.demand_weighted = options.demand_weighted;
      r.custom = stable_outcome(r.system, p, options.outcome, cfg);
    }
  }
  r.solve_ms = since_ms(t0);
  return r;
}

}  // namespace maas
