#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "maas/error.hpp"
#include "maas/fixtures.hpp"
#include "maas/random_instance.hpp"

namespace maas::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw InputError("cannot write " + p.string());
  f << std::setprecision(17);
  return f;
}

json metrics_json(const StableOutcome& o) {
  json j;
  j["status"] = to_string(o.status);
  if (o.status != OutcomeStatus::kOptimal) return j;
  j["objective"] = o.objective;
  j["consumer_surplus"] = o.consumer_surplus;
  j["total_revenue"] = o.total_revenue;
  j["services_per_traveler"] = o.services_per_traveler;
  j["operators"] = json::array();
  for (const auto& m : o.operators) {
    j["operators"].push_back({{"operator", m.op.value}, {"ridership", m.ridership},
                              {"revenue", m.revenue}, {"operating_cost", m.operating_cost},
                              {"subsidy", m.subsidy}, {"profit", m.profit},
                              {"average_fare", m.average_fare}, {"min_fare", m.min_fare},
                              {"max_fare", m.max_fare}});
  }
  return j;
}

void print_outcome(std::ostream& out, const char* label, const StableOutcome& o) {
  out << label << ": " << to_string(o.status);
  if (o.status == OutcomeStatus::kOptimal) {
    out << ", objective " << format_number(o.objective) << ", consumer surplus "
        << format_number(o.consumer_surplus) << ", revenue " << format_number(o.total_revenue);
  }
  out << "\n";
  if (o.status == OutcomeStatus::kOptimal) write_operator_table(out, o);
}

solve::SolverConfig solver_config(const RunManifest& m) {
  solve::SolverConfig c;
  if (!m.engine.empty()) c.engine = m.engine;
  c = solve::with_environment(c);
  c.feasibility_tolerance = m.feasibility_tolerance;
  c.optimality_tolerance = m.optimality_tolerance;
  c.milp.absolute_gap = m.gap;
  c.milp.node_limit = m.node_limit;
  if (m.time_limit > 0) c.milp.time_limit_seconds = m.time_limit;
  return c;
}

}  // namespace

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("manifest " + path + ": " + e.what());
  }
  RunManifest m;
  const fs::path base = fs::path(path).parent_path();
  auto rel = [&](const std::string& p) { return p.empty() || fs::path(p).is_absolute() ? p : (base / p).string(); };
  try {
    m.network = rel(j.value("network", ""));
    m.demand = rel(j.value("demand", ""));
    m.scenario = rel(j.value("scenario", ""));
    if (j.contains("seed")) m.random_seed = j.at("seed").get<std::uint64_t>();
    m.fixture = j.value("fixture", "");
    m.transfer_cost = j.value("transfer_cost", m.transfer_cost);
    m.capacity_scale = j.value("capacity_scale", m.capacity_scale);
    m.output_dir = rel(j.value("output_dir", ""));
    m.engine = j.value("engine", "");
    m.method = j.value("method", m.method);
    m.generation = j.value("generation", m.generation);
    m.feasibility_tolerance = j.value("feasibility_tolerance", m.feasibility_tolerance);
    m.optimality_tolerance = j.value("optimality_tolerance", m.optimality_tolerance);
    m.gap = j.value("gap", m.gap);
    m.tie_tolerance = j.value("tie_tolerance", m.tie_tolerance);
    m.node_limit = j.value("node_limit", m.node_limit);
    m.time_limit = j.value("time_limit", m.time_limit);
    m.enumeration_cap = j.value("enumeration_cap", m.enumeration_cap);
    m.fixed_fare = j.value("fixed_fare", m.fixed_fare);
    m.policies = j.value("policies", m.policies);
    m.demand_weighted = j.value("demand_weighted", m.demand_weighted);
  } catch (const json::exception& e) {
    throw InputError("manifest " + path + ": " + e.what());
  }
  return m;
}

LoadedInputs load_inputs(const RunManifest& m) {
  LoadedInputs in;
  if (m.random_seed) {
    auto inst = random_instance(*m.random_seed);
    in.network = std::move(inst.network);
    in.demand = std::move(inst.demand);
    in.name = "random-" + std::to_string(*m.random_seed);
  } else if (m.fixture == "illustrative") {
    auto inst = build_illustrative_instance();
    in.network = std::move(inst.network);
    in.demand = std::move(inst.demand);
    in.name = "illustrative";
  } else if (m.fixture == "sioux_falls") {
    SiouxFallsOptions so;
    so.transfer_cost = m.transfer_cost;
    so.capacity_scale = m.capacity_scale;
    auto inst = build_sioux_falls(so);
    in.network = std::move(inst.network);
    in.demand = std::move(inst.demand);
    in.name = "sioux_falls";
  } else if (!m.fixture.empty()) {
    throw InputError("unknown fixture '" + m.fixture + "'");
  } else {
    if (m.network.empty() || m.demand.empty()) throw InputError("network and demand files are required");
    in.network = load_network_file(m.network);
    in.demand = load_demand_file(m.demand, in.network);
    in.name = fs::path(m.network).stem().string();
  }
  for (std::uint32_t f : m.fixed_fare) in.annotations.fixed_fare.insert(OperatorId{f});
  for (const auto& p : m.policies) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw InputError("policy '" + p + "' is not id=mode");
    std::uint32_t id = 0;
    try {
      id = static_cast<std::uint32_t>(std::stoul(p.substr(0, eq)));
    } catch (const std::exception&) {
      throw InputError("policy '" + p + "' has a bad operator id");
    }
    in.annotations.objective_modes[OperatorId{id}] = parse_operator_mode(p.substr(eq + 1));
  }
  if (!m.scenario.empty()) {
    const Scenario sc = load_scenario_file(m.scenario);
    auto res = apply_scenario(in.network, in.demand, sc, in.annotations);
    in.network = std::move(res.network);
    in.demand = std::move(res.demand);
    in.annotations = std::move(res.annotations);
    if (!sc.name.empty()) in.name += "+" + sc.name;
  }
  return in;
}

PipelineOptions pipeline_options(const RunManifest& m, const PolicyAnnotations& annotations) {
  PipelineOptions o;
  o.matching.solver = solver_config(m);
  if (m.method == "cg") {
    o.matching.method = MatchingMethod::kColumnGeneration;
  } else if (m.method == "arc") {
    o.matching.method = MatchingMethod::kArcFlow;
  } else {
    throw InputError("unknown matching method '" + m.method + "'");
  }
  if (m.generation == "algorithm1") {
    o.generation = GenerationMethod::kAlgorithm1;
  } else if (m.generation == "enumeration") {
    o.generation = GenerationMethod::kEnumeration;
  } else {
    throw InputError("unknown generation method '" + m.generation + "'");
  }
  o.stability.tie_tolerance = m.tie_tolerance;
  o.stability.enumeration_cap = m.enumeration_cap;
  o.outcome = outcome_options_from(annotations);
  o.demand_weighted = m.demand_weighted;
  if (!annotations.objective_modes.empty()) o.custom = ObjectivePolicy::per_operator(annotations.objective_modes);
  return o;
}

int cmd_run(const RunManifest& m, std::ostream& out) {
  const LoadedInputs in = load_inputs(m);
  const PipelineOptions opts = pipeline_options(m, in.annotations);
  const PipelineResult r = run_pipeline(in.network, in.demand, opts);

  out << "instance " << in.name << ": " << in.network.num_nodes() << " nodes, "
      << in.network.num_links() << " links, " << in.demand.size() << " OD groups\n";
  out << "matching objective " << format_number(r.artifacts.solution.objective) << " ("
      << r.artifacts.solution.nodes << " nodes)\n";
  out << "constraint system: " << r.system.paths.size() << " optimal paths, " << r.system.prices.size()
      << " prices, " << r.system.stability.size() << " stability rows\n";
  out << "core " << (r.core_nonempty ? "nonempty" : "empty") << "\n";
  if (!m.quiet) {
    print_outcome(out, "buyer_optimal", r.buyer);
    if (r.core_nonempty) print_outcome(out, "seller_optimal", r.seller);
    if (r.custom) print_outcome(out, "custom", *r.custom);
  }

  if (!m.output_dir.empty()) {
    const fs::path dir(m.output_dir);
    fs::create_directories(dir);
    const auto& net = in.network;
    const auto& dem = in.demand;
    const auto& sol = r.artifacts.solution;
    {
      auto f = open_out(dir / "link_flows.csv");
      write_link_flows(f, net, sol);
    }
    {
      auto f = open_out(dir / "commodity_flows.csv");
      write_commodity_flows(f, net, dem, sol);
    }
    {
      auto f = open_out(dir / "link_duals.csv");
      write_link_duals(f, net, sol, r.artifacts.mu);
    }
    {
      auto f = open_out(dir / "path_flows.csv");
      write_path_flows(f, net, dem, r.artifacts.decomposition);
    }
    {
      auto f = open_out(dir / "constraints.txt");
      write_constraint_text(f, r.system);
    }
    {
      auto f = open_out(dir / "constraints.json");
      write_constraint_json(f, r.system);
    }
    auto write_outcome = [&](const StableOutcome& o, const std::string& label) {
      auto f = open_out(dir / ("outcome_" + label + ".json"));
      write_outcome_json(f, r.system, o, label);
      auto t = open_out(dir / ("operators_" + label + ".csv"));
      write_operator_table(t, o);
    };
    write_outcome(r.buyer, "buyer");
    if (r.core_nonempty) write_outcome(r.seller, "seller");
    if (r.custom) write_outcome(*r.custom, "custom");

    json metrics;
    metrics["instance"] = in.name;
    metrics["matching"] = {{"objective", sol.objective},
                           {"operated_links", std::count(sol.active.begin(), sol.active.end(), 1)},
                           {"branch_and_bound_nodes", sol.nodes}};
    metrics["constraints"] = {{"generation", to_string(opts.generation)},
                              {"optimal_paths", r.system.paths.size()},
                              {"prices", r.system.prices.size()},
                              {"stability_rows", r.system.stability.size()}};
    metrics["core_nonempty"] = r.core_nonempty;
    metrics["buyer"] = metrics_json(r.buyer);
    if (r.core_nonempty) metrics["seller"] = metrics_json(r.seller);
    if (r.custom) metrics["custom"] = metrics_json(*r.custom);
    {
      auto f = open_out(dir / "metrics.json");
      f << metrics.dump(2) << "\n";
    }
    json timing = {{"matching_ms", r.matching_ms}, {"generation_ms", r.generation_ms},
                   {"solve_ms", r.solve_ms}};
    auto f = open_out(dir / "timing.json");
    f << timing.dump(2) << "\n";
  }
  return r.core_nonempty ? kExitOk : kExitEmptyCore;
}

namespace {

json read_metrics(const std::string& dir) {
  const fs::path p = fs::path(dir) / "metrics.json";
  std::ifstream in(p);
  if (!in) throw InputError("cannot open " + p.string());
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

std::string cell(const json* op, const char* key) {
  if (!op) return "n/a";
  return format_number(op->at(key).get<double>());
}

std::string delta(const json* a, const json* b, const char* key) {
  if (!a || !b) return "n/a";
  return format_number(b->at(key).get<double>() - a->at(key).get<double>());
}

}  // namespace

int cmd_compare(const std::string& baseline_dir, const std::string& scenario_dir,
                const std::string& output, std::ostream& out) {
  const json base = read_metrics(baseline_dir);
  const json scen = read_metrics(scenario_dir);
  std::ostringstream table;
  table << "policy,operator,revenue_base,revenue_scenario,revenue_delta,avg_fare_base,"
           "avg_fare_scenario,avg_fare_delta,ridership_base,ridership_scenario,ridership_delta\n";
  bool partial = false;
  for (const char* policy : {"buyer", "seller", "custom"}) {
    const bool in_base = base.contains(policy) && base[policy].contains("operators");
    const bool in_scen = scen.contains(policy) && scen[policy].contains("operators");
    if (!in_base && !in_scen) continue;
    std::map<std::uint32_t, const json*> a;
    std::map<std::uint32_t, const json*> b;
    if (in_base) {
      for (const auto& o : base[policy]["operators"]) a[o["operator"].get<std::uint32_t>()] = &o;
    }
    if (in_scen) {
      for (const auto& o : scen[policy]["operators"]) b[o["operator"].get<std::uint32_t>()] = &o;
    }
    std::set<std::uint32_t> ids;
    for (auto& [k, v] : a) ids.insert(k);
    for (auto& [k, v] : b) ids.insert(k);
    for (std::uint32_t id : ids) {
      const json* x = a.count(id) ? a[id] : nullptr;
      const json* y = b.count(id) ? b[id] : nullptr;
      if (!x || !y) partial = true;
      table << policy << "," << id << "," << cell(x, "revenue") << "," << cell(y, "revenue") << ","
            << delta(x, y, "revenue") << "," << cell(x, "average_fare") << "," << cell(y, "average_fare")
            << "," << delta(x, y, "average_fare") << "," << cell(x, "ridership") << ","
            << cell(y, "ridership") << "," << delta(x, y, "ridership") << "\n";
    }
    const json* cx = in_base ? &base[policy] : nullptr;
    const json* cy = in_scen ? &scen[policy] : nullptr;
    table << policy << ",consumer_surplus," << cell(cx, "consumer_surplus") << ","
          << cell(cy, "consumer_surplus") << "," << delta(cx, cy, "consumer_surplus") << ",,,,,,\n";
  }
  out << table.str();
  if (!output.empty()) {
    auto f = open_out(output);
    f << table.str();
  }
  if (partial) std::cerr << "note: operator sets differ between runs; missing cells are n/a\n";
  return kExitOk;
}

int cmd_bench(const BenchOptions& b, std::ostream& out) {
  out << "instance,a1_rows,enum_rows,a1_generation_ms,enum_generation_ms,a1_solve_ms,enum_solve_ms,"
         "a1_buyer,enum_buyer,a1_seller,enum_seller,agree\n";
  auto bench_one = [&](const std::string& name, const Network& net, const DemandTable& dem) {
    PipelineOptions po = pipeline_options(b.manifest, {});
    const auto art = solve_matching_artifacts(net, dem, po.matching);
    struct Side {
      std::string rows = "capped";
      double gen_ms = 0.0;
      double solve_ms = 0.0;
      std::optional<double> buyer;
      std::optional<double> seller;
      bool done = false;
    };
    auto run_side = [&](GenerationMethod g) {
      Side s;
      auto t0 = std::chrono::steady_clock::now();
      ConstraintSystem cs;
      try {
        cs = generate_constraints(net, dem, art, g, po.stability);
      } catch (const ResourceLimitError&) {
        return s;
      }
      s.gen_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      s.rows = std::to_string(cs.stability.size());
      t0 = std::chrono::steady_clock::now();
      const auto buyer = stable_outcome(cs, ObjectivePolicy::buyer_optimal(), po.outcome, po.matching.solver);
      if (buyer.status == OutcomeStatus::kOptimal) {
        s.buyer = buyer.objective;
        s.seller = stable_outcome(cs, ObjectivePolicy::seller_optimal(), po.outcome, po.matching.solver).objective;
      }
      s.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      s.done = true;
      return s;
    };
    const Side a = run_side(GenerationMethod::kAlgorithm1);
    const Side e = run_side(GenerationMethod::kEnumeration);
    auto num = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("empty"); };
    auto close = [](const std::optional<double>& x, const std::optional<double>& y) {
      if (!x || !y) return !x && !y;
      return std::abs(*x - *y) <= 1e-6 * std::max(1.0, std::abs(*y));
    };
    std::string agree = "capped";
    if (a.done && e.done) agree = close(a.buyer, e.buyer) && close(a.seller, e.seller) ? "yes" : "no";
    out << name << "," << a.rows << "," << e.rows << "," << a.gen_ms << ","
        << (e.done ? std::to_string(e.gen_ms) : "capped") << "," << a.solve_ms << ","
        << (e.done ? std::to_string(e.solve_ms) : "capped") << "," << num(a.buyer) << ","
        << (e.done ? num(e.buyer) : "capped") << "," << num(a.seller) << ","
        << (e.done ? num(e.seller) : "capped") << "," << agree << "\n";
    return agree != "no";
  };
  bool all = true;
  if (b.random_batch > 0) {
    RandomInstanceOptions ro;
    ro.min_nodes = std::min(ro.min_nodes, b.random_nodes);
    ro.max_nodes = b.random_nodes;
    for (int k = 0; k < b.random_batch; ++k) {
      const std::uint64_t seed = b.seed + static_cast<std::uint64_t>(k);
      const auto inst = random_instance(seed, ro);
      try {
        all = bench_one("random-" + std::to_string(seed), inst.network, inst.demand) && all;
      } catch (const NumericalError& e) {
        out << "random-" << seed << ",,,,,,,,,,,skipped: " << e.what() << "\n";
      }
    }
  } else {
    const LoadedInputs in = load_inputs(b.manifest);
    all = bench_one(in.name, in.network, in.demand);
  }
  return all ? kExitOk : kExitInternal;
}

int cmd_fixtures(const std::string& output_dir, double transfer_cost, std::ostream& out) {
  const fs::path dir(output_dir);
  fs::create_directories(dir);
  auto emit = [&](const std::string& stem, const Instance& inst) {
    {
      auto f = open_out(dir / (stem + "_network.csv"));
      write_network(f, inst.network);
    }
    auto f = open_out(dir / (stem + "_demand.csv"));
    write_demand(f, inst.demand);
    out << "wrote " << (dir / (stem + "_network.csv")).string() << " and "
        << (dir / (stem + "_demand.csv")).string() << "\n";
  };
  emit("illustrative", build_illustrative_instance());
  emit("sioux_falls", build_sioux_falls(transfer_cost));
  return kExitOk;
}

int cmd_lemma1(const CoopCompeteInstance& inst, bool pipeline, double utility, std::ostream& out) {
  const double raw = lemma1_lower_bound(inst);
  out << "lemma1 raw " << format_number(raw) << " clamped " << format_number(clamp_price(raw)) << "\n";
  if (pipeline) {
    const Instance net = coop_compete_network(inst, utility, 10.0 * inst.d);
    const auto art = solve_matching_artifacts(net.network, net.demand);
    const auto cs = generate_constraints_algorithm1(net.network, net.demand, art);
    OutcomeOptions oo;
    oo.pooled_covers = {{kLargeOperator, kSmallOperator}};
    const auto p = extreme_price(cs, oo, make_path(net.network, {1, 2, 3}), kSmallOperator, false);
    out << "pipeline min price "
        << (p ? format_number(*p) : std::string("none (cooperative path not optimal or empty core)")) << "\n";
  }
  return kExitOk;
}

int cmd_lemma2(const SmallVsLargeInstance& inst, std::ostream& out) {
  out << "lemma2 upper bound " << format_number(lemma2_upper_bound(inst)) << "\n";
  return kExitOk;
}

int cmd_enumerate_paths(const RunManifest& m, std::optional<NodeId> origin,
                        std::optional<NodeId> destination, std::ostream& out) {
  const LoadedInputs in = load_inputs(m);
  const PipelineOptions po = pipeline_options(m, in.annotations);
  const auto art = solve_matching_artifacts(in.network, in.demand, po.matching);
  const auto sets = optimal_path_sets(in.network, in.demand, art, po.stability);
  const auto w = omega_weights(in.network, art.mu, art.solution.active);
  out << "origin,destination,path,travel_cost,omega,optimal,flow\n";
  for (std::size_t s = 0; s < in.demand.size(); ++s) {
    const auto& e = in.demand[s];
    if ((origin && e.origin != *origin) || (destination && e.destination != *destination)) continue;
    for (const Path& p : enumerate_simple_paths(in.network, e.origin, e.destination, m.enumeration_cap)) {
      const bool opt = std::binary_search(sets[s].paths.begin(), sets[s].paths.end(), p);
      double z = 0.0;
      for (const auto& pf : art.decomposition.paths) {
        if (pf.group == s && pf.path == p) z += pf.flow;
      }
      out << e.origin << "," << e.destination << ",\"" << to_string(p) << "\","
          << format_number(path_travel_cost(in.network, p)) << "," << format_number(path_weight(p, w))
          << "," << (opt ? 1 : 0) << "," << format_number(z) << "\n";
    }
  }
  return kExitOk;
}

int report_error(const std::exception& e, std::ostream& err) {
  json j;
  int code = kExitInternal;
  if (const auto* me = dynamic_cast<const Error*>(&e)) {
    j["error"] = to_string(me->error_class());
    switch (me->error_class()) {
      case ErrorClass::kInput:
      case ErrorClass::kPrecondition: code = kExitInput; break;
      case ErrorClass::kInfeasibleDemand: code = kExitInfeasibleDemand; break;
      case ErrorClass::kEmptyCore: code = kExitEmptyCore; break;
      case ErrorClass::kResourceLimit: code = kExitResourceLimit; break;
      case ErrorClass::kNumerical:
      case ErrorClass::kInternal: code = kExitInternal; break;
    }
    if (const auto* ie = dynamic_cast<const InfeasibleDemandError*>(&e)) {
      json ods = json::array();
      for (auto [o, d] : ie->offending_ods()) ods.push_back({o, d});
      j["ods"] = ods;
    }
    if (const auto* re = dynamic_cast<const ResourceLimitError*>(&e)) {
      if (re->incumbent()) j["incumbent"] = *re->incumbent();
      if (re->bound()) j["bound"] = *re->bound();
    }
  } else {
    j["error"] = "internal_error";
  }
  j["message"] = e.what();
  err << j.dump() << "\n";
  return code;
}

}  // namespace maas::cli
