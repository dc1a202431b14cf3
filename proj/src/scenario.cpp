#include "maas/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>

#include "maas/error.hpp"

namespace maas {

using nlohmann::json;

const char* to_string(OperatorMode m) {
  return m == OperatorMode::kRevenueMax ? "revenue_max" : "welfare_max";
}

OperatorMode parse_operator_mode(const std::string& s) {
  if (s == "revenue_max") return OperatorMode::kRevenueMax;
  if (s == "welfare_max") return OperatorMode::kWelfareMax;
  throw InputError("unknown objective mode '" + s + "'");
}

namespace {

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("scenario edit missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("scenario edit field '") + key + "': " + e.what());
  }
}

LinkKey parse_link_key(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("link reference must be [tail, head]");
  return LinkKey{j[0].get<NodeId>(), j[1].get<NodeId>()};
}

OperatorId parse_operator(const json& j) {
  if (!j.is_number_unsigned()) throw InputError("operator id must be a non-negative integer");
  return OperatorId{j.get<std::uint32_t>()};
}

json link_key_json(const LinkKey& k) { return json::array({k.tail, k.head}); }

ScenarioEdit parse_edit(const json& j) {
  const auto op = required<std::string>(j, "op");
  if (op == "set_capacity") {
    return edit::SetCapacity{parse_link_key(j.at("link")), required<double>(j, "capacity")};
  }
  if (op == "scale_costs") {
    return edit::ScaleCosts{parse_operator(j.at("operator")), required<double>(j, "factor")};
  }
  if (op == "scale_travel") {
    edit::ScaleTravel e;
    const auto& o = j.at("operator");
    if (!(o.is_string() && o.get<std::string>() == "all")) e.op = parse_operator(o);
    e.factor = required<double>(j, "factor");
    return e;
  }
  if (op == "surcharge") {
    return edit::Surcharge{parse_operator(j.at("operator")), required<double>(j, "delta")};
  }
  if (op == "subsidy") {
    return edit::Subsidy{parse_link_key(j.at("link")), required<double>(j, "gamma")};
  }
  if (op == "add_links") {
    edit::AddLinks e;
    for (const auto& l : j.at("links")) {
      Link link;
      link.tail = required<NodeId>(l, "tail");
      link.head = required<NodeId>(l, "head");
      link.travel_cost = required<double>(l, "travel_cost");
      link.operating_cost = required<double>(l, "operating_cost");
      link.capacity = required<double>(l, "capacity");
      link.owner = parse_operator(l.at("owner"));
      e.links.push_back(link);
    }
    return e;
  }
  if (op == "remove_links") {
    edit::RemoveLinks e;
    for (const auto& l : j.at("links")) e.links.push_back(parse_link_key(l));
    return e;
  }
  if (op == "merge_operators") {
    edit::MergeOperators e;
    for (const auto& m : j.at("members")) e.members.push_back(parse_operator(m));
    e.target = parse_operator(j.at("target"));
    return e;
  }
  if (op == "set_objective_policy") {
    return edit::SetObjectivePolicy{parse_operator(j.at("operator")),
                                    parse_operator_mode(required<std::string>(j, "mode"))};
  }
  if (op == "set_fixed_fare") {
    return edit::SetFixedFare{parse_operator(j.at("operator")), required<bool>(j, "flag")};
  }
  throw InputError("unknown scenario edit '" + op + "'");
}

struct EditToJson {
  json operator()(const edit::SetCapacity& e) const {
    return {{"op", "set_capacity"}, {"link", link_key_json(e.link)}, {"capacity", e.capacity}};
  }
  json operator()(const edit::ScaleCosts& e) const {
    return {{"op", "scale_costs"}, {"operator", e.op.value}, {"factor", e.factor}};
  }
  json operator()(const edit::ScaleTravel& e) const {
    json o = e.op ? json(e.op->value) : json("all");
    return {{"op", "scale_travel"}, {"operator", o}, {"factor", e.factor}};
  }
  json operator()(const edit::Surcharge& e) const {
    return {{"op", "surcharge"}, {"operator", e.op.value}, {"delta", e.delta}};
  }
  json operator()(const edit::Subsidy& e) const {
    return {{"op", "subsidy"}, {"link", link_key_json(e.link)}, {"gamma", e.gamma}};
  }
  json operator()(const edit::AddLinks& e) const {
    json links = json::array();
    for (const auto& l : e.links) {
      links.push_back({{"tail", l.tail},
                       {"head", l.head},
                       {"travel_cost", l.travel_cost},
                       {"operating_cost", l.operating_cost},
                       {"capacity", l.capacity},
                       {"owner", l.owner.value}});
    }
    return {{"op", "add_links"}, {"links", links}};
  }
  json operator()(const edit::RemoveLinks& e) const {
    json links = json::array();
    for (const auto& k : e.links) links.push_back(link_key_json(k));
    return {{"op", "remove_links"}, {"links", links}};
  }
  json operator()(const edit::MergeOperators& e) const {
    json members = json::array();
    for (const auto& m : e.members) members.push_back(m.value);
    return {{"op", "merge_operators"}, {"members", members}, {"target", e.target.value}};
  }
  json operator()(const edit::SetObjectivePolicy& e) const {
    return {{"op", "set_objective_policy"}, {"operator", e.op.value}, {"mode", to_string(e.mode)}};
  }
  json operator()(const edit::SetFixedFare& e) const {
    return {{"op", "set_fixed_fare"}, {"operator", e.op.value}, {"flag", e.flag}};
  }
};

void check_factor(double f, const char* what) {
  if (!std::isfinite(f) || f < 0) throw InputError(std::string(what) + " factor must be non-negative");
}

bool has_operator(const std::vector<Link>& links, OperatorId op) {
  return std::any_of(links.begin(), links.end(), [&](const Link& l) { return l.owner == op; });
}

void require_operator(const std::vector<Link>& links, OperatorId op) {
  if (!has_operator(links, op)) {
    throw InputError("scenario references missing operator " + std::to_string(op.value));
  }
}

Link& require_link(std::vector<Link>& links, const LinkKey& k) {
  for (auto& l : links) {
    if (l.key() == k) return l;
  }
  throw InputError("scenario references missing link " + to_string(k));
}

struct Applier {
  std::vector<Link>& links;
  PolicyAnnotations& ann;

  void operator()(const edit::SetCapacity& e) const {
    if (!(e.capacity > 0)) throw InputError("capacity must be positive");
    require_link(links, e.link).capacity = e.capacity;
  }
  void operator()(const edit::ScaleCosts& e) const {
    check_factor(e.factor, "scale_costs");
    require_operator(links, e.op);
    for (auto& l : links) {
      if (l.owner == e.op) l.operating_cost *= e.factor;
    }
  }
  void operator()(const edit::ScaleTravel& e) const {
    check_factor(e.factor, "scale_travel");
    if (e.op) require_operator(links, *e.op);
    for (auto& l : links) {
      if (!e.op || l.owner == *e.op) l.travel_cost *= e.factor;
    }
  }
  void operator()(const edit::Surcharge& e) const {
    require_operator(links, e.op);
    for (auto& l : links) {
      if (l.owner != e.op) continue;
      l.operating_cost += e.delta;
      if (l.operating_cost < 0) throw InputError("surcharge makes an operating cost negative");
    }
  }
  void operator()(const edit::Subsidy& e) const {
    const Link& l = require_link(links, e.link);
    if (!(e.gamma >= 0) || e.gamma > l.operating_cost) {
      throw InputError("subsidy on " + to_string(e.link) + " must lie in [0, operating cost]");
    }
    ann.subsidies[e.link] = e.gamma;
  }
  void operator()(const edit::AddLinks& e) const {
    for (const auto& l : e.links) {
      for (const auto& existing : links) {
        if (existing.key() == l.key()) throw InputError("added link " + to_string(l.key()) + " exists");
      }
      links.push_back(l);
    }
  }
  void operator()(const edit::RemoveLinks& e) const {
    for (const auto& k : e.links) {
      require_link(links, k);
      links.erase(std::remove_if(links.begin(), links.end(), [&](const Link& l) { return l.key() == k; }),
                  links.end());
      ann.subsidies.erase(k);
    }
  }
  void operator()(const edit::MergeOperators& e) const {
    if (e.members.empty()) throw InputError("merge needs at least one member");
    if (e.target == kPlatformOperator) throw InputError("merge target collides with operator 0");
    for (auto m : e.members) {
      if (m == kPlatformOperator) throw InputError("operator 0 cannot be merged");
      require_operator(links, m);
    }
    const bool target_is_member =
        std::find(e.members.begin(), e.members.end(), e.target) != e.members.end();
    if (!target_is_member && has_operator(links, e.target)) {
      throw InputError("merge target " + std::to_string(e.target.value) + " is an existing operator");
    }
    auto is_member = [&](OperatorId op) {
      return std::find(e.members.begin(), e.members.end(), op) != e.members.end();
    };
    for (auto& l : links) {
      if (is_member(l.owner)) l.owner = e.target;
    }
    std::optional<OperatorMode> mode;
    bool fixed = false;
    for (auto m : e.members) {
      if (auto it = ann.objective_modes.find(m); it != ann.objective_modes.end()) {
        if (mode && *mode != it->second) throw InputError("merged operators have conflicting policies");
        mode = it->second;
        ann.objective_modes.erase(it);
      }
      fixed = fixed || ann.fixed_fare.erase(m) > 0;
    }
    if (mode) ann.objective_modes[e.target] = *mode;
    if (fixed) ann.fixed_fare.insert(e.target);
  }
  void operator()(const edit::SetObjectivePolicy& e) const {
    if (e.op == kPlatformOperator) throw InputError("operator 0 has no objective policy");
    require_operator(links, e.op);
    ann.objective_modes[e.op] = e.mode;
  }
  void operator()(const edit::SetFixedFare& e) const {
    if (e.op == kPlatformOperator) throw InputError("operator 0 has no fares");
    require_operator(links, e.op);
    if (e.flag) ann.fixed_fare.insert(e.op);
    else ann.fixed_fare.erase(e.op);
  }
};

}  // namespace

Scenario load_scenario(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("scenario document: ") + e.what());
  }
  Scenario s;
  if (doc.contains("name")) s.name = doc.at("name").get<std::string>();
  if (!doc.contains("edits") || !doc.at("edits").is_array()) {
    throw InputError("scenario document needs an 'edits' array");
  }
  try {
    for (const auto& e : doc.at("edits")) s.edits.push_back(parse_edit(e));
  } catch (const json::exception& e) {
    throw InputError(std::string("scenario edit: ") + e.what());
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario '" + path + "'");
  return load_scenario(in);
}

void write_scenario(std::ostream& out, const Scenario& scenario) {
  json edits = json::array();
  for (const auto& e : scenario.edits) edits.push_back(std::visit(EditToJson{}, e));
  json doc = {{"name", scenario.name}, {"edits", edits}};
  out << doc.dump(2) << "\n";
}

ScenarioResult apply_scenario(const Network& network, const DemandTable& demand,
                              const Scenario& scenario, PolicyAnnotations base) {
  std::vector<Link> links = network.links();
  PolicyAnnotations ann = std::move(base);
  for (const auto& e : scenario.edits) std::visit(Applier{links, ann}, e);

  std::vector<NodeId> nodes = network.nodes();
  for (const auto& l : links) {
    nodes.push_back(l.tail);
    nodes.push_back(l.head);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  ScenarioResult out{Network(std::move(nodes), std::move(links)), demand, std::move(ann)};
  for (const auto& [k, g] : out.annotations.subsidies) {
    const auto i = out.network.find_link(k.tail, k.head);
    if (!i) throw InputError("subsidy on missing link " + to_string(k));
    if (g > out.network.link(*i).operating_cost) {
      throw InputError("subsidy on " + to_string(k) + " exceeds its operating cost");
    }
  }
  for (auto it = out.annotations.objective_modes.begin(); it != out.annotations.objective_modes.end();) {
    const auto& ops = out.network.operators();
    if (!std::binary_search(ops.begin(), ops.end(), it->first)) {
      it = out.annotations.objective_modes.erase(it);
    } else {
      ++it;
    }
  }
  out.demand.check_against(out.network);
  return out;
}

}  // namespace maas
