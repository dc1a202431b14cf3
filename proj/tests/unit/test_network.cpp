#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "maas/error.hpp"
#include "maas/fixtures.hpp"
#include "maas/network.hpp"
#include "maas/scenario.hpp"

namespace maas {
namespace {

const char* kHeader = "tail,head,travel_cost,operating_cost,capacity,owner\n";

Network parse(const std::string& body) {
  std::istringstream in(std::string(kHeader) + body);
  return load_network(in);
}

Scenario scenario(const std::string& text) {
  std::istringstream in(text);
  return load_scenario(in);
}

TEST(LoadNetwork, SmallestNetwork) {
  const Network net = parse("1,2,3,4,10,1\n");
  EXPECT_EQ(net.num_links(), 1u);
  EXPECT_EQ(net.num_nodes(), 2u);
  EXPECT_EQ(net.link(0).owner, OperatorId{1});
  ASSERT_EQ(net.operators().size(), 2u);
  EXPECT_EQ(net.operators()[0], kPlatformOperator);
}

TEST(LoadNetwork, RejectsBadRows) {
  EXPECT_THROW(parse("1,2,3,4,0,1\n"), InputError);
  EXPECT_THROW(parse("1,2,3,4,-5,1\n"), InputError);
  EXPECT_THROW(parse("1,2,-1,4,10,1\n"), InputError);
  EXPECT_THROW(parse("1,2,1,-4,10,1\n"), InputError);
  EXPECT_THROW(parse("1,1,1,1,10,1\n"), InputError);
  EXPECT_THROW(parse("1,2,1,1,10,1\n1,2,2,2,10,2\n"), InputError);
  EXPECT_THROW(parse("1,2,x,1,10,1\n"), InputError);
  EXPECT_THROW(parse("1,2,1,1,10\n"), InputError);
  EXPECT_THROW(parse("1,2,1,1,inf,1\n"), InputError);
  std::istringstream bad_header("a,b\n1,2\n");
  EXPECT_THROW(load_network(bad_header), InputError);
}

TEST(LoadNetwork, LinksSortedAndOperatorsPartitionLinks) {
  const Network net = parse("3,1,1,1,5,2\n1,2,1,1,5,1\n2,3,1,1,5,1\n1,3,1,1,5,0\n");
  for (std::size_t i = 1; i < net.num_links(); ++i) EXPECT_LT(net.link(i - 1).key(), net.link(i).key());
  std::size_t total = 0;
  std::set<std::size_t> seen;
  for (auto op : net.operators()) {
    for (auto a : net.links_of(op)) {
      EXPECT_TRUE(seen.insert(a).second);
      ++total;
    }
  }
  EXPECT_EQ(total, net.num_links());
}

TEST(LoadNetwork, RoundTripIsIdempotent) {
  const Network net = parse("3,1,1.5,1,5,2\n1,2,0.1,1,5,1\n2,3,1,1e-3,5,1\n");
  std::ostringstream a;
  write_network(a, net);
  std::istringstream in(a.str());
  std::ostringstream b;
  write_network(b, load_network(in));
  EXPECT_EQ(a.str(), b.str());
}

TEST(LoadDemand, EntriesAndErrors) {
  const Network net = parse("1,2,1,1,5,1\n2,3,1,1,5,1\n");
  std::istringstream empty("origin,destination,demand,utility\n");
  EXPECT_TRUE(load_demand(empty, net).empty());
  std::istringstream ok("origin,destination,demand,utility\n2,3,5,10\n1,3,7,12\n");
  const DemandTable d = load_demand(ok, net);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].origin, 1);
  EXPECT_DOUBLE_EQ(d.total_demand(), 12.0);
  std::istringstream unknown("origin,destination,demand,utility\n1,9,5,10\n");
  EXPECT_THROW(load_demand(unknown, net), InputError);
  std::istringstream dup("origin,destination,demand,utility\n1,3,5,10\n1,3,1,10\n");
  EXPECT_THROW(load_demand(dup, net), InputError);
  std::istringstream self("origin,destination,demand,utility\n1,1,5,10\n");
  EXPECT_THROW(load_demand(self, net), InputError);
  std::istringstream neg("origin,destination,demand,utility\n1,3,5,-1\n");
  EXPECT_THROW(load_demand(neg, net), InputError);
}

TEST(Fixtures, IllustrativeDemand) {
  const auto inst = build_illustrative_instance();
  ASSERT_EQ(inst.demand.size(), 2u);
  EXPECT_EQ(inst.demand[0].destination, 3);
  EXPECT_DOUBLE_EQ(inst.demand[0].demand, 1000.0);
  EXPECT_DOUBLE_EQ(inst.demand[1].demand, 500.0);
  EXPECT_DOUBLE_EQ(inst.demand[0].utility, 20.0);
  EXPECT_DOUBLE_EQ(inst.network.link(inst.network.link_index(1, 21)).capacity, 200.0);
  EXPECT_EQ(inst.network.operators().size(), 7u);
}

TEST(Fixtures, SiouxFallsBase) {
  const auto inst = build_sioux_falls(0.0);
  const Link& l = inst.network.link(inst.network.link_index(119, 117));
  EXPECT_DOUBLE_EQ(l.capacity, 4824.0);
  EXPECT_DOUBLE_EQ(l.travel_cost, 2.0);
  EXPECT_DOUBLE_EQ(l.operating_cost, 2.0);
  EXPECT_EQ(l.owner, kRailOperator);
  EXPECT_EQ(inst.demand.size(), 528u);
  for (const auto& e : inst.demand.entries()) EXPECT_DOUBLE_EQ(e.utility, 40.0);

  // 76 parameter rows, 18 of them between rail stations, plus the transfer links.
  std::size_t rail = 0;
  std::size_t bus = 0;
  std::size_t transfer = 0;
  for (const auto& k : inst.network.links()) {
    const bool a = k.tail > 100;
    const bool b = k.head > 100;
    if (a && b) {
      ++rail;
      EXPECT_EQ(k.owner, kRailOperator);
    } else if (!a && !b) {
      ++bus;
      EXPECT_EQ(k.owner, kBusOperator);
    } else {
      ++transfer;
      EXPECT_EQ(k.owner, kPlatformOperator);
      EXPECT_DOUBLE_EQ(k.travel_cost, 0.0);
    }
  }
  EXPECT_EQ(rail, 18u);
  EXPECT_EQ(bus, 58u);
  EXPECT_EQ(rail + bus + transfer, inst.network.num_links());
}

TEST(Fixtures, SiouxFallsTransferCost) {
  const auto inst = build_sioux_falls(2.0);
  const Link& l = inst.network.link(inst.network.link_index(1, 101));
  EXPECT_EQ(l.owner, kPlatformOperator);
  EXPECT_DOUBLE_EQ(l.travel_cost, 2.0);
  SiouxFallsOptions so;
  so.capacity_scale = 3.0;
  const auto scaled = build_sioux_falls(so);
  EXPECT_DOUBLE_EQ(scaled.network.link(scaled.network.link_index(119, 117)).capacity, 3.0 * 4824.0);
}

TEST(Scenario, SetCapacityChangesOnlyThatLink) {
  const auto base = build_sioux_falls(0.0);
  const auto sc = scenario(R"({"name":"cap","edits":[{"op":"set_capacity","link":[119,117],"capacity":5000}]})");
  const auto r = apply_scenario(base.network, base.demand, sc);
  ASSERT_EQ(r.network.num_links(), base.network.num_links());
  for (std::size_t i = 0; i < base.network.num_links(); ++i) {
    const Link& a = base.network.link(i);
    const Link& b = r.network.link(i);
    const bool target = a.key() == LinkKey{119, 117};
    EXPECT_DOUBLE_EQ(b.capacity, target ? 5000.0 : a.capacity);
    EXPECT_DOUBLE_EQ(b.travel_cost, a.travel_cost);
    EXPECT_EQ(b.owner, a.owner);
  }
}

TEST(Scenario, MergeOperators) {
  const auto base = build_sioux_falls(0.0);
  const auto sc = scenario(R"({"edits":[{"op":"merge_operators","members":[1,2],"target":1}]})");
  const auto r = apply_scenario(base.network, base.demand, sc);
  for (const auto& l : r.network.links()) {
    EXPECT_TRUE(l.owner == kBusOperator || l.owner == kPlatformOperator);
  }
  EXPECT_EQ(r.network.operators().size(), 2u);
  const auto bad = scenario(R"({"edits":[{"op":"merge_operators","members":[1],"target":2}]})");
  EXPECT_THROW(apply_scenario(base.network, base.demand, bad), InputError);
}

TEST(Scenario, TechnologyScenario) {
  const auto base = build_sioux_falls(0.0);
  const auto sc = scenario(
      R"({"edits":[{"op":"scale_costs","operator":1,"factor":0.5},{"op":"scale_travel","operator":1,"factor":0.8}]})");
  const auto r = apply_scenario(base.network, base.demand, sc);
  for (std::size_t i = 0; i < base.network.num_links(); ++i) {
    const Link& a = base.network.link(i);
    const Link& b = r.network.link(i);
    const bool bus = a.owner == kBusOperator;
    EXPECT_DOUBLE_EQ(b.operating_cost, bus ? 0.5 * a.operating_cost : a.operating_cost);
    EXPECT_DOUBLE_EQ(b.travel_cost, bus ? 0.8 * a.travel_cost : a.travel_cost);
  }
}

TEST(Scenario, PolicyEditsAndErrors) {
  const auto base = build_illustrative_instance();
  const auto sc = scenario(R"({"edits":[
      {"op":"subsidy","link":[1,21],"gamma":50},
      {"op":"set_objective_policy","operator":4,"mode":"welfare_max"},
      {"op":"set_fixed_fare","operator":1,"flag":true},
      {"op":"add_links","links":[{"tail":3,"head":4,"travel_cost":1,"operating_cost":2,"capacity":9,"owner":7}]},
      {"op":"remove_links","links":[[1,6]]}]})");
  const auto r = apply_scenario(base.network, base.demand, sc);
  EXPECT_DOUBLE_EQ(r.annotations.subsidies.at(LinkKey{1, 21}), 50.0);
  EXPECT_EQ(r.annotations.objective_modes.at(OperatorId{4}), OperatorMode::kWelfareMax);
  EXPECT_TRUE(r.annotations.fixed_fare.count(OperatorId{1}));
  EXPECT_TRUE(r.network.find_link(3, 4).has_value());
  EXPECT_FALSE(r.network.find_link(1, 6).has_value());

  for (const char* bad : {
           R"({"edits":[{"op":"subsidy","link":[1,21],"gamma":500}]})",
           R"({"edits":[{"op":"set_capacity","link":[9,9],"capacity":5}]})",
           R"({"edits":[{"op":"scale_costs","operator":42,"factor":2}]})",
           R"({"edits":[{"op":"set_capacity","link":[1,21],"capacity":0}]})",
           R"({"edits":[{"op":"set_fixed_fare","operator":0}]})",
       }) {
    EXPECT_THROW(apply_scenario(base.network, base.demand, scenario(bad)), InputError) << bad;
  }
  EXPECT_THROW(scenario(R"({"edits":[{"op":"teleport"}]})"), InputError);
  EXPECT_THROW(scenario("not json"), InputError);
}

TEST(Scenario, DeterministicAndPure) {
  const auto base = build_illustrative_instance();
  const auto sc = scenario(
      R"({"name":"x","edits":[{"op":"surcharge","operator":1,"delta":5},{"op":"scale_travel","operator":"all","factor":1.5}]})");
  const auto a = apply_scenario(base.network, base.demand, sc);
  const auto b = apply_scenario(base.network, base.demand, sc);
  std::ostringstream sa;
  std::ostringstream sb;
  write_network(sa, a.network);
  write_network(sb, b.network);
  EXPECT_EQ(sa.str(), sb.str());
  std::ostringstream orig;
  write_network(orig, base.network);
  std::ostringstream orig2;
  write_network(orig2, build_illustrative_instance().network);
  EXPECT_EQ(orig.str(), orig2.str());

  std::ostringstream w;
  write_scenario(w, sc);
  std::istringstream back(w.str());
  const auto c = apply_scenario(base.network, base.demand, load_scenario(back));
  std::ostringstream sc2;
  write_network(sc2, c.network);
  EXPECT_EQ(sa.str(), sc2.str());
}

}  // namespace
}  // namespace maas
