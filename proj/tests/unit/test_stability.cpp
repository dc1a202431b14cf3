#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "maas/error.hpp"
#include "maas/fixtures.hpp"
#include "maas/outcomes.hpp"
#include "maas/stability.hpp"
#include "test_support.hpp"

namespace maas {
namespace {

const OperatorId A{1};
const OperatorId C{3};
const OperatorId D{4};

class IllustrativeSystem : public ::testing::Test {
 protected:
  void SetUp() override {
    inst = build_illustrative_instance();
    art = solve_matching_artifacts(inst.network, inst.demand);
  }
  Instance inst;
  MatchingArtifacts art;
};

TEST_F(IllustrativeSystem, OmegaOfAlternatives) {
  const auto& net = inst.network;
  EXPECT_NEAR(omega(net, make_path(net, {1, 5, 4}), art.mu, art.solution.active), 410.0, 1e-6);
  EXPECT_NEAR(omega(net, make_path(net, {1, 6, 4}), art.mu, art.solution.active), 412.0, 1e-6);
  EXPECT_NEAR(omega(net, make_path(net, {1, 3}), art.mu, art.solution.active), 7.0, 1e-9);
  EXPECT_NEAR(omega(net, make_path(net, {1, 21, 23, 4}), art.mu, art.solution.active), 10.0, 1e-6);
}

TEST_F(IllustrativeSystem, OptimalPathSets) {
  const auto sets = optimal_path_sets(inst.network, inst.demand, art);
  ASSERT_EQ(sets.size(), 2u);
  ASSERT_EQ(sets[0].paths.size(), 1u);
  EXPECT_EQ(to_string(sets[0].paths[0]), "(1,3)");
  EXPECT_EQ(sets[0].operators, (std::vector<OperatorId>{A}));
  ASSERT_EQ(sets[1].paths.size(), 2u);
  EXPECT_EQ(to_string(sets[1].paths[0]), "(1,4)");
  EXPECT_EQ(to_string(sets[1].paths[1]), "(1,21,23,4)");
  EXPECT_EQ(sets[1].operators, (std::vector<OperatorId>{A, C, D}));
  EXPECT_NEAR(sets[1].omega, 10.0, 1e-6);
  EXPECT_FALSE(sets[1].truncated);
}

TEST_F(IllustrativeSystem, ExcludedShortestPath) {
  const auto& net = inst.network;
  const auto w = omega_weights(net, art.mu, art.solution.active);
  EXPECT_FALSE(excluded_shortest_path(net, inst.demand[0], {A}, w).has_value());
  const auto p = excluded_shortest_path(net, inst.demand[1], {A, C, D}, w);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(to_string(*p), "(1,5,4)");
  EXPECT_NEAR(path_weight(*p, w), 410.0, 1e-6);
  std::vector<OperatorId> all(net.operators().begin() + 1, net.operators().end());
  EXPECT_FALSE(excluded_shortest_path(net, inst.demand[1], all, w).has_value());
}

TEST_F(IllustrativeSystem, AlgorithmOneRows) {
  const auto cs = generate_constraints_algorithm1(inst.network, inst.demand, art);
  ASSERT_EQ(cs.paths.size(), 3u);
  ASSERT_EQ(cs.prices.size(), 4u);
  ASSERT_EQ(cs.stability.size(), 1u);
  EXPECT_EQ(cs.stability[0].group, 1u);
  EXPECT_NEAR(cs.stability[0].bound, -390.0, 1e-6);
  EXPECT_TRUE(cs.stability[0].prices.empty());
  for (const auto& r : cs.stability) EXPECT_GT(r.bound, -391.0);
  ASSERT_EQ(cs.costs.size(), 3u);
  EXPECT_NEAR(cs.costs[0].operating_cost, 400.0, 1e-9);

  std::ostringstream os;
  write_constraint_text(os, cs);
  EXPECT_NE(os.str().find("u[(1,4)] >= -390\n"), std::string::npos);
  EXPECT_EQ(os.str().find("-392"), std::string::npos);
  EXPECT_NE(os.str().find("u[(1,4)] + p[(1,21,23,4)][1] + p[(1,21,23,4)][3] = 14"), std::string::npos);
}

TEST_F(IllustrativeSystem, EnumerationRows) {
  const auto cs = generate_constraints_enumeration(inst.network, inst.demand, art);
  std::vector<double> bounds;
  for (const auto& r : cs.stability) bounds.push_back(r.bound);
  std::sort(bounds.begin(), bounds.end());
  ASSERT_EQ(bounds.size(), 5u);
  EXPECT_NEAR(bounds[0], -392.0, 1e-6);
  EXPECT_NEAR(bounds[1], -392.0, 1e-6);
  EXPECT_NEAR(bounds[2], -390.0, 1e-6);
  EXPECT_NEAR(bounds[3], -390.0, 1e-6);
  EXPECT_NEAR(bounds[4], -192.0, 1e-6);
}

TEST(Subcoalitions, OrderBySizeThenLexicographic) {
  const auto s = subcoalitions({A, C, D});
  const std::vector<std::vector<OperatorId>> expect{{A}, {C}, {D}, {A, C}, {A, D}, {C, D}, {A, C, D}};
  EXPECT_EQ(s, expect);
  EXPECT_EQ(subcoalitions({A}), (std::vector<std::vector<OperatorId>>{{A}}));
  EXPECT_TRUE(subcoalitions({}).empty());
  std::vector<OperatorId> many;
  for (std::uint32_t k = 1; k <= 13; ++k) many.push_back(OperatorId{k});
  EXPECT_THROW(subcoalitions(many), ResourceLimitError);
}

TEST(Stability, SingleOperatorNetwork) {
  const OperatorId f{1};
  const auto inst = test::small_instance({{1, 2, 1, 1, 20, f}, {2, 3, 1, 1, 20, f}, {1, 3, 3, 1, 20, f}},
                                         {{1, 3, 10, 30}});
  const auto art = solve_matching_artifacts(inst.network, inst.demand);
  const auto a1 = generate_constraints_algorithm1(inst.network, inst.demand, art);
  EXPECT_TRUE(a1.stability.empty());
  const auto en = generate_constraints_enumeration(inst.network, inst.demand, art);
  for (const auto& r : en.stability) {
    for (auto k : r.prices) EXPECT_EQ(en.prices[k].op, f);
  }
}

TEST(Stability, SinglePathNetworkHasNoRows) {
  const auto inst = test::small_instance({{1, 2, 1, 1, 20, OperatorId{1}}}, {{1, 2, 10, 30}});
  const auto art = solve_matching_artifacts(inst.network, inst.demand);
  EXPECT_TRUE(generate_constraints_enumeration(inst.network, inst.demand, art).stability.empty());
  EXPECT_TRUE(generate_constraints_algorithm1(inst.network, inst.demand, art).stability.empty());
}

TEST(Stability, EnumerationCap) {
  const auto inst = build_illustrative_instance();
  const auto art = solve_matching_artifacts(inst.network, inst.demand);
  StabilityOptions o;
  o.enumeration_cap = 2;
  EXPECT_THROW(generate_constraints_enumeration(inst.network, inst.demand, art, o), ResourceLimitError);
}

TEST(Stability, NonMinimalSupportPathIsReported) {
  const auto inst = build_illustrative_instance();
  auto art = solve_matching_artifacts(inst.network, inst.demand);
  art.mu[inst.network.link_index(1, 21)] = 50.0;
  EXPECT_THROW(optimal_path_sets(inst.network, inst.demand, art), NumericalError);
}

// Optimum of a random linear objective over (u, p) in both systems.
bool same_region(const ConstraintSystem& a, const ConstraintSystem& b, std::mt19937_64& rng, int probes) {
  std::normal_distribution<double> nd;
  for (int k = 0; k < probes; ++k) {
    auto m1 = build_outcome_lp(a, ObjectivePolicy::buyer_optimal());
    auto m2 = build_outcome_lp(b, ObjectivePolicy::buyer_optimal());
    if (m1.lp.num_variables() != m2.lp.num_variables()) return false;
    for (std::size_t j = 0; j < m1.lp.num_variables(); ++j) {
      const double c = nd(rng);
      m1.lp.set_cost(static_cast<int>(j), c);
      m2.lp.set_cost(static_cast<int>(j), c);
    }
    const auto r1 = solve::solve_lp(m1.lp);
    const auto r2 = solve::solve_lp(m2.lp);
    if (r1.status != r2.status) return false;
    if (r1.status == solve::SolveStatus::kOptimal && !test::close_rel(r1.objective, r2.objective, 1e-6)) {
      return false;
    }
  }
  return true;
}

// Illustrative network plus a D-owned shortcut (22,4); the literal skip drops a binding row.
TEST(Stability, LiteralSkipLosesARow) {
  const auto base = build_illustrative_instance();
  auto links = base.network.links();
  links.push_back({22, 4, 4.0, 0.5, 10000, D});
  const Network net({}, links);
  const auto art = solve_matching_artifacts(net, base.demand);
  const auto a1 = generate_constraints_algorithm1(net, base.demand, art);
  StabilityOptions lo;
  lo.literal_skip = true;
  const auto lit = generate_constraints_algorithm1(net, base.demand, art, lo);
  const auto en = generate_constraints_enumeration(net, base.demand, art);
  std::mt19937_64 rng(3);
  EXPECT_TRUE(same_region(a1, en, rng, 30));
  EXPECT_FALSE(same_region(lit, en, rng, 30));
}

TEST(Stability, EquivalenceAndNoPlatformPrices) {
  std::mt19937_64 rng(17);
  for (const auto& [seed, inst] : test::random_corpus(15, 100)) {
    SCOPED_TRACE("seed " + std::to_string(seed));
    const auto art = solve_matching_artifacts(inst.network, inst.demand);
    const auto a1 = generate_constraints_algorithm1(inst.network, inst.demand, art);
    const auto en = generate_constraints_enumeration(inst.network, inst.demand, art);
    EXPECT_TRUE(same_region(a1, en, rng, 10));
    for (const auto* cs : {&a1, &en}) {
      for (const auto& p : cs->prices) EXPECT_NE(p.op, kPlatformOperator);
      for (const auto& r : cs->paths) {
        for (auto op : r.operators) EXPECT_NE(op, kPlatformOperator);
      }
    }
  }
}

TEST_F(IllustrativeSystem, JsonWriter) {
  const auto cs = generate_constraints_algorithm1(inst.network, inst.demand, art);
  std::ostringstream os;
  write_constraint_json(os, cs);
  EXPECT_NE(os.str().find("\"stability\""), std::string::npos);
  EXPECT_EQ(cs.variable_name_u(1), "u[(1,4)]");
  EXPECT_EQ(cs.variable_name_p(2), "p[(1,21,23,4)][1]");
}

}  // namespace
}  // namespace maas
