#include "oracles.hpp"
#include "railnet/extract.hpp"
#include "railnet/milp.hpp"
#include "railnet/reduction.hpp"
#include "railnet/solver_bb.hpp"
#include "railnet/verify.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace railnet;

namespace {

X3cInstance figure_one() {
  return {{"x1", "x2", "x3", "x4", "x5", "x6"},
          {{"x1", "x3", "x4"}, {"x1", "x4", "x5"}, {"x2", "x5", "x6"}}};
}

SolveResult solve_reduced(const ReducedInstance& r) { return solve(build(r.instance)); }

}  // namespace

TEST(X3cToInstance, FigureOneExample) {
  auto reduced = x3c_to_instance(figure_one());
  EXPECT_EQ(reduced.instance.network.nodes.size(), 11u);
  EXPECT_EQ(reduced.instance.network.arcs.size(), 3u + 9u + 6u);
  EXPECT_EQ(reduced.threshold, Rational(6));
  auto sys = build(reduced.instance);
  auto r = solve(sys);
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(*r.objective, Rational(6));
  auto sol = extract_solution(reduced.instance, sys, r);
  EXPECT_TRUE(verify(reduced.instance, sol).empty());
  std::set<std::pair<std::string, std::string>> paid;
  for (const auto& e : sol.expanded_arcs) {
    if (e.first == "s") paid.insert(e);
  }
  EXPECT_EQ(paid, (std::set<std::pair<std::string, std::string>>{{"s", "vp_1"}, {"s", "vp_3"}}));
}

TEST(X3cToInstance, SingleCoveringSet) {
  X3cInstance x{{"a", "b", "c"}, {{"a", "b", "c"}}};
  auto r = solve_reduced(x3c_to_instance(x));
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(*r.objective, Rational(3));
}

TEST(X3cToInstance, NoSubsetsIsInfeasible) {
  X3cInstance x{{"a", "b", "c"}, {}};
  EXPECT_EQ(solve_reduced(x3c_to_instance(x)).status, SolveStatus::Infeasible);
}

TEST(X3cToInstance, ShapeAndParameters) {
  auto x = gen_random_x3c(3, 7, 5, true);
  auto r = x3c_to_instance(x);
  const auto& inst = r.instance;
  EXPECT_TRUE(validate_instance(inst).ok());
  EXPECT_EQ(inst.network.nodes.size(), 2 + x.subsets.size() + x.ground_set.size());
  EXPECT_EQ(inst.network.arcs.size(), x.subsets.size() + 3 * x.subsets.size() + x.ground_set.size());
  EXPECT_EQ(inst.horizon, 3);
  EXPECT_EQ(inst.capacity_window, 3);
  EXPECT_FALSE(inst.allow_dwell);
  EXPECT_TRUE(inst.connections.empty());
  EXPECT_EQ(inst.trains.size(), x.ground_set.size());
  for (const auto& v : inst.trains) {
    EXPECT_EQ(v.origin, "s");
    EXPECT_EQ(v.destination, "t");
    EXPECT_EQ(v.earliest_departure, 0);
    EXPECT_EQ(v.latest_arrival, 3);
  }
  // Two colour classes: {s, v_*} and {vp_*, t}.
  auto left = [](const std::string& id) { return id == "s" || id.rfind("v_", 0) == 0; };
  for (const auto& a : inst.network.arcs) {
    EXPECT_NE(left(a.from), left(a.to)) << a.from << "." << a.to;
    EXPECT_EQ(a.travel_time, 1);
    if (a.from == "s") {
      EXPECT_EQ(a.capacity, 0);
      EXPECT_EQ(a.expandable_capacity, 3);
      EXPECT_EQ(a.expansion_cost, Rational(3));
    } else {
      EXPECT_EQ(a.capacity, 0);
      EXPECT_EQ(a.expandable_capacity, 1);
      EXPECT_EQ(a.expansion_cost, Rational(0));
    }
  }
}

TEST(X3cToInstance, UnitCapacityEncodingGivesTheSameOptimum) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    auto x = gen_random_x3c(2, 5, seed, seed % 2 == 0);
    auto a = solve_reduced(x3c_to_instance(x, false));
    auto reduced = x3c_to_instance(x, true);
    for (const auto& arc : reduced.instance.network.arcs) {
      if (arc.from != "s") {
        EXPECT_EQ(arc.capacity, 1);
        EXPECT_EQ(arc.expandable_capacity, 0);
      }
    }
    auto b = solve_reduced(reduced);
    ASSERT_EQ(a.status, b.status) << seed;
    if (a.status == SolveStatus::Optimal) EXPECT_EQ(*a.objective, *b.objective) << seed;
  }
}

TEST(X3cBruteForce, Examples) {
  EXPECT_TRUE(x3c_brute_force(figure_one()));
  EXPECT_TRUE(x3c_brute_force({{"a", "b", "c"}, {{"a", "b", "c"}}}));
  EXPECT_FALSE(x3c_brute_force({{"a", "b", "c", "d", "e", "f"}, {{"a", "b", "c"}, {"c", "d", "e"}}}));
  EXPECT_FALSE(x3c_brute_force({{"a", "b", "c"}, {}}));
}

TEST(X3cBruteForce, RejectsInvalidInput) {
  EXPECT_THROW(validate_x3c({{"a", "b", "c"}, {{"a", "b", "d"}}}), std::invalid_argument);
  EXPECT_THROW(x3c_brute_force({{"a", "b", "c"}, {{"a", "b", "d"}}}), std::invalid_argument);
  EXPECT_THROW(validate_x3c({{"a", "b"}, {}}), std::invalid_argument);
  EXPECT_THROW(validate_x3c({{"a", "b", "c"}, {{"a", "a", "b"}}}), std::invalid_argument);
  EXPECT_THROW(validate_x3c({{"a", "a", "b"}, {}}), std::invalid_argument);
  auto big = gen_random_x3c(2, static_cast<int>(kX3cBruteForceLimit) + 1, 3, false);
  EXPECT_THROW(x3c_brute_force(big), std::invalid_argument);
}

TEST(GenRandomX3c, DeterministicAndPlanted) {
  auto a = gen_random_x3c(2, 5, 1, true);
  auto b = gen_random_x3c(2, 5, 1, true);
  EXPECT_EQ(a.ground_set, b.ground_set);
  EXPECT_EQ(a.subsets, b.subsets);
  EXPECT_EQ(a.ground_set.size(), 6u);
  EXPECT_EQ(a.subsets.size(), 5u);
  EXPECT_NO_THROW(validate_x3c(a));
  EXPECT_TRUE(x3c_brute_force(a));
  for (std::uint64_t seed = 0; seed < 30; ++seed) EXPECT_TRUE(x3c_brute_force(gen_random_x3c(3, 6, seed, true)));
  auto c = gen_random_x3c(2, 5, 2, true);
  EXPECT_NE(a.subsets, c.subsets);
}

TEST(GenRandomX3c, UnplantedInstancesVary) {
  int yes = 0;
  int no = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    (x3c_brute_force(gen_random_x3c(2, 2, seed, false)) ? yes : no) += 1;
  }
  EXPECT_GT(no, 0);
}

// Optimum at most 3q exactly when an exact cover exists.
TEST(Reduction, SoundAndComplete) {
  int yes = 0;
  int no = 0;
  for (int q = 1; q <= 3; ++q) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      int subsets = std::min(8, q + 1 + static_cast<int>(seed % 4));
      auto x = gen_random_x3c(q, subsets, seed * 7 + static_cast<std::uint64_t>(q), seed % 3 == 0);
      auto reduced = x3c_to_instance(x);
      auto r = solve_reduced(reduced);
      ASSERT_NE(r.status, SolveStatus::LimitReached);
      bool within = r.status == SolveStatus::Optimal && *r.objective <= reduced.threshold;
      bool cover = x3c_brute_force(x);
      EXPECT_EQ(within, cover) << "q=" << q << " seed=" << seed;
      (cover ? yes : no) += 1;
    }
  }
  EXPECT_GT(yes, 5);
  EXPECT_GT(no, 5);
}
