#include "fixtures.hpp"
#include "oracles.hpp"
#include "railnet/extract.hpp"
#include "railnet/milp.hpp"
#include "railnet/reduction.hpp"
#include "railnet/solver_bb.hpp"
#include "railnet/verify.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace railnet;
using namespace railnet::testing;

namespace {

int count_family(const std::vector<Violation>& vs, ViolationFamily f) {
  return static_cast<int>(std::count_if(vs.begin(), vs.end(), [&](const Violation& v) { return v.family == f; }));
}

// Two trains over one arc at the same time, so the arc must be expanded.
struct Tight {
  Instance inst;
  Solution sol;
};

Tight tight() {
  Tight t;
  t.inst = two_node(1, 1, 1, 4, 2, 2);
  t.inst.allow_dwell = false;
  t.inst.trains = {train("T1", "A", "B", 0, 1), train("T2", "A", "B", 0, 1)};
  auto sys = build(t.inst);
  t.sol = extract_solution(t.inst, sys, solve(sys));
  return t;
}

}  // namespace

TEST(Verify, SolverOutputIsClean) {
  auto t = tight();
  EXPECT_EQ(t.sol.objective_value, Rational(4));
  EXPECT_TRUE(verify(t.inst, t.sol).empty());
}

TEST(Verify, RemovedExpansionIsOneCapacityViolation) {
  auto t = tight();
  t.sol.expanded_arcs.clear();
  compute_costs(t.inst, t.sol);
  auto vs = verify(t.inst, t.sol);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].family, ViolationFamily::Capacity);
  EXPECT_NE(vs[0].detail.find("A.B"), std::string::npos);
}

TEST(Verify, EarlyDepartureIsOneDepartureViolation) {
  Instance inst = two_node(1, 1, 0, 0, 3, 1);
  inst.trains = {train("T1", "A", "B", 1, 3)};
  Solution sol;
  sol.routes["T1"] = {{"T1", "A", "B", 0}};
  auto vs = verify(inst, sol);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].family, ViolationFamily::Departure);
  EXPECT_EQ(format_violation(vs[0]).substr(0, 10), "departure\t");
}

TEST(Verify, LateArrivalAndWrongObjective) {
  Instance inst = two_node(2, 1, 0, 0, 3, 1);
  inst.trains = {train("T1", "A", "B", 0, 2)};
  Solution sol;
  sol.routes["T1"] = {{"T1", "A", "B", 1}};
  sol.objective_value = 1;
  auto vs = verify(inst, sol);
  EXPECT_EQ(count_family(vs, ViolationFamily::Arrival), 1);
  EXPECT_EQ(count_family(vs, ViolationFamily::Objective), 1);
  EXPECT_EQ(vs.front().family, ViolationFamily::Arrival);
}

TEST(Verify, MissingRouteUndeclaredArcAndGaps) {
  Instance inst = with_nodes({"A", "B", "C"});
  inst.network.arcs = {arc("A", "B", 1, 1, 0, 0), arc("B", "C", 1, 1, 0, 0)};
  inst.horizon = 4;
  inst.capacity_window = 1;
  inst.allow_dwell = false;
  inst.trains = {train("T1", "A", "C", 0, 4), train("T2", "A", "B", 0, 4)};
  Solution sol;
  sol.routes["T1"] = {{"T1", "A", "B", 0}, {"T1", "B", "C", 2}};
  auto vs = verify(inst, sol);
  EXPECT_EQ(count_family(vs, ViolationFamily::Flow), 1);
  EXPECT_EQ(count_family(vs, ViolationFamily::Departure), 1);

  sol.routes["T1"] = {{"T1", "A", "C", 0}};
  sol.routes["T2"] = {{"T2", "A", "B", 0}};
  vs = verify(inst, sol);
  EXPECT_GE(count_family(vs, ViolationFamily::Structure), 1);
}

TEST(Verify, HeadwayConnectionAndVia) {
  Instance inst = with_nodes({"A", "B", "C"});
  inst.network.arcs = {arc("A", "B", 1, 2, 0, 0), arc("B", "C", 1, 2, 0, 0), arc("A", "C", 1, 2, 0, 0)};
  inst.network.headways.default_headway = 2;
  inst.horizon = 5;
  inst.capacity_window = 1;
  inst.allow_dwell = true;
  inst.trains = {train("F", "A", "B", 0, 5), train("G", "A", "C", 0, 5)};
  inst.trains[1].via_nodes = {"B"};
  inst.connections = {{"B", "F", "G"}};
  Solution sol;
  sol.routes["F"] = {{"F", "A", "B", 2}};
  sol.routes["G"] = {{"G", "A", "B", 1}, {"G", "B", "C", 2}};
  auto vs = verify(inst, sol);
  EXPECT_EQ(count_family(vs, ViolationFamily::Headway), 1);
  EXPECT_EQ(count_family(vs, ViolationFamily::Connection), 1);
  EXPECT_EQ(count_family(vs, ViolationFamily::Via), 0);

  sol.routes["G"] = {{"G", "A", "B", 0}, {"G", "B", "C", 3}};
  EXPECT_TRUE(verify(inst, sol).empty());

  sol.routes["G"] = {{"G", "A", "C", 3}};
  vs = verify(inst, sol);
  EXPECT_EQ(count_family(vs, ViolationFamily::Via), 1);
  EXPECT_EQ(count_family(vs, ViolationFamily::Connection), 1);
}

TEST(Verify, OrderedByFamilyThenDetail) {
  Instance inst = two_node(1, 0, 0, 0, 3, 1);
  inst.trains = {train("T1", "A", "B", 1, 1), train("T2", "A", "B", 1, 1)};
  Solution sol;
  sol.routes["T1"] = {{"T1", "A", "B", 0}};
  sol.routes["T2"] = {{"T2", "A", "B", 2}};
  sol.objective_value = 5;
  auto vs = verify(inst, sol);
  ASSERT_GE(vs.size(), 4u);
  EXPECT_TRUE(std::is_sorted(vs.begin(), vs.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.family, a.detail) < std::tie(b.family, b.detail);
  }));
  EXPECT_EQ(vs.back().family, ViolationFamily::Objective);
}

TEST(Verify, ScenariosCountSeparately) {
  Instance inst = two_node(1, 1, 0, 0, 2, 2);
  inst.trains = {train("T1", "A", "B", 0, 2), train("T2", "A", "B", 0, 2)};
  Solution sol;
  sol.routes["T1"] = {{"T1", "A", "B", 0}};
  sol.routes["T2"] = {{"T2", "A", "B", 0}};
  EXPECT_EQ(count_family(verify(inst, sol), ViolationFamily::Capacity), 1);
  inst.scenarios = {{"s1", {"T1"}}, {"s2", {"T2"}}};
  EXPECT_TRUE(verify(inst, sol).empty());
}

TEST(Verify, DroppedOptionalTrainPenalty) {
  Instance inst = two_node(1, 1, 0, 0, 2, 2);
  inst.trains = {optional_train("T1", "A", "B", 0, 2, Rational(3, 2))};
  Solution sol;
  sol.objective_value = Rational(3, 2);
  sol.cost_breakdown.penalty_total = Rational(3, 2);
  EXPECT_TRUE(verify(inst, sol).empty());
  sol.objective_value = 0;
  EXPECT_EQ(count_family(verify(inst, sol), ViolationFamily::Objective), 1);
}

// For small instances, every decodable 0/1 assignment satisfies all rows
// exactly when the decoded solution verifies; undecodable ones violate a row.
TEST(Verify, AgreesWithRowsExhaustively) {
  std::mt19937_64 rng(51);
  int instances = 0;
  long clean = 0;
  for (int k = 0; k < 400 && instances < 60; ++k) {
    Instance inst = random_small(rng);
    bool has_optional = std::any_of(inst.trains.begin(), inst.trains.end(), [](const auto& v) { return v.optional; });
    if (!inst.connections.empty() && has_optional) continue;
    ConstraintSystem sys;
    try {
      sys = build(inst);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const int n = static_cast<int>(sys.variables.size());
    if (n > 12) continue;
    ++instances;
    std::vector<int> x(static_cast<std::size_t>(n));
    for (long mask = 0; mask < (1L << n); ++mask) {
      for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = static_cast<int>((mask >> j) & 1);
      const bool rows = assignment_feasible(sys, x);
      Solution sol;
      try {
        sol = decode_assignment(inst, sys, x);
      } catch (const DecodeError&) {
        EXPECT_FALSE(rows) << "instance " << k << " mask " << mask;
        continue;
      }
      auto vs = verify(inst, sol);
      EXPECT_EQ(rows, vs.empty()) << "instance " << k << " mask " << mask
                                  << (vs.empty() ? "" : " first: " + format_violation(vs.front()));
      if (rows) {
        ++clean;
        EXPECT_EQ(sol.objective_value, objective_value(sys, x));
      }
    }
  }
  EXPECT_GE(instances, 40);
  EXPECT_GT(clean, 0);
}

// Flipping one expansion bit or shifting one departure never yields a
// cheaper valid solution.
TEST(Verify, MutationsOfTightOptima) {
  int mutations = 0;
  int flagged = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto reduced = x3c_to_instance(gen_random_x3c(2, 4, seed, true));
    const auto& inst = reduced.instance;
    auto sys = build(inst);
    auto r = solve(sys);
    ASSERT_EQ(r.status, SolveStatus::Optimal);
    auto best = extract_solution(inst, sys, r);
    ASSERT_TRUE(verify(inst, best).empty());
    for (const auto& a : inst.network.arcs) {
      Solution m = best;
      auto it = std::find(m.expanded_arcs.begin(), m.expanded_arcs.end(), std::make_pair(a.from, a.to));
      if (it == m.expanded_arcs.end()) {
        m.expanded_arcs.emplace_back(a.from, a.to);
      } else {
        m.expanded_arcs.erase(it);
      }
      compute_costs(inst, m);
      ++mutations;
      if (!verify(inst, m).empty()) {
        ++flagged;
      } else {
        EXPECT_GE(m.objective_value, best.objective_value);
      }
    }
    for (const auto& [id, steps] : best.routes) {
      for (std::size_t i = 0; i < steps.size(); ++i) {
        for (int d : {-1, 1}) {
          Solution m = best;
          m.routes[id][i].depart += d;
          ++mutations;
          auto vs = verify(inst, m);
          EXPECT_FALSE(vs.empty());
          flagged += !vs.empty();
        }
      }
    }
  }
  EXPECT_GT(mutations, 0);
  EXPECT_GT(flagged, mutations / 2);
}
