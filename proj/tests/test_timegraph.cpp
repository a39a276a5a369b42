#include "fixtures.hpp"
#include "railnet/timegraph.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace railnet;
using namespace railnet::testing;

TEST(Expand, TwoNodesOneArc) {
  Instance inst = two_node(1, 1, 0, 0, 2, 1);
  auto g = expand(inst.network, 2);
  EXPECT_EQ(g.movement_count(), 2);
  EXPECT_EQ(g.dwell_count(), 4);
  EXPECT_EQ(g.dump(),
            "A 0 -> B 1\n"
            "A 1 -> B 2\n"
            "A 0 -> A 1\n"
            "A 1 -> A 2\n"
            "B 0 -> B 1\n"
            "B 1 -> B 2\n");
}

TEST(Expand, SingleNodeNoArcs) {
  Instance inst = with_nodes({"A"});
  auto g = expand(inst.network, 1);
  EXPECT_EQ(g.movement_count(), 0);
  EXPECT_EQ(g.dwell_count(), 1);
}

TEST(Expand, ThirtyNodesHundredArcs) {
  Network net;
  for (int i = 0; i < 30; ++i) net.nodes.push_back({"n" + std::to_string(i), std::nullopt});
  int made = 0;
  for (int i = 0; i < 30 && made < 100; ++i) {
    for (int j = 0; j < 30 && made < 100; ++j) {
      if (i == j || (i + j) % 3) continue;
      net.arcs.push_back(arc("n" + std::to_string(i), "n" + std::to_string(j), 1, 1, 0, 0));
      ++made;
    }
  }
  ASSERT_EQ(made, 100);
  auto g = expand(net, 60);
  EXPECT_EQ(g.movement_count(), 100 * 60);
  EXPECT_EQ(g.dwell_count(), 30 * 60);
}

TEST(Adjacency, Examples) {
  Instance inst = two_node(2, 1, 0, 0, 2, 1);
  auto g = expand(inst.network, 2);
  EXPECT_TRUE(g.adjacency("A", 0, "B"));
  EXPECT_FALSE(g.adjacency("A", 1, "B"));
  for (int t = 0; t <= 2; ++t) EXPECT_FALSE(g.adjacency("B", t, "A"));
}

TEST(Expand, LongArcProducesNothing) {
  Instance inst = two_node(5, 1, 0, 0, 3, 1);
  auto g = expand(inst.network, 3);
  EXPECT_EQ(g.movement_count(), 0);
  EXPECT_EQ(g.movement_arc(0, 0), -1);
}

// Movement count formula, arc invariants, adjacency against membership and
// determinism on random networks.
TEST(Expand, PropertiesOnRandomNetworks) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 40; ++round) {
    Network net;
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int i = 0; i < n; ++i) net.nodes.push_back({"n" + std::to_string(i), std::nullopt});
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
          net.arcs.push_back(arc("n" + std::to_string(i), "n" + std::to_string(j),
                                 std::uniform_int_distribution<int>(1, 4)(rng), 1, 0, 0));
        }
      }
    }
    const int H = std::uniform_int_distribution<int>(1, 7)(rng);
    auto g = expand(net, H);
    int expected = 0;
    for (const auto& a : net.arcs) expected += std::max(0, H - a.travel_time + 1);
    EXPECT_EQ(g.movement_count(), expected);
    EXPECT_EQ(g.dwell_count(), n * H);

    std::vector<std::vector<std::vector<bool>>> member(
        static_cast<std::size_t>(n), std::vector<std::vector<bool>>(static_cast<std::size_t>(H + 1), std::vector<bool>(static_cast<std::size_t>(n))));
    for (int id = 0; id < static_cast<int>(g.arcs().size()); ++id) {
      const auto& ta = g.arc(id);
      EXPECT_LE(ta.to.t, H);
      if (ta.kind == TimeArcKind::Movement) {
        const auto& base = net.arcs[static_cast<std::size_t>(ta.base_arc)];
        EXPECT_EQ(ta.to.t - ta.from.t, base.travel_time);
        EXPECT_EQ(net.nodes[static_cast<std::size_t>(ta.from.node)].id, base.from);
        EXPECT_EQ(net.nodes[static_cast<std::size_t>(ta.to.node)].id, base.to);
        member[static_cast<std::size_t>(ta.from.node)][static_cast<std::size_t>(ta.from.t)][static_cast<std::size_t>(ta.to.node)] = true;
      } else {
        EXPECT_EQ(ta.from.node, ta.to.node);
        EXPECT_EQ(ta.to.t, ta.from.t + 1);
      }
      auto out = g.out_arcs(ta.from.node, ta.from.t);
      auto in = g.in_arcs(ta.to.node, ta.to.t);
      EXPECT_NE(std::find(out.begin(), out.end(), id), out.end());
      EXPECT_NE(std::find(in.begin(), in.end(), id), in.end());
    }
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t <= H; ++t) {
        for (int j = 0; j < n; ++j) {
          EXPECT_EQ(g.adjacency(i, t, j), member[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)][static_cast<std::size_t>(j)]);
        }
      }
    }
    EXPECT_EQ(expand(net, H).dump(), g.dump());
  }
}
