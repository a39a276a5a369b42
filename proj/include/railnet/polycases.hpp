#pragma once

#include "railnet/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace railnet {

// The instance falls outside what a special-case solver handles.
class UnsupportedInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---- arborescence ----

// Root id iff the root has in-degree 0, every other node in-degree 1, and
// every node is reachable from the root. Multi-arcs disqualify.
std::optional<std::string> is_arborescence(const Network& network);

// Every train leaves at its earliest departure and follows its unique path
// without waiting. nullopt means infeasible. Throws UnsupportedInstance.
std::optional<Solution> solve_arborescence(const Instance& instance);

// True when solve_arborescence and the full model agree by construction:
// arborescence, dwell disabled, every latest arrival equal to the earliest
// departure plus the path travel time, and no optional trains or headways.
bool arborescence_applicable(const Instance& instance, std::string* why = nullptr);

// ---- series-parallel ----

enum class SpKind { Leaf, Series, Parallel };

struct SpNode {
  SpKind kind = SpKind::Leaf;
  int arc = -1;   // leaf: index into Network::arcs
  int copy = 0;   // leaf: which parallel copy of a multi-arc
  int left = -1;  // series: first part; parallel: one branch
  int right = -1;
  std::string source;
  std::string sink;
};

struct SpTree {
  std::vector<SpNode> nodes;  // children precede parents
  int root = -1;

  const SpNode& node(int i) const { return nodes[static_cast<std::size_t>(i)]; }
  // Leaf (arc, copy) pairs under node i, in tree order.
  std::vector<std::pair<int, int>> leaves(int i) const;
};

// Series and parallel reductions down to a single source-sink arc; nullopt
// when the network is not two-terminal series-parallel.
std::optional<SpTree> sp_decompose(const Network& network);

// nullopt stands for +infinity throughout.
using SpCost = std::optional<Rational>;

SpCost sp_cost_base(const Arc& arc, int trains);

struct CostTable {
  int max_trains = 0;
  int max_time = 0;
  // cost[node][v][tt], witness[node][v][tt]: split time (series) or branch
  // train count (parallel); -1 where unused.
  std::vector<std::vector<std::vector<SpCost>>> cost;
  std::vector<std::vector<std::vector<int>>> witness;
  long operations = 0;

  const SpCost& at(int node, int v, int tt) const {
    return cost[static_cast<std::size_t>(node)][static_cast<std::size_t>(v)][static_cast<std::size_t>(tt)];
  }
};

// Bottom-up table with a common travel-time split for all trains at series
// nodes. The root entry is exact whenever the budget is at least the longest
// source-sink travel time; with a binding budget it is an upper bound.
CostTable sp_cost_table(const SpTree& tree, const Instance& instance);

// Longest source-sink travel time of the subtree rooted at `node`.
int sp_longest_path(const SpTree& tree, const Network& network, int node);

// Uniform origin, destination, earliest departure and latest arrival;
// capacity window at least the horizon; a single scenario; no connections,
// VIA nodes, optional trains or headways. Throws UnsupportedInstance
// otherwise. nullopt means infeasible.
std::optional<Solution> solve_series_parallel(const Instance& instance);

// Which evaluation produced the answer: the common-split table when it is
// provably exact, otherwise the per-train travel-time profile search.
struct SpSolveInfo {
  bool used_table = false;
  long operations = 0;
};
std::optional<Solution> solve_series_parallel(const Instance& instance, SpSolveInfo& info);

}  // namespace railnet
