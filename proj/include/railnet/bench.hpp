#pragma once

#include "railnet/model.hpp"
#include "railnet/solver_bb.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace railnet {

struct BenchRecord {
  std::string label;
  int timesteps = 0;
  int trains = 0;
  int nodes = 0;
  int arcs = 0;
  std::vector<int> scenario_sizes;
  double runtime = 0;  // mean wall seconds over the repetitions
  int constraints = 0;
  int variables = 0;
  int headway_rows = 0;
  long solver_nodes = 0;
  std::string status;
  std::optional<Rational> objective;
};

struct BenchSettings {
  int repetitions = 4;
  SolveLimits limits;
};

// Builds and solves the full model `repetitions` times. Throws what build()
// and solve() throw.
BenchRecord bench_instance(const std::string& label, const Instance& instance, const BenchSettings& settings);

// A line s0 -> s1 -> ... with unit travel times; every train runs end to
// end with a uniformly random earliest departure and latest arrival at the
// horizon. Expansion costs are random integers in 1..5.
struct LineSpec {
  int stations = 3;
  int trains = 4;
  int horizon = 6;
  int headway = 2;
  int capacity = 1;
  int expandable = 1;
  int window = 1;
  std::uint64_t seed = 0;
};

Instance gen_line_instance(const LineSpec& spec);

// gen_line_instance with trains t1.. split into consecutive scenarios of the
// given sizes; spec.trains is ignored.
Instance gen_scenario_instance(const std::vector<int>& partition, const LineSpec& spec);

// Aligned columns: Timesteps, Trains, Scenarios, Nodes, Arcs, Runtime,
// Constraints, Variables, plus headway rows, nodes searched and objective.
std::string bench_table(const std::vector<BenchRecord>& records);
std::string bench_tsv(const std::vector<BenchRecord>& records);

}  // namespace railnet
