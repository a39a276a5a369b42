#pragma once

#include "railnet/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace railnet {

// Time is an integer grid 0..horizon inclusive.
using TimeStep = int;

struct Node {
  std::string id;
  std::optional<std::string> display_name;
};

struct Arc {
  std::string from;
  std::string to;
  int travel_time = 1;
  int capacity = 0;
  int expandable_capacity = 0;
  Rational expansion_cost = 0;
  // Number of identical parallel copies. Only the series-parallel solver
  // accepts values above 1.
  int multiplicity = 1;
};

// Minimum separation between the departure of `v1` (leading) and `v2`
// (following) onto the arc from -> to.
struct HeadwayEntry {
  std::string from;
  std::string to;
  std::string v1;
  std::string v2;
  int headway = 0;
};

struct HeadwayTable {
  std::vector<HeadwayEntry> entries;
  int default_headway = 0;
};

struct Network {
  std::vector<Node> nodes;
  std::vector<Arc> arcs;
  HeadwayTable headways;
};

struct TrainRequest {
  std::string id;
  std::string origin;
  std::string destination;
  TimeStep earliest_departure = 0;
  TimeStep latest_arrival = 0;
  bool optional = false;
  std::optional<Rational> penalty;
  std::vector<std::string> via_nodes;
};

// `feeder` must arrive at `station` no later than `connecting` leaves it.
struct ConnectionRequirement {
  std::string station;
  std::string feeder;
  std::string connecting;
};

struct Scenario {
  std::string id;
  std::vector<std::string> train_ids;
};

struct Instance {
  Network network;
  TimeStep horizon = 1;
  std::vector<TrainRequest> trains;
  std::vector<ConnectionRequirement> connections;
  // Empty means deterministic: one implicit scenario holding every train.
  std::vector<Scenario> scenarios;
  int capacity_window = 1;
  bool allow_dwell = true;
};

struct RoutedStep {
  std::string train;
  std::string from;
  std::string to;
  TimeStep depart = 0;

  friend bool operator==(const RoutedStep&, const RoutedStep&) = default;
};

struct CostBreakdown {
  Rational expansion_cost_total = 0;
  Rational penalty_total = 0;

  friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

struct Solution {
  // A pair appears k times when k copies of a multi-arc are expanded.
  std::vector<std::pair<std::string, std::string>> expanded_arcs;
  // Dropped optional trains have no entry. Dwell is implicit between steps.
  std::map<std::string, std::vector<RoutedStep>> routes;
  Rational objective_value = 0;
  CostBreakdown cost_breakdown;

  friend bool operator==(const Solution&, const Solution&) = default;
};

struct ValidationIssue {
  std::string code;
  std::string message;
  std::string location;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return errors.empty(); }
  bool has_error(std::string_view code) const;
  std::string describe() const;

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

ValidationReport validate_instance(const Instance& raw);

// Declared scenarios, or a single scenario "all" with every train.
std::vector<Scenario> effective_scenarios(const Instance& instance);

// Identifiers are restricted so that they can be embedded in row and column
// names of the LP export.
bool is_valid_identifier(std::string_view id);

// Dense integer view of a validated instance. Holds a pointer to the
// instance, which must outlive it.
class IndexedInstance {
 public:
  explicit IndexedInstance(const Instance& instance);

  const Instance& instance() const { return *instance_; }
  int node_count() const { return static_cast<int>(instance_->network.nodes.size()); }
  int arc_count() const { return static_cast<int>(instance_->network.arcs.size()); }
  int train_count() const { return static_cast<int>(instance_->trains.size()); }
  TimeStep horizon() const { return instance_->horizon; }

  const Arc& arc(int a) const { return instance_->network.arcs[static_cast<std::size_t>(a)]; }
  const TrainRequest& train(int v) const {
    return instance_->trains[static_cast<std::size_t>(v)];
  }
  const std::string& node_id(int i) const {
    return instance_->network.nodes[static_cast<std::size_t>(i)].id;
  }

  int node(std::string_view id) const;  // throws std::out_of_range
  int train_index(std::string_view id) const;
  std::optional<int> find_node(std::string_view id) const;
  std::optional<int> find_train(std::string_view id) const;
  std::optional<int> find_arc(std::string_view from, std::string_view to) const;

  int arc_from(int a) const { return arc_from_[static_cast<std::size_t>(a)]; }
  int arc_to(int a) const { return arc_to_[static_cast<std::size_t>(a)]; }
  const std::vector<int>& out_arcs(int node) const { return out_[static_cast<std::size_t>(node)]; }
  const std::vector<int>& in_arcs(int node) const { return in_[static_cast<std::size_t>(node)]; }

  int origin(int v) const { return origin_[static_cast<std::size_t>(v)]; }
  int destination(int v) const { return destination_[static_cast<std::size_t>(v)]; }

  int headway(int arc, int v1, int v2) const;
  // Largest headway value anywhere in the table, default included.
  int max_headway() const { return max_headway_; }

  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  // Train indices per effective scenario, in scenario declaration order.
  const std::vector<std::vector<int>>& scenario_trains() const { return scenario_trains_; }

  // "from.to", the arc label used in names.
  std::string arc_label(int a) const;

 private:
  const Instance* instance_;
  std::unordered_map<std::string, int> node_by_id_;
  std::unordered_map<std::string, int> train_by_id_;
  std::map<std::pair<int, int>, int> arc_by_pair_;
  std::vector<int> arc_from_, arc_to_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<int> origin_, destination_;
  std::map<std::tuple<int, int, int>, int> headway_;
  int max_headway_ = 0;
  std::vector<Scenario> scenarios_;
  std::vector<std::vector<int>> scenario_trains_;
};

// Capacity window starts: every t0 with t0 + window <= horizon + 1, or a
// single start at 0 when the window is longer than the horizon.
std::vector<TimeStep> capacity_window_starts(TimeStep horizon, int window);

}  // namespace railnet
