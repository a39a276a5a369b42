#pragma once

#include "railnet/model.hpp"

#include <string>
#include <vector>

namespace railnet {

struct TimeNode {
  int node = 0;  // index into Network::nodes
  TimeStep t = 0;

  friend bool operator==(const TimeNode&, const TimeNode&) = default;
};

enum class TimeArcKind { Movement, Dwell };

struct TimeArc {
  TimeNode from;
  TimeNode to;
  TimeArcKind kind = TimeArcKind::Movement;
  int base_arc = -1;  // index into Network::arcs; -1 for dwell
};

// Copies i_t of every node for t = 0..horizon. Movement arcs come first,
// ordered by declared arc then departure time; dwell arcs follow, ordered by
// node then time.
class TimeExpandedGraph {
 public:
  TimeExpandedGraph(const Network& network, TimeStep horizon);

  TimeStep horizon() const { return horizon_; }
  int node_count() const { return static_cast<int>(node_ids_.size()); }
  int time_node_count() const { return node_count() * (horizon_ + 1); }
  int time_node_index(int node, TimeStep t) const { return node * (horizon_ + 1) + t; }
  TimeNode time_node(int index) const { return {index / (horizon_ + 1), index % (horizon_ + 1)}; }

  const std::vector<TimeArc>& arcs() const { return arcs_; }
  const TimeArc& arc(int id) const { return arcs_[static_cast<std::size_t>(id)]; }
  int movement_count() const { return movement_count_; }
  int dwell_count() const { return static_cast<int>(arcs_.size()) - movement_count_; }

  const std::vector<int>& out_arcs(int node, TimeStep t) const {
    return out_[static_cast<std::size_t>(time_node_index(node, t))];
  }
  const std::vector<int>& in_arcs(int node, TimeStep t) const {
    return in_[static_cast<std::size_t>(time_node_index(node, t))];
  }

  // Time arc of declared arc `a` departing at t, or -1 if it would cross the horizon.
  int movement_arc(int a, TimeStep t) const;
  // Dwell arc (node, t) -> (node, t + 1), or -1 when t + 1 > horizon.
  int dwell_arc(int node, TimeStep t) const;

  // True iff a movement arc leaves (i, t) toward j.
  bool adjacency(int i, TimeStep t, int j) const;
  bool adjacency(const std::string& i, TimeStep t, const std::string& j) const;

  // One line "i t -> j t'" per arc, in index order.
  std::string dump() const;

 private:
  TimeStep horizon_;
  std::vector<std::string> node_ids_;
  std::vector<TimeArc> arcs_;
  int movement_count_ = 0;
  std::vector<int> first_movement_;  // per declared arc, id of its t = 0 copy
  std::vector<int> arc_travel_;
  std::vector<std::vector<int>> out_, in_;
};

TimeExpandedGraph expand(const Network& network, TimeStep horizon);

}  // namespace railnet
