#include "railnet/timegraph.hpp"

#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace railnet {

TimeExpandedGraph::TimeExpandedGraph(const Network& network, TimeStep horizon) : horizon_(horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  std::unordered_map<std::string, int> index;
  for (const auto& n : network.nodes) {
    index.emplace(n.id, static_cast<int>(node_ids_.size()));
    node_ids_.push_back(n.id);
  }
  out_.resize(static_cast<std::size_t>(time_node_count()));
  in_.resize(static_cast<std::size_t>(time_node_count()));

  auto add = [&](TimeArc arc) {
    int id = static_cast<int>(arcs_.size());
    out_[static_cast<std::size_t>(time_node_index(arc.from.node, arc.from.t))].push_back(id);
    in_[static_cast<std::size_t>(time_node_index(arc.to.node, arc.to.t))].push_back(id);
    arcs_.push_back(arc);
  };

  for (std::size_t a = 0; a < network.arcs.size(); ++a) {
    const auto& arc = network.arcs[a];
    int from = index.at(arc.from);
    int to = index.at(arc.to);
    first_movement_.push_back(static_cast<int>(arcs_.size()));
    arc_travel_.push_back(arc.travel_time);
    for (TimeStep t = 0; t + arc.travel_time <= horizon; ++t) {
      add({{from, t}, {to, t + arc.travel_time}, TimeArcKind::Movement, static_cast<int>(a)});
    }
  }
  movement_count_ = static_cast<int>(arcs_.size());
  for (int n = 0; n < node_count(); ++n) {
    for (TimeStep t = 0; t + 1 <= horizon; ++t) add({{n, t}, {n, t + 1}, TimeArcKind::Dwell, -1});
  }
}

int TimeExpandedGraph::movement_arc(int a, TimeStep t) const {
  if (t < 0 || t + arc_travel_[static_cast<std::size_t>(a)] > horizon_) return -1;
  return first_movement_[static_cast<std::size_t>(a)] + t;
}

int TimeExpandedGraph::dwell_arc(int node, TimeStep t) const {
  if (t < 0 || t + 1 > horizon_) return -1;
  return movement_count_ + node * horizon_ + t;
}

bool TimeExpandedGraph::adjacency(int i, TimeStep t, int j) const {
  if (t < 0 || t > horizon_) return false;
  for (int id : out_arcs(i, t)) {
    const auto& arc = arcs_[static_cast<std::size_t>(id)];
    if (arc.kind == TimeArcKind::Movement && arc.to.node == j) return true;
  }
  return false;
}

bool TimeExpandedGraph::adjacency(const std::string& i, TimeStep t, const std::string& j) const {
  int from = -1, to = -1;
  for (int n = 0; n < node_count(); ++n) {
    if (node_ids_[static_cast<std::size_t>(n)] == i) from = n;
    if (node_ids_[static_cast<std::size_t>(n)] == j) to = n;
  }
  if (from < 0 || to < 0) throw std::out_of_range("unknown node in adjacency query");
  return adjacency(from, t, to);
}

std::string TimeExpandedGraph::dump() const {
  std::ostringstream out;
  for (const auto& arc : arcs_) {
    out << node_ids_[static_cast<std::size_t>(arc.from.node)] << ' ' << arc.from.t << " -> "
        << node_ids_[static_cast<std::size_t>(arc.to.node)] << ' ' << arc.to.t << '\n';
  }
  return out.str();
}

TimeExpandedGraph expand(const Network& network, TimeStep horizon) { return TimeExpandedGraph(network, horizon); }

}  // namespace railnet
