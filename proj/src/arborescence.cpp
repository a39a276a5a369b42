#include "railnet/extract.hpp"
#include "railnet/polycases.hpp"

#include <map>
#include <queue>

namespace railnet {

std::optional<std::string> is_arborescence(const Network& network) {
  if (network.nodes.empty()) return std::nullopt;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < network.nodes.size(); ++i) index.emplace(network.nodes[i].id, static_cast<int>(i));
  std::vector<int> indegree(network.nodes.size(), 0);
  std::vector<std::vector<int>> children(network.nodes.size());
  for (const auto& a : network.arcs) {
    if (a.multiplicity != 1) return std::nullopt;
    auto from = index.find(a.from);
    auto to = index.find(a.to);
    if (from == index.end() || to == index.end()) return std::nullopt;
    ++indegree[static_cast<std::size_t>(to->second)];
    children[static_cast<std::size_t>(from->second)].push_back(to->second);
  }
  int root = -1;
  for (std::size_t i = 0; i < indegree.size(); ++i) {
    if (indegree[i] == 0) {
      if (root >= 0) return std::nullopt;
      root = static_cast<int>(i);
    } else if (indegree[i] != 1) {
      return std::nullopt;
    }
  }
  if (root < 0) return std::nullopt;
  std::vector<char> seen(network.nodes.size(), 0);
  std::queue<int> todo;
  todo.push(root);
  seen[static_cast<std::size_t>(root)] = 1;
  std::size_t reached = 1;
  while (!todo.empty()) {
    int u = todo.front();
    todo.pop();
    for (int w : children[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(w)]) return std::nullopt;
      seen[static_cast<std::size_t>(w)] = 1;
      ++reached;
      todo.push(w);
    }
  }
  if (reached != network.nodes.size()) return std::nullopt;
  return network.nodes[static_cast<std::size_t>(root)].id;
}

namespace {

void require_valid(const Instance& instance) {
  auto report = validate_instance(instance);
  if (!report.ok()) throw std::invalid_argument("invalid instance:\n" + report.describe());
}

// Arc indices from origin to destination, or nullopt when the destination is
// not below the origin.
std::optional<std::vector<int>> tree_path(const IndexedInstance& idx, int origin, int destination) {
  std::vector<int> reversed;
  int node = destination;
  while (node != origin) {
    const auto& in = idx.in_arcs(node);
    if (in.empty()) return std::nullopt;
    reversed.push_back(in.front());
    node = idx.arc_from(in.front());
  }
  return std::vector<int>(reversed.rbegin(), reversed.rend());
}

}  // namespace

bool arborescence_applicable(const Instance& instance, std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (!validate_instance(instance).ok()) return fail("instance is invalid");
  if (!is_arborescence(instance.network)) return fail("network is not an arborescence");
  if (instance.allow_dwell) return fail("dwelling is allowed, so departures are not fixed");
  IndexedInstance idx(instance);
  if (idx.max_headway() > 1) return fail("instance has minimum headways");
  for (int v = 0; v < idx.train_count(); ++v) {
    const auto& train = idx.train(v);
    if (train.optional) return fail("train " + train.id + " is optional");
    auto path = tree_path(idx, idx.origin(v), idx.destination(v));
    if (!path) continue;
    int travel = 0;
    for (int a : *path) travel += idx.arc(a).travel_time;
    if (train.latest_arrival > train.earliest_departure + travel) {
      return fail("train " + train.id + " could leave later than its earliest departure");
    }
  }
  return true;
}

std::optional<Solution> solve_arborescence(const Instance& instance) {
  require_valid(instance);
  if (!is_arborescence(instance.network)) throw UnsupportedInstance("network is not an arborescence");
  IndexedInstance idx(instance);
  if (idx.max_headway() > 1) {
    throw UnsupportedInstance("the arborescence solver does not model minimum headways");
  }
  for (const auto& v : instance.trains) {
    if (v.optional) throw UnsupportedInstance("the arborescence solver does not handle optional train " + v.id);
  }

  Solution sol;
  // Departure times per (arc, train).
  std::map<std::pair<int, int>, std::vector<TimeStep>> departures;
  for (int v = 0; v < idx.train_count(); ++v) {
    const auto& train = idx.train(v);
    auto path = tree_path(idx, idx.origin(v), idx.destination(v));
    if (!path) return std::nullopt;
    TimeStep t = train.earliest_departure;
    std::vector<RoutedStep> steps;
    for (int a : *path) {
      steps.push_back({train.id, idx.arc(a).from, idx.arc(a).to, t});
      departures[{a, v}].push_back(t);
      t += idx.arc(a).travel_time;
    }
    if (t > train.latest_arrival || t > instance.horizon) return std::nullopt;
    for (const auto& via : train.via_nodes) {
      bool passes = false;
      for (const auto& s : steps) passes = passes || s.from == via;
      if (!passes) return std::nullopt;
    }
    sol.routes.emplace(train.id, std::move(steps));
  }

  for (const auto& c : instance.connections) {
    std::optional<TimeStep> arrive, leave;
    for (const auto& s : sol.routes.at(c.feeder)) {
      if (s.to == c.station) {
        arrive = s.depart + idx.arc(*idx.find_arc(s.from, s.to)).travel_time;
      }
    }
    for (const auto& s : sol.routes.at(c.connecting)) {
      if (s.from == c.station) leave = s.depart;
    }
    if (!arrive || !leave || *arrive > *leave) return std::nullopt;
  }

  const auto starts = capacity_window_starts(instance.horizon, instance.capacity_window);
  for (int a = 0; a < idx.arc_count(); ++a) {
    const auto& arc = idx.arc(a);
    int peak = 0;
    for (const auto& members : idx.scenario_trains()) {
      for (TimeStep t0 : starts) {
        TimeStep end = instance.capacity_window > instance.horizon ? instance.horizon + 1 : t0 + instance.capacity_window;
        int count = 0;
        for (int v : members) {
          auto it = departures.find({a, v});
          if (it == departures.end()) continue;
          for (TimeStep t : it->second) count += t >= t0 && t < end;
        }
        peak = std::max(peak, count);
      }
    }
    if (peak > arc.capacity + arc.expandable_capacity) return std::nullopt;
    if (peak > arc.capacity) sol.expanded_arcs.emplace_back(arc.from, arc.to);
  }
  compute_costs(instance, sol);
  return sol;
}

}  // namespace railnet
