#include "railnet/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace railnet {

bool ValidationReport::has_error(std::string_view code) const {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const ValidationIssue& e) { return e.code == code; });
}

std::string ValidationReport::describe() const {
  std::ostringstream out;
  for (const auto& e : errors) out << "error " << e.code << " at " << e.location << ": " << e.message << "\n";
  for (const auto& w : warnings) out << "warning " << w.code << " at " << w.location << ": " << w.message << "\n";
  return out.str();
}

bool is_valid_identifier(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '\'';
  });
}

namespace {

class ReportBuilder {
 public:
  void error(std::string code, std::string message, std::string location) {
    report_.errors.push_back({std::move(code), std::move(message), std::move(location)});
  }
  void warning(std::string code, std::string message, std::string location) {
    report_.warnings.push_back({std::move(code), std::move(message), std::move(location)});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

std::string at(std::string_view list, std::size_t index) {
  return std::string(list) + "[" + std::to_string(index) + "]";
}

}  // namespace

ValidationReport validate_instance(const Instance& raw) {
  ReportBuilder r;
  const auto& net = raw.network;

  std::set<std::string> node_ids;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const auto& id = net.nodes[i].id;
    if (!is_valid_identifier(id)) {
      r.error("NODE_ID_INVALID", "node id '" + id + "' must be non-empty and use [A-Za-z0-9_']",
              at("nodes", i));
    }
    if (!node_ids.insert(id).second) r.error("NODE_DUPLICATE", "duplicate node id '" + id + "'", at("nodes", i));
  }
  auto has_node = [&](const std::string& id) { return node_ids.count(id) > 0; };

  if (raw.horizon < 1) r.error("HORIZON", "horizon must be at least 1", "horizon");
  if (raw.capacity_window < 1) {
    r.error("CAPACITY_WINDOW", "capacity_window must be at least 1", "capacity_window");
  } else if (raw.capacity_window > raw.horizon && raw.horizon >= 1) {
    r.warning("CAPACITY_WINDOW_EXCEEDS_HORIZON",
              "capacity_window exceeds horizon; a single window covers all time steps", "capacity_window");
  }

  std::set<std::pair<std::string, std::string>> arc_pairs;
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const auto& a = net.arcs[i];
    auto loc = at("arcs", i);
    if (!has_node(a.from)) r.error("ARC_UNKNOWN_NODE", "unknown node '" + a.from + "'", loc + ".from");
    if (!has_node(a.to)) r.error("ARC_UNKNOWN_NODE", "unknown node '" + a.to + "'", loc + ".to");
    if (a.from == a.to) r.error("ARC_SELF_LOOP", "arc from '" + a.from + "' to itself", loc);
    if (a.travel_time < 1) r.error("ARC_TRAVEL_TIME", "travel_time must be at least 1", loc + ".travel_time");
    if (a.capacity < 0) r.error("ARC_CAPACITY", "capacity must be non-negative", loc + ".capacity");
    if (a.expandable_capacity < 0) {
      r.error("ARC_EXPANDABLE_CAPACITY", "expandable_capacity must be non-negative", loc + ".expandable_capacity");
    }
    if (a.expansion_cost < 0) {
      r.error("ARC_EXPANSION_COST", "expansion_cost must be non-negative", loc + ".expansion_cost");
    }
    if (a.multiplicity < 1) r.error("ARC_MULTIPLICITY", "multiplicity must be at least 1", loc + ".multiplicity");
    if (!arc_pairs.insert({a.from, a.to}).second) {
      r.error("ARC_DUPLICATE", "second arc " + a.from + "->" + a.to + "; use multiplicity for parallel copies", loc);
    }
    if (raw.horizon >= 1 && a.travel_time > raw.horizon) {
      r.warning("ARC_EXCEEDS_HORIZON", "travel_time exceeds horizon; the arc can never be used", loc);
    }
  }

  std::set<std::string> train_ids;
  std::map<std::string, const TrainRequest*> trains_by_id;
  for (std::size_t i = 0; i < raw.trains.size(); ++i) {
    const auto& v = raw.trains[i];
    auto loc = at("trains", i);
    if (!is_valid_identifier(v.id)) {
      r.error("TRAIN_ID_INVALID", "train id '" + v.id + "' must be non-empty and use [A-Za-z0-9_']", loc + ".id");
    }
    if (!train_ids.insert(v.id).second) r.error("TRAIN_DUPLICATE", "duplicate train id '" + v.id + "'", loc + ".id");
    trains_by_id.emplace(v.id, &v);
    if (!has_node(v.origin)) r.error("TRAIN_UNKNOWN_NODE", "unknown origin '" + v.origin + "'", loc + ".origin");
    if (!has_node(v.destination)) {
      r.error("TRAIN_UNKNOWN_NODE", "unknown destination '" + v.destination + "'", loc + ".destination");
    }
    if (v.origin == v.destination) r.error("TRAIN_SAME_TERMINI", "origin equals destination", loc);
    if (v.earliest_departure < 0) {
      r.error("TRAIN_TIME_RANGE", "earliest_departure must be non-negative", loc + ".earliest_departure");
    }
    if (v.earliest_departure > v.latest_arrival) {
      r.error("TRAIN_TIME_WINDOW", "earliest_departure after latest_arrival", loc);
    }
    if (raw.horizon >= 1 && v.latest_arrival > raw.horizon) {
      r.warning("TRAIN_ARRIVAL_BEYOND_HORIZON", "latest_arrival beyond horizon is clipped", loc + ".latest_arrival");
    }
    if (v.optional && !v.penalty) r.error("PENALTY_MISSING", "optional train needs a penalty", loc + ".penalty");
    if (!v.optional && v.penalty) {
      r.error("PENALTY_UNEXPECTED", "penalty given for a non-optional train", loc + ".penalty");
    }
    if (v.penalty && *v.penalty < 0) r.error("PENALTY_NEGATIVE", "penalty must be non-negative", loc + ".penalty");
    std::set<std::string> seen_via;
    for (std::size_t k = 0; k < v.via_nodes.size(); ++k) {
      const auto& n = v.via_nodes[k];
      auto vloc = loc + "." + at("via_nodes", k);
      if (!has_node(n)) r.error("VIA_UNKNOWN_NODE", "unknown VIA node '" + n + "'", vloc);
      if (n == v.origin || n == v.destination) {
        r.error("VIA_AT_TERMINUS", "VIA node '" + n + "' is the train's origin or destination", vloc);
      }
      if (v.optional) r.error("VIA_OPTIONAL_TRAIN", "VIA nodes are not supported for optional trains", vloc);
      if (!seen_via.insert(n).second) r.warning("VIA_DUPLICATE", "VIA node listed twice", vloc);
    }
  }

  if (net.headways.default_headway < 0) {
    r.error("HEADWAY_NEGATIVE", "headway_default must be non-negative", "headway_default");
  }
  std::set<std::tuple<std::string, std::string, std::string, std::string>> headway_keys;
  for (std::size_t i = 0; i < net.headways.entries.size(); ++i) {
    const auto& h = net.headways.entries[i];
    auto loc = at("headways", i);
    if (h.headway < 0) r.error("HEADWAY_NEGATIVE", "headway must be non-negative", loc + ".headway");
    if (!arc_pairs.count({h.from, h.to})) {
      r.error("HEADWAY_UNKNOWN_ARC", "no arc " + h.from + "->" + h.to, loc);
    }
    if (!train_ids.count(h.v1)) r.error("HEADWAY_UNKNOWN_TRAIN", "unknown train '" + h.v1 + "'", loc + ".v1");
    if (!train_ids.count(h.v2)) r.error("HEADWAY_UNKNOWN_TRAIN", "unknown train '" + h.v2 + "'", loc + ".v2");
    if (h.v1 == h.v2) r.error("HEADWAY_SAME_TRAIN", "headway between a train and itself", loc);
    if (!headway_keys.insert({h.from, h.to, h.v1, h.v2}).second) {
      r.error("HEADWAY_DUPLICATE", "headway for this arc and train pair given twice", loc);
    }
  }

  for (std::size_t i = 0; i < raw.connections.size(); ++i) {
    const auto& c = raw.connections[i];
    auto loc = at("connections", i);
    if (!has_node(c.station)) r.error("CONNECTION_UNKNOWN_NODE", "unknown station '" + c.station + "'", loc);
    auto feeder = trains_by_id.find(c.feeder);
    auto connecting = trains_by_id.find(c.connecting);
    if (feeder == trains_by_id.end()) {
      r.error("CONNECTION_UNKNOWN_TRAIN", "unknown feeder '" + c.feeder + "'", loc + ".feeder");
    }
    if (connecting == trains_by_id.end()) {
      r.error("CONNECTION_UNKNOWN_TRAIN", "unknown connecting train '" + c.connecting + "'", loc + ".connecting");
    }
    if (c.feeder == c.connecting) r.error("CONNECTION_SAME_TRAIN", "feeder equals connecting train", loc);
    if (feeder != trains_by_id.end()) {
      if (feeder->second->optional) {
        r.error("CONNECTION_OPTIONAL_TRAIN", "connections are not supported for optional trains", loc + ".feeder");
      }
      if (feeder->second->origin == c.station) {
        r.error("CONNECTION_AT_FEEDER_ORIGIN", "the feeder cannot arrive at its own origin", loc);
      }
    }
    if (connecting != trains_by_id.end()) {
      if (connecting->second->optional) {
        r.error("CONNECTION_OPTIONAL_TRAIN", "connections are not supported for optional trains",
                loc + ".connecting");
      }
      if (connecting->second->destination == c.station) {
        r.error("CONNECTION_AT_CONNECTING_DESTINATION", "the connecting train cannot depart its destination", loc);
      }
    }
  }

  std::set<std::string> scenario_ids;
  std::set<std::string> covered;
  for (std::size_t i = 0; i < raw.scenarios.size(); ++i) {
    const auto& s = raw.scenarios[i];
    auto loc = at("scenarios", i);
    if (!is_valid_identifier(s.id)) r.error("SCENARIO_ID_INVALID", "scenario id '" + s.id + "' is invalid", loc);
    if (!scenario_ids.insert(s.id).second) r.error("SCENARIO_DUPLICATE", "duplicate scenario id '" + s.id + "'", loc);
    if (s.train_ids.empty()) r.error("SCENARIO_EMPTY", "scenario has no trains", loc);
    std::set<std::string> in_scenario;
    for (std::size_t k = 0; k < s.train_ids.size(); ++k) {
      const auto& id = s.train_ids[k];
      if (!train_ids.count(id)) {
        r.error("SCENARIO_UNKNOWN_TRAIN", "unknown train '" + id + "'", loc + "." + at("train_ids", k));
      }
      if (!in_scenario.insert(id).second) {
        r.error("SCENARIO_DUPLICATE_TRAIN", "train '" + id + "' listed twice", loc + "." + at("train_ids", k));
      }
      covered.insert(id);
    }
  }
  if (!raw.scenarios.empty()) {
    for (std::size_t i = 0; i < raw.trains.size(); ++i) {
      if (!covered.count(raw.trains[i].id)) {
        r.error("TRAIN_NOT_IN_SCENARIO", "train '" + raw.trains[i].id + "' belongs to no scenario", at("trains", i));
      }
    }
  }

  return r.take();
}

std::vector<Scenario> effective_scenarios(const Instance& instance) {
  if (!instance.scenarios.empty()) return instance.scenarios;
  Scenario all{"all", {}};
  for (const auto& v : instance.trains) all.train_ids.push_back(v.id);
  return {all};
}

std::vector<TimeStep> capacity_window_starts(TimeStep horizon, int window) {
  if (window > horizon) return {0};
  std::vector<TimeStep> starts;
  for (TimeStep t0 = 0; t0 + window <= horizon + 1; ++t0) starts.push_back(t0);
  return starts;
}

IndexedInstance::IndexedInstance(const Instance& instance) : instance_(&instance) {
  const auto& net = instance.network;
  out_.resize(net.nodes.size());
  in_.resize(net.nodes.size());
  for (std::size_t i = 0; i < net.nodes.size(); ++i) node_by_id_.emplace(net.nodes[i].id, static_cast<int>(i));
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    int from = node(net.arcs[a].from);
    int to = node(net.arcs[a].to);
    arc_from_.push_back(from);
    arc_to_.push_back(to);
    arc_by_pair_.emplace(std::pair{from, to}, static_cast<int>(a));
    out_[static_cast<std::size_t>(from)].push_back(static_cast<int>(a));
    in_[static_cast<std::size_t>(to)].push_back(static_cast<int>(a));
  }
  for (std::size_t v = 0; v < instance.trains.size(); ++v) {
    train_by_id_.emplace(instance.trains[v].id, static_cast<int>(v));
    origin_.push_back(node(instance.trains[v].origin));
    destination_.push_back(node(instance.trains[v].destination));
  }
  max_headway_ = net.headways.default_headway;
  for (const auto& h : net.headways.entries) {
    auto a = find_arc(h.from, h.to);
    if (!a) throw std::out_of_range("headway on unknown arc " + h.from + "->" + h.to);
    headway_[{*a, train_index(h.v1), train_index(h.v2)}] = h.headway;
    max_headway_ = std::max(max_headway_, h.headway);
  }
  scenarios_ = effective_scenarios(instance);
  for (const auto& s : scenarios_) {
    std::vector<int> members;
    for (const auto& id : s.train_ids) members.push_back(train_index(id));
    scenario_trains_.push_back(std::move(members));
  }
}

int IndexedInstance::node(std::string_view id) const {
  auto it = node_by_id_.find(std::string(id));
  if (it == node_by_id_.end()) throw std::out_of_range("unknown node '" + std::string(id) + "'");
  return it->second;
}

int IndexedInstance::train_index(std::string_view id) const {
  auto it = train_by_id_.find(std::string(id));
  if (it == train_by_id_.end()) throw std::out_of_range("unknown train '" + std::string(id) + "'");
  return it->second;
}

std::optional<int> IndexedInstance::find_node(std::string_view id) const {
  auto it = node_by_id_.find(std::string(id));
  if (it == node_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> IndexedInstance::find_train(std::string_view id) const {
  auto it = train_by_id_.find(std::string(id));
  if (it == train_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> IndexedInstance::find_arc(std::string_view from, std::string_view to) const {
  auto f = find_node(from);
  auto t = find_node(to);
  if (!f || !t) return std::nullopt;
  auto it = arc_by_pair_.find({*f, *t});
  if (it == arc_by_pair_.end()) return std::nullopt;
  return it->second;
}

int IndexedInstance::headway(int arc, int v1, int v2) const {
  auto it = headway_.find({arc, v1, v2});
  return it == headway_.end() ? instance_->network.headways.default_headway : it->second;
}

std::string IndexedInstance::arc_label(int a) const {
  return node_id(arc_from(a)) + "." + node_id(arc_to(a));
}

}  // namespace railnet
