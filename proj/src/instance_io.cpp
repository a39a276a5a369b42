#include "railnet/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>

namespace railnet {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw FormatError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) throw FormatError(where + ": unknown key '" + item.key() + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(where + ": missing key '" + key + "'");
  return *it;
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) throw FormatError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw FormatError(where + ": expected an integer");
  auto value = v.get<std::int64_t>();
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
    throw FormatError(where + ": integer out of range");
  }
  return static_cast<int>(value);
}

int get_int(const json& obj, const char* key, const std::string& where) {
  return as_int(require(obj, key, where), where + "." + key);
}

int get_int_or(const json& obj, const char* key, const std::string& where, int fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_int(*it, where + "." + key);
}

const json& get_array(const json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_array()) throw FormatError(where + "." + key + ": expected an array");
  return v;
}

const json* find_array(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return nullptr;
  if (!it->is_array()) throw FormatError(where + "." + key + ": expected an array");
  return &*it;
}

std::vector<std::string> string_list(const json& arr, const std::string& where) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) throw FormatError(where + "[" + std::to_string(i) + "]: expected a string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

}  // namespace

json rational_to_json(const Rational& value) {
  if (boost::multiprecision::denominator(value) == 1) {
    const auto& num = boost::multiprecision::numerator(value);
    if (num >= std::numeric_limits<std::int64_t>::min() && num <= std::numeric_limits<std::int64_t>::max()) {
      return num.convert_to<std::int64_t>();
    }
  }
  return to_string(value);
}

Rational rational_from_json(const json& value, const std::string& where) {
  try {
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (value.is_number_float()) {
      // Shortest round-trip text recovers the decimal the author wrote.
      char buffer[64];
      auto res = std::to_chars(buffer, buffer + sizeof buffer, value.get<double>());
      return parse_rational(std::string_view(buffer, static_cast<std::size_t>(res.ptr - buffer)));
    }
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(where + ": " + e.what());
  }
  throw FormatError(where + ": expected a number or a rational string");
}

Instance instance_from_json(const json& doc) {
  const std::string root = "instance";
  check_keys(doc, root,
             {"nodes", "arcs", "trains", "connections", "scenarios", "horizon", "capacity_window", "headway_default",
              "headways", "allow_dwell"});
  Instance inst;

  const auto& nodes = get_array(doc, "nodes", root);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto where = idx("nodes", i);
    check_keys(nodes[i], where, {"id", "display_name"});
    Node n;
    n.id = get_string(nodes[i], "id", where);
    if (nodes[i].contains("display_name")) n.display_name = get_string(nodes[i], "display_name", where);
    inst.network.nodes.push_back(std::move(n));
  }

  const auto& arcs = get_array(doc, "arcs", root);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    auto where = idx("arcs", i);
    check_keys(arcs[i], where,
               {"from", "to", "travel_time", "capacity", "expandable_capacity", "expansion_cost", "multiplicity"});
    Arc a;
    a.from = get_string(arcs[i], "from", where);
    a.to = get_string(arcs[i], "to", where);
    a.travel_time = get_int(arcs[i], "travel_time", where);
    a.capacity = get_int(arcs[i], "capacity", where);
    a.expandable_capacity = get_int_or(arcs[i], "expandable_capacity", where, 0);
    if (arcs[i].contains("expansion_cost")) {
      a.expansion_cost = rational_from_json(arcs[i]["expansion_cost"], where + ".expansion_cost");
    }
    a.multiplicity = get_int_or(arcs[i], "multiplicity", where, 1);
    inst.network.arcs.push_back(std::move(a));
  }

  inst.network.headways.default_headway = get_int_or(doc, "headway_default", root, 0);
  if (const auto* headways = find_array(doc, "headways", root)) {
    for (std::size_t i = 0; i < headways->size(); ++i) {
      auto where = idx("headways", i);
      const auto& h = (*headways)[i];
      check_keys(h, where, {"from", "to", "v1", "v2", "headway"});
      inst.network.headways.entries.push_back({get_string(h, "from", where), get_string(h, "to", where),
                                               get_string(h, "v1", where), get_string(h, "v2", where),
                                               get_int(h, "headway", where)});
    }
  }

  const auto& trains = get_array(doc, "trains", root);
  for (std::size_t i = 0; i < trains.size(); ++i) {
    auto where = idx("trains", i);
    const auto& t = trains[i];
    check_keys(t, where,
               {"id", "origin", "destination", "earliest_departure", "latest_arrival", "optional", "penalty",
                "via_nodes"});
    TrainRequest v;
    v.id = get_string(t, "id", where);
    v.origin = get_string(t, "origin", where);
    v.destination = get_string(t, "destination", where);
    v.earliest_departure = get_int(t, "earliest_departure", where);
    v.latest_arrival = get_int(t, "latest_arrival", where);
    if (auto it = t.find("optional"); it != t.end()) {
      if (!it->is_boolean()) throw FormatError(where + ".optional: expected a boolean");
      v.optional = it->get<bool>();
    }
    if (auto it = t.find("penalty"); it != t.end() && !it->is_null()) {
      v.penalty = rational_from_json(*it, where + ".penalty");
    }
    if (const auto* via = find_array(t, "via_nodes", where)) v.via_nodes = string_list(*via, where + ".via_nodes");
    inst.trains.push_back(std::move(v));
  }

  if (const auto* connections = find_array(doc, "connections", root)) {
    for (std::size_t i = 0; i < connections->size(); ++i) {
      auto where = idx("connections", i);
      const auto& c = (*connections)[i];
      check_keys(c, where, {"station", "feeder", "connecting"});
      inst.connections.push_back(
          {get_string(c, "station", where), get_string(c, "feeder", where), get_string(c, "connecting", where)});
    }
  }

  if (const auto* scenarios = find_array(doc, "scenarios", root)) {
    for (std::size_t i = 0; i < scenarios->size(); ++i) {
      auto where = idx("scenarios", i);
      const auto& s = (*scenarios)[i];
      check_keys(s, where, {"id", "train_ids"});
      inst.scenarios.push_back(
          {get_string(s, "id", where), string_list(get_array(s, "train_ids", where), where + ".train_ids")});
    }
  }

  inst.horizon = get_int(doc, "horizon", root);
  inst.capacity_window = get_int(doc, "capacity_window", root);
  if (auto it = doc.find("allow_dwell"); it != doc.end()) {
    if (!it->is_boolean()) throw FormatError("instance.allow_dwell: expected a boolean");
    inst.allow_dwell = it->get<bool>();
  }
  return inst;
}

json instance_to_json(const Instance& inst) {
  json doc = json::object();
  json nodes = json::array();
  for (const auto& n : inst.network.nodes) {
    json j = {{"id", n.id}};
    if (n.display_name) j["display_name"] = *n.display_name;
    nodes.push_back(std::move(j));
  }
  json arcs = json::array();
  for (const auto& a : inst.network.arcs) {
    json j = {{"from", a.from},
              {"to", a.to},
              {"travel_time", a.travel_time},
              {"capacity", a.capacity},
              {"expandable_capacity", a.expandable_capacity},
              {"expansion_cost", rational_to_json(a.expansion_cost)}};
    if (a.multiplicity != 1) j["multiplicity"] = a.multiplicity;
    arcs.push_back(std::move(j));
  }
  json trains = json::array();
  for (const auto& v : inst.trains) {
    json j = {{"id", v.id},
              {"origin", v.origin},
              {"destination", v.destination},
              {"earliest_departure", v.earliest_departure},
              {"latest_arrival", v.latest_arrival},
              {"optional", v.optional},
              {"via_nodes", v.via_nodes}};
    if (v.penalty) j["penalty"] = rational_to_json(*v.penalty);
    trains.push_back(std::move(j));
  }
  json connections = json::array();
  for (const auto& c : inst.connections) {
    connections.push_back({{"station", c.station}, {"feeder", c.feeder}, {"connecting", c.connecting}});
  }
  json scenarios = json::array();
  for (const auto& s : inst.scenarios) scenarios.push_back({{"id", s.id}, {"train_ids", s.train_ids}});
  json headways = json::array();
  for (const auto& h : inst.network.headways.entries) {
    headways.push_back({{"from", h.from}, {"to", h.to}, {"v1", h.v1}, {"v2", h.v2}, {"headway", h.headway}});
  }
  doc["nodes"] = std::move(nodes);
  doc["arcs"] = std::move(arcs);
  doc["trains"] = std::move(trains);
  doc["connections"] = std::move(connections);
  doc["scenarios"] = std::move(scenarios);
  doc["horizon"] = inst.horizon;
  doc["capacity_window"] = inst.capacity_window;
  doc["headway_default"] = inst.network.headways.default_headway;
  doc["headways"] = std::move(headways);
  doc["allow_dwell"] = inst.allow_dwell;
  return doc;
}

Solution solution_from_json(const json& doc) {
  const std::string root = "solution";
  check_keys(doc, root, {"expanded_arcs", "routes", "objective_value", "cost_breakdown"});
  Solution sol;
  const auto& expanded = get_array(doc, "expanded_arcs", root);
  for (std::size_t i = 0; i < expanded.size(); ++i) {
    const auto& pair = expanded[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
      throw FormatError(idx("expanded_arcs", i) + ": expected [from, to]");
    }
    sol.expanded_arcs.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
  }
  const auto& routes = require(doc, "routes", root);
  if (!routes.is_object()) throw FormatError("solution.routes: expected an object");
  for (const auto& item : routes.items()) {
    auto where = "routes." + item.key();
    if (!item.value().is_array()) throw FormatError(where + ": expected an array");
    std::vector<RoutedStep> steps;
    for (std::size_t i = 0; i < item.value().size(); ++i) {
      const auto& s = item.value()[i];
      auto swhere = idx(where, i);
      check_keys(s, swhere, {"train", "from", "to", "depart"});
      steps.push_back({get_string(s, "train", swhere), get_string(s, "from", swhere), get_string(s, "to", swhere),
                       get_int(s, "depart", swhere)});
    }
    sol.routes.emplace(item.key(), std::move(steps));
  }
  sol.objective_value = rational_from_json(require(doc, "objective_value", root), "solution.objective_value");
  const auto& breakdown = require(doc, "cost_breakdown", root);
  check_keys(breakdown, "solution.cost_breakdown", {"expansion_cost_total", "penalty_total"});
  sol.cost_breakdown.expansion_cost_total =
      rational_from_json(require(breakdown, "expansion_cost_total", "cost_breakdown"), "expansion_cost_total");
  sol.cost_breakdown.penalty_total =
      rational_from_json(require(breakdown, "penalty_total", "cost_breakdown"), "penalty_total");
  return sol;
}

json solution_to_json(const Solution& sol) {
  json expanded = json::array();
  for (const auto& [from, to] : sol.expanded_arcs) expanded.push_back(json::array({from, to}));
  json routes = json::object();
  for (const auto& [train, steps] : sol.routes) {
    json arr = json::array();
    for (const auto& s : steps) arr.push_back({{"train", s.train}, {"from", s.from}, {"to", s.to}, {"depart", s.depart}});
    routes[train] = std::move(arr);
  }
  return {{"expanded_arcs", std::move(expanded)},
          {"routes", std::move(routes)},
          {"objective_value", rational_to_json(sol.objective_value)},
          {"cost_breakdown",
           {{"expansion_cost_total", rational_to_json(sol.cost_breakdown.expansion_cost_total)},
            {"penalty_total", rational_to_json(sol.cost_breakdown.penalty_total)}}}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

Instance load_instance(const std::filesystem::path& path) { return instance_from_json(read_json_file(path)); }
Solution load_solution(const std::filesystem::path& path) { return solution_from_json(read_json_file(path)); }
void save_instance(const Instance& instance, const std::filesystem::path& path) {
  write_json_file(instance_to_json(instance), path);
}
void save_solution(const Solution& solution, const std::filesystem::path& path) {
  write_json_file(solution_to_json(solution), path);
}

}  // namespace railnet
