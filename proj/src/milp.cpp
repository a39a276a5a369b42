#include "railnet/milp.hpp"

#include "railnet/timegraph.hpp"

#include <algorithm>
#include <stdexcept>

namespace railnet {

const char* family_name(RowFamily family) {
  switch (family) {
    case RowFamily::Capacity: return "capacity";
    case RowFamily::Departure: return "departure";
    case RowFamily::Arrival: return "arrival";
    case RowFamily::Headway: return "headway";
    case RowFamily::Flow: return "flow";
    case RowFamily::Connection: return "connection";
    case RowFamily::Via: return "via";
    case RowFamily::Other: break;
  }
  return "other";
}

int ConstraintSystem::add_variable(Variable v) {
  int id = static_cast<int>(variables.size());
  if (!by_name.emplace(v.name, id).second) throw std::invalid_argument("duplicate variable name " + v.name);
  variables.push_back(std::move(v));
  return id;
}

std::optional<int> ConstraintSystem::find_variable(const std::string& name) const {
  auto it = by_name.find(name);
  if (it == by_name.end()) return std::nullopt;
  return it->second;
}

Rational row_activity(const LinearRow& row, const std::vector<int>& x) {
  Rational sum = 0;
  for (const auto& term : row.terms) {
    if (x[static_cast<std::size_t>(term.var)]) sum += term.coef;
  }
  return sum;
}

bool row_satisfied(const LinearRow& row, const std::vector<int>& x) {
  Rational lhs = row_activity(row, x);
  switch (row.sense) {
    case Sense::LessEqual: return lhs <= row.rhs;
    case Sense::Equal: return lhs == row.rhs;
    case Sense::GreaterEqual: return lhs >= row.rhs;
  }
  return false;
}

Rational objective_value(const ConstraintSystem& system, const std::vector<int>& x) {
  Rational sum = system.objective_offset;
  for (const auto& term : system.objective) {
    if (x[static_cast<std::size_t>(term.var)]) sum += term.coef;
  }
  return sum;
}

bool assignment_feasible(const ConstraintSystem& system, const std::vector<int>& x) {
  return std::all_of(system.rows.begin(), system.rows.end(),
                     [&](const LinearRow& row) { return row_satisfied(row, x); });
}

std::optional<LinearRow> headway_row(int M, TimeStep t1, TimeStep t2, int x1, int x2) {
  if (t1 >= t2) throw std::invalid_argument("headway_row requires t1 < t2");
  int slack = M - (t2 - t1);
  if (slack <= 0) return std::nullopt;
  // x1*slack*x2 <= 0 becomes slack*x1 - slack*(1 - x2) <= 0.
  LinearRow row;
  row.terms = {{x1, Rational(slack)}, {x2, Rational(slack)}};
  row.sense = Sense::LessEqual;
  row.rhs = slack;
  row.tag.family = RowFamily::Headway;
  row.tag.time = t1;
  row.tag.time2 = t2;
  return row;
}

namespace {

class Builder {
 public:
  explicit Builder(const Instance& instance)
      : inst_(instance), idx_(instance), graph_(instance.network, instance.horizon) {}

  ConstraintSystem run() {
    check_preconditions();
    make_variables();
    capacity_rows();
    departure_rows();
    arrival_rows();
    headway_rows();
    flow_rows();
    connection_rows();
    via_rows();
    objective();
    return std::move(sys_);
  }

 private:
  int H() const { return inst_.horizon; }

  int x(int v, int a, TimeStep t) const {
    if (t < 0 || t + idx_.arc(a).travel_time > H()) return -1;
    return route_[static_cast<std::size_t>(v)][static_cast<std::size_t>(a)][static_cast<std::size_t>(t)];
  }
  int w(int v, int node, TimeStep t) const {
    if (!inst_.allow_dwell || t < 0 || t + 1 > H()) return -1;
    return dwell_[static_cast<std::size_t>(v)][static_cast<std::size_t>(node)][static_cast<std::size_t>(t)];
  }

  void check_preconditions() {
    auto report = validate_instance(inst_);
    if (!report.ok()) throw std::invalid_argument("invalid instance:\n" + report.describe());
    for (const auto& arc : inst_.network.arcs) {
      if (arc.multiplicity != 1) {
        throw std::invalid_argument("arc " + arc.from + "." + arc.to +
                                    " has multiplicity above 1, which only the series-parallel solver accepts");
      }
    }
    for (const auto& c : inst_.connections) {
      for (const auto* id : {&c.feeder, &c.connecting}) {
        if (idx_.train(idx_.train_index(*id)).optional) {
          throw std::invalid_argument("optional train " + *id + " takes part in a connection");
        }
      }
    }
    for (const auto& v : inst_.trains) {
      if (v.optional && !v.via_nodes.empty()) {
        throw std::invalid_argument("optional train " + v.id + " has VIA requirements");
      }
    }
  }

  void make_variables() {
    for (int a = 0; a < idx_.arc_count(); ++a) {
      Variable var;
      var.name = "b_" + idx_.arc_label(a);
      var.kind = VariableKind::Expand;
      var.arc = a;
      expand_.push_back(sys_.add_variable(std::move(var)));
    }
    auto times = static_cast<std::size_t>(H() + 1);
    route_.assign(static_cast<std::size_t>(idx_.train_count()),
                  std::vector<std::vector<int>>(static_cast<std::size_t>(idx_.arc_count()), std::vector<int>(times, -1)));
    dwell_.assign(static_cast<std::size_t>(idx_.train_count()),
                  std::vector<std::vector<int>>(static_cast<std::size_t>(idx_.node_count()), std::vector<int>(times, -1)));
    for (int v = 0; v < idx_.train_count(); ++v) {
      const auto& vid = idx_.train(v).id;
      for (TimeStep t = 0; t <= H(); ++t) {
        for (int a = 0; a < idx_.arc_count(); ++a) {
          if (graph_.movement_arc(a, t) < 0) continue;
          Variable var;
          var.name = "x_" + vid + "_" + idx_.arc_label(a) + "_" + std::to_string(t);
          var.kind = VariableKind::Route;
          var.arc = a;
          var.train = v;
          var.time = t;
          route_[static_cast<std::size_t>(v)][static_cast<std::size_t>(a)][static_cast<std::size_t>(t)] =
              sys_.add_variable(std::move(var));
        }
        if (!inst_.allow_dwell || t + 1 > H()) continue;
        for (int n = 0; n < idx_.node_count(); ++n) {
          Variable var;
          var.name = "w_" + vid + "_" + idx_.node_id(n) + "_" + std::to_string(t);
          var.kind = VariableKind::Dwell;
          var.node = n;
          var.train = v;
          var.time = t;
          dwell_[static_cast<std::size_t>(v)][static_cast<std::size_t>(n)][static_cast<std::size_t>(t)] =
              sys_.add_variable(std::move(var));
        }
      }
    }
  }

  void add_row(LinearRow row) { sys_.rows.push_back(std::move(row)); }

  static LinearRow make_row(RowFamily family, std::string name, Sense sense, Rational rhs) {
    LinearRow row;
    row.sense = sense;
    row.rhs = std::move(rhs);
    row.tag.family = family;
    row.tag.name = std::move(name);
    return row;
  }

  void capacity_rows() {
    const auto starts = capacity_window_starts(H(), inst_.capacity_window);
    const auto& scenarios = idx_.scenarios();
    for (int a = 0; a < idx_.arc_count(); ++a) {
      const auto& arc = idx_.arc(a);
      for (std::size_t s = 0; s < scenarios.size(); ++s) {
        for (TimeStep t0 : starts) {
          auto row = make_row(RowFamily::Capacity,
                              "cap_" + idx_.arc_label(a) + "_" + scenarios[s].id + "_" + std::to_string(t0),
                              Sense::LessEqual, arc.capacity);
          row.tag.arc = a;
          row.tag.scenario = static_cast<int>(s);
          row.tag.time = t0;
          TimeStep end = inst_.capacity_window > H() ? H() + 1 : t0 + inst_.capacity_window;
          for (int v : idx_.scenario_trains()[s]) {
            for (TimeStep t = t0; t < end; ++t) {
              if (int id = x(v, a, t); id >= 0) row.terms.push_back({id, 1});
            }
          }
          if (row.terms.empty()) continue;
          if (arc.expandable_capacity > 0) {
            row.terms.push_back({expand_[static_cast<std::size_t>(a)], -arc.expandable_capacity});
          }
          add_row(std::move(row));
        }
      }
    }
  }

  // Movement variables of train v leaving `node`, optionally filtered by departure time.
  template <typename Pred>
  std::vector<int> departures(int v, int node, Pred keep) const {
    std::vector<int> out;
    for (TimeStep t = 0; t <= H(); ++t) {
      if (!keep(t)) continue;
      for (int a : idx_.out_arcs(node)) {
        if (int id = x(v, a, t); id >= 0) out.push_back(id);
      }
    }
    return out;
  }

  // Movement variables of train v entering `node`, filtered by arrival time.
  template <typename Pred>
  std::vector<int> arrivals(int v, int node, Pred keep) const {
    std::vector<int> out;
    for (TimeStep t = 0; t <= H(); ++t) {
      if (!keep(t)) continue;
      for (int a : idx_.in_arcs(node)) {
        if (int id = x(v, a, t - idx_.arc(a).travel_time); id >= 0) out.push_back(id);
      }
    }
    return out;
  }

  static void add_terms(LinearRow& row, const std::vector<int>& vars, int coef) {
    for (int id : vars) row.terms.push_back({id, coef});
  }

  void departure_rows() {
    for (int v = 0; v < idx_.train_count(); ++v) {
      const auto& train = idx_.train(v);
      int o = idx_.origin(v);
      auto early = departures(v, o, [&](TimeStep t) { return t < train.earliest_departure; });
      if (!early.empty()) {
        auto row = make_row(RowFamily::Departure, "dep_" + train.id + "_early", Sense::Equal, 0);
        row.tag.train = v;
        add_terms(row, early, 1);
        add_row(std::move(row));
      }
      if (!train.optional) {
        auto row = make_row(RowFamily::Departure, "dep_" + train.id, Sense::GreaterEqual, 1);
        row.tag.train = v;
        add_terms(row, departures(v, o, [&](TimeStep t) { return t >= train.earliest_departure; }), 1);
        add_row(std::move(row));
      }
      auto all = departures(v, o, [](TimeStep) { return true; });
      if (all.size() > 1) {
        auto row = make_row(RowFamily::Departure, "dep_" + train.id + "_once", Sense::LessEqual, 1);
        row.tag.train = v;
        add_terms(row, all, 1);
        add_row(std::move(row));
      }
    }
  }

  void arrival_rows() {
    for (int v = 0; v < idx_.train_count(); ++v) {
      const auto& train = idx_.train(v);
      int d = idx_.destination(v);
      auto late = arrivals(v, d, [&](TimeStep t) { return t > train.latest_arrival; });
      if (!late.empty()) {
        auto row = make_row(RowFamily::Arrival, "arr_" + train.id + "_late", Sense::Equal, 0);
        row.tag.train = v;
        add_terms(row, late, 1);
        add_row(std::move(row));
      }
      if (!train.optional) {
        auto row = make_row(RowFamily::Arrival, "arr_" + train.id, Sense::GreaterEqual, 1);
        row.tag.train = v;
        add_terms(row, arrivals(v, d, [&](TimeStep t) { return t <= train.latest_arrival; }), 1);
        add_row(std::move(row));
      }
    }
  }

  void headway_rows() {
    const auto& scenarios = idx_.scenarios();
    bool suffix = !inst_.scenarios.empty();
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      auto members = idx_.scenario_trains()[s];
      std::sort(members.begin(), members.end());
      for (int a = 0; a < idx_.arc_count(); ++a) {
        for (int v1 : members) {
          for (int v2 : members) {
            if (v1 == v2) continue;
            int M = idx_.headway(a, v1, v2);
            if (M <= 1) continue;
            for (TimeStep t1 = 0; t1 <= H(); ++t1) {
              int x1 = x(v1, a, t1);
              if (x1 < 0) continue;
              for (TimeStep t2 = t1 + 1; t2 < t1 + M && t2 <= H(); ++t2) {
                int x2 = x(v2, a, t2);
                if (x2 < 0) continue;
                auto row = headway_row(M, t1, t2, x1, x2);
                if (!row) continue;
                row->tag.name = "hw_" + idx_.arc_label(a) + "_" + idx_.train(v1).id + "_" + idx_.train(v2).id + "_" +
                                std::to_string(t1) + "_" + std::to_string(t2);
                if (suffix) row->tag.name += "_" + scenarios[s].id;
                row->tag.arc = a;
                row->tag.train = v1;
                row->tag.train2 = v2;
                row->tag.scenario = static_cast<int>(s);
                add_row(std::move(*row));
              }
            }
          }
        }
      }
    }
  }

  void flow_rows() {
    for (int v = 0; v < idx_.train_count(); ++v) {
      const auto& vid = idx_.train(v).id;
      int o = idx_.origin(v);
      int d = idx_.destination(v);
      for (int n = 0; n < idx_.node_count(); ++n) {
        for (TimeStep t = 0; t <= H(); ++t) {
          auto row = make_row(RowFamily::Flow, "flow_" + vid + "_" + idx_.node_id(n) + "_" + std::to_string(t),
                              Sense::Equal, 0);
          row.tag.train = v;
          row.tag.node = n;
          row.tag.time = t;
          // Nothing enters the origin and nothing leaves the destination.
          if (n != d) {
            for (int a : idx_.in_arcs(n)) {
              if (int id = x(v, a, t - idx_.arc(a).travel_time); id >= 0) row.terms.push_back({id, 1});
            }
            if (int id = w(v, n, t - 1); id >= 0) row.terms.push_back({id, 1});
          }
          if (n != o) {
            for (int a : idx_.out_arcs(n)) {
              if (int id = x(v, a, t); id >= 0) row.terms.push_back({id, -1});
            }
            if (int id = w(v, n, t); id >= 0) row.terms.push_back({id, -1});
          }
          if (!row.terms.empty()) add_row(std::move(row));
        }
      }
    }
  }

  void connection_rows() {
    for (const auto& c : inst_.connections) {
      int n = idx_.node(c.station);
      int v1 = idx_.train_index(c.feeder);
      int v2 = idx_.train_index(c.connecting);
      std::string base = "conn_" + c.station + "_" + c.feeder + "_" + c.connecting;
      for (TimeStep t = 0; t <= H(); ++t) {
        auto leaving = departures(v2, n, [&](TimeStep s) { return s <= t; });
        if (leaving.empty()) continue;
        auto row = make_row(RowFamily::Connection, base + "_" + std::to_string(t), Sense::GreaterEqual, 0);
        row.tag.node = n;
        row.tag.train = v1;
        row.tag.train2 = v2;
        row.tag.time = t;
        add_terms(row, arrivals(v1, n, [&](TimeStep s) { return s <= t; }), 1);
        add_terms(row, leaving, -1);
        add_row(std::move(row));
      }
      auto row = make_row(RowFamily::Connection, base + "_dep", Sense::GreaterEqual, 1);
      row.tag.node = n;
      row.tag.train = v1;
      row.tag.train2 = v2;
      add_terms(row, departures(v2, n, [](TimeStep) { return true; }), 1);
      add_row(std::move(row));
    }
  }

  void via_rows() {
    for (int v = 0; v < idx_.train_count(); ++v) {
      const auto& train = idx_.train(v);
      std::vector<std::string> seen;
      for (const auto& via : train.via_nodes) {
        if (std::find(seen.begin(), seen.end(), via) != seen.end()) continue;
        seen.push_back(via);
        int n = idx_.node(via);
        auto row = make_row(RowFamily::Via, "via_" + train.id + "_" + via, Sense::GreaterEqual, 1);
        row.tag.train = v;
        row.tag.node = n;
        add_terms(row, departures(v, n, [](TimeStep) { return true; }), 1);
        add_row(std::move(row));
      }
    }
  }

  void objective() {
    for (int a = 0; a < idx_.arc_count(); ++a) {
      const auto& k = idx_.arc(a).expansion_cost;
      if (k != 0) sys_.objective.push_back({expand_[static_cast<std::size_t>(a)], k});
    }
    // k_v * (1 - departed_v), with departed_v capped at 1 by dep_<v>_once.
    for (int v = 0; v < idx_.train_count(); ++v) {
      const auto& train = idx_.train(v);
      if (!train.optional) continue;
      const Rational& k = *train.penalty;
      if (k == 0) continue;
      sys_.objective_offset += k;
      for (int id : departures(v, idx_.origin(v), [](TimeStep) { return true; })) {
        sys_.objective.push_back({id, -k});
      }
    }
  }

  const Instance& inst_;
  IndexedInstance idx_;
  TimeExpandedGraph graph_;
  ConstraintSystem sys_;
  std::vector<int> expand_;
  std::vector<std::vector<std::vector<int>>> route_;
  std::vector<std::vector<std::vector<int>>> dwell_;
};

}  // namespace

ConstraintSystem build(const Instance& instance) { return Builder(instance).run(); }

std::map<RowFamily, int> count_rows(const ConstraintSystem& system) {
  std::map<RowFamily, int> counts;
  for (const auto& row : system.rows) ++counts[row.tag.family];
  return counts;
}

}  // namespace railnet
