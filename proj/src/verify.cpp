#include "railnet/verify.hpp"

#include <algorithm>
#include <map>

namespace railnet {

const char* violation_family_name(ViolationFamily family) {
  switch (family) {
    case ViolationFamily::Capacity: return "capacity";
    case ViolationFamily::Departure: return "departure";
    case ViolationFamily::Arrival: return "arrival";
    case ViolationFamily::Headway: return "headway";
    case ViolationFamily::Flow: return "flow";
    case ViolationFamily::Connection: return "connection";
    case ViolationFamily::Via: return "via";
    case ViolationFamily::Objective: return "objective";
    case ViolationFamily::Structure: return "structure";
  }
  return "structure";
}

std::string format_violation(const Violation& v) {
  return std::string(violation_family_name(v.family)) + "\t" + v.detail;
}

namespace {

class Checker {
 public:
  Checker(const Instance& instance, const Solution& solution) : inst_(instance), sol_(solution), idx_(instance) {}

  std::vector<Violation> run() {
    expansions();
    for (const auto& [id, steps] : sol_.routes) walk(id, steps);
    for (int v = 0; v < idx_.train_count(); ++v) {
      const auto& train = idx_.train(v);
      auto it = sol_.routes.find(train.id);
      if (!train.optional && (it == sol_.routes.end() || it->second.empty())) {
        add(ViolationFamily::Departure, "train " + train.id + " has no route");
      }
      for (const auto& via : train.via_nodes) {
        bool passes = false;
        if (it != sol_.routes.end()) {
          for (const auto& s : it->second) passes = passes || s.from == via;
        }
        if (!passes) add(ViolationFamily::Via, "train " + train.id + " never departs from VIA node " + via);
      }
    }
    capacity();
    headways();
    connections();
    objective();
    std::sort(out_.begin(), out_.end(), [](const Violation& a, const Violation& b) {
      if (a.family != b.family) return a.family < b.family;
      return a.detail < b.detail;
    });
    return std::move(out_);
  }

 private:
  void add(ViolationFamily family, std::string detail) { out_.push_back({family, std::move(detail)}); }

  static std::string at(TimeStep t) { return " at time " + std::to_string(t); }

  void expansions() {
    expanded_.assign(static_cast<std::size_t>(idx_.arc_count()), 0);
    for (const auto& [from, to] : sol_.expanded_arcs) {
      auto a = idx_.find_arc(from, to);
      if (!a) {
        add(ViolationFamily::Structure, "expanded arc " + from + "." + to + " is not declared");
        continue;
      }
      if (++expanded_[static_cast<std::size_t>(*a)] == idx_.arc(*a).multiplicity + 1) {
        add(ViolationFamily::Structure, "arc " + idx_.arc_label(*a) + " is expanded more often than it has copies");
      }
    }
  }

  void walk(const std::string& id, const std::vector<RoutedStep>& steps) {
    auto v = idx_.find_train(id);
    if (!v) {
      add(ViolationFamily::Structure, "route for undeclared train " + id);
      return;
    }
    const auto& train = idx_.train(*v);
    if (steps.empty()) return;  // reported as a missing route when it matters
    std::optional<TimeStep> prev_arrival;
    std::string prev_to;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto& s = steps[i];
      std::string where = "train " + id + " step " + std::to_string(i + 1);
      if (s.train != id) add(ViolationFamily::Structure, where + " is labelled with train " + s.train);
      auto a = idx_.find_arc(s.from, s.to);
      if (!a) {
        add(ViolationFamily::Structure, where + " uses undeclared arc " + s.from + "." + s.to);
        return;
      }
      const TimeStep arrival = s.depart + idx_.arc(*a).travel_time;
      if (s.depart < 0 || arrival > inst_.horizon) {
        add(ViolationFamily::Flow, where + " on " + idx_.arc_label(*a) + at(s.depart) + " leaves the horizon");
      }
      if (i == 0) {
        if (s.from != train.origin) {
          add(ViolationFamily::Departure, where + " starts at " + s.from + " instead of origin " + train.origin);
        }
        if (s.depart < train.earliest_departure) {
          add(ViolationFamily::Departure, "train " + id + " departs" + at(s.depart) + " before its earliest departure " +
                                              std::to_string(train.earliest_departure));
        }
      } else {
        if (s.from != prev_to) {
          add(ViolationFamily::Flow, where + " starts at " + s.from + " but the train is at " + prev_to);
        } else if (s.depart < *prev_arrival) {
          add(ViolationFamily::Flow, where + " departs" + at(s.depart) + " before arriving" + at(*prev_arrival));
        } else if (s.depart > *prev_arrival && !inst_.allow_dwell) {
          add(ViolationFamily::Flow, where + " waits at " + s.from + " from time " + std::to_string(*prev_arrival) +
                                         " although dwelling is disabled");
        }
        if (s.from == train.origin) add(ViolationFamily::Flow, where + " returns to origin " + train.origin);
      }
      if (i + 1 < steps.size() && s.to == train.destination) {
        add(ViolationFamily::Flow, where + " passes through destination " + train.destination);
      }
      departures_[{*a, *v}].push_back(s.depart);
      prev_arrival = arrival;
      prev_to = s.to;
    }
    if (prev_to != train.destination) {
      add(ViolationFamily::Arrival, "train " + id + " ends at " + prev_to + " instead of destination " +
                                        train.destination);
    } else if (*prev_arrival > train.latest_arrival) {
      add(ViolationFamily::Arrival, "train " + id + " arrives" + at(*prev_arrival) + " after its latest arrival " +
                                        std::to_string(train.latest_arrival));
    }
  }

  // Multi-arc copies are pooled: the bound is the copies' base capacity plus
  // the expandable capacity of each expanded copy.
  void capacity() {
    const auto starts = capacity_window_starts(inst_.horizon, inst_.capacity_window);
    const auto& scenarios = idx_.scenarios();
    for (int a = 0; a < idx_.arc_count(); ++a) {
      const auto& arc = idx_.arc(a);
      const long bound = static_cast<long>(arc.multiplicity) * arc.capacity +
                         static_cast<long>(std::min(expanded_[static_cast<std::size_t>(a)], arc.multiplicity)) *
                             arc.expandable_capacity;
      for (std::size_t s = 0; s < scenarios.size(); ++s) {
        for (TimeStep t0 : starts) {
          TimeStep end = inst_.capacity_window > inst_.horizon ? inst_.horizon + 1 : t0 + inst_.capacity_window;
          long count = 0;
          for (int v : idx_.scenario_trains()[s]) {
            auto it = departures_.find({a, v});
            if (it == departures_.end()) continue;
            count += std::count_if(it->second.begin(), it->second.end(), [&](TimeStep t) { return t >= t0 && t < end; });
          }
          if (count > bound) {
            add(ViolationFamily::Capacity, "arc " + idx_.arc_label(a) + " scenario " + scenarios[s].id + " window " +
                                               std::to_string(t0) + ".." + std::to_string(end - 1) + ": " +
                                               std::to_string(count) + " departures exceed " + std::to_string(bound));
          }
        }
      }
    }
  }

  void headways() {
    const auto& scenarios = idx_.scenarios();
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      const auto& members = idx_.scenario_trains()[s];
      for (int a = 0; a < idx_.arc_count(); ++a) {
        for (int v1 : members) {
          auto d1 = departures_.find({a, v1});
          if (d1 == departures_.end()) continue;
          for (int v2 : members) {
            if (v1 == v2) continue;
            auto d2 = departures_.find({a, v2});
            if (d2 == departures_.end()) continue;
            const int M = idx_.headway(a, v1, v2);
            for (TimeStep t1 : d1->second) {
              for (TimeStep t2 : d2->second) {
                if (t1 < t2 && t2 < t1 + M) {
                  add(ViolationFamily::Headway, "arc " + idx_.arc_label(a) + " scenario " + scenarios[s].id + ": " +
                                                    idx_.train(v2).id + at(t2) + " follows " + idx_.train(v1).id +
                                                    at(t1) + " within headway " + std::to_string(M));
                }
              }
            }
          }
        }
      }
    }
  }

  // At every time, the feeder has entered the station at least as often as
  // the connecting train has left it, and the connecting train does leave.
  void connections() {
    for (const auto& c : inst_.connections) {
      std::vector<TimeStep> arrive, leave;
      if (auto it = sol_.routes.find(c.feeder); it != sol_.routes.end()) {
        for (const auto& s : it->second) {
          auto a = idx_.find_arc(s.from, s.to);
          if (a && s.to == c.station) arrive.push_back(s.depart + idx_.arc(*a).travel_time);
        }
      }
      if (auto it = sol_.routes.find(c.connecting); it != sol_.routes.end()) {
        for (const auto& s : it->second) {
          if (s.from == c.station) leave.push_back(s.depart);
        }
      }
      std::string what = "connection " + c.feeder + " -> " + c.connecting + " at " + c.station;
      if (leave.empty()) {
        add(ViolationFamily::Connection, what + ": connecting train never departs there");
        continue;
      }
      std::sort(arrive.begin(), arrive.end());
      std::sort(leave.begin(), leave.end());
      for (std::size_t k = 0; k < leave.size(); ++k) {
        if (k >= arrive.size() || arrive[k] > leave[k]) {
          add(ViolationFamily::Connection, what + ": departure" + at(leave[k]) + " precedes the feeder's arrival");
          break;
        }
      }
    }
  }

  void objective() {
    Rational expansion = 0;
    for (const auto& [from, to] : sol_.expanded_arcs) {
      if (auto a = idx_.find_arc(from, to)) expansion += idx_.arc(*a).expansion_cost;
    }
    Rational penalty = 0;
    for (const auto& v : inst_.trains) {
      auto it = sol_.routes.find(v.id);
      if (v.optional && (it == sol_.routes.end() || it->second.empty())) penalty += v.penalty.value_or(Rational(0));
    }
    if (sol_.objective_value != expansion + penalty) {
      add(ViolationFamily::Objective, "stated objective " + to_string(sol_.objective_value) + " differs from " +
                                          to_string(expansion + penalty));
    }
    if (sol_.cost_breakdown.expansion_cost_total != expansion) {
      add(ViolationFamily::Objective, "stated expansion cost " + to_string(sol_.cost_breakdown.expansion_cost_total) +
                                          " differs from " + to_string(expansion));
    }
    if (sol_.cost_breakdown.penalty_total != penalty) {
      add(ViolationFamily::Objective, "stated penalty " + to_string(sol_.cost_breakdown.penalty_total) +
                                          " differs from " + to_string(penalty));
    }
  }

  const Instance& inst_;
  const Solution& sol_;
  IndexedInstance idx_;
  std::vector<int> expanded_;
  std::map<std::pair<int, int>, std::vector<TimeStep>> departures_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> verify(const Instance& instance, const Solution& solution) {
  return Checker(instance, solution).run();
}

}  // namespace railnet
