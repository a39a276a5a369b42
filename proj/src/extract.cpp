#include "railnet/extract.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace railnet {

void compute_costs(const Instance& instance, Solution& solution) {
  IndexedInstance idx(instance);
  Rational expansion = 0;
  for (const auto& [from, to] : solution.expanded_arcs) {
    auto a = idx.find_arc(from, to);
    if (!a) throw std::invalid_argument("expanded arc " + from + "." + to + " is not declared");
    expansion += idx.arc(*a).expansion_cost;
  }
  Rational penalty = 0;
  for (const auto& v : instance.trains) {
    if (v.optional && !solution.routes.count(v.id)) penalty += v.penalty.value_or(Rational(0));
  }
  solution.cost_breakdown.expansion_cost_total = expansion;
  solution.cost_breakdown.penalty_total = penalty;
  solution.objective_value = expansion + penalty;
}

Solution decode_assignment(const Instance& instance, const ConstraintSystem& system, const std::vector<int>& x) {
  IndexedInstance idx(instance);
  if (x.size() != system.variables.size()) throw DecodeError("assignment size does not match the system");

  Solution sol;
  std::vector<std::vector<int>> used(static_cast<std::size_t>(idx.train_count()));
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!x[j]) continue;
    const auto& var = system.variables[j];
    switch (var.kind) {
      case VariableKind::Expand:
        sol.expanded_arcs.emplace_back(idx.arc(var.arc).from, idx.arc(var.arc).to);
        break;
      case VariableKind::Route:
      case VariableKind::Dwell:
        used[static_cast<std::size_t>(var.train)].push_back(static_cast<int>(j));
        break;
      case VariableKind::Generic:
        throw DecodeError("variable " + var.name + " has no meaning in the instance");
    }
  }

  for (int v = 0; v < idx.train_count(); ++v) {
    const auto& train = idx.train(v);
    auto& mine = used[static_cast<std::size_t>(v)];
    if (mine.empty()) {
      if (train.optional) continue;
      throw DecodeError("train " + train.id + " has no route");
    }
    auto tail = [&](int j) {
      const auto& var = system.variables[static_cast<std::size_t>(j)];
      return var.kind == VariableKind::Route ? idx.arc_from(var.arc) : var.node;
    };
    std::vector<int> starts;
    for (int j : mine) {
      if (system.variables[static_cast<std::size_t>(j)].kind == VariableKind::Route && tail(j) == idx.origin(v)) {
        starts.push_back(j);
      }
    }
    if (starts.size() != 1) {
      throw DecodeError("train " + train.id + " leaves its origin " + std::to_string(starts.size()) + " times");
    }

    std::set<int> remaining(mine.begin(), mine.end());
    std::vector<RoutedStep> steps;
    int j = starts.front();
    for (;;) {
      remaining.erase(j);
      const auto& var = system.variables[static_cast<std::size_t>(j)];
      int node;
      TimeStep t;
      if (var.kind == VariableKind::Route) {
        steps.push_back({train.id, idx.arc(var.arc).from, idx.arc(var.arc).to, var.time});
        node = idx.arc_to(var.arc);
        t = var.time + idx.arc(var.arc).travel_time;
      } else {
        node = var.node;
        t = var.time + 1;
      }
      if (node == idx.destination(v) && var.kind == VariableKind::Route) break;
      std::vector<int> next;
      for (int k : remaining) {
        const auto& cand = system.variables[static_cast<std::size_t>(k)];
        if (cand.time == t && tail(k) == node) next.push_back(k);
      }
      if (next.size() != 1) {
        throw DecodeError("train " + train.id + " has " + std::to_string(next.size()) + " continuations at " +
                          idx.node_id(node) + " time " + std::to_string(t));
      }
      j = next.front();
    }
    if (!remaining.empty()) {
      throw DecodeError("train " + train.id + " uses " + std::to_string(remaining.size()) +
                        " variables off its walk");
    }
    sol.routes.emplace(train.id, std::move(steps));
  }
  compute_costs(instance, sol);
  return sol;
}

void drop_idle_free_expansions(const Instance& instance, Solution& solution) {
  IndexedInstance idx(instance);
  // Departures per (arc, train).
  std::map<std::pair<int, int>, std::vector<TimeStep>> departures;
  for (const auto& [train, steps] : solution.routes) {
    auto v = idx.find_train(train);
    if (!v) continue;
    for (const auto& s : steps) {
      if (auto a = idx.find_arc(s.from, s.to)) departures[{*a, *v}].push_back(s.depart);
    }
  }
  const auto starts = capacity_window_starts(instance.horizon, instance.capacity_window);
  auto fits_base = [&](int a) {
    for (const auto& members : idx.scenario_trains()) {
      for (TimeStep t0 : starts) {
        TimeStep end = instance.capacity_window > instance.horizon ? instance.horizon + 1 : t0 + instance.capacity_window;
        int count = 0;
        for (int v : members) {
          auto it = departures.find({a, v});
          if (it == departures.end()) continue;
          count += static_cast<int>(std::count_if(it->second.begin(), it->second.end(),
                                                  [&](TimeStep t) { return t >= t0 && t < end; }));
        }
        if (count > idx.arc(a).capacity) return false;
      }
    }
    return true;
  };
  std::vector<std::pair<std::string, std::string>> kept;
  for (const auto& pair : solution.expanded_arcs) {
    auto a = idx.find_arc(pair.first, pair.second);
    if (a && idx.arc(*a).expansion_cost == 0 && fits_base(*a)) continue;
    kept.push_back(pair);
  }
  solution.expanded_arcs = std::move(kept);
  compute_costs(instance, solution);
}

Solution extract_solution(const Instance& instance, const ConstraintSystem& system, const SolveResult& result) {
  if (!result.incumbent) throw std::invalid_argument("solve result has no incumbent");
  Solution sol = decode_assignment(instance, system, *result.incumbent);
  if (result.objective && sol.objective_value != *result.objective) {
    throw DecodeError("decoded objective " + to_string(sol.objective_value) + " differs from solver objective " +
                      to_string(*result.objective));
  }
  drop_idle_free_expansions(instance, sol);
  return sol;
}

}  // namespace railnet
