#pragma once

#include "railnet/model.hpp"

#include <string>
#include <vector>

namespace railnet::testing {

inline Arc arc(std::string from, std::string to, int tt, int c, int extra, Rational k) {
  Arc a;
  a.from = std::move(from);
  a.to = std::move(to);
  a.travel_time = tt;
  a.capacity = c;
  a.expandable_capacity = extra;
  a.expansion_cost = std::move(k);
  return a;
}

inline TrainRequest train(std::string id, std::string o, std::string d, TimeStep dep, TimeStep arr) {
  TrainRequest v;
  v.id = std::move(id);
  v.origin = std::move(o);
  v.destination = std::move(d);
  v.earliest_departure = dep;
  v.latest_arrival = arr;
  return v;
}

inline TrainRequest optional_train(std::string id, std::string o, std::string d, TimeStep dep, TimeStep arr,
                                   Rational penalty) {
  TrainRequest v = train(std::move(id), std::move(o), std::move(d), dep, arr);
  v.optional = true;
  v.penalty = std::move(penalty);
  return v;
}

inline Instance with_nodes(std::vector<std::string> ids) {
  Instance inst;
  for (auto& id : ids) inst.network.nodes.push_back({std::move(id), std::nullopt});
  return inst;
}

// A -> B, one arc.
inline Instance two_node(int tt, int c, int extra, Rational k, int horizon, int window) {
  Instance inst = with_nodes({"A", "B"});
  inst.network.arcs.push_back(arc("A", "B", tt, c, extra, std::move(k)));
  inst.horizon = horizon;
  inst.capacity_window = window;
  return inst;
}

}  // namespace railnet::testing
