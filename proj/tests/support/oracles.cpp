#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace railnet::testing {

EnumResult enumerate_system(const ConstraintSystem& system) {
  const std::size_t n = system.variables.size();
  if (n > 24) throw std::invalid_argument("enumeration limited to 24 variables");
  EnumResult out;
  std::vector<int> x(n, 0);
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    for (std::size_t j = 0; j < n; ++j) x[j] = static_cast<int>((mask >> j) & 1u);
    bool ok = true;
    for (const auto& row : system.rows) {
      Rational lhs = 0;
      for (const auto& t : row.terms) lhs += t.coef * x[static_cast<std::size_t>(t.var)];
      switch (row.sense) {
        case Sense::LessEqual: ok = lhs <= row.rhs; break;
        case Sense::Equal: ok = lhs == row.rhs; break;
        case Sense::GreaterEqual: ok = lhs >= row.rhs; break;
      }
      if (!ok) break;
    }
    if (!ok) continue;
    ++out.feasible;
    Rational obj = system.objective_offset;
    for (const auto& t : system.objective) obj += t.coef * x[static_cast<std::size_t>(t.var)];
    if (!out.optimum || obj < *out.optimum) {
      out.optimum = obj;
      out.argmin = x;
    }
  }
  return out;
}

namespace {

struct Net {
  std::map<std::string, int> node;
  std::vector<int> from, to, tt;
  std::vector<std::vector<int>> out;
};

Net index_network(const Instance& inst) {
  Net net;
  for (std::size_t i = 0; i < inst.network.nodes.size(); ++i) net.node[inst.network.nodes[i].id] = static_cast<int>(i);
  net.out.resize(inst.network.nodes.size());
  for (std::size_t a = 0; a < inst.network.arcs.size(); ++a) {
    const auto& arc = inst.network.arcs[a];
    net.from.push_back(net.node.at(arc.from));
    net.to.push_back(net.node.at(arc.to));
    net.tt.push_back(arc.travel_time);
    net.out[static_cast<std::size_t>(net.from.back())].push_back(static_cast<int>(a));
  }
  return net;
}

int headway_of(const Instance& inst, int a, const std::string& v1, const std::string& v2) {
  const auto& arc = inst.network.arcs[static_cast<std::size_t>(a)];
  for (const auto& h : inst.network.headways.entries) {
    if (h.from == arc.from && h.to == arc.to && h.v1 == v1 && h.v2 == v2) return h.headway;
  }
  return inst.network.headways.default_headway;
}

}  // namespace

std::vector<std::vector<std::pair<int, int>>> train_walks(const Instance& inst, int train) {
  const Net net = index_network(inst);
  const auto& v = inst.trains[static_cast<std::size_t>(train)];
  const int o = net.node.at(v.origin);
  const int d = net.node.at(v.destination);
  const int last = std::min(v.latest_arrival, inst.horizon);
  std::vector<std::vector<std::pair<int, int>>> walks;
  std::vector<std::pair<int, int>> cur;
  std::function<void(int, int)> go = [&](int node, int t) {
    if (node == d) {
      walks.push_back(cur);
      return;
    }
    for (int a : net.out[static_cast<std::size_t>(node)]) {
      int to = net.to[static_cast<std::size_t>(a)];
      int arrive = t + net.tt[static_cast<std::size_t>(a)];
      if (to == o || arrive > inst.horizon) continue;
      if (to == d && arrive > last) continue;
      cur.emplace_back(a, t);
      go(to, arrive);
      cur.pop_back();
    }
    if (inst.allow_dwell && node != o && t + 1 <= inst.horizon) go(node, t + 1);
  };
  for (int t = v.earliest_departure; t <= inst.horizon; ++t) {
    for (int a : net.out[static_cast<std::size_t>(o)]) {
      int to = net.to[static_cast<std::size_t>(a)];
      int arrive = t + net.tt[static_cast<std::size_t>(a)];
      if (arrive > inst.horizon || (to == d && arrive > last)) continue;
      cur.emplace_back(a, t);
      go(to, arrive);
      cur.pop_back();
    }
  }
  // VIA nodes must be departed from.
  std::vector<std::vector<std::pair<int, int>>> kept;
  for (auto& w : walks) {
    bool ok = true;
    for (const auto& via : v.via_nodes) {
      int n = net.node.at(via);
      ok = ok && std::any_of(w.begin(), w.end(),
                             [&](const auto& s) { return net.from[static_cast<std::size_t>(s.first)] == n; });
    }
    if (ok) kept.push_back(std::move(w));
  }
  return kept;
}

BruteResult brute_force_instance(const Instance& inst, long max_combinations) {
  const Net net = index_network(inst);
  const std::size_t V = inst.trains.size();
  std::vector<std::vector<std::vector<std::pair<int, int>>>> options(V);
  // With one window spanning the horizon, no headways and no connections,
  // departure times do not affect feasibility or cost.
  const bool timing_free = inst.capacity_window >= inst.horizon && inst.scenarios.size() <= 1 &&
                           inst.connections.empty() && inst.network.headways.entries.empty() &&
                           inst.network.headways.default_headway <= 1;
  for (std::size_t v = 0; v < V; ++v) {
    options[v] = train_walks(inst, static_cast<int>(v));
    if (timing_free) {
      // Only the arcs matter, so walks over the same arcs are one option.
      std::set<std::vector<int>> seen;
      std::vector<std::vector<std::pair<int, int>>> unique;
      for (auto& w : options[v]) {
        std::vector<int> arcs;
        for (const auto& step : w) arcs.push_back(step.first);
        if (seen.insert(arcs).second) unique.push_back(std::move(w));
      }
      options[v] = std::move(unique);
    }
    if (inst.trains[v].optional) options[v].emplace_back();  // empty walk: dropped
    if (options[v].empty()) return {};
  }

  std::vector<std::vector<int>> scen;
  if (inst.scenarios.empty()) {
    scen.emplace_back();
    for (std::size_t v = 0; v < V; ++v) scen.back().push_back(static_cast<int>(v));
  } else {
    for (const auto& s : inst.scenarios) {
      scen.emplace_back();
      for (const auto& id : s.train_ids) {
        for (std::size_t v = 0; v < V; ++v) {
          if (inst.trains[v].id == id) scen.back().push_back(static_cast<int>(v));
        }
      }
    }
  }
  std::map<std::string, int> train_index;
  for (std::size_t v = 0; v < V; ++v) train_index[inst.trains[v].id] = static_cast<int>(v);

  BruteResult out;
  std::vector<std::size_t> pick(V, 0);
  const int H = inst.horizon;
  const int window = inst.capacity_window;
  // Trains that agree on every attribute and appear in no headway entry,
  // connection or scenario are interchangeable; their picks are enumerated
  // as multisets.
  auto interchangeable = [&](std::size_t a, std::size_t b) {
    const auto& x = inst.trains[a];
    const auto& y = inst.trains[b];
    if (!inst.scenarios.empty() || !inst.connections.empty() || !inst.network.headways.entries.empty()) return false;
    if (inst.network.headways.default_headway > 1) return false;
    return x.origin == y.origin && x.destination == y.destination && x.earliest_departure == y.earliest_departure &&
           x.latest_arrival == y.latest_arrival && x.optional == y.optional && x.penalty == y.penalty &&
           x.via_nodes == y.via_nodes;
  };
  auto evaluate = [&]() {
    ++out.combinations;
    if (out.combinations > max_combinations) throw std::invalid_argument("brute force exceeds its combination limit");
    bool ok = true;
    Rational cost = 0;
    // departures[a][v] -> times
    std::map<std::pair<int, int>, std::vector<int>> dep;
    for (std::size_t v = 0; v < V; ++v) {
      const auto& w = options[v][pick[v]];
      if (w.empty()) cost += *inst.trains[v].penalty;
      for (const auto& [a, t] : w) dep[{a, static_cast<int>(v)}].push_back(t);
    }
    for (std::size_t a = 0; a < inst.network.arcs.size() && ok; ++a) {
      const auto& arc = inst.network.arcs[a];
      int peak = 0;
      for (const auto& members : scen) {
        for (int t0 = 0; t0 <= H; ++t0) {
          int lo = t0, hi = t0 + window;  // [lo, hi)
          if (window > H) {
            if (t0 > 0) break;
            hi = H + 1;
          } else if (t0 + window > H + 1) {
            break;
          }
          int count = 0;
          for (int v : members) {
            auto it = dep.find({static_cast<int>(a), v});
            if (it == dep.end()) continue;
            for (int t : it->second) count += t >= lo && t < hi;
          }
          peak = std::max(peak, count);
        }
        // headways within the scenario
        for (int v1 : members) {
          for (int v2 : members) {
            if (v1 == v2) continue;
            auto d1 = dep.find({static_cast<int>(a), v1});
            auto d2 = dep.find({static_cast<int>(a), v2});
            if (d1 == dep.end() || d2 == dep.end()) continue;
            int M = headway_of(inst, static_cast<int>(a), inst.trains[static_cast<std::size_t>(v1)].id,
                               inst.trains[static_cast<std::size_t>(v2)].id);
            for (int t1 : d1->second) {
              for (int t2 : d2->second) ok = ok && !(t1 < t2 && t2 < t1 + M);
            }
          }
        }
      }
      if (peak > arc.capacity + arc.expandable_capacity) ok = false;
      else if (peak > arc.capacity) cost += arc.expansion_cost;
    }
    for (const auto& c : inst.connections) {
      if (!ok) break;
      int n = net.node.at(c.station);
      std::vector<int> arrive, leave;
      for (const auto& [a, t] : options[static_cast<std::size_t>(train_index.at(c.feeder))]
                                        [pick[static_cast<std::size_t>(train_index.at(c.feeder))]]) {
        if (net.to[static_cast<std::size_t>(a)] == n) arrive.push_back(t + net.tt[static_cast<std::size_t>(a)]);
      }
      for (const auto& [a, t] : options[static_cast<std::size_t>(train_index.at(c.connecting))]
                                        [pick[static_cast<std::size_t>(train_index.at(c.connecting))]]) {
        if (net.from[static_cast<std::size_t>(a)] == n) leave.push_back(t);
      }
      if (leave.empty()) ok = false;
      // Cumulative form: at each time, arrivals so far cover departures so far.
      for (int t = 0; t <= H && ok; ++t) {
        auto upto = [t](const std::vector<int>& xs) { return std::count_if(xs.begin(), xs.end(), [t](int s) { return s <= t; }); };
        ok = upto(arrive) >= upto(leave);
      }
    }
    if (ok && (!out.optimum || cost < *out.optimum)) out.optimum = cost;
  };
  std::function<void(std::size_t)> choose = [&](std::size_t v) {
    if (v == V) {
      evaluate();
      return;
    }
    std::size_t first = v > 0 && interchangeable(v - 1, v) ? pick[v - 1] : 0;
    for (std::size_t k = first; k < options[v].size(); ++k) {
      pick[v] = k;
      choose(v + 1);
    }
  };
  choose(0);
  return out;
}

namespace {

Rational random_cost(std::mt19937_64& rng, int hi) {
  int k = std::uniform_int_distribution<int>(0, hi)(rng);
  if (std::uniform_int_distribution<int>(0, 4)(rng) == 0) return Rational(2 * k + 1, 2);
  return Rational(k);
}

Arc random_arc(std::mt19937_64& rng, std::string from, std::string to, int max_tt) {
  Arc a;
  a.from = std::move(from);
  a.to = std::move(to);
  a.travel_time = std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? std::min(2, max_tt) : 1;
  a.capacity = std::uniform_int_distribution<int>(0, 2)(rng);
  a.expandable_capacity = std::uniform_int_distribution<int>(0, 2)(rng);
  a.expansion_cost = random_cost(rng, 5);
  return a;
}

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

Instance random_arborescence(std::mt19937_64& rng, int max_nodes, int max_trains) {
  Instance inst;
  inst.allow_dwell = false;
  inst.horizon = 10;
  const int n = pick(rng, 2, max_nodes);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<std::string> name(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < n; ++i) name[static_cast<std::size_t>(i)] = "n" + std::to_string(order[static_cast<std::size_t>(i)]);
  std::shuffle(order.begin(), order.end(), rng);
  for (int i : order) inst.network.nodes.push_back({name[static_cast<std::size_t>(i)], std::nullopt});
  std::vector<int> depth_time(static_cast<std::size_t>(n), 0);
  for (int i = 1; i < n; ++i) {
    int p = pick(rng, 0, i - 1);
    parent[static_cast<std::size_t>(i)] = p;
    inst.network.arcs.push_back(random_arc(rng, name[static_cast<std::size_t>(p)], name[static_cast<std::size_t>(i)], 2));
    // Mostly positive base capacity so that a good share stays feasible.
    if (inst.network.arcs.back().capacity == 0 && pick(rng, 0, 2) > 0) inst.network.arcs.back().capacity = 1;
    depth_time[static_cast<std::size_t>(i)] = depth_time[static_cast<std::size_t>(p)] + inst.network.arcs.back().travel_time;
  }
  std::shuffle(inst.network.arcs.begin(), inst.network.arcs.end(), rng);
  auto path_time = [&](int o, int d) -> std::optional<int> {
    int t = 0;
    int x = d;
    while (x != o) {
      if (x == 0) return std::nullopt;
      t += depth_time[static_cast<std::size_t>(x)] - depth_time[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return t;
  };
  const int trains = pick(rng, 1, max_trains);
  for (int k = 0; k < trains; ++k) {
    TrainRequest v;
    v.id = "v" + std::to_string(k + 1);
    // Only the first train may get an unreachable destination.
    const bool reachable = k > 0 || pick(rng, 0, 7) > 0;
    int o = pick(rng, 0, n - 2);
    for (int tries = 0; tries < 20 && reachable; ++tries) {
      bool inner = false;
      for (int j = o + 1; j < n; ++j) inner = inner || parent[static_cast<std::size_t>(j)] == o;
      if (inner) break;
      o = pick(rng, 0, n - 2);
    }
    int d = o;
    std::vector<int> below;
    for (int j = o + 1; j < n; ++j) {
      if (path_time(o, j)) below.push_back(j);
    }
    if (!below.empty() && reachable) {
      d = below[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(below.size()) - 1))];
    } else {
      while (d == o) d = pick(rng, 0, n - 1);
    }
    v.origin = name[static_cast<std::size_t>(o)];
    v.destination = name[static_cast<std::size_t>(d)];
    if (auto p = path_time(o, d); p && *p <= inst.horizon) {
      v.earliest_departure = pick(rng, 0, inst.horizon - *p);
      v.latest_arrival = v.earliest_departure + *p;
      // Occasionally a VIA node strictly inside the path, or off it.
      if (pick(rng, 0, 4) == 0) {
        std::vector<int> inner;
        for (int x = parent[static_cast<std::size_t>(d)]; x != o && x >= 0; x = parent[static_cast<std::size_t>(x)]) inner.push_back(x);
        if (!inner.empty()) {
          v.via_nodes.push_back(name[static_cast<std::size_t>(inner[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(inner.size()) - 1))])]);
        } else {
          int x = pick(rng, 0, n - 1);
          if (x != o && x != d) v.via_nodes.push_back(name[static_cast<std::size_t>(x)]);
        }
      }
    } else {
      v.earliest_departure = pick(rng, 0, inst.horizon);
      v.latest_arrival = inst.horizon;
    }
    inst.trains.push_back(std::move(v));
  }
  inst.capacity_window = pick(rng, 0, 2) == 0 ? pick(rng, 1, inst.horizon) : pick(rng, 1, 3);
  if (trains >= 2 && pick(rng, 0, 5) == 0) {
    const auto& feeder = inst.trains[0];
    const auto& conn = inst.trains[1];
    if (conn.origin != feeder.origin) {
      inst.connections.push_back({conn.origin, feeder.id, conn.id});
    } else if (feeder.destination != conn.destination) {
      inst.connections.push_back({feeder.destination, feeder.id, conn.id});
    }
  }
  if (pick(rng, 0, 3) == 0) {
    Scenario a{"s1", {}}, b{"s2", {}};
    for (const auto& v : inst.trains) {
      int r = pick(rng, 0, 2);
      if (r != 1) a.train_ids.push_back(v.id);
      if (r != 0) b.train_ids.push_back(v.id);
    }
    if (!a.train_ids.empty()) inst.scenarios.push_back(a);
    if (!b.train_ids.empty()) inst.scenarios.push_back(b);
  }
  return inst;
}

Instance random_series_parallel(std::mt19937_64& rng, int max_arcs, int max_trains) {
  // Edge list over node numbers; 0 is the source, 1 the sink.
  std::vector<std::pair<int, int>> edges{{0, 1}};
  int nodes = 2;
  const int target = pick(rng, 1, max_arcs);
  auto has = [&](int u, int v) { return std::find(edges.begin(), edges.end(), std::make_pair(u, v)) != edges.end(); };
  int guard = 0;
  while (static_cast<int>(edges.size()) < target && ++guard < 1000) {
    int op = pick(rng, 0, 2);
    auto e = edges[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(edges.size()) - 1))];
    if (op == 0) {
      // subdivide u->v into u->w->v
      int w = nodes++;
      edges.erase(std::find(edges.begin(), edges.end(), e));
      edges.emplace_back(e.first, w);
      edges.emplace_back(w, e.second);
    } else if (op == 1 && static_cast<int>(edges.size()) + 2 <= target) {
      // parallel path u->w->v
      int w = nodes++;
      edges.emplace_back(e.first, w);
      edges.emplace_back(w, e.second);
    } else {
      // shortcut across a node with one arc in and one out
      std::map<int, int> indeg, outdeg;
      for (auto [u, v] : edges) {
        ++outdeg[u];
        ++indeg[v];
      }
      for (int w = 2; w < nodes; ++w) {
        if (indeg[w] != 1 || outdeg[w] != 1) continue;
        int u = -1, v = -1;
        for (auto [a, b] : edges) {
          if (b == w) u = a;
          if (a == w) v = b;
        }
        if (!has(u, v)) {
          edges.emplace_back(u, v);
          break;
        }
      }
    }
  }
  auto id = [](int k) { return k == 0 ? std::string("s") : k == 1 ? std::string("t") : "m" + std::to_string(k); };
  Instance inst;
  inst.allow_dwell = false;
  for (int k = 0; k < nodes; ++k) inst.network.nodes.push_back({id(k), std::nullopt});
  std::shuffle(edges.begin(), edges.end(), rng);
  for (auto [u, v] : edges) {
    Arc a = random_arc(rng, id(u), id(v), 2);
    a.expandable_capacity = pick(rng, 0, 3);
    inst.network.arcs.push_back(std::move(a));
  }
  // Shortest and longest s-t travel times by relaxation over the DAG.
  std::vector<int> lo(static_cast<std::size_t>(nodes), 1 << 20), hi(static_cast<std::size_t>(nodes), -(1 << 20));
  lo[0] = hi[0] = 0;
  for (int round = 0; round < nodes; ++round) {
    for (std::size_t a = 0; a < edges.size(); ++a) {
      auto [u, v] = edges[a];
      int tt = inst.network.arcs[a].travel_time;
      lo[static_cast<std::size_t>(v)] = std::min(lo[static_cast<std::size_t>(v)], lo[static_cast<std::size_t>(u)] + tt);
      hi[static_cast<std::size_t>(v)] = std::max(hi[static_cast<std::size_t>(v)], hi[static_cast<std::size_t>(u)] + tt);
    }
  }
  const int budget = std::max(1, pick(rng, lo[1] - 1, hi[1] + 1));
  const int depart = pick(rng, 0, 1);
  inst.horizon = depart + budget;
  inst.capacity_window = inst.horizon;
  const int trains = pick(rng, 1, max_trains);
  for (int k = 0; k < trains; ++k) {
    TrainRequest v;
    v.id = "v" + std::to_string(k + 1);
    v.origin = "s";
    v.destination = "t";
    v.earliest_departure = depart;
    v.latest_arrival = depart + budget;
    inst.trains.push_back(std::move(v));
  }
  return inst;
}

Instance random_small(std::mt19937_64& rng) {
  Instance inst;
  const int n = pick(rng, 2, 3);
  for (int i = 0; i < n; ++i) inst.network.nodes.push_back({"n" + std::to_string(i), std::nullopt});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && pick(rng, 0, 2) == 0) inst.network.arcs.push_back(random_arc(rng, "n" + std::to_string(i), "n" + std::to_string(j), 2));
    }
  }
  if (inst.network.arcs.empty()) inst.network.arcs.push_back(random_arc(rng, "n0", "n1", 1));
  inst.horizon = pick(rng, 1, 3);
  inst.capacity_window = pick(rng, 1, inst.horizon);
  inst.allow_dwell = pick(rng, 0, 2) == 0;
  inst.network.headways.default_headway = pick(rng, 0, 3);
  const int trains = pick(rng, 1, 2);
  for (int k = 0; k < trains; ++k) {
    TrainRequest v;
    v.id = "v" + std::to_string(k + 1);
    int o = pick(rng, 0, n - 1);
    int d = (o + pick(rng, 1, n - 1)) % n;
    v.origin = "n" + std::to_string(o);
    v.destination = "n" + std::to_string(d);
    v.earliest_departure = pick(rng, 0, inst.horizon - 1);
    v.latest_arrival = pick(rng, v.earliest_departure, inst.horizon);
    if (pick(rng, 0, 3) == 0) {
      v.optional = true;
      v.penalty = random_cost(rng, 6);
    }
    inst.trains.push_back(std::move(v));
  }
  if (trains == 2 && pick(rng, 0, 3) == 0) {
    inst.scenarios.push_back({"a", {"v1"}});
    inst.scenarios.push_back({"b", {"v2"}});
  }
  return inst;
}

ConstraintSystem random_system(std::mt19937_64& rng, int n) {
  ConstraintSystem sys;
  for (int j = 0; j < n; ++j) {
    Variable v;
    v.name = "y" + std::to_string(j);
    sys.add_variable(std::move(v));
  }
  auto coef = [&]() {
    int k = pick(rng, -4, 4);
    return pick(rng, 0, 3) == 0 ? Rational(k, 2) : Rational(k);
  };
  const int rows = pick(rng, 0, 6);
  for (int r = 0; r < rows; ++r) {
    LinearRow row;
    row.tag.name = "r" + std::to_string(r);
    for (int j = 0; j < n; ++j) {
      if (pick(rng, 0, 2) == 0) {
        Rational c = coef();
        if (c != 0) row.terms.push_back({j, c});
      }
    }
    row.sense = static_cast<Sense>(pick(rng, 0, 2));
    row.rhs = pick(rng, -2, 4);
    if (row.sense == Sense::Equal && pick(rng, 0, 1) == 0) row.rhs = 1;
    sys.rows.push_back(std::move(row));
  }
  for (int j = 0; j < n; ++j) {
    Rational c = coef();
    if (c != 0) sys.objective.push_back({j, c});
  }
  sys.objective_offset = pick(rng, 0, 3);
  return sys;
}

}  // namespace railnet::testing
