#include "railnet/extract.hpp"
#include "railnet/polycases.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace railnet {

std::vector<std::pair<int, int>> SpTree::leaves(int i) const {
  std::vector<std::pair<int, int>> out;
  std::function<void(int)> walk = [&](int k) {
    const auto& n = node(k);
    if (n.kind == SpKind::Leaf) {
      out.emplace_back(n.arc, n.copy);
    } else {
      walk(n.left);
      walk(n.right);
    }
  };
  walk(i);
  return out;
}

std::optional<SpTree> sp_decompose(const Network& network) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < network.nodes.size(); ++i) index.emplace(network.nodes[i].id, static_cast<int>(i));
  const std::size_t n = network.nodes.size();
  std::vector<int> indeg(n, 0), outdeg(n, 0);

  struct Edge {
    int u, v, tree;
    bool alive;
  };
  SpTree tree;
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < network.arcs.size(); ++a) {
    const auto& arc = network.arcs[a];
    auto from = index.find(arc.from);
    auto to = index.find(arc.to);
    if (from == index.end() || to == index.end() || arc.multiplicity < 1) return std::nullopt;
    for (int c = 0; c < arc.multiplicity; ++c) {
      SpNode leaf;
      leaf.kind = SpKind::Leaf;
      leaf.arc = static_cast<int>(a);
      leaf.copy = c;
      leaf.source = arc.from;
      leaf.sink = arc.to;
      edges.push_back({from->second, to->second, static_cast<int>(tree.nodes.size()), true});
      tree.nodes.push_back(std::move(leaf));
      ++outdeg[static_cast<std::size_t>(from->second)];
      ++indeg[static_cast<std::size_t>(to->second)];
    }
  }
  int s = -1, t = -1;
  for (std::size_t i = 0; i < n; ++i) {
    if (indeg[i] == 0 && outdeg[i] == 0) return std::nullopt;
    if (indeg[i] == 0) {
      if (s >= 0) return std::nullopt;
      s = static_cast<int>(i);
    }
    if (outdeg[i] == 0) {
      if (t >= 0) return std::nullopt;
      t = static_cast<int>(i);
    }
  }
  if (s < 0 || t < 0) return std::nullopt;

  auto combine = [&](SpKind kind, int left, int right, int u, int v) {
    SpNode node;
    node.kind = kind;
    node.left = left;
    node.right = right;
    node.source = network.nodes[static_cast<std::size_t>(u)].id;
    node.sink = network.nodes[static_cast<std::size_t>(v)].id;
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  };

  std::size_t alive = edges.size();
  bool changed = true;
  while (changed && alive > 1) {
    changed = false;
    // Parallel reduction: two edges with the same endpoints.
    std::map<std::pair<int, int>, std::size_t> first;
    for (std::size_t e = 0; e < edges.size() && !changed; ++e) {
      if (!edges[e].alive) continue;
      auto [it, inserted] = first.emplace(std::make_pair(edges[e].u, edges[e].v), e);
      if (inserted) continue;
      auto& keep = edges[it->second];
      keep.tree = combine(SpKind::Parallel, keep.tree, edges[e].tree, keep.u, keep.v);
      edges[e].alive = false;
      --alive;
      changed = true;
    }
    if (changed) continue;
    // Series reduction: an inner node with one edge in and one edge out.
    std::vector<int> in_count(n, 0), out_count(n, 0);
    std::vector<std::size_t> in_edge(n), out_edge(n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!edges[e].alive) continue;
      ++out_count[static_cast<std::size_t>(edges[e].u)];
      out_edge[static_cast<std::size_t>(edges[e].u)] = e;
      ++in_count[static_cast<std::size_t>(edges[e].v)];
      in_edge[static_cast<std::size_t>(edges[e].v)] = e;
    }
    for (std::size_t w = 0; w < n && !changed; ++w) {
      if (static_cast<int>(w) == s || static_cast<int>(w) == t) continue;
      if (in_count[w] != 1 || out_count[w] != 1) continue;
      auto& in = edges[in_edge[w]];
      auto& out = edges[out_edge[w]];
      if (in.u == out.v) return std::nullopt;
      in.tree = combine(SpKind::Series, in.tree, out.tree, in.u, out.v);
      in.v = out.v;
      out.alive = false;
      --alive;
      changed = true;
    }
  }
  if (alive != 1) return std::nullopt;
  for (const auto& e : edges) {
    if (!e.alive) continue;
    if (e.u != s || e.v != t) return std::nullopt;
    tree.root = e.tree;
  }
  return tree;
}

SpCost sp_cost_base(const Arc& arc, int trains) {
  if (trains <= arc.capacity) return Rational(0);
  if (trains <= arc.capacity + arc.expandable_capacity) return arc.expansion_cost;
  return std::nullopt;
}

int sp_longest_path(const SpTree& tree, const Network& network, int node) {
  const auto& n = tree.node(node);
  switch (n.kind) {
    case SpKind::Leaf: return network.arcs[static_cast<std::size_t>(n.arc)].travel_time;
    case SpKind::Series:
      return sp_longest_path(tree, network, n.left) + sp_longest_path(tree, network, n.right);
    case SpKind::Parallel:
      return std::max(sp_longest_path(tree, network, n.left), sp_longest_path(tree, network, n.right));
  }
  return 0;
}

namespace {

SpCost add(const SpCost& a, const SpCost& b) {
  if (!a || !b) return std::nullopt;
  return *a + *b;
}

bool better(const SpCost& a, const SpCost& b) {
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

int time_budget(const Instance& instance) {
  if (instance.trains.empty()) return instance.horizon;
  const auto& v = instance.trains.front();
  return std::min(v.latest_arrival, instance.horizon) - v.earliest_departure;
}

}  // namespace

CostTable sp_cost_table(const SpTree& tree, const Instance& instance) {
  CostTable table;
  table.max_trains = static_cast<int>(instance.trains.size());
  table.max_time = std::max(0, time_budget(instance));
  const auto V = static_cast<std::size_t>(table.max_trains) + 1;
  const auto T = static_cast<std::size_t>(table.max_time) + 1;
  table.cost.assign(tree.nodes.size(), std::vector<std::vector<SpCost>>(V, std::vector<SpCost>(T)));
  table.witness.assign(tree.nodes.size(), std::vector<std::vector<int>>(V, std::vector<int>(T, -1)));

  // Children always precede parents in the node vector.
  for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
    const auto& node = tree.nodes[k];
    auto& cost = table.cost[k];
    auto& witness = table.witness[k];
    for (std::size_t tt = 0; tt < T; ++tt) cost[0][tt] = Rational(0);
    for (std::size_t v = 1; v < V; ++v) {
      for (std::size_t tt = 0; tt < T; ++tt) {
        ++table.operations;
        if (node.kind == SpKind::Leaf) {
          const auto& arc = instance.network.arcs[static_cast<std::size_t>(node.arc)];
          if (static_cast<int>(tt) >= arc.travel_time) cost[v][tt] = sp_cost_base(arc, static_cast<int>(v));
        } else if (node.kind == SpKind::Series) {
          const auto& left = table.cost[static_cast<std::size_t>(node.left)];
          const auto& right = table.cost[static_cast<std::size_t>(node.right)];
          for (std::size_t tt1 = 1; tt1 + 1 <= tt; ++tt1) {
            ++table.operations;
            SpCost c = add(left[v][tt1], right[v][tt - tt1]);
            if (better(c, cost[v][tt])) {
              cost[v][tt] = c;
              witness[v][tt] = static_cast<int>(tt1);
            }
          }
        } else {
          const auto& left = table.cost[static_cast<std::size_t>(node.left)];
          const auto& right = table.cost[static_cast<std::size_t>(node.right)];
          for (std::size_t v1 = 0; v1 <= v; ++v1) {
            ++table.operations;
            SpCost c = add(left[v1][tt], right[v - v1][tt]);
            if (better(c, cost[v][tt])) {
              cost[v][tt] = c;
              witness[v][tt] = static_cast<int>(v1);
            }
          }
        }
      }
    }
  }
  return table;
}

namespace {

using Path = std::vector<std::pair<int, int>>;  // (arc, copy) from source to sink

void table_routes(const SpTree& tree, const CostTable& table, int node, const std::vector<int>& slots, int tt,
                  std::vector<Path>& paths) {
  if (slots.empty()) return;
  const auto& n = tree.node(node);
  const auto v = slots.size();
  int w = table.witness[static_cast<std::size_t>(node)][v][static_cast<std::size_t>(tt)];
  switch (n.kind) {
    case SpKind::Leaf:
      for (int s : slots) paths[static_cast<std::size_t>(s)].emplace_back(n.arc, n.copy);
      break;
    case SpKind::Series:
      table_routes(tree, table, n.left, slots, w, paths);
      table_routes(tree, table, n.right, slots, tt - w, paths);
      break;
    case SpKind::Parallel: {
      std::vector<int> left(slots.begin(), slots.begin() + w);
      std::vector<int> right(slots.begin() + w, slots.end());
      table_routes(tree, table, n.left, left, tt, paths);
      table_routes(tree, table, n.right, right, tt, paths);
      break;
    }
  }
}

// A multiset of per-train travel times through a subgraph, sorted
// ascending, with the cheapest expansion cost achieving it.
struct Profile {
  std::vector<int> times;
  Rational cost;
  int left = -1;   // profile index in the left child (same or split train count)
  int right = -1;  // profile index in the right child
  int split = 0;   // parallel: trains sent left
  // Per slot: the child slots it combines. Series: (left slot, right slot).
  // Parallel: (0, left slot) or (1, right slot).
  std::vector<std::pair<int, int>> origin;
};

using ProfileSet = std::vector<Profile>;  // one train count

constexpr std::size_t kProfileCandidateCap = 20'000'000;

bool dominates(const Profile& a, const Profile& b) {
  if (a.cost > b.cost) return false;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    if (a.times[i] > b.times[i]) return false;
  }
  return true;
}

ProfileSet pareto(std::vector<Profile> candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const Profile& a, const Profile& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.times < b.times;
  });
  ProfileSet kept;
  for (auto& c : candidates) {
    bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Profile& k) { return dominates(k, c); });
    if (!dominated) kept.push_back(std::move(c));
  }
  return kept;
}

class ProfileSearch {
 public:
  ProfileSearch(const SpTree& tree, const Instance& instance, int trains, int budget)
      : tree_(tree), inst_(instance), trains_(trains), budget_(budget) {}

  // profiles[node][v]
  std::vector<std::vector<ProfileSet>> run() {
    std::vector<std::vector<ProfileSet>> all(tree_.nodes.size());
    for (std::size_t k = 0; k < tree_.nodes.size(); ++k) {
      const auto& node = tree_.nodes[k];
      auto& mine = all[k];
      mine.resize(static_cast<std::size_t>(trains_) + 1);
      mine[0].push_back(Profile{{}, 0, -1, -1, 0, {}});
      for (int v = 1; v <= trains_; ++v) {
        std::vector<Profile> cand;
        if (node.kind == SpKind::Leaf) {
          const auto& arc = inst_.network.arcs[static_cast<std::size_t>(node.arc)];
          auto c = sp_cost_base(arc, v);
          if (c && arc.travel_time <= budget_) {
            cand.push_back(Profile{std::vector<int>(static_cast<std::size_t>(v), arc.travel_time), *c, -1, -1, 0, {}});
          }
        } else if (node.kind == SpKind::Parallel) {
          parallel(all, node, v, cand);
        } else {
          series(all, node, v, cand);
        }
        mine[static_cast<std::size_t>(v)] = pareto(std::move(cand));
      }
    }
    return all;
  }

 private:
  void count(std::size_t n) {
    candidates_ += n;
    if (candidates_ > kProfileCandidateCap) {
      throw UnsupportedInstance("series-parallel profile search exceeds its size limit");
    }
  }

  void parallel(const std::vector<std::vector<ProfileSet>>& all, const SpNode& node, int v,
                std::vector<Profile>& cand) {
    const auto& L = all[static_cast<std::size_t>(node.left)];
    const auto& R = all[static_cast<std::size_t>(node.right)];
    for (int v1 = 0; v1 <= v; ++v1) {
      const auto& ls = L[static_cast<std::size_t>(v1)];
      const auto& rs = R[static_cast<std::size_t>(v - v1)];
      count(ls.size() * rs.size());
      for (std::size_t i = 0; i < ls.size(); ++i) {
        for (std::size_t j = 0; j < rs.size(); ++j) {
          Profile p;
          p.cost = ls[i].cost + rs[j].cost;
          p.left = static_cast<int>(i);
          p.right = static_cast<int>(j);
          p.split = v1;
          std::size_t a = 0, b = 0;
          while (a < ls[i].times.size() || b < rs[j].times.size()) {
            bool take_left = b >= rs[j].times.size() ||
                             (a < ls[i].times.size() && ls[i].times[a] <= rs[j].times[b]);
            if (take_left) {
              p.times.push_back(ls[i].times[a]);
              p.origin.emplace_back(0, static_cast<int>(a++));
            } else {
              p.times.push_back(rs[j].times[b]);
              p.origin.emplace_back(1, static_cast<int>(b++));
            }
          }
          cand.push_back(std::move(p));
        }
      }
    }
  }

  void series(const std::vector<std::vector<ProfileSet>>& all, const SpNode& node, int v,
              std::vector<Profile>& cand) {
    const auto& ls = all[static_cast<std::size_t>(node.left)][static_cast<std::size_t>(v)];
    const auto& rs = all[static_cast<std::size_t>(node.right)][static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < ls.size(); ++i) {
      for (std::size_t j = 0; j < rs.size(); ++j) {
        // Every distinct way of pairing left slots with right travel times.
        std::vector<int> perm = rs[j].times;
        do {
          count(1);
          std::vector<char> used(perm.size(), 0);
          Profile p;
          p.cost = ls[i].cost + rs[j].cost;
          p.left = static_cast<int>(i);
          p.right = static_cast<int>(j);
          bool fits = true;
          std::vector<std::tuple<int, int, int>> slots;
          for (std::size_t s = 0; s < perm.size(); ++s) {
            // Map the permuted time back to an unused right slot with that time.
            std::size_t r = 0;
            while (used[r] || rs[j].times[r] != perm[s]) ++r;
            used[r] = 1;
            int total = ls[i].times[s] + perm[s];
            if (total > budget_) fits = false;
            slots.emplace_back(total, static_cast<int>(s), static_cast<int>(r));
          }
          if (!fits) continue;
          std::sort(slots.begin(), slots.end());
          for (const auto& [total, l, r] : slots) {
            p.times.push_back(total);
            p.origin.emplace_back(l, r);
          }
          cand.push_back(std::move(p));
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
    }
  }

  const SpTree& tree_;
  const Instance& inst_;
  int trains_;
  int budget_;
  std::size_t candidates_ = 0;
};

void profile_routes(const SpTree& tree, const std::vector<std::vector<ProfileSet>>& all, int node, int profile,
                    const std::vector<int>& slots, std::vector<Path>& paths) {
  if (slots.empty()) return;
  const auto& n = tree.node(node);
  const auto& p = all[static_cast<std::size_t>(node)][slots.size()][static_cast<std::size_t>(profile)];
  switch (n.kind) {
    case SpKind::Leaf:
      for (int s : slots) paths[static_cast<std::size_t>(s)].emplace_back(n.arc, n.copy);
      break;
    case SpKind::Series: {
      std::vector<int> left(slots.size()), right(slots.size());
      for (std::size_t s = 0; s < slots.size(); ++s) {
        left[static_cast<std::size_t>(p.origin[s].first)] = slots[s];
        right[static_cast<std::size_t>(p.origin[s].second)] = slots[s];
      }
      profile_routes(tree, all, n.left, p.left, left, paths);
      profile_routes(tree, all, n.right, p.right, right, paths);
      break;
    }
    case SpKind::Parallel: {
      std::vector<int> left(static_cast<std::size_t>(p.split)), right(slots.size() - static_cast<std::size_t>(p.split));
      for (std::size_t s = 0; s < slots.size(); ++s) {
        auto [side, k] = p.origin[s];
        (side == 0 ? left : right)[static_cast<std::size_t>(k)] = slots[s];
      }
      profile_routes(tree, all, n.left, p.left, left, paths);
      profile_routes(tree, all, n.right, p.right, right, paths);
      break;
    }
  }
}

void check_preconditions(const Instance& instance, const SpTree& tree) {
  const auto& root = tree.node(tree.root);
  if (instance.capacity_window < instance.horizon) {
    throw UnsupportedInstance("the series-parallel solver needs a capacity window covering the horizon");
  }
  if (instance.scenarios.size() > 1) throw UnsupportedInstance("the series-parallel solver handles one scenario");
  if (!instance.connections.empty()) throw UnsupportedInstance("the series-parallel solver does not model connections");
  IndexedInstance idx(instance);
  if (idx.max_headway() > 1) throw UnsupportedInstance("the series-parallel solver does not model minimum headways");
  for (const auto& v : instance.trains) {
    if (v.optional) throw UnsupportedInstance("the series-parallel solver does not handle optional train " + v.id);
    if (!v.via_nodes.empty()) throw UnsupportedInstance("the series-parallel solver does not model VIA nodes");
    if (v.origin != root.source || v.destination != root.sink) {
      throw UnsupportedInstance("train " + v.id + " does not run from the network source " + root.source +
                                " to its sink " + root.sink);
    }
    const auto& first = instance.trains.front();
    if (v.earliest_departure != first.earliest_departure || v.latest_arrival != first.latest_arrival) {
      throw UnsupportedInstance("trains must share departure and latest arrival times");
    }
  }
}

}  // namespace

std::optional<Solution> solve_series_parallel(const Instance& instance, SpSolveInfo& info) {
  auto report = validate_instance(instance);
  if (!report.ok()) throw std::invalid_argument("invalid instance:\n" + report.describe());
  auto tree = sp_decompose(instance.network);
  if (!tree) throw UnsupportedInstance("network is not two-terminal series-parallel");
  check_preconditions(instance, *tree);

  Solution sol;
  const int trains = static_cast<int>(instance.trains.size());
  if (trains == 0) {
    compute_costs(instance, sol);
    return sol;
  }
  const int budget = time_budget(instance);
  if (budget < 1) return std::nullopt;

  std::vector<Path> paths(static_cast<std::size_t>(trains));
  std::vector<int> slots(static_cast<std::size_t>(trains));
  for (int s = 0; s < trains; ++s) slots[static_cast<std::size_t>(s)] = s;

  if (sp_longest_path(*tree, instance.network, tree->root) <= budget) {
    CostTable table = sp_cost_table(*tree, instance);
    info.used_table = true;
    info.operations = table.operations;
    if (!table.at(tree->root, trains, budget)) return std::nullopt;
    table_routes(*tree, table, tree->root, slots, budget, paths);
  } else {
    info.used_table = false;
    auto all = ProfileSearch(*tree, instance, trains, budget).run();
    const auto& root = all[static_cast<std::size_t>(tree->root)][static_cast<std::size_t>(trains)];
    if (root.empty()) return std::nullopt;
    // Pareto sets are sorted by cost, so the first entry is cheapest.
    profile_routes(*tree, all, tree->root, 0, slots, paths);
  }

  std::vector<std::string> ids;
  for (const auto& v : instance.trains) ids.push_back(v.id);
  std::sort(ids.begin(), ids.end());
  const TimeStep start = instance.trains.front().earliest_departure;
  std::map<std::pair<int, int>, int> load;
  for (int s = 0; s < trains; ++s) {
    const auto& id = ids[static_cast<std::size_t>(s)];
    std::vector<RoutedStep> steps;
    TimeStep t = start;
    for (const auto& [a, c] : paths[static_cast<std::size_t>(s)]) {
      const auto& arc = instance.network.arcs[static_cast<std::size_t>(a)];
      steps.push_back({id, arc.from, arc.to, t});
      t += arc.travel_time;
      ++load[{a, c}];
    }
    sol.routes.emplace(id, std::move(steps));
  }
  for (const auto& [key, count] : load) {
    const auto& arc = instance.network.arcs[static_cast<std::size_t>(key.first)];
    if (count > arc.capacity) sol.expanded_arcs.emplace_back(arc.from, arc.to);
  }
  compute_costs(instance, sol);
  return sol;
}

std::optional<Solution> solve_series_parallel(const Instance& instance) {
  SpSolveInfo info;
  return solve_series_parallel(instance, info);
}

}  // namespace railnet
