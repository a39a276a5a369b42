#include "railnet/bench.hpp"

#include "railnet/milp.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace railnet {

BenchRecord bench_instance(const std::string& label, const Instance& instance, const BenchSettings& settings) {
  if (settings.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  BenchRecord r;
  r.label = label;
  r.timesteps = instance.horizon;
  r.trains = static_cast<int>(instance.trains.size());
  r.nodes = static_cast<int>(instance.network.nodes.size());
  r.arcs = static_cast<int>(instance.network.arcs.size());
  for (const auto& s : effective_scenarios(instance)) r.scenario_sizes.push_back(static_cast<int>(s.train_ids.size()));

  double total = 0;
  for (int rep = 0; rep < settings.repetitions; ++rep) {
    auto start = std::chrono::steady_clock::now();
    ConstraintSystem sys = build(instance);
    SolveResult res = solve(sys, settings.limits);
    total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (rep == 0) {
      r.constraints = static_cast<int>(sys.rows.size());
      r.variables = static_cast<int>(sys.variables.size());
      auto counts = count_rows(sys);
      r.headway_rows = counts.count(RowFamily::Headway) ? counts.at(RowFamily::Headway) : 0;
      r.solver_nodes = res.stats.nodes;
      r.status = status_name(res.status);
      r.objective = res.status == SolveStatus::Optimal ? res.objective : std::nullopt;
    }
  }
  r.runtime = total / settings.repetitions;
  return r;
}

Instance gen_line_instance(const LineSpec& spec) {
  if (spec.stations < 2) throw std::invalid_argument("a line needs at least 2 stations");
  if (spec.horizon < spec.stations - 1) throw std::invalid_argument("horizon shorter than the line");
  if (spec.trains < 0 || spec.capacity < 0 || spec.expandable < 0 || spec.window < 1 || spec.headway < 0) {
    throw std::invalid_argument("line parameters out of range");
  }
  std::mt19937_64 rng(spec.seed);
  Instance inst;
  inst.horizon = spec.horizon;
  inst.capacity_window = spec.window;
  inst.allow_dwell = true;
  for (int i = 0; i < spec.stations; ++i) inst.network.nodes.push_back({"s" + std::to_string(i), std::nullopt});
  std::uniform_int_distribution<int> cost(1, 5);
  for (int i = 0; i + 1 < spec.stations; ++i) {
    Arc a;
    a.from = "s" + std::to_string(i);
    a.to = "s" + std::to_string(i + 1);
    a.travel_time = 1;
    a.capacity = spec.capacity;
    a.expandable_capacity = spec.expandable;
    a.expansion_cost = cost(rng);
    inst.network.arcs.push_back(std::move(a));
  }
  inst.network.headways.default_headway = spec.headway;
  const int run = spec.stations - 1;
  std::uniform_int_distribution<int> start(0, spec.horizon - run);
  for (int v = 1; v <= spec.trains; ++v) {
    TrainRequest t;
    t.id = "t" + std::to_string(v);
    t.origin = "s0";
    t.destination = "s" + std::to_string(spec.stations - 1);
    t.earliest_departure = start(rng);
    t.latest_arrival = spec.horizon;
    inst.trains.push_back(std::move(t));
  }
  return inst;
}

Instance gen_scenario_instance(const std::vector<int>& partition, const LineSpec& spec) {
  LineSpec all = spec;
  all.trains = 0;
  for (int p : partition) {
    if (p < 1) throw std::invalid_argument("scenario sizes must be positive");
    all.trains += p;
  }
  Instance inst = gen_line_instance(all);
  int next = 0;
  for (std::size_t s = 0; s < partition.size(); ++s) {
    Scenario sc;
    sc.id = "sc" + std::to_string(s + 1);
    for (int k = 0; k < partition[s]; ++k) sc.train_ids.push_back(inst.trains[static_cast<std::size_t>(next++)].id);
    inst.scenarios.push_back(std::move(sc));
  }
  return inst;
}

namespace {

std::string sizes(const BenchRecord& r) {
  std::string out;
  for (std::size_t i = 0; i < r.scenario_sizes.size(); ++i) {
    if (i) out += "/";
    out += std::to_string(r.scenario_sizes[i]);
  }
  return out;
}

std::vector<std::string> cells(const BenchRecord& r) {
  std::ostringstream runtime;
  runtime << std::fixed << std::setprecision(3) << r.runtime;
  return {r.label,
          std::to_string(r.timesteps),
          std::to_string(r.trains),
          sizes(r),
          std::to_string(r.nodes),
          std::to_string(r.arcs),
          runtime.str(),
          std::to_string(r.constraints),
          std::to_string(r.variables),
          std::to_string(r.headway_rows),
          std::to_string(r.solver_nodes),
          r.status,
          r.objective ? to_string(*r.objective) : "-"};
}

const std::vector<std::string> kHeader = {"Instance",    "Timesteps", "Trains",       "Scenarios", "Nodes",
                                          "Arcs",        "Runtime",   "Constraints",  "Variables", "HeadwayRows",
                                          "SearchNodes", "Status",    "Objective"};

}  // namespace

std::string bench_table(const std::vector<BenchRecord>& records) {
  std::vector<std::vector<std::string>> rows{kHeader};
  for (const auto& r : records) rows.push_back(cells(r));
  std::vector<std::size_t> width(kHeader.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      } else {
        out << std::right << std::setw(static_cast<int>(width[c])) << row[c];
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string bench_tsv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "\t" : "") << row[c];
    out << "\n";
  };
  line(kHeader);
  for (const auto& r : records) line(cells(r));
  return out.str();
}

}  // namespace railnet
