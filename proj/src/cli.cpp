#include "railnet/cli.hpp"

#include "railnet/extract.hpp"
#include "railnet/instance_io.hpp"
#include "railnet/lp_format.hpp"
#include "railnet/milp.hpp"
#include "railnet/polycases.hpp"
#include "railnet/reduction.hpp"
#include "railnet/verify.hpp"

#include <fstream>
#include <ostream>

namespace railnet::cli {

SolveMode parse_mode(const std::string& text) {
  if (text == "auto") return SolveMode::Auto;
  if (text == "milp") return SolveMode::Milp;
  if (text == "arborescence") return SolveMode::Arborescence;
  if (text == "sp") return SolveMode::SeriesParallel;
  throw std::invalid_argument("unknown mode '" + text + "' (expected auto, milp, arborescence or sp)");
}

const char* mode_name(SolveMode mode) {
  switch (mode) {
    case SolveMode::Auto: return "auto";
    case SolveMode::Milp: return "milp";
    case SolveMode::Arborescence: return "arborescence";
    case SolveMode::SeriesParallel: return "sp";
  }
  return "auto";
}

namespace {

// Loads and validates; prints the report and returns nullopt on errors.
std::optional<Instance> load_checked(const std::filesystem::path& path, std::ostream& err) {
  Instance inst;
  try {
    inst = load_instance(path);
  } catch (const std::exception& e) {
    err << "error: " << path.string() << ": " << e.what() << "\n";
    return std::nullopt;
  }
  auto report = validate_instance(inst);
  if (!report.ok() || !report.warnings.empty()) err << report.describe();
  if (!report.ok()) return std::nullopt;
  return inst;
}

struct Outcome {
  SolveStatus status = SolveStatus::LimitReached;
  std::optional<Solution> solution;
  SolveMode used = SolveMode::Milp;
  long nodes = 0;
};

Outcome run_milp(const Instance& inst, const SolveLimits& limits) {
  ConstraintSystem sys = build(inst);
  SolveResult res = solve(sys, limits);
  Outcome o;
  o.status = res.status;
  o.nodes = res.stats.nodes;
  if (res.status == SolveStatus::Optimal) o.solution = extract_solution(inst, sys, res);
  return o;
}

Outcome from_special(std::optional<Solution> sol, SolveMode used) {
  Outcome o;
  o.used = used;
  o.status = sol ? SolveStatus::Optimal : SolveStatus::Infeasible;
  o.solution = std::move(sol);
  return o;
}

Outcome dispatch(const Instance& inst, const SolveOptions& options) {
  switch (options.mode) {
    case SolveMode::Milp: return run_milp(inst, options.limits);
    case SolveMode::Arborescence: return from_special(solve_arborescence(inst), SolveMode::Arborescence);
    case SolveMode::SeriesParallel: return from_special(solve_series_parallel(inst), SolveMode::SeriesParallel);
    case SolveMode::Auto: break;
  }
  if (arborescence_applicable(inst)) return from_special(solve_arborescence(inst), SolveMode::Arborescence);
  if (sp_decompose(inst.network)) {
    try {
      return from_special(solve_series_parallel(inst), SolveMode::SeriesParallel);
    } catch (const UnsupportedInstance&) {
      // fall through to the full model
    }
  }
  return run_milp(inst, options.limits);
}

}  // namespace

int cmd_solve(const std::filesystem::path& instance, const SolveOptions& options, std::ostream& out,
              std::ostream& err) {
  auto inst = load_checked(instance, err);
  if (!inst) return kInputError;
  Outcome o;
  try {
    o = dispatch(*inst, options);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  out << "solver " << mode_name(o.used) << "\n";
  if (o.used == SolveMode::Milp) out << "nodes " << o.nodes << "\n";
  switch (o.status) {
    case SolveStatus::Infeasible:
      out << "status infeasible\n";
      return kInfeasible;
    case SolveStatus::LimitReached:
      out << "status limit\n";
      return kLimit;
    case SolveStatus::Optimal: break;
  }
  const Solution& sol = *o.solution;
  out << "status optimal\n";
  out << "objective " << to_string(sol.objective_value) << "\n";
  out << "expansion_cost " << to_string(sol.cost_breakdown.expansion_cost_total) << "\n";
  out << "penalty " << to_string(sol.cost_breakdown.penalty_total) << "\n";
  for (const auto& [from, to] : sol.expanded_arcs) out << "expand " << from << "." << to << "\n";
  if (options.output) {
    try {
      save_solution(sol, *options.output);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kInputError;
    }
  }
  return kOk;
}

int cmd_verify(const std::filesystem::path& instance, const std::filesystem::path& solution, std::ostream& out,
               std::ostream& err) {
  auto inst = load_checked(instance, err);
  if (!inst) return kInputError;
  Solution sol;
  try {
    sol = load_solution(solution);
  } catch (const std::exception& e) {
    err << "error: " << solution.string() << ": " << e.what() << "\n";
    return kInputError;
  }
  auto violations = verify(*inst, sol);
  for (const auto& v : violations) out << format_violation(v) << "\n";
  return violations.empty() ? kOk : kViolations;
}

int cmd_export(const std::filesystem::path& instance, const std::optional<std::filesystem::path>& output,
               std::ostream& out, std::ostream& err) {
  auto inst = load_checked(instance, err);
  if (!inst) return kInputError;
  std::string text;
  try {
    text = export_lp(build(*inst));
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (!output) {
    out << text;
    return kOk;
  }
  std::ofstream file(*output, std::ios::binary);
  file << text;
  if (!file) {
    err << "error: cannot write " << output->string() << "\n";
    return kInputError;
  }
  return kOk;
}

int cmd_gen_x3c(const GenX3cOptions& options, std::ostream& out, std::ostream& err) {
  try {
    X3cInstance x3c = gen_random_x3c(options.q, options.subsets, options.seed, options.planted);
    auto reduced = x3c_to_instance(x3c, options.unit_capacity);
    save_instance(reduced.instance, options.output);

    nlohmann::json truth;
    truth["ground_set"] = x3c.ground_set;
    truth["subsets"] = x3c.subsets;
    truth["planted"] = options.planted;
    truth["seed"] = options.seed;
    truth["threshold"] = rational_to_json(reduced.threshold);
    if (x3c.subsets.size() <= kX3cBruteForceLimit) truth["exact_cover"] = x3c_brute_force(x3c);
    auto sidecar = options.output;
    sidecar.replace_filename(options.output.stem().string() + ".x3c.json");
    write_json_file(truth, sidecar);
    out << "wrote " << options.output.string() << " and " << sidecar.string() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::string, Instance>> work;
  for (const auto& path : options.instances) {
    auto inst = load_checked(path, err);
    if (!inst) return kInputError;
    work.emplace_back(path.filename().string(), std::move(*inst));
  }
  try {
    for (int n : options.train_counts) {
      LineSpec spec = options.line;
      spec.trains = n;
      work.emplace_back("line-" + std::to_string(n), gen_line_instance(spec));
    }
    for (const auto& p : options.partitions) {
      std::string label = "scen";
      for (int s : p) label += "-" + std::to_string(s);
      work.emplace_back(label, gen_scenario_instance(p, options.line));
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  std::vector<BenchRecord> records;
  for (const auto& [label, inst] : work) {
    try {
      records.push_back(bench_instance(label, inst, options.settings));
      if (records.back().status == status_name(SolveStatus::LimitReached)) err << "notice: " << label << " hit the solve limits\n";
    } catch (const std::exception& e) {
      err << "notice: skipping " << label << ": " << e.what() << "\n";
    }
  }
  out << bench_table(records);
  if (options.output) {
    std::ofstream file(*options.output, std::ios::binary);
    file << bench_tsv(records);
    if (!file) {
      err << "error: cannot write " << options.output->string() << "\n";
      return kInputError;
    }
  } else {
    out << "\n" << bench_tsv(records);
  }
  return kOk;
}

}  // namespace railnet::cli
