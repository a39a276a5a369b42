#include "railnet/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using railnet::cli::kInputError;

std::vector<int> parse_ints(const std::string& text, char sep) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(std::stoi(item));
  return out;
}

struct Common {
  std::string mode = "auto";
  std::optional<double> time_limit;
  std::optional<long> node_limit;
  int threads = 1;
  std::uint64_t seed = 0;
  std::string output;
};

void add_limits(CLI::App* cmd, Common& c) {
  cmd->add_option("--time-limit", c.time_limit, "Wall-clock limit in seconds");
  cmd->add_option("--node-limit", c.node_limit, "Branch-and-bound node limit");
  cmd->add_option("--threads", c.threads, "Solver threads")->check(CLI::PositiveNumber);
}

railnet::SolveLimits limits_of(const Common& c) {
  railnet::SolveLimits l;
  l.time_limit = c.time_limit;
  l.node_limit = c.node_limit;
  l.threads = c.threads;
  return l;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Railway network expansion planning"};
  app.require_subcommand(1);
  Common c;

  std::string instance, solution;
  auto* solve = app.add_subcommand("solve", "Solve an instance and write the optimal solution");
  solve->add_option("instance", instance, "Instance JSON")->required();
  solve->add_option("--mode", c.mode, "auto, milp, arborescence or sp")
      ->check(CLI::IsMember({"auto", "milp", "arborescence", "sp"}));
  add_limits(solve, c);
  solve->add_option("--seed", c.seed, "Unused by the deterministic solvers");
  solve->add_option("-o,--output", c.output, "Solution JSON to write");

  auto* check = app.add_subcommand("verify", "Check a solution against an instance");
  check->add_option("instance", instance, "Instance JSON")->required();
  check->add_option("solution", solution, "Solution JSON")->required();

  auto* exp = app.add_subcommand("export-lp", "Write the model in LP format");
  exp->add_option("instance", instance, "Instance JSON")->required();
  exp->add_option("-o,--output", c.output, "LP file (standard output when omitted)");

  railnet::cli::GenX3cOptions gen;
  std::string gen_out;
  auto* x3c = app.add_subcommand("gen-x3c", "Generate an exact-cover reduction instance");
  x3c->add_option("--q", gen.q, "Ground set has 3q elements")->required()->check(CLI::PositiveNumber);
  x3c->add_option("--subsets", gen.subsets, "Number of 3-element subsets")->required();
  x3c->add_option("--seed", gen.seed, "Generator seed")->required();
  x3c->add_flag("--planted", gen.planted, "Plant an exact cover");
  x3c->add_flag("--unit-capacity", gen.unit_capacity, "Unit lines with capacity 1 instead of expandable capacity");
  x3c->add_option("-o,--output", gen_out, "Instance JSON")->required();

  railnet::cli::BenchOptions bench;
  std::vector<std::string> bench_files;
  std::string trains_list;
  std::vector<std::string> partition_list;
  auto* b = app.add_subcommand("bench", "Benchmark the full model on files or generated families");
  b->add_option("instances", bench_files, "Instance JSON files");
  b->add_option("--trains", trains_list, "Comma-separated train counts for line instances");
  b->add_option("--partition", partition_list, "Scenario sizes such as 4/4/4/4 (repeatable)");
  b->add_option("--stations", bench.line.stations, "Stations on generated lines");
  b->add_option("--horizon", bench.line.horizon, "Horizon of generated instances");
  b->add_option("--headway", bench.line.headway, "Default headway of generated instances");
  b->add_option("--capacity", bench.line.capacity, "Base capacity of generated lines");
  b->add_option("--expandable", bench.line.expandable, "Expandable capacity of generated lines");
  b->add_option("--window", bench.line.window, "Capacity window of generated instances");
  b->add_option("--reps", bench.settings.repetitions, "Repetitions per instance")->check(CLI::PositiveNumber);
  b->add_option("--seed", bench.line.seed, "Generator seed");
  add_limits(b, c);
  b->add_option("-o,--output", c.output, "Tab-separated rows");

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<std::filesystem::path> output;
    if (!c.output.empty()) output = c.output;
    if (solve->parsed()) {
      railnet::cli::SolveOptions opts;
      opts.mode = railnet::cli::parse_mode(c.mode);
      opts.limits = limits_of(c);
      opts.output = output;
      return railnet::cli::cmd_solve(instance, opts, std::cout, std::cerr);
    }
    if (check->parsed()) return railnet::cli::cmd_verify(instance, solution, std::cout, std::cerr);
    if (exp->parsed()) return railnet::cli::cmd_export(instance, output, std::cout, std::cerr);
    if (x3c->parsed()) {
      gen.output = gen_out;
      return railnet::cli::cmd_gen_x3c(gen, std::cout, std::cerr);
    }
    if (b->parsed()) {
      for (const auto& f : bench_files) bench.instances.emplace_back(f);
      if (!trains_list.empty()) bench.train_counts = parse_ints(trains_list, ',');
      for (const auto& p : partition_list) bench.partitions.push_back(parse_ints(p, '/'));
      bench.settings.limits = limits_of(c);
      bench.output = output;
      return railnet::cli::cmd_bench(bench, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
