#pragma once

#include "railnet/bench.hpp"
#include "railnet/solver_bb.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace railnet::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kInfeasible = 2,
  kLimit = 3,
  kViolations = 4,
};

enum class SolveMode { Auto, Milp, Arborescence, SeriesParallel };

// "auto", "milp", "arborescence", "sp"; throws std::invalid_argument.
SolveMode parse_mode(const std::string& text);
const char* mode_name(SolveMode mode);

struct SolveOptions {
  SolveMode mode = SolveMode::Auto;
  SolveLimits limits;
  std::optional<std::filesystem::path> output;
};

int cmd_solve(const std::filesystem::path& instance, const SolveOptions& options, std::ostream& out,
              std::ostream& err);

int cmd_verify(const std::filesystem::path& instance, const std::filesystem::path& solution, std::ostream& out,
               std::ostream& err);

// Writes to `output`, or to `out` when absent.
int cmd_export(const std::filesystem::path& instance, const std::optional<std::filesystem::path>& output,
               std::ostream& out, std::ostream& err);

struct GenX3cOptions {
  int q = 1;
  int subsets = 1;
  std::uint64_t seed = 0;
  bool planted = false;
  bool unit_capacity = false;
  std::filesystem::path output;
};

// Writes the instance and, next to it, <stem>.x3c.json with the subsets,
// the brute-force answer and the cost threshold.
int cmd_gen_x3c(const GenX3cOptions& options, std::ostream& out, std::ostream& err);

struct BenchOptions {
  std::vector<std::filesystem::path> instances;
  // Generated families, run after the files. Each entry of `train_counts`
  // gives one deterministic line instance; each entry of `partitions` one
  // scenario instance.
  std::vector<int> train_counts;
  std::vector<std::vector<int>> partitions;
  LineSpec line;  // shape of generated instances
  BenchSettings settings;
  std::optional<std::filesystem::path> output;  // tab-separated rows
};

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);

}  // namespace railnet::cli
