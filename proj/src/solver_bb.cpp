#include "railnet/solver_bb.hpp"

#include "railnet/dual_simplex.hpp"
#include "railnet/integer_model.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>

namespace railnet {

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::LimitReached: return "limit_reached";
  }
  return "unknown";
}

namespace {

using i128 = __int128;
using Bits = std::vector<signed char>;

constexpr std::int64_t kNoIncumbent = std::numeric_limits<std::int64_t>::max();
constexpr double kIntegralTol = 1e-6;
// Dual multipliers are rounded to this grid before the exact bound is formed.
constexpr std::int64_t kDualGrid = std::int64_t{1} << 30;
constexpr double kMaxDual = 1e8;
constexpr std::size_t kMaxLpEntries = 20'000'000;
constexpr std::size_t kRetainedEntryBudget = 30'000'000;

i128 ceil_div(i128 a, i128 d) { return a >= 0 ? (a + d - 1) / d : -((-a) / d); }

// Exact activity-based bound propagation on 0/1 variables.
class Propagator {
 public:
  explicit Propagator(const IntegerModel& m) : m_(m) {}

  bool run(Bits& lo, Bits& hi) {
    const std::size_t rows = m_.rows.size();
    minact_.assign(rows, 0);
    maxact_.assign(rows, 0);
    queued_.assign(rows, 1);
    queue_.clear();
    for (std::size_t r = 0; r < rows; ++r) {
      for (const auto& [j, a] : m_.rows[r].terms) {
        auto uj = static_cast<std::size_t>(j);
        minact_[r] += a > 0 ? a * lo[uj] : a * hi[uj];
        maxact_[r] += a > 0 ? a * hi[uj] : a * lo[uj];
      }
      queue_.push_back(static_cast<int>(r));
    }
    while (!queue_.empty()) {
      auto r = static_cast<std::size_t>(queue_.front());
      queue_.pop_front();
      queued_[r] = 0;
      const auto& row = m_.rows[r];
      bool upper_side = row.sense != Sense::GreaterEqual;
      bool lower_side = row.sense != Sense::LessEqual;
      if (upper_side && minact_[r] > row.rhs) return false;
      if (lower_side && maxact_[r] < row.rhs) return false;
      for (const auto& [j, a] : row.terms) {
        auto uj = static_cast<std::size_t>(j);
        if (lo[uj] == hi[uj]) continue;
        int fix = -1;
        if (upper_side) {
          if (a > 0 && minact_[r] + a > row.rhs) fix = 0;
          if (a < 0 && minact_[r] - a > row.rhs) fix = 1;
        }
        if (fix < 0 && lower_side) {
          if (a > 0 && maxact_[r] - a < row.rhs) fix = 1;
          if (a < 0 && maxact_[r] + a < row.rhs) fix = 0;
        }
        if (fix >= 0) set(j, fix, lo, hi);
      }
    }
    return true;
  }

 private:
  void set(int j, int value, Bits& lo, Bits& hi) {
    auto uj = static_cast<std::size_t>(j);
    lo[uj] = hi[uj] = static_cast<signed char>(value);
    for (const auto& [r, a] : m_.columns[uj]) {
      auto ur = static_cast<std::size_t>(r);
      if (value == 1) {
        if (a > 0) minact_[ur] += a;
        else maxact_[ur] += a;
      } else {
        if (a > 0) maxact_[ur] -= a;
        else minact_[ur] -= a;
      }
      if (!queued_[ur]) {
        queued_[ur] = 1;
        queue_.push_back(r);
      }
    }
  }

  const IntegerModel& m_;
  std::vector<std::int64_t> minact_, maxact_;
  std::vector<char> queued_;
  std::deque<int> queue_;
};

// The relaxation over the columns still free after root presolve.
struct ReducedLp {
  LpProblem lp;
  std::vector<int> col_var;                                  // LP column -> model variable
  std::vector<std::int64_t> rhs;                             // exact right-hand sides
  std::vector<std::vector<std::pair<int, std::int64_t>>> cols;  // exact column entries
  std::vector<std::int64_t> cost;
};

struct Node {
  Bits lo, hi;
  std::int64_t lb = std::numeric_limits<std::int64_t>::min();
  std::shared_ptr<const LpState> warm;
};

class BranchAndBound {
 public:
  BranchAndBound(const ConstraintSystem& sys, const SolveLimits& limits)
      : model_(to_integer_model(sys)), limits_(limits), prop_(model_) {}

  SolveResult run() {
    auto start = std::chrono::steady_clock::now();
    const auto n = static_cast<std::size_t>(model_.num_vars);
    Rational scaled_gap = limits_.absolute_gap * Rational(model_.cost_scale);
    BigInt gap_floor = boost::multiprecision::numerator(scaled_gap) / boost::multiprecision::denominator(scaled_gap);
    gap_ = gap_floor > kMaxIntegerCoefficient ? kMaxIntegerCoefficient : gap_floor.convert_to<std::int64_t>();
    SolveResult result;

    Node root;
    root.lo.assign(n, 0);
    root.hi.assign(n, 1);
    bool feasible = prop_.run(root.lo, root.hi);
    if (feasible) {
      dual_fix(root.lo, root.hi);
      feasible = prop_.run(root.lo, root.hi);
    }
    if (feasible) {
      root.lb = trivial_bound(root.lo, root.hi);
      if (limits_.lp_bound) build_lp(root.lo, root.hi);
      stack_.push_back(std::move(root));
    }

    bool limit_hit = false;
    while (!stack_.empty()) {
      double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if ((limits_.time_limit && elapsed >= *limits_.time_limit) ||
          (limits_.node_limit && result.stats.nodes >= *limits_.node_limit)) {
        limit_hit = true;
        break;
      }
      Node node = std::move(stack_.back());
      stack_.pop_back();
      if (node.warm) retained_ -= node.warm.use_count() == 1 ? node.warm->entries() : 0;
      ++result.stats.nodes;
      process(std::move(node), result.stats);
    }

    if (incumbent_value_ != kNoIncumbent) {
      result.incumbent = incumbent_;
      result.objective = model_.objective_of(incumbent_value_);
    }
    std::int64_t bound = std::min(pruned_min_, incumbent_value_);
    if (limit_hit) {
      result.status = SolveStatus::LimitReached;
      for (const auto& open : stack_) bound = std::min(bound, open.lb);
    } else {
      result.status = incumbent_value_ == kNoIncumbent ? SolveStatus::Infeasible : SolveStatus::Optimal;
    }
    if (bound != kNoIncumbent) result.bound = model_.objective_of(bound);
    result.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

 private:
  std::int64_t cutoff() const {
    return incumbent_value_ == kNoIncumbent ? kNoIncumbent : incumbent_value_ - gap_;
  }

  bool prune_by_bound(std::int64_t lb) {
    if (lb < cutoff()) return false;
    pruned_min_ = std::min(pruned_min_, lb);
    return true;
  }

  std::int64_t trivial_bound(const Bits& lo, const Bits& hi) const {
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < model_.cost.size(); ++j) {
      std::int64_t c = model_.cost[j];
      sum += c > 0 ? c * lo[j] : c * hi[j];
    }
    return sum;
  }

  // Fixes variables whose every row prefers one direction that the
  // objective also prefers.
  void dual_fix(Bits& lo, Bits& hi) const {
    for (std::size_t j = 0; j < model_.columns.size(); ++j) {
      if (lo[j] == hi[j]) continue;
      int up = 0, down = 0;
      for (const auto& [r, a] : model_.columns[j]) {
        switch (model_.rows[static_cast<std::size_t>(r)].sense) {
          case Sense::LessEqual: (a > 0 ? up : down)++; break;
          case Sense::GreaterEqual: (a > 0 ? down : up)++; break;
          case Sense::Equal: ++up; ++down; break;
        }
      }
      std::int64_t c = model_.cost[j];
      if (c >= 0 && down == 0) lo[j] = hi[j] = 0;
      else if (c <= 0 && up == 0) lo[j] = hi[j] = 1;
    }
  }

  void build_lp(const Bits& lo, const Bits& hi) {
    std::vector<int> var_col(static_cast<std::size_t>(model_.num_vars), -1);
    for (int j = 0; j < model_.num_vars; ++j) {
      if (lo[static_cast<std::size_t>(j)] != hi[static_cast<std::size_t>(j)]) {
        var_col[static_cast<std::size_t>(j)] = static_cast<int>(red_.col_var.size());
        red_.col_var.push_back(j);
      }
    }
    const std::size_t ncols = red_.col_var.size();
    std::vector<int> kept;
    for (std::size_t r = 0; r < model_.rows.size(); ++r) {
      const auto& row = model_.rows[r];
      std::int64_t fixed = 0, pos = 0, neg = 0;
      bool any_free = false;
      for (const auto& [j, a] : row.terms) {
        auto uj = static_cast<std::size_t>(j);
        if (lo[uj] == hi[uj]) {
          fixed += a * lo[uj];
        } else {
          any_free = true;
          (a > 0 ? pos : neg) += a;
        }
      }
      if (!any_free) continue;
      std::int64_t rhs = row.rhs - fixed;
      if (row.sense == Sense::LessEqual && pos <= rhs) continue;
      if (row.sense == Sense::GreaterEqual && neg >= rhs) continue;
      kept.push_back(static_cast<int>(r));
      red_.rhs.push_back(rhs);
    }
    if (ncols == 0 || kept.empty() || ncols * kept.size() > kMaxLpEntries) {
      lp_enabled_ = false;
      return;
    }
    lp_enabled_ = true;
    auto& lp = red_.lp;
    lp.rows = static_cast<int>(kept.size());
    lp.cols = static_cast<int>(ncols);
    lp.a.assign(kept.size() * ncols, 0.0);
    red_.cols.assign(ncols, {});
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const auto& row = model_.rows[static_cast<std::size_t>(kept[i])];
      lp.sense.push_back(row.sense);
      lp.b.push_back(static_cast<double>(red_.rhs[i]));
      for (const auto& [j, a] : row.terms) {
        int k = var_col[static_cast<std::size_t>(j)];
        if (k < 0) continue;
        lp.a[i * ncols + static_cast<std::size_t>(k)] = static_cast<double>(a);
        red_.cols[static_cast<std::size_t>(k)].emplace_back(static_cast<int>(i), a);
      }
    }
    for (int j : red_.col_var) {
      red_.cost.push_back(model_.cost[static_cast<std::size_t>(j)]);
      lp.c.push_back(static_cast<double>(model_.cost[static_cast<std::size_t>(j)]));
    }
    for (std::size_t j = 0; j < lo.size(); ++j) {
      if (lo[j] == hi[j]) root_constant_ += model_.cost[j] * lo[j];
    }
    root_state_ = std::make_shared<const LpState>(initial_lp_state(lp));
  }

  // Rounds duals to the grid with the signs weak duality needs.
  bool grid_duals(const std::vector<double>& y, double scale, std::vector<i128>& p) const {
    p.assign(y.size(), 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
      double v = y[i] * scale;
      if (!std::isfinite(v) || std::fabs(v) > kMaxDual) return false;
      auto q = static_cast<i128>(std::llround(v * static_cast<double>(kDualGrid)));
      Sense s = red_.lp.sense[i];
      if (s == Sense::LessEqual && q > 0) q = 0;
      if (s == Sense::GreaterEqual && q < 0) q = 0;
      p[i] = q;
    }
    return true;
  }

  // kDualGrid * (y.b + min over the node box of (c - yA).x), exact.
  i128 lagrangian(const std::vector<i128>& p, bool with_cost, const Bits& lo, const Bits& hi) const {
    i128 total = 0;
    for (std::size_t i = 0; i < p.size(); ++i) total += p[i] * red_.rhs[i];
    for (std::size_t k = 0; k < red_.col_var.size(); ++k) {
      i128 r = with_cost ? static_cast<i128>(red_.cost[k]) * kDualGrid : 0;
      for (const auto& [i, a] : red_.cols[k]) r -= p[static_cast<std::size_t>(i)] * a;
      auto j = static_cast<std::size_t>(red_.col_var[k]);
      total += r * (r >= 0 ? lo[j] : hi[j]);
    }
    return total;
  }

  std::optional<std::int64_t> certified_bound(const LpOutcome& out, const Bits& lo, const Bits& hi) const {
    std::vector<i128> p;
    if (!grid_duals(out.duals, 1.0, p)) return std::nullopt;
    i128 lb = ceil_div(lagrangian(p, true, lo, hi), kDualGrid) + root_constant_;
    if (lb > std::numeric_limits<std::int64_t>::max() / 2) return std::numeric_limits<std::int64_t>::max() / 2;
    return static_cast<std::int64_t>(lb);
  }

  bool certified_infeasible(const LpOutcome& out, const Bits& lo, const Bits& hi) const {
    double biggest = 0;
    for (double v : out.ray) biggest = std::max(biggest, std::fabs(v));
    if (!(biggest > 0) || !std::isfinite(biggest)) return false;
    std::vector<i128> p;
    for (double sign : {1.0, -1.0}) {
      if (grid_duals(out.ray, sign / biggest, p) && lagrangian(p, false, lo, hi) > 0) return true;
    }
    return false;
  }

  void offer(const std::vector<int>& x) {
    if (!model_.feasible(x)) return;
    std::int64_t value = model_.scaled_cost(x);
    if (value < incumbent_value_) {
      incumbent_value_ = value;
      incumbent_ = x;
    }
  }

  int first_free(const Bits& lo, const Bits& hi) const {
    for (std::size_t j = 0; j < lo.size(); ++j) {
      if (lo[j] != hi[j]) return static_cast<int>(j);
    }
    return -1;
  }

  void process(Node node, SolveStats& stats) {
    if (prune_by_bound(node.lb)) return;
    if (!prop_.run(node.lo, node.hi)) return;
    std::int64_t lb = std::max(node.lb, trivial_bound(node.lo, node.hi));
    if (prune_by_bound(lb)) return;

    int branch = first_free(node.lo, node.hi);
    if (branch < 0) {
      std::vector<int> x(node.lo.begin(), node.lo.end());
      offer(x);
      return;
    }

    int preferred = model_.cost[static_cast<std::size_t>(branch)] > 0 ? 0 : 1;
    std::shared_ptr<LpState> state;
    if (lp_enabled_) {
      state = std::make_shared<LpState>(node.warm ? *node.warm : *root_state_);
      node.warm.reset();
      std::vector<double> lbv(red_.col_var.size()), ubv(red_.col_var.size());
      for (std::size_t k = 0; k < red_.col_var.size(); ++k) {
        auto j = static_cast<std::size_t>(red_.col_var[k]);
        lbv[k] = node.lo[j];
        ubv[k] = node.hi[j];
      }
      int cap = 50 * (red_.lp.rows + red_.lp.cols) + 1000;
      LpOutcome out = solve_lp(red_.lp, *state, lbv, ubv, cap);
      stats.lp_iterations += out.iterations;
      if (out.status == LpStatus::Infeasible) {
        if (certified_infeasible(out, node.lo, node.hi)) return;
        ++stats.lp_failures;
      } else if (out.status == LpStatus::IterationLimit) {
        ++stats.lp_failures;
        state.reset();
      } else {
        if (auto cert = certified_bound(out, node.lo, node.hi)) lb = std::max(lb, *cert);
        if (prune_by_bound(lb)) return;

        std::vector<int> rounded(node.lo.begin(), node.lo.end());
        int best = -1;
        double best_frac = kIntegralTol;
        for (std::size_t k = 0; k < red_.col_var.size(); ++k) {
          auto j = static_cast<std::size_t>(red_.col_var[k]);
          double v = out.x[k];
          rounded[j] = v >= 0.5 ? 1 : 0;
          if (node.lo[j] == node.hi[j]) continue;
          double frac = std::min(v - std::floor(v), std::ceil(v) - v);
          if (frac > best_frac + 1e-12 || (best >= 0 && std::fabs(frac - best_frac) <= 1e-12 && static_cast<int>(j) < best)) {
            best_frac = frac;
            best = static_cast<int>(j);
          }
        }
        offer(rounded);
        if (prune_by_bound(lb)) return;
        if (best >= 0) branch = best;
        for (std::size_t k = 0; k < red_.col_var.size(); ++k) {
          if (red_.col_var[k] == branch) preferred = out.x[k] >= 0.5 ? 1 : 0;
        }
      }
    }

    std::shared_ptr<const LpState> warm = state;
    bool keep_warm = warm && retained_ + warm->entries() <= kRetainedEntryBudget;
    if (keep_warm) retained_ += warm->entries();
    for (int value : {1 - preferred, preferred}) {
      Node child;
      child.lo = node.lo;
      child.hi = node.hi;
      child.lo[static_cast<std::size_t>(branch)] = child.hi[static_cast<std::size_t>(branch)] =
          static_cast<signed char>(value);
      child.lb = lb;
      if (keep_warm) child.warm = warm;
      stack_.push_back(std::move(child));
    }
  }

  IntegerModel model_;
  SolveLimits limits_;
  Propagator prop_;
  std::int64_t gap_ = 0;
  ReducedLp red_;
  bool lp_enabled_ = false;
  std::int64_t root_constant_ = 0;
  std::shared_ptr<const LpState> root_state_;
  std::vector<Node> stack_;
  std::size_t retained_ = 0;
  std::int64_t incumbent_value_ = kNoIncumbent;
  std::vector<int> incumbent_;
  std::int64_t pruned_min_ = kNoIncumbent;
};

}  // namespace

SolveResult solve(const ConstraintSystem& system, const SolveLimits& limits) {
  return BranchAndBound(system, limits).run();
}

}  // namespace railnet
