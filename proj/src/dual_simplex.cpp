#include "railnet/dual_simplex.hpp"

#include <cmath>
#include <limits>

namespace railnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPrimalTol = 1e-7;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 100;

double slack_lower(Sense s) { return s == Sense::GreaterEqual ? -kInf : 0.0; }
double slack_upper(Sense s) { return s == Sense::LessEqual ? kInf : 0.0; }

void compute_reduced(const LpProblem& lp, LpState& st) {
  const int n = lp.cols;
  st.reduced.assign(static_cast<std::size_t>(st.width), 0.0);
  for (int j = 0; j < n; ++j) st.reduced[static_cast<std::size_t>(j)] = lp.c[static_cast<std::size_t>(j)];
  for (int i = 0; i < st.rows; ++i) {
    int q = st.basis[static_cast<std::size_t>(i)];
    double cb = q < n ? lp.c[static_cast<std::size_t>(q)] : 0.0;
    if (cb == 0.0) continue;
    const double* row = &st.tableau[static_cast<std::size_t>(i) * static_cast<std::size_t>(st.width)];
    for (int j = 0; j < st.width; ++j) st.reduced[static_cast<std::size_t>(j)] -= cb * row[j];
  }
}

// Rebuilds the tableau for the current basis from the original matrix.
bool refactor(const LpProblem& lp, LpState& st) {
  const int m = st.rows;
  const int n = lp.cols;
  const std::size_t w = static_cast<std::size_t>(st.width) + 1;
  std::vector<double> mat(static_cast<std::size_t>(m) * w, 0.0);
  for (int i = 0; i < m; ++i) {
    double* row = &mat[static_cast<std::size_t>(i) * w];
    for (int j = 0; j < n; ++j) row[j] = lp.a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
    row[n + i] = 1.0;
    row[w - 1] = lp.b[static_cast<std::size_t>(i)];
  }
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  std::vector<int> new_basis(static_cast<std::size_t>(m), -1);
  for (int k = 0; k < m; ++k) {
    int q = st.basis[static_cast<std::size_t>(k)];
    int best = -1;
    double best_abs = 1e-10;
    for (int i = 0; i < m; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      double v = std::fabs(mat[static_cast<std::size_t>(i) * w + static_cast<std::size_t>(q)]);
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
    if (best < 0) return false;
    used[static_cast<std::size_t>(best)] = 1;
    new_basis[static_cast<std::size_t>(best)] = q;
    double* prow = &mat[static_cast<std::size_t>(best) * w];
    double inv = 1.0 / prow[q];
    for (std::size_t j = 0; j < w; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == best) continue;
      double* row = &mat[static_cast<std::size_t>(i) * w];
      double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
  }
  st.basis = new_basis;
  std::fill(st.position.begin(), st.position.end(), -1);
  for (int i = 0; i < m; ++i) {
    st.position[static_cast<std::size_t>(st.basis[static_cast<std::size_t>(i)])] = i;
    const double* row = &mat[static_cast<std::size_t>(i) * w];
    std::copy(row, row + st.width, &st.tableau[static_cast<std::size_t>(i) * static_cast<std::size_t>(st.width)]);
    st.beta[static_cast<std::size_t>(i)] = row[w - 1];
  }
  compute_reduced(lp, st);
  st.pivots_since_refactor = 0;
  return true;
}

}  // namespace

LpState initial_lp_state(const LpProblem& lp) {
  LpState st;
  const int m = lp.rows;
  const int n = lp.cols;
  st.rows = m;
  st.width = n + m;
  st.tableau.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(st.width), 0.0);
  for (int i = 0; i < m; ++i) {
    double* row = &st.tableau[static_cast<std::size_t>(i) * static_cast<std::size_t>(st.width)];
    for (int j = 0; j < n; ++j) row[j] = lp.a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
    row[n + i] = 1.0;
  }
  st.beta = lp.b;
  st.basis.resize(static_cast<std::size_t>(m));
  st.position.assign(static_cast<std::size_t>(st.width), -1);
  for (int i = 0; i < m; ++i) {
    st.basis[static_cast<std::size_t>(i)] = n + i;
    st.position[static_cast<std::size_t>(n + i)] = i;
  }
  st.at_upper.assign(static_cast<std::size_t>(st.width), 0);
  compute_reduced(lp, st);
  return st;
}

LpOutcome solve_lp(const LpProblem& lp, LpState& st, const std::vector<double>& lb, const std::vector<double>& ub,
                   int max_iterations) {
  const int m = st.rows;
  const int n = lp.cols;
  const int width = st.width;
  const auto W = static_cast<std::size_t>(width);

  std::vector<double> lo(W), hi(W);
  for (int j = 0; j < n; ++j) {
    lo[static_cast<std::size_t>(j)] = lb[static_cast<std::size_t>(j)];
    hi[static_cast<std::size_t>(j)] = ub[static_cast<std::size_t>(j)];
  }
  for (int i = 0; i < m; ++i) {
    lo[static_cast<std::size_t>(n + i)] = slack_lower(lp.sense[static_cast<std::size_t>(i)]);
    hi[static_cast<std::size_t>(n + i)] = slack_upper(lp.sense[static_cast<std::size_t>(i)]);
  }

  // Place nonbasic columns at the bound their reduced cost prefers.
  auto place_nonbasic = [&] {
    for (int j = 0; j < width; ++j) {
      auto uj = static_cast<std::size_t>(j);
      if (st.position[uj] >= 0) continue;
      if (lo[uj] == -kInf) st.at_upper[uj] = 1;
      else if (hi[uj] == kInf) st.at_upper[uj] = 0;
      else if (st.reduced[uj] < -kDualTol) st.at_upper[uj] = 1;
      else if (st.reduced[uj] > kDualTol) st.at_upper[uj] = 0;
    }
  };
  place_nonbasic();

  LpOutcome out;
  std::vector<double> xb(static_cast<std::size_t>(m));
  std::vector<int> nonzero;
  std::vector<double> nonzero_val;
  std::vector<std::size_t> pattern;

  auto nonbasic_value = [&](std::size_t j) {
    if (lo[j] == hi[j]) return lo[j];
    return st.at_upper[j] ? hi[j] : lo[j];
  };

  for (;;) {
    if (st.pivots_since_refactor >= kRefactorEvery) {
      if (!refactor(lp, st)) st = initial_lp_state(lp);
      place_nonbasic();
    }

    nonzero.clear();
    nonzero_val.clear();
    for (int j = 0; j < width; ++j) {
      auto uj = static_cast<std::size_t>(j);
      if (st.position[uj] >= 0) continue;
      double v = nonbasic_value(uj);
      if (v != 0.0) {
        nonzero.push_back(j);
        nonzero_val.push_back(v);
      }
    }
    int leave = -1;
    double worst = kPrimalTol;
    for (int i = 0; i < m; ++i) {
      const double* row = &st.tableau[static_cast<std::size_t>(i) * W];
      double v = st.beta[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < nonzero.size(); ++k) v -= row[nonzero[k]] * nonzero_val[k];
      xb[static_cast<std::size_t>(i)] = v;
      auto q = static_cast<std::size_t>(st.basis[static_cast<std::size_t>(i)]);
      double infeas = std::max(lo[q] - v, v - hi[q]);
      if (infeas > worst) {
        worst = infeas;
        leave = i;
      }
    }

    if (leave < 0) {
      out.status = LpStatus::Optimal;
      break;
    }
    if (out.iterations >= max_iterations) {
      out.status = LpStatus::IterationLimit;
      return out;
    }

    auto q_leave = static_cast<std::size_t>(st.basis[static_cast<std::size_t>(leave)]);
    const double s = xb[static_cast<std::size_t>(leave)] < lo[q_leave] ? 1.0 : -1.0;
    double* prow = &st.tableau[static_cast<std::size_t>(leave) * W];

    // Harris two-pass ratio test.
    double theta_max = kInf;
    for (int j = 0; j < width; ++j) {
      auto uj = static_cast<std::size_t>(j);
      if (st.position[uj] >= 0 || lo[uj] == hi[uj]) continue;
      double alpha = s * prow[j];
      bool upper = st.at_upper[uj] != 0;
      if (!upper && alpha < -kPivotTol) {
        double d = std::max(st.reduced[uj], 0.0);
        theta_max = std::min(theta_max, (d + kDualTol) / -alpha);
      } else if (upper && alpha > kPivotTol) {
        double d = std::max(-st.reduced[uj], 0.0);
        theta_max = std::min(theta_max, (d + kDualTol) / alpha);
      }
    }
    if (theta_max == kInf) {
      out.status = LpStatus::Infeasible;
      out.ray.resize(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) out.ray[static_cast<std::size_t>(i)] = s * prow[n + i];
      return out;
    }
    int enter = -1;
    double best_alpha = 0.0;
    for (int j = 0; j < width; ++j) {
      auto uj = static_cast<std::size_t>(j);
      if (st.position[uj] >= 0 || lo[uj] == hi[uj]) continue;
      double alpha = s * prow[j];
      bool upper = st.at_upper[uj] != 0;
      double d;
      if (!upper && alpha < -kPivotTol) d = std::max(st.reduced[uj], 0.0);
      else if (upper && alpha > kPivotTol) d = std::max(-st.reduced[uj], 0.0);
      else continue;
      if (d / std::fabs(alpha) <= theta_max && std::fabs(alpha) > best_alpha) {
        best_alpha = std::fabs(alpha);
        enter = j;
      }
    }

    // Pivot on (leave, enter).
    auto ue = static_cast<std::size_t>(enter);
    double pivot = prow[enter];
    double theta_d = st.reduced[ue] / pivot;
    for (std::size_t j = 0; j < W; ++j) {
      if (prow[j] != 0.0) st.reduced[j] -= theta_d * prow[j];
    }
    st.reduced[ue] = 0.0;
    double inv = 1.0 / pivot;
    pattern.clear();
    for (std::size_t j = 0; j < W; ++j) {
      if (prow[j] == 0.0) continue;
      prow[j] *= inv;
      pattern.push_back(j);
    }
    prow[enter] = 1.0;
    st.beta[static_cast<std::size_t>(leave)] *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double* row = &st.tableau[static_cast<std::size_t>(i) * W];
      double f = row[enter];
      if (f == 0.0) continue;
      for (std::size_t j : pattern) row[j] -= f * prow[j];
      row[enter] = 0.0;
      st.beta[static_cast<std::size_t>(i)] -= f * st.beta[static_cast<std::size_t>(leave)];
    }
    st.position[q_leave] = -1;
    st.at_upper[q_leave] = s < 0 ? 1 : 0;
    st.basis[static_cast<std::size_t>(leave)] = enter;
    st.position[ue] = leave;
    ++st.pivots_since_refactor;
    ++out.iterations;
  }

  out.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    auto uj = static_cast<std::size_t>(j);
    int p = st.position[uj];
    out.x[uj] = p >= 0 ? xb[static_cast<std::size_t>(p)] : nonbasic_value(uj);
    out.objective += lp.c[uj] * out.x[uj];
  }
  out.duals.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) out.duals[static_cast<std::size_t>(i)] = -st.reduced[static_cast<std::size_t>(n + i)];
  return out;
}

}  // namespace railnet
