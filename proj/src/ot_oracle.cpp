#include "otw/ot_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "otw/distance.hpp"
#include "otw/errors.hpp"
#include "otw/series.hpp"

namespace otw {

namespace {

constexpr double kBalanceTol = 1e-9;
constexpr double kPivotTol = 1e-10;

double checked_sum(const std::vector<double>& v, const char* what) {
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0)) {
      throw DataError(std::string(what) + ": negative entry at index " +
                      std::to_string(i));
    }
    total += v[i];
  }
  return total;
}

}  // namespace

TransportPlan solve_transport_lp(const std::vector<double>& supplies,
                                 const std::vector<double>& demands,
                                 const std::vector<std::vector<double>>& costs) {
  const std::size_t p = supplies.size();
  const std::size_t q = demands.size();
  if (p == 0 || q == 0) throw DataError("solve_transport_lp: empty problem");
  const double total_supply = checked_sum(supplies, "solve_transport_lp supplies");
  const double total_demand = checked_sum(demands, "solve_transport_lp demands");
  if (std::fabs(total_supply - total_demand) > kBalanceTol) {
    throw DataError("solve_transport_lp: totals differ by " +
                    std::to_string(total_supply - total_demand));
  }
  if (costs.size() != p) throw DataError("solve_transport_lp: cost row count mismatch");
  for (const auto& row : costs) {
    if (row.size() != q) throw DataError("solve_transport_lp: cost column count mismatch");
    for (double c : row) {
      if (!std::isfinite(c) || c < 0.0) {
        throw DataError("solve_transport_lp: costs must be finite and nonnegative");
      }
    }
  }

  std::vector<double> alloc(p * q, 0.0);
  std::vector<char> basic(p * q, 0);

  // Northwest-corner start. Advancing one index per step (rows first on
  // ties) yields exactly p + q - 1 basic cells, some possibly zero.
  {
    std::vector<double> rs = supplies, rd = demands;
    std::size_t i = 0, j = 0;
    while (true) {
      const double amount = std::min(rs[i], rd[j]);
      alloc[i * q + j] = amount;
      basic[i * q + j] = 1;
      rs[i] -= amount;
      rd[j] -= amount;
      if (i == p - 1 && j == q - 1) break;
      if (i == p - 1) {
        ++j;
      } else if (j == q - 1) {
        ++i;
      } else if (rs[i] <= rd[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  std::vector<double> u(p), v(q);
  const double unset = std::numeric_limits<double>::quiet_NaN();

  auto compute_potentials = [&]() {
    std::fill(u.begin(), u.end(), unset);
    std::fill(v.begin(), v.end(), unset);
    u[0] = 0.0;
    // The basis is a spanning tree of the bipartite row/column graph, so a
    // sweep that propagates along basic cells fixes every potential.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
          if (!basic[i * q + j]) continue;
          const bool have_u = !std::isnan(u[i]);
          const bool have_v = !std::isnan(v[j]);
          if (have_u && !have_v) {
            v[j] = costs[i][j] - u[i];
            changed = true;
          } else if (!have_u && have_v) {
            u[i] = costs[i][j] - v[j];
            changed = true;
          }
        }
      }
    }
  };

  // Path from row `row` to column `col` through the basis tree, returned as
  // the sequence of basic cells along it.
  auto find_path = [&](std::size_t row, std::size_t col) {
    const std::size_t nodes = p + q;  // rows then columns
    std::vector<int> parent_node(nodes, -1);
    std::vector<int> parent_cell(nodes, -1);
    std::vector<char> seen(nodes, 0);
    std::vector<std::size_t> queue;
    queue.push_back(row);
    seen[row] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t node = queue[head];
      if (node < p) {
        for (std::size_t j = 0; j < q; ++j) {
          if (!basic[node * q + j] || seen[p + j]) continue;
          seen[p + j] = 1;
          parent_node[p + j] = static_cast<int>(node);
          parent_cell[p + j] = static_cast<int>(node * q + j);
          queue.push_back(p + j);
        }
      } else {
        const std::size_t j = node - p;
        for (std::size_t i = 0; i < p; ++i) {
          if (!basic[i * q + j] || seen[i]) continue;
          seen[i] = 1;
          parent_node[i] = static_cast<int>(node);
          parent_cell[i] = static_cast<int>(i * q + j);
          queue.push_back(i);
        }
      }
    }
    std::vector<std::size_t> cells;
    std::size_t node = p + col;
    while (parent_node[node] != -1) {
      cells.push_back(static_cast<std::size_t>(parent_cell[node]));
      node = static_cast<std::size_t>(parent_node[node]);
    }
    std::reverse(cells.begin(), cells.end());  // now runs row -> ... -> col
    return cells;
  };

  const std::size_t max_pivots = 1000 * (p + q) * (p + q);
  std::size_t pivots = 0;
  while (true) {
    compute_potentials();
    // Entering cell: smallest index with negative reduced cost (Bland).
    std::size_t enter = p * q;
    for (std::size_t i = 0; i < p && enter == p * q; ++i) {
      for (std::size_t j = 0; j < q; ++j) {
        if (basic[i * q + j]) continue;
        if (costs[i][j] - u[i] - v[j] < -kPivotTol) {
          enter = i * q + j;
          break;
        }
      }
    }
    if (enter == p * q) break;  // optimal
    if (++pivots > max_pivots) {
      throw DataError("solve_transport_lp: pivot limit exceeded");
    }

    const std::size_t ei = enter / q;
    const std::size_t ej = enter % q;
    const auto path = find_path(ei, ej);
    // Cycle: entering cell (+), then path cells alternating -, +, ...
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = p * q;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const double value = alloc[path[k]];
      if (value < theta || (value == theta && path[k] < leave)) {
        theta = value;
        leave = path[k];
      }
    }
    alloc[enter] += theta;
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (k % 2 == 0) {
        alloc[path[k]] -= theta;
      } else {
        alloc[path[k]] += theta;
      }
    }
    alloc[leave] = 0.0;
    basic[leave] = 0;
    basic[enter] = 1;
  }

  TransportPlan out;
  out.rows = p;
  out.cols = q;
  out.supplies = supplies;
  out.demands = demands;
  out.plan = std::move(alloc);
  double objective = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      double& cell = out.plan[i * q + j];
      if (cell < 0.0) cell = 0.0;  // clamp pivot round-off
      objective += cell * costs[i][j];
    }
  }
  out.objective = objective;
  out.row_duals = u;
  out.col_duals = v;
  return out;
}

double wasserstein_1d_closed_form(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw DataError("wasserstein_1d_closed_form: lengths differ");
  }
  const double sa = checked_sum(a, "wasserstein_1d_closed_form a");
  const double sb = checked_sum(b, "wasserstein_1d_closed_form b");
  if (std::fabs(sa - sb) > kBalanceTol) {
    throw DataError("wasserstein_1d_closed_form: totals differ by " +
                    std::to_string(sa - sb));
  }
  double acc_a = 0.0, acc_b = 0.0, total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc_a += a[i];
    acc_b += b[i];
    total += std::fabs(acc_a - acc_b);
  }
  return total;
}

std::pair<std::vector<double>, std::vector<double>> extend_with_sink(
    const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DataError("extend_with_sink: lengths differ");
  const double sa = checked_sum(a, "extend_with_sink a");
  const double sb = checked_sum(b, "extend_with_sink b");
  std::vector<double> a_hat = a, b_hat = b;
  a_hat.push_back(sb);
  b_hat.push_back(sa);
  return {std::move(a_hat), std::move(b_hat)};
}

SinkCostMatrix build_sink_cost_matrix(std::size_t n, double m) {
  if (n < 1) throw DataError("build_sink_cost_matrix: n must be >= 1");
  if (m < 0.0) throw DataError("build_sink_cost_matrix: waste cost must be >= 0");
  SinkCostMatrix out;
  out.base_size = n;
  out.waste_cost = m;
  out.entries.assign(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      if (i < n && j < n) {
        out.entries[i][j] = i > j ? static_cast<double>(i - j) : static_cast<double>(j - i);
      } else if (i == n && j == n) {
        out.entries[i][j] = 0.0;
      } else {
        out.entries[i][j] = m;
      }
    }
  }
  return out;
}

double unbalanced_ot(const std::vector<double>& a, const std::vector<double>& b,
                     double m, std::size_t length_cap) {
  if (a.size() != b.size()) throw DataError("unbalanced_ot: lengths differ");
  if (a.empty()) throw DataError("unbalanced_ot: empty sequences");
  if (a.size() > length_cap) {
    throw DataError("unbalanced_ot: length " + std::to_string(a.size()) +
                    " exceeds the oracle cap of " + std::to_string(length_cap));
  }
  const auto [a_hat, b_hat] = extend_with_sink(a, b);
  const auto costs = build_sink_cost_matrix(a.size(), m);
  return solve_transport_lp(a_hat, b_hat, costs.entries).objective;
}

BoundCheck check_upper_bound(const std::vector<double>& a,
                          const std::vector<double>& b, double m) {
  BoundCheck out;
  out.lhs = unbalanced_ot(a, b, m);
  OtwParams params;
  params.m = m;
  params.s = 0;  // full window
  params.beta = 0.0;
  params.sign_strategy = SignStrategy::Direct;
  out.rhs = otw(TimeSeries(a), TimeSeries(b), params);
  out.holds = out.lhs <= out.rhs + kBalanceTol;
  return out;
}

ShiftCheck check_shift_sensitivity(const std::vector<double>& a,
                                   const std::vector<double>& b,
                                   std::size_t t, double m) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DataError("check_shift_sensitivity: lengths differ");
  if (t >= n) throw DataError("check_shift_sensitivity: shift must be smaller than the length");
  for (std::size_t i = n - t; i < n; ++i) {
    if (b[i] != 0.0) {
      throw DataError("check_shift_sensitivity: b must be zero in its last " +
                      std::to_string(t) + " entries");
    }
  }
  std::vector<double> shifted(n, 0.0);
  for (std::size_t i = t; i < n; ++i) shifted[i] = b[i - t];

  ShiftCheck out;
  const double base = unbalanced_ot(a, b, m);
  const double moved = unbalanced_ot(a, shifted, m);
  out.delta = std::fabs(moved - base);
  out.bound = static_cast<double>(t) * checked_sum(a, "check_shift_sensitivity a");
  out.holds = out.delta <= out.bound + kBalanceTol;
  return out;
}

}  // namespace otw
