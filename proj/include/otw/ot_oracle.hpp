#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace otw {

// Optimal coupling returned by the transportation solver. Row sums equal the
// supplies and column sums the demands (within 1e-9); entries are clamped to
// be nonnegative on output. row_duals/col_duals are the simplex potentials
// of the final basis, kept so callers can verify the optimality certificate
// (all reduced costs >= -1e-9).
struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> plan;  // row-major rows x cols
  double objective = 0.0;
  std::vector<double> supplies;
  std::vector<double> demands;
  std::vector<double> row_duals;
  std::vector<double> col_duals;

  double at(std::size_t i, std::size_t j) const { return plan[i * cols + j]; }
};

// Exact transportation-problem solver: northwest-corner start, then
// potential/cycle pivoting until no reduced cost is negative. Entering and
// leaving cells are picked by smallest index (Bland's rule) so the heavily
// degenerate |i-j| cost instances terminate. Preconditions: totals balanced
// within 1e-9, supplies/demands nonnegative, costs finite and nonnegative.
TransportPlan solve_transport_lp(const std::vector<double>& supplies,
                                 const std::vector<double>& demands,
                                 const std::vector<std::vector<double>>& costs);

// Wasserstein-1 between balanced nonnegative sequences on the line:
// sum_i |A(i) - B(i)| over the cumulative sums. O(n).
double wasserstein_1d_closed_form(const std::vector<double>& a,
                                  const std::vector<double>& b);

// Appends a sink element to both sequences: a gets total mass of b and vice
// versa, so the extended pair is exactly balanced.
std::pair<std::vector<double>, std::vector<double>> extend_with_sink(
    const std::vector<double>& a, const std::vector<double>& b);

// Ground cost over the sink-extended index set: |i-j| between real
// positions, waste cost m to or from the sink, 0 sink-to-sink.
struct SinkCostMatrix {
  std::size_t base_size = 0;
  double waste_cost = 0.0;
  std::vector<std::vector<double>> entries;  // (n+1) x (n+1)
};

SinkCostMatrix build_sink_cost_matrix(std::size_t n, double m);

inline constexpr std::size_t kOracleLengthCap = 16;

// Exact unbalanced OT distance: the LP objective on the sink-extended
// problem. Small-n oracle only; lengths above the cap are rejected.
double unbalanced_ot(const std::vector<double>& a, const std::vector<double>& b,
                     double m, std::size_t length_cap = kOracleLengthCap);

struct BoundCheck {
  double lhs = 0.0;   // exact / shifted value
  double rhs = 0.0;   // bound
  bool holds = false;
};

// Verifies that the exact unbalanced OT distance never exceeds the
// linear-time warping value with the same waste cost (full window, beta 0).
BoundCheck check_upper_bound(const std::vector<double>& a,
                          const std::vector<double>& b, double m);

struct ShiftCheck {
  double delta = 0.0;  // |W(a, shifted b) - W(a, b)|
  double bound = 0.0;  // t * sum(a)
  bool holds = false;
};

// Shifts b right by t positions (b must be zero in its last t entries) and
// checks that the exact unbalanced OT distance moved by at most t * sum(a).
ShiftCheck check_shift_sensitivity(const std::vector<double>& a,
                                   const std::vector<double>& b,
                                   std::size_t t, double m);

}  // namespace otw
