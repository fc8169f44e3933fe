#include "tapf/assignment.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tapf {

namespace {
constexpr Cost kUnreached = std::numeric_limits<Cost>::max() / 4;
}

CostMatrix::CostMatrix(int rows, int cols, Cost fill) : cols_(cols) {
  auto shared = std::make_shared<const std::vector<Cost>>(static_cast<size_t>(cols), fill);
  rows_.assign(static_cast<size_t>(rows), shared);
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<Cost>>& rows) {
  CostMatrix m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int r = 0; r < m.rows(); ++r) m.set_row(r, rows[r]);
  return m;
}

void CostMatrix::set_row(int r, std::vector<Cost> values) {
  if (values.size() != static_cast<size_t>(cols_)) throw std::invalid_argument("row length mismatch");
  for (Cost& c : values) c = std::min(c, kInfiniteCost);
  rows_[r] = std::make_shared<const std::vector<Cost>>(std::move(values));
}

void CostMatrix::set(int row, int col, Cost value) {
  std::vector<Cost> copy(rows_[row]->begin(), rows_[row]->end());
  copy[col] = value;
  set_row(row, std::move(copy));
}

Cost assignment_cost(const CostMatrix& costs, const std::vector<int>& column_of_row) {
  Cost total = 0;
  for (int r = 0; r < costs.rows(); ++r) total += costs.at(r, column_of_row[r]);
  return std::min(total, kInfiniteCost);
}

Assignment HungarianState::assignment() const {
  Assignment result;
  const int n = costs_.rows();
  result.column_of_row.assign(static_cast<size_t>(n), -1);
  for (int j = 1; j < static_cast<int>(row_of_col_.size()); ++j) {
    const int r = row_of_col_[j];
    if (r >= 1 && r <= n) result.column_of_row[r - 1] = j - 1;
  }
  result.total_cost = assignment_cost(costs_, result.column_of_row);
  return result;
}

bool HungarianState::satisfies_complementary_slackness() const {
  const int m = costs_.cols();
  for (int r = 1; r <= m; ++r) {
    for (int j = 1; j <= m; ++j) {
      if (padded_cost(r, j) - row_potential_[r] - col_potential_[j] < 0) return false;
    }
  }
  for (int j = 1; j <= m; ++j) {
    const int r = row_of_col_[j];
    if (r < 1 || padded_cost(r, j) - row_potential_[r] - col_potential_[j] != 0) return false;
  }
  return true;
}

// One phase of the shortest-augmenting-path method: grows an alternating
// tree from the free `row` until it reaches a free column, adjusting the
// potentials so all reduced costs stay nonnegative.
void HungarianState::augment_from(int row) {
  const int m = costs_.cols();
  std::vector<Cost> min_slack(static_cast<size_t>(m) + 1, kUnreached);
  std::vector<int> way(static_cast<size_t>(m) + 1, 0);
  std::vector<char> used(static_cast<size_t>(m) + 1, 0);
  auto& u = row_potential_;
  auto& v = col_potential_;
  auto& p = row_of_col_;

  p[0] = row;
  int j0 = 0;
  do {
    used[j0] = 1;
    const int i0 = p[j0];
    Cost delta = kUnreached;
    int j1 = 0;
    for (int j = 1; j <= m; ++j) {
      if (used[j]) continue;
      const Cost reduced = padded_cost(i0, j) - u[i0] - v[j];
      if (reduced < min_slack[j]) {
        min_slack[j] = reduced;
        way[j] = j0;
      }
      if (min_slack[j] < delta) {
        delta = min_slack[j];
        j1 = j;
      }
    }
    for (int j = 0; j <= m; ++j) {
      if (used[j]) {
        u[p[j]] += delta;
        v[j] -= delta;
      } else {
        min_slack[j] -= delta;
      }
    }
    j0 = j1;
  } while (p[j0] != 0);
  do {
    const int j1 = way[j0];
    p[j0] = p[j1];
    j0 = j1;
  } while (j0 != 0);
}

std::pair<Assignment, HungarianState> hungarian_solve(const CostMatrix& costs) {
  const int n = costs.rows();
  const int m = costs.cols();
  if (n > m) throw std::invalid_argument("assignment needs rows <= columns");

  HungarianState state;
  state.costs_ = costs;
  state.row_potential_.assign(static_cast<size_t>(m) + 1, 0);
  state.col_potential_.assign(static_cast<size_t>(m) + 1, 0);
  state.row_of_col_.assign(static_cast<size_t>(m) + 1, 0);
  // Only the real rows are augmented; columns left free keep potential 0,
  // which is exactly what the zero-cost padding rows need to be tight there.
  for (int r = 1; r <= n; ++r) state.augment_from(r);
  int padding = n;
  for (int j = 1; j <= m; ++j) {
    if (state.row_of_col_[j] == 0) state.row_of_col_[j] = ++padding;
  }
  Assignment result = state.assignment();
  return {std::move(result), std::move(state)};
}

Assignment dynamic_hungarian_update(HungarianState& state, int row, std::vector<Cost> new_costs) {
  const int n = state.costs_.rows();
  const int m = state.costs_.cols();
  if (row < 0 || row >= n) throw std::out_of_range("assignment row out of range");
  state.costs_.set_row(row, std::move(new_costs));

  const int r = row + 1;
  for (int j = 1; j <= m; ++j) {
    if (state.row_of_col_[j] == r) state.row_of_col_[j] = 0;
  }
  Cost lowest = kUnreached;
  for (int j = 1; j <= m; ++j) {
    lowest = std::min(lowest, state.padded_cost(r, j) - state.col_potential_[j]);
  }
  state.row_potential_[r] = lowest;
  state.augment_from(r);
  return state.assignment();
}

KBestAssignments::KBestAssignments(CostMatrix costs) : costs_(std::move(costs)) {
  solve_and_queue(Subproblem{});
}

void KBestAssignments::solve_and_queue(Subproblem sub) {
  CostMatrix restricted = costs_;
  for (const auto& [r, c] : sub.forbidden) restricted.set(r, c, kInfiniteCost);
  for (const auto& [r, c] : sub.forced) {
    std::vector<Cost> row(static_cast<size_t>(costs_.cols()), kInfiniteCost);
    row[c] = costs_.at(r, c);
    restricted.set_row(r, std::move(row));
    for (int other = 0; other < costs_.rows(); ++other) {
      if (other != r && is_finite(restricted.at(other, c))) restricted.set(other, c, kInfiniteCost);
    }
  }
  auto [solution, state] = hungarian_solve(restricted);
  if (!solution.feasible()) return;
  sub.solution = std::move(solution);
  sub.sequence = sequence_++;
  queue_.push(std::move(sub));
}

std::optional<Assignment> KBestAssignments::next() {
  if (queue_.empty()) return std::nullopt;
  Subproblem best = queue_.top();
  queue_.pop();
  const auto& cols = best.solution.column_of_row;

  // Partition the remaining solution space of `best`: child k fixes the
  // solution's pairs for the free rows before k and excludes its pair at k.
  std::vector<char> is_forced(static_cast<size_t>(costs_.rows()), 0);
  for (const auto& [r, c] : best.forced) is_forced[r] = 1;
  std::vector<std::pair<int, int>> forced = best.forced;
  for (int k = 0; k < costs_.rows(); ++k) {
    if (is_forced[k]) continue;
    Subproblem child;
    child.forced = forced;
    child.forbidden = best.forbidden;
    child.forbidden.emplace_back(k, cols[k]);
    solve_and_queue(std::move(child));
    forced.emplace_back(k, cols[k]);
  }
  ++produced_;
  return std::move(best.solution);
}

}  // namespace tapf
