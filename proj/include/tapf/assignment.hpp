#pragma once

#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "tapf/types.hpp"

namespace tapf {

/// Rows x columns table of nonnegative costs, kInfiniteCost for forbidden
/// pairs. Rows are shared between copies, so copying a matrix and replacing
/// one row costs O(rows + cols).
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(int rows, int cols, Cost fill = kInfiniteCost);
  static CostMatrix from_rows(const std::vector<std::vector<Cost>>& rows);

  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }
  Cost at(int row, int col) const { return (*rows_[row])[col]; }
  std::span<const Cost> row(int r) const { return *rows_[r]; }

  void set_row(int r, std::vector<Cost> values);
  void set(int row, int col, Cost value);

 private:
  int cols_ = 0;
  std::vector<std::shared_ptr<const std::vector<Cost>>> rows_;
};

// Row -> column map, injective and total over rows.
struct Assignment {
  std::vector<int> column_of_row;
  Cost total_cost = kInfiniteCost;

  bool feasible() const { return is_finite(total_cost); }
};

Cost assignment_cost(const CostMatrix& costs, const std::vector<int>& column_of_row);

/// Potentials and matching of the shortest-augmenting-path Hungarian method,
/// kept square by M - N implicit zero-cost rows so that a changed row is
/// repaired with a single augmentation.
class HungarianState {
 public:
  const CostMatrix& costs() const { return costs_; }
  Assignment assignment() const;

  // All reduced costs >= 0 and every matched pair has reduced cost 0.
  bool satisfies_complementary_slackness() const;

 private:
  friend std::pair<Assignment, HungarianState> hungarian_solve(const CostMatrix& costs);
  friend Assignment dynamic_hungarian_update(HungarianState& state, int row,
                                             std::vector<Cost> new_costs);

  // 1-based rows 1..M (rows > N are padding) and columns 1..M; index 0 is
  // scratch space for the augmentation.
  Cost padded_cost(int row, int col) const {
    return row <= costs_.rows() ? costs_.at(row - 1, col - 1) : 0;
  }
  void augment_from(int row);

  CostMatrix costs_;
  std::vector<Cost> row_potential_;
  std::vector<Cost> col_potential_;
  std::vector<int> row_of_col_;
};

/// Minimum-cost assignment of every row to a distinct column (N <= M).
/// Throws std::invalid_argument when N > M. An infeasible matrix yields an
/// assignment whose total_cost is not finite.
std::pair<Assignment, HungarianState> hungarian_solve(const CostMatrix& costs);

/// Replaces one row and restores optimality in O(M^2) with one augmentation.
Assignment dynamic_hungarian_update(HungarianState& state, int row, std::vector<Cost> new_costs);

/// Enumerates finite-cost assignments in non-decreasing cost order by
/// Murty-style partitioning; each subproblem is solved by hungarian_solve.
class KBestAssignments {
 public:
  explicit KBestAssignments(CostMatrix costs);

  // Next assignment, or nullopt when exhausted.
  std::optional<Assignment> next();
  int produced() const { return produced_; }

 private:
  struct Subproblem {
    std::vector<std::pair<int, int>> forced;
    std::vector<std::pair<int, int>> forbidden;
    Assignment solution;
    uint64_t sequence = 0;
  };
  struct Later {
    bool operator()(const Subproblem& a, const Subproblem& b) const {
      if (a.solution.total_cost != b.solution.total_cost) return a.solution.total_cost > b.solution.total_cost;
      return a.sequence > b.sequence;
    }
  };

  void solve_and_queue(Subproblem sub);

  CostMatrix costs_;
  std::priority_queue<Subproblem, std::vector<Subproblem>, Later> queue_;
  uint64_t sequence_ = 0;
  int produced_ = 0;
};

}  // namespace tapf
