#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tapf/grid_map.hpp"

namespace tapf {

using Cost = int64_t;

// Larger than any achievable flowtime; sums of a few sentinels still fit in
// 64 bits, so assignment arithmetic needs no special casing.
inline constexpr Cost kInfiniteCost = Cost{1} << 40;

inline bool is_finite(Cost c) { return c < kInfiniteCost; }

// [v_0, ..., v_T]; cost is T.
using Path = std::vector<VertexId>;

inline Cost path_cost(const Path& path) { return static_cast<Cost>(path.size()) - 1; }

/// Suboptimality factor w >= 1 held as an exact rational num/den, so that the
/// bound test `cost <= w * lb` is evaluated exactly on integer costs.
class SuboptimalityFactor {
 public:
  static constexpr int64_t kDenominator = 1'000'000;

  SuboptimalityFactor() = default;
  // Rounds to six decimal places.
  explicit SuboptimalityFactor(double w) : num_(std::llround(w * kDenominator)) {
    if (!(w >= 1.0) || !std::isfinite(w)) throw std::invalid_argument("suboptimality factor must be >= 1");
  }

  double value() const { return static_cast<double>(num_) / kDenominator; }
  bool is_optimal() const { return num_ == kDenominator; }

  // cost <= w * lb, exactly. Infinite lb admits everything.
  bool admits(Cost cost, Cost lb) const {
    if (!is_finite(lb)) return true;
    return static_cast<__int128>(cost) * kDenominator <= static_cast<__int128>(lb) * num_;
  }
  // Largest integer cost admitted by lb: floor(w * lb).
  Cost bound(Cost lb) const {
    if (!is_finite(lb)) return kInfiniteCost;
    return static_cast<Cost>(static_cast<__int128>(lb) * num_ / kDenominator);
  }

  bool operator==(const SuboptimalityFactor&) const = default;

 private:
  int64_t num_ = kDenominator;
};

struct SearchTimeout : std::runtime_error {
  SearchTimeout() : std::runtime_error("time limit exceeded") {}
};

class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() : at_(Clock::time_point::max()) {}
  explicit Deadline(double seconds)
      : at_(seconds <= 0 ? Clock::now()
                         : Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                              std::chrono::duration<double>(seconds))) {}

  bool expired() const { return at_ != Clock::time_point::max() && Clock::now() >= at_; }
  void check() const {
    if (expired()) throw SearchTimeout();
  }

 private:
  Clock::time_point at_;
};

}  // namespace tapf
