#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tapf/grid_map.hpp"

namespace tapf {

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A TAPF problem: N agents with starts, M >= N targets, and a binary N x M
// eligibility matrix.
struct TapfInstance {
  std::string map_path;  // as recorded in the instance file
  std::shared_ptr<const GridGraph> graph;
  std::vector<VertexId> starts;
  std::vector<VertexId> targets;
  std::vector<std::vector<uint8_t>> eligibility;

  int agent_count() const { return static_cast<int>(starts.size()); }
  int target_count() const { return static_cast<int>(targets.size()); }
  bool eligible(int agent, int target) const { return eligibility[agent][target] != 0; }
  std::vector<int> target_set(int agent) const;
};

/// Checks the structural invariants (M >= N, distinct starts and targets,
/// passable cells, non-empty rows). Throws InstanceError.
void validate_instance(const TapfInstance& instance);

/// Parses the instance text format against an already-built graph.
TapfInstance load_instance(std::string_view text, std::shared_ptr<const GridGraph> graph);
std::string save_instance(const TapfInstance& instance);

/// Reads only the `map <path>` line of an instance file.
std::string read_instance_map_path(std::string_view text);

/// Loads an instance file, resolving its map path relative to the instance
/// file unless `map_override` is non-empty.
TapfInstance load_instance_file(const std::string& path, const std::string& map_override = {});

struct GeneratorConfig {
  int agent_count = 0;
  int target_set_size = 0;   // K
  int shared_percentage = 0; // 0..100
  uint64_t seed = 0;
};

/// floor(K * p / 100), clamped to K - 1 so that every agent keeps one unique
/// target. Throws InstanceError when no valid split exists.
int shared_target_count(const GeneratorConfig& config);

/// Draws N distinct starts and a shared pool plus per-agent unique targets,
/// uniformly without replacement over passable cells.
TapfInstance generate_instance(const GridMap& map, const GeneratorConfig& config,
                               std::string map_path = {});

// Unbiased integer in [0, bound) from a 64-bit engine. Used instead of
// std::uniform_int_distribution so generated files are identical across
// standard library implementations.
uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound);

}  // namespace tapf
