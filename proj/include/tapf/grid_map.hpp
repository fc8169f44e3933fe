#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tapf {

// Vertex ids are cell indices (row * width + col), blocked cells included in
// the id space but never present in any adjacency list.
using VertexId = int;

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

class MapParseError : public std::runtime_error {
 public:
  MapParseError(int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Passability grid as read from a MovingAI .map file.
struct GridMap {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> passable;  // row-major, width * height

  bool is_passable(int row, int col) const {
    return row >= 0 && row < height && col >= 0 && col < width &&
           passable[static_cast<size_t>(row) * width + col] != 0;
  }
  int passable_count() const;

  bool operator==(const GridMap&) const = default;
};

/// Parses MovingAI map text. Throws MapParseError naming the offending
/// line/column (1-based).
GridMap parse_map(std::string_view text);
GridMap load_map_file(const std::string& path);

/// Serializes to MovingAI text with LF line endings. Blocked cells are
/// written as '@'.
std::string serialize_map(const GridMap& map);

/// Undirected 4-connected graph over the passable cells of a GridMap. The
/// wait action is implicit at every vertex and not stored.
class GridGraph {
 public:
  GridGraph() = default;
  explicit GridGraph(const GridMap& map);

  int width() const { return width_; }
  int height() const { return height_; }
  // Size of the vertex id space (width * height).
  int cell_count() const { return width_ * height_; }
  // Number of passable cells.
  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return edge_count_; }

  bool is_vertex(VertexId v) const {
    return v >= 0 && v < cell_count() && passable_[v] != 0;
  }
  const std::vector<VertexId>& neighbors(VertexId v) const { return adjacency_[v]; }
  bool adjacent(VertexId u, VertexId v) const;

  VertexId vertex_at(int row, int col) const { return row * width_ + col; }
  Cell cell_of(VertexId v) const { return {v / width_, v % width_}; }

  // All passable vertices in increasing id order.
  const std::vector<VertexId>& vertices() const { return vertices_; }

 private:
  int width_ = 0;
  int height_ = 0;
  int vertex_count_ = 0;
  int edge_count_ = 0;
  std::vector<uint8_t> passable_;
  std::vector<std::vector<VertexId>> adjacency_;
  std::vector<VertexId> vertices_;
};

/// Breadth-first distances from `source` (-1 for unreachable).
std::vector<int> bfs_distances(const GridGraph& graph, VertexId source);

}  // namespace tapf
