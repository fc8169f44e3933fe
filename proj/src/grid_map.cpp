#include "tapf/grid_map.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <sstream>

namespace tapf {

MapParseError::MapParseError(int line, int column, const std::string& what)
    : std::runtime_error("map line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

int GridMap::passable_count() const {
  return static_cast<int>(std::count(passable.begin(), passable.end(), uint8_t{1}));
}

namespace {

std::string_view rstrip(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(rstrip(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  return lines;
}

int parse_header_value(std::string_view line, std::string_view key, int line_no) {
  if (line.substr(0, key.size()) != key || line.size() <= key.size() ||
      line[key.size()] != ' ') {
    throw MapParseError(line_no, 1, "expected '" + std::string(key) + " <int>'");
  }
  std::string_view rest = line.substr(key.size() + 1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc{} || ptr != rest.data() + rest.size() || value < 1) {
    throw MapParseError(line_no, static_cast<int>(key.size()) + 2,
                        "invalid " + std::string(key) + " value");
  }
  return value;
}

}  // namespace

GridMap parse_map(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.size() < 4) throw MapParseError(static_cast<int>(lines.size()) + 1, 1, "truncated header");
  if (lines[0].substr(0, 5) != "type ") throw MapParseError(1, 1, "expected 'type <name>'");

  GridMap map;
  map.height = parse_header_value(lines[1], "height", 2);
  map.width = parse_header_value(lines[2], "width", 3);
  if (lines[3] != "map") throw MapParseError(4, 1, "expected 'map'");

  const size_t body = 4;
  size_t last = lines.size();
  while (last > body && lines[last - 1].empty()) --last;
  if (last - body != static_cast<size_t>(map.height)) {
    throw MapParseError(static_cast<int>(last) + 1, 1,
                        "expected " + std::to_string(map.height) + " grid rows, found " +
                            std::to_string(last - body));
  }

  map.passable.assign(static_cast<size_t>(map.width) * map.height, 0);
  for (int r = 0; r < map.height; ++r) {
    const std::string_view row = lines[body + r];
    const int line_no = static_cast<int>(body) + r + 1;
    if (row.size() != static_cast<size_t>(map.width)) {
      throw MapParseError(line_no, static_cast<int>(std::min(row.size(), size_t(map.width))) + 1,
                          "expected " + std::to_string(map.width) + " cells, found " +
                              std::to_string(row.size()));
    }
    for (int c = 0; c < map.width; ++c) {
      switch (row[c]) {
        case '.':
        case 'G':
          map.passable[static_cast<size_t>(r) * map.width + c] = 1;
          break;
        case '@':
        case 'O':
        case 'T':
        case 'S':
        case 'W':
          break;
        default:
          throw MapParseError(line_no, c + 1, std::string("unknown cell character '") + row[c] + "'");
      }
    }
  }
  return map;
}

GridMap load_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open map file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_map(buffer.str());
}

std::string serialize_map(const GridMap& map) {
  std::string out = "type octile\nheight " + std::to_string(map.height) + "\nwidth " +
                    std::to_string(map.width) + "\nmap\n";
  out.reserve(out.size() + static_cast<size_t>(map.height) * (map.width + 1));
  for (int r = 0; r < map.height; ++r) {
    for (int c = 0; c < map.width; ++c) out.push_back(map.is_passable(r, c) ? '.' : '@');
    out.push_back('\n');
  }
  return out;
}

GridGraph::GridGraph(const GridMap& map)
    : width_(map.width), height_(map.height), passable_(map.passable) {
  adjacency_.resize(static_cast<size_t>(cell_count()));
  static constexpr int kDr[] = {-1, 0, 0, 1};
  static constexpr int kDc[] = {0, -1, 1, 0};
  int degree_sum = 0;
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      if (!map.is_passable(r, c)) continue;
      const VertexId v = vertex_at(r, c);
      vertices_.push_back(v);
      for (int k = 0; k < 4; ++k) {
        if (map.is_passable(r + kDr[k], c + kDc[k])) {
          adjacency_[v].push_back(vertex_at(r + kDr[k], c + kDc[k]));
        }
      }
      degree_sum += static_cast<int>(adjacency_[v].size());
    }
  }
  vertex_count_ = static_cast<int>(vertices_.size());
  edge_count_ = degree_sum / 2;
}

bool GridGraph::adjacent(VertexId u, VertexId v) const {
  if (!is_vertex(u)) return false;
  const auto& adj = adjacency_[u];
  return std::find(adj.begin(), adj.end(), v) != adj.end();
}

std::vector<int> bfs_distances(const GridGraph& graph, VertexId source) {
  std::vector<int> dist(static_cast<size_t>(graph.cell_count()), -1);
  if (!graph.is_vertex(source)) return dist;
  std::queue<VertexId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const VertexId v = frontier.front();
    frontier.pop();
    for (VertexId u : graph.neighbors(v)) {
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        frontier.push(u);
      }
    }
  }
  return dist;
}

}  // namespace tapf
