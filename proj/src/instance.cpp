#include "tapf/instance.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace tapf {

std::vector<int> TapfInstance::target_set(int agent) const {
  std::vector<int> out;
  for (int j = 0; j < target_count(); ++j) {
    if (eligible(agent, j)) out.push_back(j);
  }
  return out;
}

void validate_instance(const TapfInstance& instance) {
  if (!instance.graph) throw InstanceError("instance has no graph");
  const auto& graph = *instance.graph;
  const int n = instance.agent_count();
  const int m = instance.target_count();
  if (n == 0) throw InstanceError("instance has no agents");
  if (m < n) throw InstanceError("fewer targets than agents");
  auto check_cells = [&](const std::vector<VertexId>& cells, const char* what) {
    std::set<VertexId> seen;
    for (size_t i = 0; i < cells.size(); ++i) {
      if (!graph.is_vertex(cells[i])) {
        throw InstanceError(std::string(what) + " " + std::to_string(i) + " is not a passable cell");
      }
      if (!seen.insert(cells[i]).second) {
        throw InstanceError(std::string("duplicate ") + what + " at index " + std::to_string(i));
      }
    }
  };
  check_cells(instance.starts, "start");
  check_cells(instance.targets, "target");
  if (instance.eligibility.size() != static_cast<size_t>(n)) {
    throw InstanceError("eligibility matrix has wrong number of rows");
  }
  for (int i = 0; i < n; ++i) {
    const auto& row = instance.eligibility[i];
    if (row.size() != static_cast<size_t>(m)) {
      throw InstanceError("eligibility row " + std::to_string(i) + " has wrong length");
    }
    if (std::none_of(row.begin(), row.end(), [](uint8_t x) { return x != 0; })) {
      throw InstanceError("agent " + std::to_string(i) + " has an empty target set");
    }
  }
}

namespace {

struct LineReader {
  std::istringstream stream;
  int line_no = 0;

  explicit LineReader(std::string_view text) : stream(std::string(text)) {}

  // Next non-empty, non-comment line, or false at end.
  bool next(std::string& line) {
    while (std::getline(stream, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
        line.pop_back();
      }
      size_t first = line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      line.erase(0, first);
      return true;
    }
    return false;
  }

  std::string expect(const char* what) {
    std::string line;
    if (!next(line)) throw InstanceError(std::string("unexpected end of file, expected ") + what);
    return line;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InstanceError("instance line " + std::to_string(line_no) + ": " + what);
  }
};

Cell parse_cell_line(LineReader& reader, const char* keyword) {
  const std::string line = reader.expect(keyword);
  std::istringstream in(line);
  std::string key;
  Cell cell;
  std::string extra;
  if (!(in >> key >> cell.row >> cell.col) || key != keyword || (in >> extra)) {
    reader.fail(std::string("expected '") + keyword + " <row> <col>'");
  }
  return cell;
}

}  // namespace

std::string read_instance_map_path(std::string_view text) {
  LineReader reader(text);
  const std::string line = reader.expect("map line");
  if (line.rfind("map ", 0) != 0) reader.fail("expected 'map <path>'");
  std::string path = line.substr(4);
  path.erase(0, path.find_first_not_of(" \t"));
  return path;
}

TapfInstance load_instance(std::string_view text, std::shared_ptr<const GridGraph> graph) {
  TapfInstance instance;
  instance.map_path = read_instance_map_path(text);
  instance.graph = std::move(graph);

  LineReader reader(text);
  reader.expect("map line");
  int n = 0;
  int m = 0;
  {
    std::istringstream in(reader.expect("counts line"));
    std::string agents_kw, targets_kw;
    if (!(in >> agents_kw >> n >> targets_kw >> m) || agents_kw != "agents" ||
        targets_kw != "targets" || n < 0 || m < 0) {
      reader.fail("expected 'agents N targets M'");
    }
  }
  const auto& g = *instance.graph;
  auto to_vertex = [&](Cell cell, const char* what) {
    if (cell.row < 0 || cell.row >= g.height() || cell.col < 0 || cell.col >= g.width()) {
      reader.fail(std::string(what) + " outside the map");
    }
    const VertexId v = g.vertex_at(cell.row, cell.col);
    if (!g.is_vertex(v)) reader.fail(std::string(what) + " on a blocked cell");
    return v;
  };
  for (int i = 0; i < n; ++i) instance.starts.push_back(to_vertex(parse_cell_line(reader, "start"), "start"));
  for (int j = 0; j < m; ++j) instance.targets.push_back(to_vertex(parse_cell_line(reader, "target"), "target"));
  instance.eligibility.assign(n, std::vector<uint8_t>(m, 0));
  for (int i = 0; i < n; ++i) {
    std::istringstream in(reader.expect("eligibility row"));
    for (int j = 0; j < m; ++j) {
      int bit = -1;
      if (!(in >> bit) || (bit != 0 && bit != 1)) reader.fail("eligibility entries must be 0 or 1");
      instance.eligibility[i][j] = static_cast<uint8_t>(bit);
    }
    std::string extra;
    if (in >> extra) reader.fail("too many eligibility entries");
  }
  std::string trailing;
  if (reader.next(trailing)) reader.fail("unexpected trailing content");
  validate_instance(instance);
  return instance;
}

std::string save_instance(const TapfInstance& instance) {
  std::ostringstream out;
  const auto& g = *instance.graph;
  out << "map " << instance.map_path << '\n';
  out << "agents " << instance.agent_count() << " targets " << instance.target_count() << '\n';
  for (VertexId s : instance.starts) {
    const Cell c = g.cell_of(s);
    out << "start " << c.row << ' ' << c.col << '\n';
  }
  for (VertexId t : instance.targets) {
    const Cell c = g.cell_of(t);
    out << "target " << c.row << ' ' << c.col << '\n';
  }
  for (const auto& row : instance.eligibility) {
    for (size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << int(row[j]);
    out << '\n';
  }
  return out.str();
}

TapfInstance load_instance_file(const std::string& path, const std::string& map_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("cannot open instance file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::string map_file = map_override;
  if (map_file.empty()) {
    namespace fs = std::filesystem;
    map_file = (fs::path(path).parent_path() / read_instance_map_path(text)).string();
  }
  auto graph = std::make_shared<const GridGraph>(load_map_file(map_file));
  return load_instance(text, std::move(graph));
}

uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % bound;
  uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

int shared_target_count(const GeneratorConfig& config) {
  const int k = config.target_set_size;
  const int p = config.shared_percentage;
  if (k < 1) throw InstanceError("target set size must be at least 1");
  if (p < 0 || p > 100) throw InstanceError("shared percentage must be in 0..100");
  const int requested = k * p / 100;
  if (requested < k) return requested;
  if (k == 1) {
    throw InstanceError("target set size 1 leaves no room for a unique target at " +
                        std::to_string(p) + "% sharing");
  }
  return k - 1;
}

namespace {

// First `count` entries of a seeded Fisher-Yates shuffle of `pool`.
std::vector<VertexId> sample_without_replacement(std::vector<VertexId> pool, size_t count,
                                                 std::mt19937_64& rng) {
  for (size_t i = 0; i < count; ++i) {
    const size_t j = i + uniform_below(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace

TapfInstance generate_instance(const GridMap& map, const GeneratorConfig& config,
                               std::string map_path) {
  if (config.agent_count < 1) throw InstanceError("agent count must be at least 1");
  const int n = config.agent_count;
  const int k = config.target_set_size;
  const int shared = shared_target_count(config);
  const int unique = k - shared;
  const int total_targets = shared + n * unique;

  auto graph = std::make_shared<const GridGraph>(map);
  const int available = graph->vertex_count();
  if (available < n || available < total_targets) {
    throw InstanceError("insufficient passable cells: need " + std::to_string(n) + " starts and " +
                        std::to_string(total_targets) + " targets, map has " +
                        std::to_string(available));
  }

  std::mt19937_64 rng(config.seed);
  TapfInstance instance;
  instance.map_path = std::move(map_path);
  instance.graph = graph;
  instance.starts = sample_without_replacement(graph->vertices(), n, rng);
  // Shared pool occupies target indices [0, shared); agent i's unique targets follow.
  instance.targets = sample_without_replacement(graph->vertices(), total_targets, rng);
  instance.eligibility.assign(n, std::vector<uint8_t>(total_targets, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < shared; ++j) instance.eligibility[i][j] = 1;
    for (int u = 0; u < unique; ++u) instance.eligibility[i][shared + i * unique + u] = 1;
  }
  validate_instance(instance);
  return instance;
}

}  // namespace tapf
