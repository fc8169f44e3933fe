#include "tapf/constraints.hpp"

#include <algorithm>

namespace tapf {

void ConstraintSet::add(const Constraint& c) {
  if (c.agent >= static_cast<int>(by_agent_.size())) by_agent_.resize(c.agent + 1);
  by_agent_[c.agent].push_back(c);
  ++size_;
}

bool ConstraintSet::contains(const Constraint& c) const {
  const auto& list = for_agent(c.agent);
  return std::find(list.begin(), list.end(), c) != list.end();
}

bool ConstraintSet::blocked_vertex(int agent, VertexId v, int t) const {
  return contains(Constraint::vertex(agent, v, t));
}

bool ConstraintSet::blocked_edge(int agent, VertexId from, VertexId to, int t) const {
  return contains(Constraint::edge(agent, from, to, t));
}

int ConstraintSet::latest_time(int agent) const {
  int latest = 0;
  for (const auto& c : for_agent(agent)) latest = std::max(latest, c.time);
  return latest;
}

const std::vector<Constraint>& ConstraintSet::for_agent(int agent) const {
  static const std::vector<Constraint> kEmpty;
  if (agent < 0 || agent >= static_cast<int>(by_agent_.size())) return kEmpty;
  return by_agent_[agent];
}

AgentConstraintTable::AgentConstraintTable(const ConstraintSet& set, int agent, int cell_count)
    : cells_(static_cast<uint64_t>(cell_count)) {
  for (const auto& c : set.for_agent(agent)) {
    latest_ = std::max(latest_, c.time);
    if (c.kind == ConstraintKind::kVertex) {
      vertices_.insert(key(c.to, c.time));
      vertex_list_.emplace_back(c.to, c.time);
    } else {
      edges_.insert(key(c.from, c.time) * cells_ + static_cast<uint64_t>(c.to));
    }
  }
}

int AgentConstraintTable::earliest_rest_time(VertexId goal) const {
  int earliest = 0;
  for (const auto& [v, t] : vertex_list_) {
    if (v == goal) earliest = std::max(earliest, t + 1);
  }
  return earliest;
}

}  // namespace tapf
