#pragma once

#include <set>

#include "tapf/types.hpp"

namespace tapf::detail {

// Two-queue high level shared by the CT searches. Node must expose
//   Cost lb;  Cost cost;  int conflicts;  uint64_t id;  bool in_focal;
// OPEN orders by (lb, cost, id); FOCAL = {cost <= w * front lb} by
// (conflicts, cost, id).
template <typename Node>
class HighLevelQueue {
 public:
  explicit HighLevelQueue(SuboptimalityFactor w) : w_(w) {}

  bool empty() const { return open_.empty(); }
  size_t size() const { return open_.size(); }

  void push(Node* node) {
    open_.insert(node);
    node->in_focal = false;
    if (has_front_ && node->lb >= front_lb_ && w_.admits(node->cost, front_lb_)) {
      node->in_focal = true;
      focal_.insert(node);
    }
  }

  Cost front_lb() const { return (*open_.begin())->lb; }

  // Pops the FOCAL head after bringing FOCAL in line with the current front.
  Node* pop() {
    refresh();
    Node* node = *focal_.begin();
    focal_.erase(focal_.begin());
    open_.erase(node);
    node->in_focal = false;
    return node;
  }

 private:
  struct OpenOrder {
    bool operator()(const Node* a, const Node* b) const {
      if (a->lb != b->lb) return a->lb < b->lb;
      if (a->cost != b->cost) return a->cost < b->cost;
      return a->id < b->id;
    }
  };
  struct FocalOrder {
    bool operator()(const Node* a, const Node* b) const {
      if (a->conflicts != b->conflicts) return a->conflicts < b->conflicts;
      if (a->cost != b->cost) return a->cost < b->cost;
      return a->id < b->id;
    }
  };

  void refresh() {
    const Cost front = front_lb();
    if (has_front_ && front == front_lb_) return;
    if (has_front_ && front < front_lb_) {
      // A lower front shrinks the admissible set; rebuild.
      for (Node* n : focal_) n->in_focal = false;
      focal_.clear();
    }
    const Cost bound = w_.bound(front);
    for (Node* n : open_) {
      if (n->lb > bound) break;  // cost >= lb, so nothing later qualifies
      if (!n->in_focal && n->cost <= bound) {
        n->in_focal = true;
        focal_.insert(n);
      }
    }
    front_lb_ = front;
    has_front_ = true;
  }

  SuboptimalityFactor w_;
  std::set<Node*, OpenOrder> open_;
  std::set<Node*, FocalOrder> focal_;
  Cost front_lb_ = 0;
  bool has_front_ = false;
};

}  // namespace tapf::detail
