#include "gwmb/tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace gwmb {

std::string to_string(Starter s) { return s == Starter::Breaker ? "breaker" : "maker"; }
std::string to_string(Winner w) { return w == Winner::Breaker ? "breaker" : "maker"; }

Starter parse_starter(std::string_view s) {
  if (s == "breaker") return Starter::Breaker;
  if (s == "maker") return Starter::Maker;
  throw std::invalid_argument("starter must be breaker or maker");
}

FiniteTree::FiniteTree() : parent_{-1}, depth_{0}, children_(1) {}

int FiniteTree::add_child(int parent) {
  if (parent < 0 || parent >= size()) throw std::out_of_range("add_child: no such node");
  const int v = size();
  parent_.push_back(parent);
  depth_.push_back(depth_[parent] + 1);
  children_.emplace_back();
  children_[parent].push_back(v);
  return v;
}

int FiniteTree::height() const {
  return *std::max_element(depth_.begin(), depth_.end());
}

bool FiniteTree::valid() const {
  if (parent_.empty() || parent_[0] != -1 || depth_[0] != 0) return false;
  if (parent_.size() != depth_.size() || parent_.size() != children_.size()) return false;
  std::size_t listed = 0;
  for (int v = 0; v < size(); ++v) {
    for (int c : children_[v]) {
      if (c <= v || c >= size()) return false;  // arena order rules out cycles
      if (parent_[c] != v || depth_[c] != depth_[v] + 1) return false;
      ++listed;
    }
  }
  return listed + 1 == parent_.size();
}

FiniteTree FiniteTree::path(int length) {
  FiniteTree t;
  int v = 0;
  for (int i = 0; i < length; ++i) v = t.add_child(v);
  return t;
}

FiniteTree FiniteTree::complete_binary(int depth) {
  FiniteTree t;
  std::vector<int> level{0};
  for (int d = 0; d < depth; ++d) {
    std::vector<int> next;
    for (int v : level) {
      next.push_back(t.add_child(v));
      next.push_back(t.add_child(v));
    }
    level = std::move(next);
  }
  return t;
}

FiniteTree FiniteTree::from_encoding(std::string_view enc) {
  if (enc.size() < 2 || enc.front() != '(' || enc.back() != ')')
    throw std::invalid_argument("tree encoding must be a parenthesised string");
  FiniteTree t;
  std::vector<int> stack{0};
  for (std::size_t i = 1; i + 1 < enc.size(); ++i) {
    if (enc[i] == '(') {
      stack.push_back(t.add_child(stack.back()));
    } else if (enc[i] == ')') {
      if (stack.size() < 2) throw std::invalid_argument("unbalanced tree encoding");
      stack.pop_back();
    } else {
      throw std::invalid_argument("unexpected character in tree encoding");
    }
  }
  if (stack.size() != 1) throw std::invalid_argument("unbalanced tree encoding");
  return t;
}

std::string canonical_encoding(const FiniteTree& t, int node) {
  std::vector<std::string> parts;
  for (int c : t.children(node)) parts.push_back(canonical_encoding(t, c));
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (const auto& p : parts) out += p;
  out += ')';
  return out;
}

bool contains_complete_binary(const FiniteTree& t, int node, int D) {
  if (D <= 0) return true;
  int good = 0;
  for (int c : t.children(node)) {
    if (contains_complete_binary(t, c, D - 1) && ++good >= 2) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

struct Shape {
  std::string enc;
  int edges;
};

void choose_multisets(const std::vector<Shape>& pool, int max_k, int max_edges,
                      std::size_t from, std::vector<std::size_t>& pick,
                      int edges, std::vector<Shape>& out) {
  {
    std::vector<std::string> parts;
    for (std::size_t i : pick) parts.push_back(pool[i].enc);
    std::sort(parts.begin(), parts.end());
    std::string enc = "(";
    for (const auto& p : parts) enc += p;
    enc += ')';
    out.push_back({std::move(enc), edges});
  }
  if (static_cast<int>(pick.size()) == max_k) return;
  for (std::size_t i = from; i < pool.size(); ++i) {
    const int e = edges + 1 + pool[i].edges;
    if (e > max_edges) continue;
    pick.push_back(i);
    choose_multisets(pool, max_k, max_edges, i, pick, e, out);
    pick.pop_back();
  }
}

}  // namespace

void for_each_small_tree(int max_depth, int max_branching, int max_edges,
                         const std::function<void(const FiniteTree&)>& fn) {
  if (max_depth < 0 || max_depth > 3) throw std::invalid_argument("max_depth must lie in [0,3]");
  if (max_branching < 0 || max_branching > 3)
    throw std::invalid_argument("max_branching must lie in [0,3]");
  if (max_edges < 0 || max_edges > 14) throw std::invalid_argument("max_edges must lie in [0,14]");

  std::vector<Shape> level{{"()", 0}};  // all trees of height <= h
  for (int h = 1; h <= max_depth; ++h) {
    std::vector<Shape> next;
    std::vector<std::size_t> pick;
    choose_multisets(level, max_branching, max_edges, 0, pick, 0, next);
    level = std::move(next);
  }
  for (const Shape& s : level) fn(FiniteTree::from_encoding(s.enc));
}

std::vector<FiniteTree> enumerate_small_trees(int max_depth, int max_branching,
                                              int max_edges) {
  std::vector<FiniteTree> out;
  for_each_small_tree(max_depth, max_branching, max_edges,
                      [&out](const FiniteTree& t) { out.push_back(t); });
  return out;
}

// ---------------------------------------------------------------------------
// minimax

namespace {

enum Status : std::uint8_t { Free = 0, Fixed = 1, Dead = 2 };

class DepthGame {
 public:
  DepthGame(const FiniteTree& t, int D) : D_(D) {
    // Only edges on some root-to-depth-D path matter; the rest are passes.
    std::vector<int> edge_of(t.size(), -1);
    for (int v = 1; v < t.size(); ++v) {
      if (t.depth(v) <= D && reaches(t, v)) {
        edge_of[v] = static_cast<int>(child_.size());
        child_.push_back(v);
      } else {
        ++initial_passes_;
      }
    }
    const int E = static_cast<int>(child_.size());
    if (E > 20) throw std::invalid_argument("minimax: too many relevant edges");
    parent_edge_.assign(E, -1);
    below_.assign(E, {});
    goal_.assign(E, false);
    for (int e = 0; e < E; ++e) {
      const int v = child_[e];
      goal_[e] = t.depth(v) == D;
      if (t.parent(v) != 0) parent_edge_[e] = edge_of[t.parent(v)];
      else top_.push_back(e);
      for (int c : t.children(v))
        if (edge_of[c] >= 0) below_[e].push_back(edge_of[c]);
    }
  }

  bool maker_wins(bool maker_to_move) {
    if (D_ == 0) return true;
    std::vector<Status> st(child_.size(), Free);
    return solve(st, initial_passes_, maker_to_move);
  }

 private:
  bool reaches(const FiniteTree& t, int v) const {
    if (t.depth(v) == D_) return true;
    for (int c : t.children(v))
      if (reaches(t, c)) return true;
    return false;
  }

  bool fixed_path(const std::vector<Status>& st, int e) const {
    if (st[e] != Fixed) return false;
    if (goal_[e]) return true;
    for (int c : below_[e])
      if (fixed_path(st, c)) return true;
    return false;
  }

  bool open_path(const std::vector<Status>& st, int e) const {
    if (st[e] == Dead) return false;
    if (goal_[e]) return true;
    for (int c : below_[e])
      if (open_path(st, c)) return true;
    return false;
  }

  // Free edges that can no longer lie on an open path become passes.
  int prune(std::vector<Status>& st, int e, bool cut) const {
    int freed = 0;
    const bool dead_here = cut || st[e] == Dead || !open_path(st, e);
    if (dead_here && st[e] == Free) {
      st[e] = Dead;
      ++freed;
    }
    for (int c : below_[e]) freed += prune(st, c, dead_here);
    return freed;
  }

  std::uint64_t key(const std::vector<Status>& st, int passes, bool maker) const {
    std::uint64_t k = 0;
    for (Status s : st) k = k * 3 + s;
    return (k << 8 | static_cast<std::uint64_t>(passes)) << 1 | (maker ? 1u : 0u);
  }

  bool solve(std::vector<Status>& st, int passes, bool maker) {
    bool won = false, open = false;
    for (int e : top_) {
      won = won || fixed_path(st, e);
      open = open || open_path(st, e);
    }
    if (won) return true;
    if (!open) return false;

    const std::uint64_t k = key(st, passes, maker);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;

    bool result = !maker;  // value if every move fails for the mover
    for (std::size_t e = 0; e < st.size() && result != maker; ++e) {
      if (st[e] != Free) continue;
      std::vector<Status> next = st;
      next[e] = maker ? Fixed : Dead;
      int extra = 0;
      for (int t : top_) extra += prune(next, t, false);
      if (solve(next, passes + extra, !maker) == maker) result = maker;
    }
    if (result != maker && passes > 0) {
      std::vector<Status> next = st;
      if (solve(next, passes - 1, !maker) == maker) result = maker;
    }
    memo_.emplace(k, result);
    return result;
  }

  int D_;
  int initial_passes_ = 0;
  std::vector<int> child_;
  std::vector<int> parent_edge_;
  std::vector<std::vector<int>> below_;
  std::vector<bool> goal_;
  std::vector<int> top_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

}  // namespace

Winner minimax_depth_game(const FiniteTree& t, int D, Starter starter) {
  if (t.edge_count() > 14) throw std::invalid_argument("minimax: at most 14 edges");
  if (D < 0) throw std::invalid_argument("minimax: D must be >= 0");
  DepthGame g(t, D);
  return g.maker_wins(starter == Starter::Maker) ? Winner::Maker : Winner::Breaker;
}

OracleReport run_minimax_oracle(int max_depth, int max_branching, int D,
                                int max_edges) {
  OracleReport r;
  for_each_small_tree(max_depth, max_branching, max_edges, [&](const FiniteTree& t) {
    ++r.trees;
    for (Starter s : {Starter::Breaker, Starter::Maker}) {
      ++r.games;
      bool predicted = false;
      if (s == Starter::Breaker) {
        predicted = contains_complete_binary(t, 0, D);
      } else {
        for (int c : t.children(0))
          predicted = predicted || contains_complete_binary(t, c, D - 1);
        if (D == 0) predicted = true;
      }
      const Winner want = predicted ? Winner::Maker : Winner::Breaker;
      const Winner got = minimax_depth_game(t, D, s);
      if (got != want) r.counterexamples.push_back({canonical_encoding(t), s, got, want});
    }
  });
  return r;
}

}  // namespace gwmb
