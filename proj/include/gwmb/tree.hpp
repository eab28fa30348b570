#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace gwmb {

enum class Starter { Breaker, Maker };
enum class Winner { Maker, Breaker };

std::string to_string(Starter s);
std::string to_string(Winner w);
Starter parse_starter(std::string_view s);

/// Rooted tree stored as an arena; node 0 is the root.
class FiniteTree {
 public:
  FiniteTree();

  int add_child(int parent);
  int size() const { return static_cast<int>(parent_.size()); }
  int edge_count() const { return size() - 1; }
  int parent(int v) const { return parent_[v]; }
  int depth(int v) const { return depth_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  int height() const;
  /// Checks parent/child consistency and depth labels.
  bool valid() const;

  static FiniteTree path(int length);
  static FiniteTree complete_binary(int depth);
  /// Inverse of canonical_encoding; throws std::invalid_argument.
  static FiniteTree from_encoding(std::string_view enc);

 private:
  std::vector<int> parent_;
  std::vector<int> depth_;
  std::vector<std::vector<int>> children_;
};

/// Parenthesis form with children encodings sorted, e.g. "(()(()))".
std::string canonical_encoding(const FiniteTree& t, int node = 0);

/// True when a complete binary tree of depth D is rooted at `node`.
bool contains_complete_binary(const FiniteTree& t, int node, int D);

/// All rooted trees up to the given height and out-degree with at most
/// `max_edges` edges, each exactly once. Bounds: max_depth <= 3,
/// max_branching <= 3, max_edges <= 14.
std::vector<FiniteTree> enumerate_small_trees(int max_depth, int max_branching,
                                              int max_edges = 14);
void for_each_small_tree(int max_depth, int max_branching, int max_edges,
                         const std::function<void(const FiniteTree&)>& fn);

/// Exact value of the reach-depth-D game in which Maker fixes and Breaker
/// deletes any unresolved edge. Maker wins once a fixed path joins the root to
/// a node at depth D.
Winner minimax_depth_game(const FiniteTree& t, int D, Starter starter);

struct OracleCounterexample {
  std::string encoding;
  Starter starter;
  Winner minimax;
  Winner predicted;
};

struct OracleReport {
  std::uint64_t trees = 0;
  std::uint64_t games = 0;
  std::vector<OracleCounterexample> counterexamples;
};

/// Compares the minimax winner with the binary-subtree criterion on every
/// enumerated tree, for both starters.
OracleReport run_minimax_oracle(int max_depth, int max_branching, int D,
                                int max_edges = 14);

}  // namespace gwmb
