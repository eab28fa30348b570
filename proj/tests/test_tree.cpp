#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gwmb/tree.hpp"

#include <set>

using namespace gwmb;

namespace {

// Edge counts of every rooted tree of height <= h and out-degree <= b,
// built by choosing child multisets over the previous level's shapes.
std::vector<int> shapes(int h, int b, int max_edges) {
  if (h == 0) return {0};
  const std::vector<int> prev = shapes(h - 1, b, max_edges);
  std::vector<int> out;
  std::function<void(std::size_t, int, int)> pick = [&](std::size_t from, int left, int edges) {
    out.push_back(edges);
    if (left == 0) return;
    for (std::size_t i = from; i < prev.size(); ++i) {
      const int e = edges + 1 + prev[i];
      if (e <= max_edges) pick(i, left - 1, e);
    }
  };
  pick(0, b, 0);
  return out;
}

std::size_t count_shapes(int h, int b, int max_edges) { return shapes(h, b, max_edges).size(); }

}  // namespace

TEST_CASE("tree basics") {
  FiniteTree t;
  CHECK(t.size() == 1);
  CHECK(t.edge_count() == 0);
  CHECK(t.height() == 0);
  const int a = t.add_child(0);
  const int b = t.add_child(a);
  CHECK(t.parent(b) == a);
  CHECK(t.depth(b) == 2);
  CHECK(t.children(0) == std::vector<int>{a});
  CHECK(t.height() == 2);
  CHECK(t.valid());
  CHECK_THROWS(t.add_child(17));

  CHECK(FiniteTree::path(4).edge_count() == 4);
  CHECK(FiniteTree::path(4).height() == 4);
  CHECK(FiniteTree::complete_binary(3).edge_count() == 14);
  CHECK(FiniteTree::complete_binary(3).height() == 3);
}

TEST_CASE("canonical encodings") {
  CHECK(canonical_encoding(FiniteTree()) == "()");
  CHECK(canonical_encoding(FiniteTree::path(2)) == "((()))");
  FiniteTree t;
  const int a = t.add_child(0);
  t.add_child(0);
  t.add_child(a);
  FiniteTree u;
  u.add_child(0);
  const int c = u.add_child(0);
  u.add_child(c);
  CHECK(canonical_encoding(t) == canonical_encoding(u));
  for (const std::string enc : {"()", "(()())", "((())())", "((()())(())())"}) {
    const FiniteTree r = FiniteTree::from_encoding(enc);
    CHECK(r.valid());
    CHECK(canonical_encoding(r) == enc);
  }
  CHECK_THROWS_AS(FiniteTree::from_encoding(""), std::invalid_argument);
  CHECK_THROWS_AS(FiniteTree::from_encoding("(()"), std::invalid_argument);
  CHECK_THROWS_AS(FiniteTree::from_encoding("()()"), std::invalid_argument);
  CHECK_THROWS_AS(FiniteTree::from_encoding("(x)"), std::invalid_argument);
}

TEST_CASE("complete binary containment") {
  const FiniteTree b2 = FiniteTree::complete_binary(2);
  CHECK(contains_complete_binary(b2, 0, 2));
  CHECK(contains_complete_binary(b2, 0, 1));
  CHECK_FALSE(contains_complete_binary(b2, 0, 3));
  CHECK(contains_complete_binary(FiniteTree::path(3), 0, 0));
  CHECK_FALSE(contains_complete_binary(FiniteTree::path(3), 0, 1));
  // a ternary star contains T_{2,1}
  CHECK(contains_complete_binary(FiniteTree::from_encoding("(()()())"), 0, 1));
  CHECK_FALSE(contains_complete_binary(FiniteTree::from_encoding("((()())())"), 0, 2));
}

TEST_CASE("enumeration counts") {
  CHECK(enumerate_small_trees(1, 2).size() == 3);
  CHECK(enumerate_small_trees(2, 2).size() == 10);
  CHECK(count_shapes(2, 2, 14) == 10);
  for (int h = 0; h <= 3; ++h)
    for (int b = 0; b <= 3; ++b)
      for (int e : {14, 9, 4}) {
        CAPTURE(h);
        CAPTURE(b);
        CAPTURE(e);
        CHECK(enumerate_small_trees(h, b, e).size() == count_shapes(h, b, e));
      }
  CHECK_THROWS(enumerate_small_trees(4, 2));
  CHECK_THROWS(enumerate_small_trees(2, 4));
  CHECK_THROWS(enumerate_small_trees(2, 2, 15));
}

TEST_CASE("enumerated trees are valid and distinct") {
  std::set<std::string> seen;
  std::size_t n = 0;
  for_each_small_tree(3, 3, 14, [&](const FiniteTree& t) {
    ++n;
    CHECK(t.valid());
    CHECK(t.height() <= 3);
    CHECK(t.edge_count() <= 14);
    for (int v = 0; v < t.size(); ++v) CHECK(t.children(v).size() <= 3);
    seen.insert(canonical_encoding(t));
  });
  CHECK(seen.size() == n);
  CHECK(n == count_shapes(3, 3, 14));
}

TEST_CASE("minimax: paths") {
  for (int D = 1; D <= 4; ++D) {
    CAPTURE(D);
    CHECK(minimax_depth_game(FiniteTree::path(D), D, Starter::Breaker) == Winner::Breaker);
    CHECK(minimax_depth_game(FiniteTree::path(D), D, Starter::Maker) ==
          (D == 1 ? Winner::Maker : Winner::Breaker));
  }
  // the target depth is out of reach
  CHECK(minimax_depth_game(FiniteTree::path(2), 3, Starter::Maker) == Winner::Breaker);
  // D = 0 is won before any move
  CHECK(minimax_depth_game(FiniteTree(), 0, Starter::Breaker) == Winner::Maker);
}

TEST_CASE("minimax: complete binary trees") {
  for (int D = 1; D <= 3; ++D) {
    CAPTURE(D);
    const FiniteTree t = FiniteTree::complete_binary(D);
    CHECK(minimax_depth_game(t, D, Starter::Breaker) == Winner::Maker);
    CHECK(minimax_depth_game(t, D, Starter::Maker) == Winner::Maker);
  }
  // T_{2,2} with one leaf removed loses when Breaker starts
  const FiniteTree cut = FiniteTree::from_encoding("((())(()()))");
  CHECK(minimax_depth_game(cut, 2, Starter::Breaker) == Winner::Breaker);
  CHECK(minimax_depth_game(cut, 2, Starter::Maker) == Winner::Maker);
}

TEST_CASE("minimax oracle at small bounds") {
  const OracleReport r = run_minimax_oracle(2, 3, 2);
  CHECK(r.trees == enumerate_small_trees(2, 3).size());
  CHECK(r.games == 2 * r.trees);
  CHECK(r.counterexamples.empty());

  const OracleReport s = run_minimax_oracle(3, 2, 3);
  CHECK(s.counterexamples.empty());
}

TEST_CASE("starter strings") {
  CHECK(parse_starter("breaker") == Starter::Breaker);
  CHECK(parse_starter("maker") == Starter::Maker);
  CHECK_THROWS(parse_starter("nobody"));
  CHECK(to_string(Winner::Maker) == "maker");
}
