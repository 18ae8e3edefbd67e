#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "treelearn/rng.hpp"
#include "treelearn/tree.hpp"

using namespace treelearn;

TEST_CASE("chain and star shapes") {
  const Tree chain = random_tree(3, TreeShape::chain, 0);
  CHECK(chain.edges() == std::vector<Edge>{{1, 2}, {2, 3}});
  const Tree star = random_tree(4, TreeShape::star, 123);
  CHECK(star.edges() == std::vector<Edge>{{1, 2}, {1, 3}, {1, 4}});
}

TEST_CASE("uniform random tree is valid and seed-deterministic") {
  const Tree a = random_tree(6, TreeShape::uniform_random, 42);
  const Tree b = random_tree(6, TreeShape::uniform_random, 42);
  CHECK(a == b);
  CHECK(a.edges().size() == 5);
  // construction already ran the union-find check; different seed, likely
  // different tree
  const Tree c = random_tree(6, TreeShape::uniform_random, 43);
  CHECK(c.edges().size() == 5);
}

TEST_CASE("random_tree rejects p < 2") {
  CHECK_THROWS_AS(random_tree(1, TreeShape::chain, 0), std::invalid_argument);
}

TEST_CASE("tree construction rejects malformed edge sets") {
  CHECK_THROWS_AS(Tree(3, {{1, 2}}), std::invalid_argument);            // too few
  CHECK_THROWS_AS(Tree(3, {{1, 2}, {1, 2}}), std::invalid_argument);    // duplicate
  CHECK_THROWS_AS(Tree(4, {{1, 2}, {2, 3}, {1, 3}}), std::invalid_argument);  // cycle
  CHECK_THROWS_AS(Tree(3, {{1, 2}, {2, 4}}), std::invalid_argument);    // label range
  CHECK_THROWS_AS(make_edge(2, 2), std::invalid_argument);              // self loop
}

TEST_CASE("edges are stored canonically") {
  const Tree t(3, {{2, 1}, {3, 2}});
  CHECK(t.edges() == std::vector<Edge>{{1, 2}, {2, 3}});
  CHECK(t.has_edge(2, 1));
  CHECK_FALSE(t.has_edge(1, 3));
}

TEST_CASE("paths in a small tree") {
  //   1-2-3 with 4 hanging off 2
  const Tree t(4, {{1, 2}, {2, 3}, {2, 4}});
  CHECK(t.path_nodes(1, 3) == std::vector<int>{1, 2, 3});
  CHECK(t.path_edges(4, 3) == std::vector<Edge>{{2, 4}, {2, 3}});
  CHECK(t.path_edges(1, 2) == std::vector<Edge>{{1, 2}});
  CHECK(t.neighbors(2) == std::vector<int>{1, 3, 4});
}

TEST_CASE("pruefer decoding: known sequence and validity sweep") {
  // seq (2, 2) on p=4 encodes the star at node 2
  const int seq[] = {2, 2};
  const Tree star2 = tree_from_pruefer(4, seq);
  CHECK(star2.edges() == std::vector<Edge>{{1, 2}, {2, 3}, {2, 4}});

  Rng rng(99);
  for (int rep = 0; rep < 200; ++rep) {
    const int p = 3 + static_cast<int>(rng.below(8));
    std::vector<int> s(p - 2);
    for (int& x : s) x = 1 + static_cast<int>(rng.below(p));
    const Tree t = tree_from_pruefer(p, s);  // constructor validates
    CHECK(t.node_count() == p);
  }
}

TEST_CASE("pruefer decoding is a bijection on p=5") {
  std::set<std::vector<Edge>> seen;
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b)
      for (int c = 1; c <= 5; ++c) {
        const int seq[] = {a, b, c};
        seen.insert(tree_from_pruefer(5, seq).edges());
      }
  CHECK(seen.size() == 125);  // p^(p-2) labeled trees
}
