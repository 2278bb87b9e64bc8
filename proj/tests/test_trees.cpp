#include <catch2/catch_amalgamated.hpp>

#include "pythrep/trees.hpp"

using namespace pythrep;

TEST_CASE("leaf and caret basics") {
  Tree l = Tree::leaf();
  CHECK(l.is_leaf());
  CHECK(l.leaf_count() == 1);
  CHECK(l.arity() == 2);
  Tree c = Tree::caret();
  CHECK_FALSE(c.is_leaf());
  CHECK(c.leaf_count() == 2);
  Tree c3 = Tree::caret(3);
  CHECK(c3.leaf_count() == 3);
  CHECK(c3.arity() == 3);
  CHECK_THROWS_AS(Tree::leaf(1), std::invalid_argument);
  CHECK_THROWS_AS(Tree::node({Tree::leaf(2), Tree::leaf(3)}), std::invalid_argument);
}

TEST_CASE("serialize and parse round-trip") {
  CHECK(serialize(Tree::leaf()) == ".");
  CHECK(serialize(Tree::caret()) == "(..)");
  Tree t = Tree::node({Tree::caret(), Tree::leaf()});
  CHECK(serialize(t) == "((..).)");
  CHECK(parse_tree("((..).)") == t);
  CHECK(parse_tree(" ( ( . . ) . ) ") == t);
  CHECK(parse_tree("(...)", 3) == Tree::caret(3));
  CHECK(serialize(parse_tree("(.(..))")) == "(.(..))");

  CHECK_THROWS_WITH(parse_tree("(.)"),
                    Catch::Matchers::ContainsSubstring("offset 2"));
  CHECK_THROWS_WITH(parse_tree("(..)x"),
                    Catch::Matchers::ContainsSubstring("trailing input"));
  CHECK_THROWS_WITH(parse_tree("(."),
                    Catch::Matchers::ContainsSubstring("unexpected end"));
  CHECK_THROWS_WITH(parse_tree("(.."),
                    Catch::Matchers::ContainsSubstring("expected ')'"));
  CHECK_THROWS_AS(parse_tree("(..)", 3), std::invalid_argument);
}

TEST_CASE("forest serialization and identity/generator forests") {
  Forest id3 = identity_forest(3);
  CHECK(serialize(id3) == "[.,.,.]");
  CHECK(id3.leaves() == 3);
  Forest g = generator_forest(2, 3);
  CHECK(serialize(g) == "[.,(..),.]");
  CHECK(g.roots() == 3);
  CHECK(g.leaves() == 4);
  CHECK(serialize(generator_forest(1, 2, 3)) == "[(...),.]");
  CHECK_THROWS_AS(generator_forest(4, 3), std::out_of_range);
  CHECK_THROWS_AS(generator_forest(0, 3), std::out_of_range);
}

TEST_CASE("compose stacks upper forest onto lower leaves") {
  Forest lower(Tree::caret());
  Forest upper = generator_forest(1, 2);
  Forest r = compose(upper, lower);
  CHECK(serialize(r) == "[((..).)]");
  Forest r2 = compose(generator_forest(2, 2), lower);
  CHECK(serialize(r2) == "[(.(..))]");
  // associativity of stacking
  Forest a = generator_forest(1, 3);
  Forest b = generator_forest(2, 2);
  Forest c(Tree::caret());
  CHECK(compose(a, compose(b, c)) == compose(compose(a, b), c));
  CHECK_THROWS_AS(compose(lower, lower), std::invalid_argument);
}

TEST_CASE("concat and grow_leaf") {
  Forest p(Tree::caret());
  Forest q = identity_forest(1);
  Forest pq = concat(p, q);
  CHECK(serialize(pq) == "[(..),.]");
  Forest grown = grow_leaf(pq, 3, Tree::caret());
  CHECK(serialize(grown) == "[(..),(..)]");
  Forest grown2 = grow_leaf(pq, 2, Tree::caret());
  CHECK(serialize(grown2) == "[(.(..)),.]");
  CHECK_THROWS_AS(grow_leaf(pq, 4, Tree::caret()), std::out_of_range);
}

TEST_CASE("leaf addresses, depths, intervals, turn counts") {
  Tree t = parse_tree("((..).)");
  CHECK(leaf_address(t, 1) == LeafAddress{0, 0});
  CHECK(leaf_address(t, 2) == LeafAddress{0, 1});
  CHECK(leaf_address(t, 3) == LeafAddress{1});
  CHECK(leaf_addresses(t) ==
        std::vector<LeafAddress>{{0, 0}, {0, 1}, {1}});
  CHECK(leaf_depth(t, 1) == 2);
  CHECK(leaf_depth(t, 3) == 1);

  CHECK(leaf_interval(t, 1).lo() == Rat(0));
  CHECK(leaf_interval(t, 1).hi() == Rat(1, 4));
  CHECK(leaf_interval(t, 2).lo() == Rat(1, 4));
  CHECK(leaf_interval(t, 2).hi() == Rat(1, 2));
  CHECK(leaf_interval(t, 3).str() == "[1/2,1]");

  Tree s = parse_tree("(.(..))");
  CHECK(leaf_interval(s, 2).lo() == Rat(1, 2));
  CHECK(leaf_interval(s, 2).hi() == Rat(3, 4));

  Tree c3 = Tree::caret(3);
  CHECK(leaf_interval(c3, 2).lo() == Rat(1, 3));
  CHECK(leaf_interval(c3, 2).hi() == Rat(2, 3));

  CHECK(turn_counts(t, 1) == std::vector<int>{2, 0});
  CHECK(turn_counts(t, 2) == std::vector<int>{1, 1});
  CHECK(turn_counts(s, 3) == std::vector<int>{0, 2});
}

TEST_CASE("common refinement by simultaneous descent") {
  Tree s = parse_tree("((..).)");
  Tree t = parse_tree("(.(..))");
  CommonRefinement cr = common_refinement(s, t);
  CHECK(serialize(cr.w) == "((..)(..))");
  CHECK(serialize(cr.p) == "[.,.,(..)]");
  CHECK(serialize(cr.q) == "[(..),.,.]");
  CHECK(compose_tree(cr.p, s) == cr.w);
  CHECK(compose_tree(cr.q, t) == cr.w);

  // identical trees refine to themselves with identity forests
  CommonRefinement same = common_refinement(s, s);
  CHECK(same.w == s);
  CHECK(same.p == identity_forest(3));
  CHECK(same.q == identity_forest(3));

  // leaf against anything
  CommonRefinement lft = common_refinement(Tree::leaf(), t);
  CHECK(lft.w == t);
  CHECK(serialize(lft.p) == "[(.(..))]");
  CHECK(lft.q == identity_forest(3));
}

TEST_CASE("full trees") {
  CHECK(full_tree(0) == Tree::leaf());
  CHECK(serialize(full_tree(1)) == "(..)");
  CHECK(serialize(full_tree(2)) == "((..)(..))");
  CHECK(full_tree(3).leaf_count() == 8);
  CHECK(full_tree(2, 3).leaf_count() == 9);
  CHECK(leaf_interval(full_tree(2), 3).lo() == Rat(1, 2));
  CHECK(leaf_interval(full_tree(2), 3).hi() == Rat(3, 4));
  CHECK_THROWS_AS(full_tree(23), std::length_error);
}

TEST_CASE("tree enumeration with exact leaf counts") {
  CHECK(enumerate_trees(1).size() == 1);
  CHECK(enumerate_trees(2).size() == 1);
  CHECK(enumerate_trees(3).size() == 2);
  CHECK(enumerate_trees(4).size() == 5);
  CHECK(enumerate_trees(5).size() == 14);
  CHECK(enumerate_trees(6).size() == 42);

  auto three = enumerate_trees(3);
  CHECK(serialize(three[0]) == "((..).)");
  CHECK(serialize(three[1]) == "(.(..))");

  // ternary: number of trees with m internal nodes = Fuss-Catalan
  CHECK(enumerate_trees(3, 3).size() == 1);
  CHECK(enumerate_trees(5, 3).size() == 3);
  CHECK(enumerate_trees(7, 3).size() == 12);
  CHECK(enumerate_trees(4, 3).empty());  // 4 leaves impossible at arity 3

  CHECK_THROWS_AS(enumerate_trees(11, 2), std::length_error);
  CHECK_THROWS_AS(enumerate_trees(9, 3), std::length_error);
  CHECK(enumerate_trees(11, 2, 12).size() == 16796);
}

TEST_CASE("forest rotation and leaf offsets") {
  Forest f(2, {Tree::caret(), Tree::leaf(), parse_tree("((..).)")});
  Forest r = rotate_forest(f, 1);
  CHECK(serialize(r) == "[.,((..).),(..)]");
  CHECK(rotate_forest(f, 3) == f);
  CHECK(rotate_forest(f, -1) == rotate_forest(f, 2));
  CHECK(forest_leaf_offsets(f) == std::vector<int>{0, 2, 3, 6});
}
