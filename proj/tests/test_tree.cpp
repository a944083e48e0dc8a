#include <functional>
#include <random>

#include "doctest.h"
#include "phylo/canonical.hpp"
#include "phylo/newick.hpp"
#include "phylo/tree.hpp"
#include "support.hpp"

using namespace phylo;
using phylo::testing::error_of;

namespace {

std::string planar_key(const PlanarTree& t) { return canonical_form(t, CanonicalMode::planar).encoding; }
std::string unordered_key(const RootedTree& t) { return canonical_form(t, CanonicalMode::unordered).encoding; }

}  // namespace

TEST_CASE("validate accepts opaque ids and densifies them") {
  RawTree raw;
  raw.leaves = 2;
  raw.vertices = {70};
  raw.edges = {{9, Node::leaf(2), Node::vertex(70)}, {4, Node::leaf(1), Node::vertex(70)}, {5, Node::vertex(70), Node::root()}};
  const PlanarTree t = validate_planar(raw);
  CHECK(t.leaf_count() == 2);
  CHECK(t.vertex_count() == 1);
  CHECK(t.edge_count() == 3);
  // children in order of appearance: leaf 2 first
  REQUIRE(t.children(0).size() == 2);
  CHECK(t.source(t.children(0)[0]) == Node::leaf(2));
  CHECK(unordered_key(t) == unordered_key(PlanarTree::corolla(2)));
}

TEST_CASE("validate rejects malformed trees") {
  RawTree two_roots;
  two_roots.leaves = 2;
  two_roots.edges = {{0, Node::leaf(1), Node::root()}, {1, Node::leaf(2), Node::root()}};
  CHECK(error_of([&] { validate(two_roots); }) == Errc::multiple_root_edges);

  RawTree no_root;
  no_root.leaves = 1;
  no_root.vertices = {0};
  no_root.edges = {{0, Node::leaf(1), Node::vertex(0)}};
  CHECK(error_of([&] { validate(no_root); }) == Errc::no_root_edge);

  RawTree missing_leaf;
  missing_leaf.leaves = 2;
  missing_leaf.edges = {{0, Node::leaf(1), Node::root()}};
  CHECK(error_of([&] { validate(missing_leaf); }) == Errc::source_not_bijective);

  RawTree doubled;
  doubled.leaves = 1;
  doubled.vertices = {0};
  doubled.edges = {{0, Node::leaf(1), Node::vertex(0)}, {1, Node::leaf(1), Node::vertex(0)}, {2, Node::vertex(0), Node::root()}};
  CHECK(error_of([&] { validate(doubled); }) == Errc::source_not_bijective);

  // v0 and v1 feed each other; v2 reaches the root
  RawTree cycle;
  cycle.leaves = 1;
  cycle.vertices = {0, 1, 2};
  cycle.edges = {{0, Node::vertex(0), Node::vertex(1)}, {1, Node::vertex(1), Node::vertex(0)},
                 {2, Node::leaf(1), Node::vertex(2)}, {3, Node::vertex(2), Node::root()}};
  CHECK(error_of([&] { validate(cycle); }) == Errc::unreachable_root);

  RawTree unknown;
  unknown.leaves = 1;
  unknown.edges = {{0, Node::leaf(1), Node::vertex(3)}};
  CHECK(error_of([&] { validate(unknown); }) == Errc::invalid_endpoint);

  CHECK(error_of([&] { validate(RawTree{}); }) == Errc::empty_edge_set);
}

TEST_CASE("a vertex of arity zero is a valid terminus") {
  // v1 is a terminus next to leaf 1
  const RootedTree t = RootedTree::from_parts(1, 2, {Node::vertex(1), Node::leaf(1), Node::vertex(0)},
                                              {Node::vertex(0), Node::vertex(0), Node::root()});
  CHECK(arity(t, 1) == 0);
  CHECK(arity(t, 0) == 2);
}

TEST_CASE("grafting relabels leaves around the insertion point") {
  // corolla(3) o_2 corolla(2): leaves 2,3 sit on the inner vertex
  const Graft g = graft_mapped(PlanarTree::corolla(3), 2, PlanarTree::corolla(2));
  CHECK(g.tree.leaf_count() == 4);
  CHECK(g.tree.vertex_count() == 2);
  CHECK(g.tree.is_internal(g.identified));
  CHECK(g.tree.leaves_below(g.identified) == std::vector<std::uint32_t>{2, 3});
  CHECK(g.tree.leaves_below(g.tree.root_edge()) == std::vector<std::uint32_t>{1, 2, 3, 4});
  // planar order of the leaves reads 1,2,3,4
  std::vector<std::uint32_t> planar;
  const std::function<void(EdgeId)> walk = [&](EdgeId e) {
    const Node s = g.tree.source(e);
    if (s.is_leaf()) {
      planar.push_back(s.index);
      return;
    }
    for (EdgeId c : g.tree.children(s.index)) walk(c);
  };
  walk(g.tree.root_edge());
  CHECK(planar == std::vector<std::uint32_t>{1, 2, 3, 4});
  CHECK(serialize_shape(g.tree) == "((2,3),1,4);");

  CHECK(error_of([] { graft(PlanarTree::corolla(2), 3, PlanarTree::unit()); }) == Errc::leaf_index_out_of_range);
}

TEST_CASE("grafting onto the unit is the identity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const PlanarTree t = phylo::testing::random_shape(phylo::testing::uniform_int(rng, 1, 6), rng);
    CHECK(planar_key(graft(PlanarTree::unit(), 1, t)) == planar_key(t));
    for (std::uint32_t i = 1; i <= t.leaf_count(); ++i) CHECK(planar_key(graft(t, i, PlanarTree::unit())) == planar_key(t));
  }
}

TEST_CASE("relabelling leaves by the cyclic permutation (2 3 1)") {
  // f under g; g carries a terminus h, a vertex i with leaves 2,3, and leaf 1
  const auto tree_with = [](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    return PlanarTree::from_parts(
        3,
        {Node::vertex(0), Node::vertex(1), Node::vertex(2), Node::vertex(3), Node::leaf(a), Node::leaf(b), Node::leaf(c)},
        {Node::root(), Node::vertex(0), Node::vertex(1), Node::vertex(1), Node::vertex(3), Node::vertex(3), Node::vertex(1)},
        {{1}, {2, 3, 6}, {}, {4, 5}});
  };
  const Permutation sigma{2, 3, 1};
  const PlanarTree before = tree_with(2, 3, 1);
  const PlanarTree after = permute_leaves(before, sigma);
  CHECK(planar_key(after) == planar_key(tree_with(1, 2, 3)));
  CHECK(planar_key(permute_leaves(after, sigma.inverse())) == planar_key(before));
}

TEST_CASE("leaf relabelling is a right action") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = phylo::testing::uniform_int(rng, 1, 6);
    const PlanarTree t = phylo::testing::random_shape(n, rng);
    const Permutation s = Permutation::random(n, rng);
    const Permutation u = Permutation::random(n, rng);
    CHECK(planar_key(permute_leaves(permute_leaves(t, s), u)) == planar_key(permute_leaves(t, s * u)));
    CHECK(planar_key(permute_leaves(t, Permutation::identity(n))) == planar_key(t));
  }
  CHECK(error_of([] { permute_leaves(PlanarTree::corolla(2), Permutation::identity(3)); }) == Errc::permutation_size_mismatch);
  CHECK(error_of([] { Permutation{1, 1}; }) == Errc::invalid_permutation);
}

TEST_CASE("contraction splices the child order") {
  // corolla(3) o_2 corolla(2), contracted, is corolla(4) with leaves in order
  const Graft g = graft_mapped(PlanarTree::corolla(3), 2, PlanarTree::corolla(2));
  const Contraction c = contract_edge_mapped(g.tree, g.identified);
  CHECK(c.position == 2);
  CHECK(c.edge_map[g.identified] == no_edge);
  CHECK(planar_key(c.tree) == planar_key(PlanarTree::corolla(4)));
  CHECK(error_of([&] { contract_edge(g.tree, g.tree.root_edge()); }) == Errc::not_internal_edge);
  CHECK(error_of([&] { contract_edge(g.tree, 99); }) == Errc::unknown_edge);
}

TEST_CASE("contracting a subtree does not depend on the edge order") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const PlanarTree t = phylo::testing::random_shape(phylo::testing::uniform_int(rng, 3, 8), rng, 3);
    // the vertex set below some vertex, down to its descendants
    const VertexId top = static_cast<VertexId>(phylo::testing::uniform_int(rng, 0, t.vertex_count() - 1));
    std::vector<VertexId> set{top};
    for (std::size_t k = 0; k < set.size(); ++k)
      for (EdgeId e : t.children(set[k]))
        if (t.source(e).is_vertex() && phylo::testing::uniform_int(rng, 0, 1) == 0) set.push_back(t.source(e).index);
    const Subtree sub = subtree_from_vertices(t, set);
    check_subtree(t, sub);
    std::vector<EdgeId> order = internal_edges_of(t, sub);
    CHECK(order.size() == set.size() - 1);
    const std::string expected = planar_key(contract_subtree(t, sub));
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      std::shuffle(order.begin(), order.end(), rng);
      CHECK(planar_key(contract_subtree(t, sub, order)) == expected);
    }
  }
}

TEST_CASE("the whole tree is a subtree of itself and contracts to a corolla") {
  const Graft g = graft_mapped(PlanarTree::corolla(2), 1, PlanarTree::corolla(3));
  const std::vector<VertexId> all{0, 1};
  const Subtree sub = subtree_from_vertices(g.tree, all);
  CHECK(sub.bottom.is_root());
  CHECK(planar_key(contract_subtree(g.tree, sub)) == planar_key(PlanarTree::corolla(4)));
}

TEST_CASE("a subtree ending at a vertex with other children") {
  // ((1,2),3): the cherry alone, whose bottom is the root vertex
  const PlanarTree t = graft(PlanarTree::corolla(2), 1, PlanarTree::corolla(2));
  VertexId cherry = 0;
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    if (!t.target(t.out_edge(v)).is_root()) cherry = v;
  const std::vector<VertexId> one{cherry};
  const Subtree sub = subtree_from_vertices(t, one);
  CHECK(sub.bottom.is_vertex());
  CHECK(sub.edges.size() == 3);
  CHECK(internal_edges_of(t, sub).empty());
  Subtree wider = sub;
  wider.edges.push_back(t.leaf_edge(3));
  std::sort(wider.edges.begin(), wider.edges.end());
  CHECK(error_of([&] { check_subtree(t, wider); }) == Errc::invalid_subtree);
}

TEST_CASE("disconnected vertex sets are rejected") {
  // two cherries under a root vertex: {v of cherry 1, v of cherry 2} is not connected
  const PlanarTree t = graft(graft(PlanarTree::corolla(2), 2, PlanarTree::corolla(2)), 1, PlanarTree::corolla(2));
  std::vector<VertexId> cherries;
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    if (!t.target(t.out_edge(v)).is_root()) cherries.push_back(v);
  REQUIRE(cherries.size() == 2);
  CHECK(error_of([&] { subtree_from_vertices(t, cherries); }) == Errc::invalid_subtree);
}

TEST_CASE("planar and unordered canonical forms") {
  // ((1,2),3) against (3,(1,2)): different planar trees, the same tree
  const PlanarTree a = graft(PlanarTree::corolla(2), 1, PlanarTree::corolla(2));
  const PlanarTree b = permute_leaves(graft(PlanarTree::corolla(2), 2, PlanarTree::corolla(2)), Permutation{2, 3, 1});
  CHECK(a.leaves_below(a.root_edge()) == b.leaves_below(b.root_edge()));
  CHECK(planar_key(a) != planar_key(b));
  CHECK(unordered_key(a) == unordered_key(b));
  const CanonicalForm ca = canonical_form(a, CanonicalMode::unordered);
  CHECK(ca.hash == fnv1a(ca.encoding));
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("the unordered form is invariant under shuffled child orders") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const PlanarTree t = phylo::testing::random_shape(phylo::testing::uniform_int(rng, 1, 8), rng);
    std::vector<Node> sources, targets;
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
      sources.push_back(t.source(e));
      targets.push_back(t.target(e));
    }
    std::vector<std::vector<EdgeId>> children;
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
      children.emplace_back(t.children(v).begin(), t.children(v).end());
      std::shuffle(children.back().begin(), children.back().end(), rng);
    }
    const PlanarTree shuffled = PlanarTree::from_parts(t.leaf_count(), sources, targets, children);
    CHECK(unordered_key(shuffled) == unordered_key(t));
    // the canonical representative is a fixed point of both modes
    const PlanarTree rep = canonical_form(t, CanonicalMode::unordered).tree;
    CHECK(planar_key(rep) == planar_key(canonical_form(shuffled, CanonicalMode::unordered).tree));
  }
}
