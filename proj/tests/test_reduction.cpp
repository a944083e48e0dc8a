#include <random>

#include "doctest.h"
#include "phylo/json_io.hpp"
#include "phylo/newick.hpp"
#include "phylo/reduction.hpp"
#include "support.hpp"

using namespace phylo;
using phylo::testing::error_of;

namespace {

MixedTree mixed(const char* json) { return mixed_tree_from_json(parse_json(json)); }

std::string reduced_newick(const MixedTree& t) { return serialize_newick(to_phylo(reduce_coproduct_tree(t))); }

MoveSelector random_selector(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const MixedTree&, std::span<const MoveSite> moves) {
    return phylo::testing::uniform_int(*rng, 0, moves.size() - 1);
  };
}

}  // namespace

TEST_CASE("unlabelled edges of a Com corolla become zero") {
  const MixedTree t = mixed(R"({"kinds":["com"],"edges":[
    {"from":"L1","to":"v0","length":null},{"from":"L2","to":"v0","length":null},{"from":"v0","to":"root","length":null}]})");
  CHECK(reduced_newick(t) == "(1:0,2:0):0;");
}

TEST_CASE("a joint between two lengths adds them") {
  const MixedTree t = mixed(R"({"kinds":["joint","com"],"edges":[
    {"from":"L1","to":"v0","length":0.5},{"from":"v0","to":"v1","length":0.25},
    {"from":"L2","to":"v1","length":1},{"from":"v1","to":"root","length":null}]})");
  CHECK(reduced_newick(t) == "(1:0.75,2:1):0;");
}

TEST_CASE("Com vertices joined by an unlabelled or zero edge merge") {
  const MixedTree unlabelled = mixed(R"({"kinds":["com","com"],"edges":[
    {"from":"L1","to":"v0","length":0},{"from":"L2","to":"v0","length":0},{"from":"v0","to":"v1","length":null},
    {"from":"L3","to":"v1","length":0},{"from":"v1","to":"root","length":null}]})");
  CHECK(reduced_newick(unlabelled) == "(1:0,2:0,3:0):0;");
  const MixedTree zero = mixed(R"({"kinds":["com","com"],"edges":[
    {"from":"L1","to":"v0","length":0},{"from":"L2","to":"v0","length":0},{"from":"v0","to":"v1","length":0},
    {"from":"L3","to":"v1","length":0},{"from":"v1","to":"root","length":null}]})");
  CHECK(reduced_newick(zero) == "(1:0,2:0,3:0):0;");
  const MixedTree positive = mixed(R"({"kinds":["com","com"],"edges":[
    {"from":"L1","to":"v0","length":0},{"from":"L2","to":"v0","length":0},{"from":"v0","to":"v1","length":1.5},
    {"from":"L3","to":"v1","length":0},{"from":"v1","to":"root","length":null}]})");
  CHECK(parse_newick(reduced_newick(positive)) == parse_newick("((1:0,2:0):1.5,3:0):0;"));
}

TEST_CASE("a unary Com vertex is an identity") {
  const MixedTree t = mixed(R"({"kinds":["com","com"],"edges":[
    {"from":"L1","to":"v0","length":0.5},{"from":"v0","to":"v1","length":0.25},
    {"from":"L2","to":"v1","length":null},{"from":"v1","to":"root","length":null}]})");
  CHECK(reduced_newick(t) == "(1:0.75,2:0):0;");
}

TEST_CASE("root edge rules") {
  // a length below the root moves onto the root edge
  const MixedTree joint_below_root = mixed(R"({"kinds":["com","joint"],"edges":[
    {"from":"L1","to":"v0","length":null},{"from":"L2","to":"v0","length":null},
    {"from":"v0","to":"v1","length":1.5},{"from":"v1","to":"root","length":null}]})");
  CHECK(reduced_newick(joint_below_root) == "(1:0,2:0):1.5;");
  // a zero under the root disappears
  const MixedTree zero_below_root = mixed(R"({"kinds":["com","joint"],"edges":[
    {"from":"L1","to":"v0","length":null},{"from":"L2","to":"v0","length":null},
    {"from":"v0","to":"v1","length":0},{"from":"v1","to":"root","length":null}]})");
  CHECK(reduced_newick(zero_below_root) == "(1:0,2:0):0;");
  // a labelled root edge is kept
  const MixedTree labelled_root = mixed(R"({"kinds":["com"],"edges":[
    {"from":"L1","to":"v0","length":null},{"from":"L2","to":"v0","length":null},{"from":"v0","to":"root","length":2}]})");
  CHECK(reduced_newick(labelled_root) == "(1:0,2:0):2;");
  // stacked lengths under the root add up
  const MixedTree stacked = mixed(R"({"kinds":["com","joint","joint"],"edges":[
    {"from":"L1","to":"v0","length":null},{"from":"L2","to":"v0","length":null},
    {"from":"v0","to":"v1","length":0.5},{"from":"v1","to":"v2","length":0.25},{"from":"v2","to":"root","length":null}]})");
  CHECK(reduced_newick(stacked) == "(1:0,2:0):0.75;");
  // the unit: a leaf straight to the root
  const MixedTree bare = mixed(R"({"kinds":[],"edges":[{"from":"L1","to":"root","length":null}]})");
  CHECK(reduced_newick(bare) == "1:0;");
  const MixedTree through_joint = mixed(R"({"kinds":["joint"],"edges":[
    {"from":"L1","to":"v0","length":0.5},{"from":"v0","to":"root","length":null}]})");
  CHECK(reduced_newick(through_joint) == "1:0.5;");
}

TEST_CASE("malformed mixed trees") {
  CHECK(error_of([] { mixed(R"({"kinds":["joint"],"edges":[
    {"from":"L1","to":"v0","length":null},{"from":"L2","to":"v0","length":null},{"from":"v0","to":"root","length":null}]})"); }) ==
        Errc::malformed_labelling);
  CHECK(error_of([] { mixed(R"({"kinds":["com"],"edges":[
    {"from":"L1","to":"v0","length":-1},{"from":"v0","to":"root","length":null}]})"); }) == Errc::malformed_labelling);
  CHECK(error_of([] { mixed(R"({"kinds":["blue"],"edges":[]})"); }) == Errc::malformed_labelling);
  CHECK(error_of([] { mixed(R"({"edges":[]})"); }) == Errc::syntax_error);
}

TEST_CASE("to_phylo refuses trees that are not reduced") {
  const MixedTree t = mixed(R"({"kinds":["com"],"edges":[
    {"from":"L1","to":"v0","length":null},{"from":"L2","to":"v0","length":0},{"from":"v0","to":"root","length":0}]})");
  CHECK(error_of([&] { to_phylo(t); }) == Errc::not_reduced);
}

TEST_CASE("every move order reaches the same normal form") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const MixedTree t = phylo::testing::random_mixed(rng);
    const ReductionResult base = reduce_coproduct(t);
    CHECK(base.steps <= base.step_bound);
    const std::string expected = mixed_encoding(base.tree);
    for (std::uint64_t k = 0; k < 10; ++k) {
      const ReductionResult r = reduce_coproduct(t, random_selector(rng()));
      CHECK(mixed_encoding(r.tree) == expected);
      CHECK(r.steps <= r.step_bound);
    }
    CHECK_NOTHROW(to_phylo(base.tree));
  }
}

TEST_CASE("phylogenetic trees are already reduced") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const PhyloTree p = phylo::testing::random_phylo(phylo::testing::uniform_int(rng, 1, 6), rng);
    const MixedTree m = from_phylo(p);
    CHECK(to_phylo(m) == p);
    CHECK(to_phylo(reduce_coproduct_tree(m)) == p);
  }
}

TEST_CASE("moves are listed only where they apply") {
  const MixedTree t = mixed(R"({"kinds":["com"],"edges":[
    {"from":"L1","to":"v0","length":null},{"from":"v0","to":"root","length":null}]})");
  const std::vector<MoveSite> moves = applicable_moves(t);
  CHECK(std::find(moves.begin(), moves.end(), MoveSite{Move::unlabel_identity, 0}) != moves.end());
  CHECK(std::find(moves.begin(), moves.end(), MoveSite{Move::label_identity, 0}) != moves.end());
  CHECK(std::none_of(moves.begin(), moves.end(), [](MoveSite m) { return m.move == Move::merge_com; }));
  CHECK(move_name(Move::join_lengths) == "join_lengths");
}
