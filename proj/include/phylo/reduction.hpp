#pragma once

// Normal forms for operations of the coproduct Com + [0,inf).
//
// A MixedTree is a planar tree whose vertices are either Com-labelled (the
// unique operation of their arity; arity 1 is the Com identity) or unlabelled
// unary joints, and whose edges are unlabelled or carry a length. Unary
// [0,inf)-vertices are drawn as a joint whose child edge carries the length.
//
// Forward moves:
//   merge_com        two Com vertices joined by an unlabelled or 0 edge become one
//   join_lengths     a joint between two labelled edges is removed, lengths added
//   unlabel_identity a unary Com vertex becomes a joint
//   drop_root_joint  a joint under the root whose child edge is 0 is removed
//   label_identity   an unlabelled non-root edge gets length 0
// The system terminates and is confluent; the reduced tree then has its root
// edge labelled by the final root rule, so every edge carries a length.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phylo/phylo_tree.hpp"
#include "phylo/tree.hpp"

namespace phylo {

enum class VertexKind : std::uint8_t { com, joint };

struct MixedTree {
  PlanarTree tree;
  std::vector<VertexKind> kinds;               // per vertex
  std::vector<std::optional<double>> lengths;  // per edge; nullopt = unlabelled
};

/// Throws MalformedLabelling on size mismatches, joints that are not unary,
/// nullary Com vertices or lengths outside [0, inf).
void check_mixed(const MixedTree& t);

/// Unordered canonical encoding; equal iff the trees are isomorphic with labels.
std::string mixed_encoding(const MixedTree& t);

enum class Move : std::uint8_t { merge_com, join_lengths, unlabel_identity, drop_root_joint, label_identity };

std::string_view move_name(Move m) noexcept;

struct MoveSite {
  Move move;
  std::uint32_t at;  // edge id for merge_com / label_identity, vertex id otherwise
  friend bool operator==(const MoveSite&, const MoveSite&) = default;
};

/// Every forward move applicable to `t` (whose root edge must be unlabelled).
std::vector<MoveSite> applicable_moves(const MixedTree& t);
MixedTree apply_move(const MixedTree& t, MoveSite site);

/// Chooses one of the (nonempty) applicable moves.
using MoveSelector = std::function<std::size_t(const MixedTree&, std::span<const MoveSite>)>;

/// Deepest site first, ties by move kind then id.
std::size_t innermost_first(const MixedTree& t, std::span<const MoveSite> moves);

struct ReductionResult {
  MixedTree tree;
  std::size_t steps = 0;
  std::size_t step_bound = 0;  // termination measure of the input
};

/// Reduces to normal form and applies the root rule. A labelled root edge in
/// the input is first read back through the root rule (a joint under the root).
ReductionResult reduce_coproduct(const MixedTree& t, const MoveSelector& select = innermost_first);
MixedTree reduce_coproduct_tree(const MixedTree& t);

/// The reduced tree as a phylogenetic tree; NotReduced if `t` is not in normal form.
PhyloTree to_phylo(const MixedTree& t);
MixedTree from_phylo(const PhyloTree& t);

}  // namespace phylo
