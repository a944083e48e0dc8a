#pragma once

// Canonical representatives of isomorphism classes of trees (AHU encoding).
//
// The encoding of the subtree above an edge is its leaf label, or
// "{vertex-key}(child,child,...)" for a vertex; a present edge key is
// prepended as "key:". In unordered mode the child encodings are sorted
// lexicographically; in planar mode they keep the tree's child order.
// Leaf labels are part of the encoding, so only label-preserving
// isomorphisms are detected.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "phylo/tree.hpp"

namespace phylo {

enum class CanonicalMode { planar, unordered };

using LabelKey = std::function<std::string(std::uint32_t)>;

struct CanonicalForm {
  // Ids assigned in DFS preorder from the root edge, children in canonical order.
  PlanarTree tree;
  std::string encoding;
  std::uint64_t hash = 0;
  std::vector<EdgeId> edge_origin;      // canonical edge -> original edge
  std::vector<VertexId> vertex_origin;  // canonical vertex -> original vertex
};

/// `vertex_key` / `edge_key` (optional) give label strings; they must not
/// contain any of "(),{}:".
CanonicalForm canonical_form(const RootedTree& tree, CanonicalMode mode, const LabelKey& vertex_key = {},
                             const LabelKey& edge_key = {});

std::uint64_t fnv1a(std::string_view bytes) noexcept;

}  // namespace phylo
