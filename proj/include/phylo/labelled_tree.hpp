#pragma once

#include <span>
#include <utility>
#include <vector>

#include "phylo/canonical.hpp"
#include "phylo/error.hpp"
#include "phylo/tree.hpp"

namespace phylo {

/// A planar tree with one label per vertex. Edge labels, when a layer needs
/// them, live in the owning type (PhyloTree, MixedTree).
template <class Label>
struct LabelledTree {
  PlanarTree tree;
  std::vector<Label> labels;  // indexed by vertex id

  LabelledTree(PlanarTree t, std::vector<Label> l) : tree(std::move(t)), labels(std::move(l)) {
    if (labels.size() != tree.vertex_count()) {
      throw Error(Errc::malformed_labelling, "expected " + std::to_string(tree.vertex_count()) + " vertex labels");
    }
  }

  std::size_t leaf_count() const noexcept { return tree.leaf_count(); }
};

template <class Label>
LabelledTree<Label> graft(const LabelledTree<Label>& outer, std::uint32_t i, const LabelledTree<Label>& inner) {
  Graft g = graft_mapped(outer.tree, i, inner.tree);
  std::vector<Label> labels = outer.labels;
  labels.insert(labels.end(), inner.labels.begin(), inner.labels.end());
  return LabelledTree<Label>(std::move(g.tree), std::move(labels));
}

template <class Label>
LabelledTree<Label> permute_leaves(const LabelledTree<Label>& t, const Permutation& sigma) {
  return LabelledTree<Label>(permute_leaves(t.tree, sigma), t.labels);
}

/// Contracts internal edge e; `merge(upper, position, lower)` labels the new vertex.
template <class Label, class Merge>
LabelledTree<Label> contract_edge(const LabelledTree<Label>& t, EdgeId e, Merge&& merge) {
  Contraction c = contract_edge_mapped(t.tree, e);
  const VertexId upper = t.tree.target(e).index;
  const VertexId lower = t.tree.source(e).index;
  std::vector<Label> labels;
  labels.reserve(t.labels.size() - 1);
  for (VertexId v = 0; v < t.labels.size(); ++v) {
    if (v == lower) continue;
    if (v == upper) {
      labels.push_back(merge(t.labels[upper], c.position, t.labels[lower]));
    } else {
      labels.push_back(t.labels[v]);
    }
  }
  return LabelledTree<Label>(std::move(c.tree), std::move(labels));
}

/// Canonical form with vertex labels rendered through `key`.
template <class Label, class Key>
CanonicalForm canonical_form(const LabelledTree<Label>& t, CanonicalMode mode, Key&& key) {
  return canonical_form(t.tree, mode, [&](std::uint32_t v) { return key(t.labels[v]); });
}

}  // namespace phylo
