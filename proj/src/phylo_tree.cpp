#include "phylo/phylo_tree.hpp"

namespace phylo {

template <class L>
void check_phylo(const RootedTree& shape, std::span<const L> lengths) {
  using Traits = LengthTraits<L>;
  if (lengths.size() != shape.edge_count()) {
    throw Error(Errc::phylo_invariant, "expected " + std::to_string(shape.edge_count()) + " edge lengths, got " +
                                           std::to_string(lengths.size()));
  }
  for (VertexId v = 0; v < shape.vertex_count(); ++v) {
    if (shape.children(v).size() < 2) {
      throw Error(Errc::phylo_invariant, "vertex of arity " + std::to_string(shape.children(v).size()));
    }
  }
  for (EdgeId e = 0; e < shape.edge_count(); ++e) {
    if (!Traits::admissible(lengths[e])) {
      throw Error(Errc::phylo_invariant, "inadmissible length " + format_length(Traits::value(lengths[e])));
    }
    if (shape.is_internal(e) && !(Traits::value(lengths[e]) > 0.0)) {
      throw Error(Errc::phylo_invariant, "internal edge of length " + format_length(Traits::value(lengths[e])));
    }
  }
}

template <class L>
BasicPhyloTree<L> BasicPhyloTree<L>::make(const RootedTree& shape, std::vector<L> lengths) {
  using Traits = LengthTraits<L>;
  for (L& x : lengths) {
    if (Traits::value(x) == 0.0) x = Traits::make(0.0);  // drop the sign of -0
  }
  check_phylo<L>(shape, lengths);
  CanonicalForm canon = canonical_form(shape, CanonicalMode::unordered, {},
                                       [&](std::uint32_t e) { return format_length(Traits::value(lengths[e])); });
  std::vector<L> ordered(lengths.size());
  for (EdgeId e = 0; e < ordered.size(); ++e) ordered[e] = lengths[canon.edge_origin[e]];
  return BasicPhyloTree(std::move(canon.tree), std::move(ordered), std::move(canon.encoding));
}

template <class L>
BasicPhyloTree<L> BasicPhyloTree<L>::unit(L length) {
  return make(PlanarTree::unit(), {length});
}

template <class L>
BasicPhyloTree<L> BasicPhyloTree<L>::corolla(std::vector<L> leaf_lengths, L root_length) {
  PlanarTree shape = PlanarTree::corolla(leaf_lengths.size());
  leaf_lengths.push_back(root_length);
  return make(shape, std::move(leaf_lengths));
}

template <class L>
BasicPhyloTree<L> phylo_compose(const BasicPhyloTree<L>& outer, std::uint32_t i, const BasicPhyloTree<L>& inner) {
  Graft g = graft_mapped(outer.shape(), i, inner.shape());
  std::vector<L> lengths(g.tree.edge_count());
  for (EdgeId e = 0; e < outer.shape().edge_count(); ++e) lengths[e] = outer.length(e);
  for (EdgeId e = 0; e < inner.shape().edge_count(); ++e) {
    if (e != inner.shape().root_edge()) lengths[g.inner_edge[e]] = inner.length(e);
  }
  lengths[g.identified] = outer.leaf_length(i) + inner.root_length();

  if (g.tree.is_internal(g.identified) && LengthTraits<L>::value(lengths[g.identified]) == 0.0) {
    Contraction c = contract_edge_mapped(g.tree, g.identified);
    std::vector<L> kept(c.tree.edge_count());
    for (EdgeId e = 0; e < lengths.size(); ++e) {
      if (c.edge_map[e] != no_edge) kept[c.edge_map[e]] = lengths[e];
    }
    return BasicPhyloTree<L>::make(c.tree, std::move(kept));
  }
  return BasicPhyloTree<L>::make(g.tree, std::move(lengths));
}

template <class L>
BasicPhyloTree<L> phylo_act(const BasicPhyloTree<L>& tree, const Permutation& sigma) {
  PlanarTree shape = permute_leaves(tree.shape(), sigma);
  return BasicPhyloTree<L>::make(shape, std::vector<L>(tree.lengths().begin(), tree.lengths().end()));
}

ExtendedPhyloTree to_extended(const PhyloTree& tree) {
  std::vector<ExtendedLength> lengths;
  for (double x : tree.lengths()) lengths.push_back({x});
  return ExtendedPhyloTree::make(tree.shape(), std::move(lengths));
}

template class BasicPhyloTree<double>;
template class BasicPhyloTree<ExtendedLength>;
template void check_phylo<double>(const RootedTree&, std::span<const double>);
template void check_phylo<ExtendedLength>(const RootedTree&, std::span<const ExtendedLength>);
template PhyloTree phylo_compose(const PhyloTree&, std::uint32_t, const PhyloTree&);
template ExtendedPhyloTree phylo_compose(const ExtendedPhyloTree&, std::uint32_t, const ExtendedPhyloTree&);
template PhyloTree phylo_act(const PhyloTree&, const Permutation&);
template ExtendedPhyloTree phylo_act(const ExtendedPhyloTree&, const Permutation&);

}  // namespace phylo
