#pragma once

// Phylogenetic trees: operations of Phyl = Com + [0,inf), and of Com + [0,inf]
// when lengths are extended. Values are stored in canonical (unordered) form,
// so equality of values is equality of operations.

#include <span>
#include <string>
#include <vector>

#include "phylo/canonical.hpp"
#include "phylo/error.hpp"
#include "phylo/length.hpp"
#include "phylo/permutation.hpp"
#include "phylo/tree.hpp"

namespace phylo {

template <class L>
class BasicPhyloTree {
 public:
  using Length = L;

  /// Validates the phylogenetic rules and canonicalizes. `lengths` is indexed
  /// by edge id of `shape`.
  static BasicPhyloTree make(const RootedTree& shape, std::vector<L> lengths);
  /// The 1-tree with a single edge of the given length.
  static BasicPhyloTree unit(L length = L{});
  /// A corolla; leaf_lengths[k-1] is the length of leaf k.
  static BasicPhyloTree corolla(std::vector<L> leaf_lengths, L root_length = L{});

  std::size_t leaf_count() const noexcept { return shape_.leaf_count(); }
  const PlanarTree& shape() const noexcept { return shape_; }
  std::span<const L> lengths() const noexcept { return lengths_; }
  L length(EdgeId e) const { return lengths_.at(e); }
  L root_length() const { return lengths_[shape_.root_edge()]; }
  L leaf_length(std::uint32_t k) const { return lengths_[shape_.leaf_edge(k)]; }
  /// The unordered canonical encoding with lengths.
  const std::string& encoding() const noexcept { return encoding_; }
  std::uint64_t hash() const noexcept { return fnv1a(encoding_); }

  friend bool operator==(const BasicPhyloTree& a, const BasicPhyloTree& b) { return a.encoding_ == b.encoding_; }

 private:
  BasicPhyloTree(PlanarTree shape, std::vector<L> lengths, std::string encoding)
      : shape_(std::move(shape)), lengths_(std::move(lengths)), encoding_(std::move(encoding)) {}

  PlanarTree shape_;
  std::vector<L> lengths_;
  std::string encoding_;
};

using PhyloTree = BasicPhyloTree<double>;
using ExtendedPhyloTree = BasicPhyloTree<ExtendedLength>;

/// Throws PhyloInvariantError unless no vertex has arity 0 or 1, every length
/// is admissible and every internal length is positive.
template <class L>
void check_phylo(const RootedTree& shape, std::span<const L> lengths);

/// Grafting with length addition on the identified edge; an internal edge of
/// length exactly 0 is then contracted.
template <class L>
BasicPhyloTree<L> phylo_compose(const BasicPhyloTree<L>& outer, std::uint32_t i, const BasicPhyloTree<L>& inner);

template <class L>
BasicPhyloTree<L> phylo_act(const BasicPhyloTree<L>& tree, const Permutation& sigma);

ExtendedPhyloTree to_extended(const PhyloTree& tree);

/// Phyl as an Operad instance.
struct Phyl {
  using Label = PhyloTree;
  static std::size_t arity(const Label& t) { return t.leaf_count(); }
  static bool equal(const Label& a, const Label& b) { return a == b; }
  static std::string key(const Label& t) { return t.encoding(); }
  static Label compose(const Label& f, std::uint32_t i, const Label& g) { return phylo_compose(f, i, g); }
  static Label identity() { return PhyloTree::unit(0.0); }
  static Label act(const Label& f, const Permutation& sigma) { return phylo_act(f, sigma); }
};

/// Com + [0,inf] as an Operad instance.
struct ExtendedPhyl {
  using Label = ExtendedPhyloTree;
  static std::size_t arity(const Label& t) { return t.leaf_count(); }
  static bool equal(const Label& a, const Label& b) { return a == b; }
  static std::string key(const Label& t) { return t.encoding(); }
  static Label compose(const Label& f, std::uint32_t i, const Label& g) { return phylo_compose(f, i, g); }
  static Label identity() { return ExtendedPhyloTree::unit(ExtendedLength{0.0}); }
  static Label act(const Label& f, const Permutation& sigma) { return phylo_act(f, sigma); }
};

extern template class BasicPhyloTree<double>;
extern template class BasicPhyloTree<ExtendedLength>;

}  // namespace phylo
