#pragma once

// Newick I/O. Grammar (whitespace allowed between tokens):
//   tree    := subtree [':' length] ';'
//   subtree := (integer | '(' subtree (',' subtree)* ')') ':' length
//   length  := decimal | 'inf'
// Every nested subtree carries a length; the top-level root length defaults
// to 0. Leaves are labelled 1..n, vertices are anonymous.

#include <string>
#include <string_view>

#include "phylo/phylo_tree.hpp"

namespace phylo {

/// SyntaxError (with offset), LeafLabelError, PhyloInvariantError. `inf` is a syntax error here.
PhyloTree parse_newick(std::string_view text);
/// As parse_newick, but lengths may be `inf`.
ExtendedPhyloTree parse_newick_extended(std::string_view text);

/// Canonical child order, shortest round-trip lengths, terminated by ';'.
std::string serialize_newick(const PhyloTree& tree);
std::string serialize_newick(const ExtendedPhyloTree& tree);

/// Topology only, e.g. "((1,2),3);", children in unordered canonical order.
std::string serialize_shape(const RootedTree& shape);

}  // namespace phylo
