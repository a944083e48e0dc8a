#pragma once

// Rooted n-trees as (V, E, source, target): every vertex and every leaf has
// exactly one outgoing edge, edges point toward the root 0, and exactly one
// edge ends at the root.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "phylo/permutation.hpp"

namespace phylo {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr EdgeId no_edge = std::numeric_limits<EdgeId>::max();
inline constexpr VertexId no_vertex = std::numeric_limits<VertexId>::max();

/// An edge endpoint: the root 0, a leaf labelled 1..n, or a vertex.
struct Node {
  enum class Kind : std::uint8_t { root, leaf, vertex };

  Kind kind = Kind::root;
  std::uint32_t index = 0;

  static constexpr Node root() noexcept { return {Kind::root, 0}; }
  static constexpr Node leaf(std::uint32_t label) noexcept { return {Kind::leaf, label}; }
  static constexpr Node vertex(VertexId id) noexcept { return {Kind::vertex, id}; }

  constexpr bool is_root() const noexcept { return kind == Kind::root; }
  constexpr bool is_leaf() const noexcept { return kind == Kind::leaf; }
  constexpr bool is_vertex() const noexcept { return kind == Kind::vertex; }

  friend constexpr auto operator<=>(const Node&, const Node&) = default;
};

std::string to_string(const Node& node);

// Unchecked tree description with caller-chosen (opaque) vertex and edge ids.
struct RawEdge {
  std::uint32_t id = 0;
  Node source;
  Node target;
};

struct RawTree {
  std::size_t leaves = 0;
  std::vector<std::uint32_t> vertices;
  std::vector<RawEdge> edges;
  // Planar structure: raw vertex id -> raw ids of its child edges, in order.
  // Vertices without an entry order their children by position in `edges`.
  std::map<std::uint32_t, std::vector<std::uint32_t>> child_order;
};

class RootedTree {
 public:
  /// Builds from dense ids (vertices 0..vertex_count-1, edges 0..size-1).
  /// Children are stored in edge-id order.
  static RootedTree from_parts(std::size_t leaves, std::size_t vertex_count, std::vector<Node> sources,
                               std::vector<Node> targets);

  std::size_t leaf_count() const noexcept { return leaves_; }
  std::size_t vertex_count() const noexcept { return children_.size(); }
  std::size_t edge_count() const noexcept { return source_.size(); }

  Node source(EdgeId e) const { return source_.at(e); }
  Node target(EdgeId e) const { return target_.at(e); }
  EdgeId root_edge() const noexcept { return root_edge_; }
  EdgeId leaf_edge(std::uint32_t label) const { return leaf_out_.at(label - 1); }
  EdgeId out_edge(VertexId v) const { return vertex_out_.at(v); }
  EdgeId edge_from(Node node) const;
  /// in(v): the child edges of v (planar order for a PlanarTree).
  std::span<const EdgeId> children(VertexId v) const { return children_.at(v); }

  bool is_internal(EdgeId e) const { return source_.at(e).is_vertex() && target_.at(e).is_vertex(); }
  std::vector<EdgeId> internal_edges() const;
  // Leaf labels below edge e, ascending.
  std::vector<std::uint32_t> leaves_below(EdgeId e) const;

  friend bool operator==(const RootedTree&, const RootedTree&) = default;

 protected:
  RootedTree() = default;
  void build(std::size_t leaves, std::vector<Node> sources, std::vector<Node> targets,
             std::vector<std::vector<EdgeId>> children);

  std::size_t leaves_ = 0;
  std::vector<Node> source_;
  std::vector<Node> target_;
  std::vector<std::vector<EdgeId>> children_;
  std::vector<EdgeId> vertex_out_;
  std::vector<EdgeId> leaf_out_;
  EdgeId root_edge_ = no_edge;
};

/// A rooted tree whose child lists carry a linear order.
class PlanarTree : public RootedTree {
 public:
  /// `children[v]` must list exactly the edges targeting v, in planar order.
  static PlanarTree from_parts(std::size_t leaves, std::vector<Node> sources, std::vector<Node> targets,
                               std::vector<std::vector<EdgeId>> children);
  /// Adopts the (arbitrary) stored child order of an unordered tree.
  static PlanarTree from_rooted(const RootedTree& tree);

  /// The tree with no vertices and a single edge from leaf 1 to the root.
  static PlanarTree unit();
  /// One vertex with leaves 1..n in order.
  static PlanarTree corolla(std::size_t n);

  friend bool operator==(const PlanarTree&, const PlanarTree&) = default;

 private:
  PlanarTree() = default;
};

RootedTree validate(const RawTree& raw);
PlanarTree validate_planar(const RawTree& raw);

std::size_t arity(const RootedTree& tree, VertexId v);

// Grafting inner onto leaf i of outer. The result keeps outer's vertex and
// edge ids (outer's i-th leaf edge becomes the identified edge); inner's
// vertices follow, shifted by outer.vertex_count(), and inner's non-root
// edges are appended in id order.
struct Graft {
  PlanarTree tree;
  EdgeId identified = no_edge;
  VertexId inner_vertex_offset = 0;
  std::vector<EdgeId> inner_edge;  // inner edge id -> result edge id
};

Graft graft_mapped(const PlanarTree& outer, std::uint32_t i, const PlanarTree& inner);
PlanarTree graft(const PlanarTree& outer, std::uint32_t i, const PlanarTree& inner);

/// Leaf with label k is relabelled sigma^{-1}(k).
PlanarTree permute_leaves(const PlanarTree& tree, const Permutation& sigma);

// Contraction of an internal edge e. The merged vertex takes the id of
// target(e); ids above source(e) shift down by one, as do edge ids above e.
struct Contraction {
  PlanarTree tree;
  VertexId merged = no_vertex;
  std::vector<VertexId> vertex_map;  // old -> new (both endpoints map to merged)
  std::vector<EdgeId> edge_map;      // old -> new, no_edge for e
  std::uint32_t position = 0;        // 1-based position of e among the children of target(e)
};

Contraction contract_edge_mapped(const PlanarTree& tree, EdgeId e);
PlanarTree contract_edge(const PlanarTree& tree, EdgeId e);

/// A subtree S of a host tree: vertices V_S, edges E_S, inputs in_S and the
/// node 0_S below it. 0_S may be the root so that a tree is a subtree of itself.
struct Subtree {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  std::vector<Node> inputs;
  Node bottom;
};

/// Throws InvalidSubtree unless `sub` satisfies the closure condition in `tree`.
void check_subtree(const RootedTree& tree, const Subtree& sub);
/// The subtree spanned by a connected, nonempty vertex set.
Subtree subtree_from_vertices(const RootedTree& tree, std::span<const VertexId> vertices);
/// Edges of `sub` with both ends in V_S.
std::vector<EdgeId> internal_edges_of(const RootedTree& tree, const Subtree& sub);

PlanarTree contract_subtree(const PlanarTree& tree, const Subtree& sub);
/// Contracts the internal edges of `sub` in the given order (a permutation of
/// internal_edges_of(sub), as ids of the original tree).
PlanarTree contract_subtree(const PlanarTree& tree, const Subtree& sub, std::span<const EdgeId> order);

}  // namespace phylo
