#include "phylo/tree.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "phylo/error.hpp"

namespace phylo {

std::string to_string(const Node& node) {
  switch (node.kind) {
    case Node::Kind::root: return "0";
    case Node::Kind::leaf: return std::to_string(node.index);
    case Node::Kind::vertex: return "v" + std::to_string(node.index);
  }
  return "?";
}

void RootedTree::build(std::size_t leaves, std::vector<Node> sources, std::vector<Node> targets,
                       std::vector<std::vector<EdgeId>> children) {
  const std::size_t vertices = children.size();
  if (sources.empty()) throw Error(Errc::empty_edge_set, "a tree needs at least one edge");
  if (sources.size() != targets.size()) throw Error(Errc::invalid_endpoint, "source/target size mismatch");

  const auto bad_node = [&](Node node, bool as_source) {
    switch (node.kind) {
      case Node::Kind::root: return as_source;
      case Node::Kind::leaf: return !as_source || node.index < 1 || node.index > leaves;
      case Node::Kind::vertex: return node.index >= vertices;
    }
    return true;
  };

  EdgeId root = no_edge;
  std::size_t root_edges = 0;
  for (EdgeId e = 0; e < sources.size(); ++e) {
    if (bad_node(sources[e], true) || bad_node(targets[e], false)) {
      throw Error(Errc::invalid_endpoint,
                  "edge " + std::to_string(e) + ": " + to_string(sources[e]) + " -> " + to_string(targets[e]));
    }
    if (targets[e].is_root()) {
      root = e;
      ++root_edges;
    }
  }
  if (root_edges == 0) throw Error(Errc::no_root_edge, "no edge targets the root");
  if (root_edges > 1) throw Error(Errc::multiple_root_edges, std::to_string(root_edges) + " edges target the root");

  std::vector<EdgeId> vertex_out(vertices, no_edge);
  std::vector<EdgeId> leaf_out(leaves, no_edge);
  for (EdgeId e = 0; e < sources.size(); ++e) {
    EdgeId& slot = sources[e].is_leaf() ? leaf_out[sources[e].index - 1] : vertex_out[sources[e].index];
    if (slot != no_edge) throw Error(Errc::source_not_bijective, to_string(sources[e]) + " is the source of two edges");
    slot = e;
  }
  for (std::size_t v = 0; v < vertices; ++v) {
    if (vertex_out[v] == no_edge) throw Error(Errc::source_not_bijective, "vertex v" + std::to_string(v) + " has no outgoing edge");
  }
  for (std::size_t k = 0; k < leaves; ++k) {
    if (leaf_out[k] == no_edge) throw Error(Errc::source_not_bijective, "leaf " + std::to_string(k + 1) + " has no edge");
  }

  // Each vertex must reach the root; with bijective sources the only failure is a cycle.
  enum : std::uint8_t { unseen, active, done };
  std::vector<std::uint8_t> state(vertices, unseen);
  std::vector<VertexId> path;
  for (VertexId start = 0; start < vertices; ++start) {
    VertexId v = start;
    path.clear();
    while (state[v] == unseen) {
      state[v] = active;
      path.push_back(v);
      const Node next = targets[vertex_out[v]];
      if (!next.is_vertex()) break;
      v = next.index;
      if (state[v] == active) throw Error(Errc::unreachable_root, "cycle through vertex v" + std::to_string(v));
    }
    for (VertexId p : path) state[p] = done;
  }

  std::vector<std::vector<EdgeId>> by_target(vertices);
  for (EdgeId e = 0; e < targets.size(); ++e) {
    if (targets[e].is_vertex()) by_target[targets[e].index].push_back(e);
  }
  for (VertexId v = 0; v < vertices; ++v) {
    const auto& expected = by_target[v];
    std::vector<EdgeId> given = children[v];
    std::sort(given.begin(), given.end());
    if (given != expected) throw Error(Errc::invalid_endpoint, "child order of v" + std::to_string(v) + " does not list its children");
  }

  leaves_ = leaves;
  source_ = std::move(sources);
  target_ = std::move(targets);
  children_ = std::move(children);
  vertex_out_ = std::move(vertex_out);
  leaf_out_ = std::move(leaf_out);
  root_edge_ = root;
}

namespace {

std::vector<std::vector<EdgeId>> children_by_id(std::size_t vertex_count, const std::vector<Node>& targets) {
  std::vector<std::vector<EdgeId>> children(vertex_count);
  for (EdgeId e = 0; e < targets.size(); ++e) {
    if (targets[e].is_vertex() && targets[e].index < vertex_count) children[targets[e].index].push_back(e);
  }
  return children;
}

}  // namespace

RootedTree RootedTree::from_parts(std::size_t leaves, std::size_t vertex_count, std::vector<Node> sources,
                                  std::vector<Node> targets) {
  RootedTree tree;
  auto children = children_by_id(vertex_count, targets);
  tree.build(leaves, std::move(sources), std::move(targets), std::move(children));
  return tree;
}

EdgeId RootedTree::edge_from(Node node) const {
  switch (node.kind) {
    case Node::Kind::leaf: return leaf_edge(node.index);
    case Node::Kind::vertex: return out_edge(node.index);
    case Node::Kind::root: break;
  }
  throw Error(Errc::invalid_endpoint, "the root has no outgoing edge");
}

std::vector<EdgeId> RootedTree::internal_edges() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < edge_count(); ++e) {
    if (is_internal(e)) out.push_back(e);
  }
  return out;
}

std::vector<std::uint32_t> RootedTree::leaves_below(EdgeId e) const {
  std::vector<std::uint32_t> out;
  std::vector<EdgeId> stack{e};
  while (!stack.empty()) {
    const Node s = source_.at(stack.back());
    stack.pop_back();
    if (s.is_leaf()) {
      out.push_back(s.index);
    } else {
      for (EdgeId c : children_[s.index]) stack.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

PlanarTree PlanarTree::from_parts(std::size_t leaves, std::vector<Node> sources, std::vector<Node> targets,
                                  std::vector<std::vector<EdgeId>> children) {
  PlanarTree tree;
  tree.build(leaves, std::move(sources), std::move(targets), std::move(children));
  return tree;
}

PlanarTree PlanarTree::from_rooted(const RootedTree& tree) {
  PlanarTree out;
  static_cast<RootedTree&>(out) = tree;
  return out;
}

PlanarTree PlanarTree::unit() { return from_parts(1, {Node::leaf(1)}, {Node::root()}, {}); }

PlanarTree PlanarTree::corolla(std::size_t n) {
  std::vector<Node> sources, targets;
  std::vector<std::vector<EdgeId>> children(1);
  for (std::uint32_t k = 1; k <= n; ++k) {
    children[0].push_back(static_cast<EdgeId>(sources.size()));
    sources.push_back(Node::leaf(k));
    targets.push_back(Node::vertex(0));
  }
  sources.push_back(Node::vertex(0));
  targets.push_back(Node::root());
  return from_parts(n, std::move(sources), std::move(targets), std::move(children));
}

namespace {

struct DenseRaw {
  std::size_t leaves;
  std::vector<Node> sources;
  std::vector<Node> targets;
  std::vector<std::vector<EdgeId>> children;
};

DenseRaw densify(const RawTree& raw) {
  if (raw.edges.empty()) throw Error(Errc::empty_edge_set, "a tree needs at least one edge");
  std::unordered_map<std::uint32_t, VertexId> vertex_index;
  for (std::uint32_t id : raw.vertices) {
    if (!vertex_index.emplace(id, static_cast<VertexId>(vertex_index.size())).second) {
      throw Error(Errc::invalid_endpoint, "duplicate vertex id " + std::to_string(id));
    }
  }
  std::unordered_map<std::uint32_t, EdgeId> edge_index;
  DenseRaw out{raw.leaves, {}, {}, std::vector<std::vector<EdgeId>>(raw.vertices.size())};
  const auto map_node = [&](Node node) {
    if (!node.is_vertex()) return node;
    auto it = vertex_index.find(node.index);
    if (it == vertex_index.end()) throw Error(Errc::invalid_endpoint, "unknown vertex id " + std::to_string(node.index));
    return Node::vertex(it->second);
  };
  for (const RawEdge& edge : raw.edges) {
    const auto e = static_cast<EdgeId>(out.sources.size());
    if (!edge_index.emplace(edge.id, e).second) throw Error(Errc::invalid_endpoint, "duplicate edge id " + std::to_string(edge.id));
    out.sources.push_back(map_node(edge.source));
    out.targets.push_back(map_node(edge.target));
    if (out.targets.back().is_vertex()) out.children[out.targets.back().index].push_back(e);
  }
  for (const auto& [vertex, order] : raw.child_order) {
    auto it = vertex_index.find(vertex);
    if (it == vertex_index.end()) throw Error(Errc::invalid_endpoint, "child order for unknown vertex " + std::to_string(vertex));
    std::vector<EdgeId> mapped;
    for (std::uint32_t id : order) {
      auto eit = edge_index.find(id);
      if (eit == edge_index.end()) throw Error(Errc::invalid_endpoint, "child order names unknown edge " + std::to_string(id));
      mapped.push_back(eit->second);
    }
    out.children[it->second] = std::move(mapped);
  }
  return out;
}

}  // namespace

RootedTree validate(const RawTree& raw) {
  DenseRaw dense = densify(raw);
  const std::size_t vertices = dense.children.size();
  return RootedTree::from_parts(dense.leaves, vertices, std::move(dense.sources), std::move(dense.targets));
}

PlanarTree validate_planar(const RawTree& raw) {
  DenseRaw dense = densify(raw);
  return PlanarTree::from_parts(dense.leaves, std::move(dense.sources), std::move(dense.targets), std::move(dense.children));
}

std::size_t arity(const RootedTree& tree, VertexId v) {
  if (v >= tree.vertex_count()) throw Error(Errc::unknown_vertex, "v" + std::to_string(v));
  return tree.children(v).size();
}

Graft graft_mapped(const PlanarTree& outer, std::uint32_t i, const PlanarTree& inner) {
  const std::size_t m = outer.leaf_count();
  const std::size_t n = inner.leaf_count();
  if (i < 1 || i > m) {
    throw Error(Errc::leaf_index_out_of_range, "graft position " + std::to_string(i) + " in a " + std::to_string(m) + "-tree");
  }
  const auto offset = static_cast<VertexId>(outer.vertex_count());
  const EdgeId x = outer.leaf_edge(i);
  const EdgeId inner_root = inner.root_edge();

  std::vector<Node> sources, targets;
  std::vector<std::vector<EdgeId>> children(outer.vertex_count() + inner.vertex_count());

  const auto outer_node = [&](Node node) {
    if (node.is_leaf() && node.index > i) return Node::leaf(static_cast<std::uint32_t>(node.index + n - 1));
    return node;
  };
  const auto inner_node = [&](Node node) {
    if (node.is_vertex()) return Node::vertex(node.index + offset);
    if (node.is_leaf()) return Node::leaf(node.index + i - 1);
    return node;
  };

  for (EdgeId e = 0; e < outer.edge_count(); ++e) {
    if (e == x) {
      sources.push_back(inner_node(inner.source(inner_root)));
      targets.push_back(outer.target(x));
    } else {
      sources.push_back(outer_node(outer.source(e)));
      targets.push_back(outer.target(e));
    }
  }
  for (VertexId v = 0; v < outer.vertex_count(); ++v) {
    auto kids = outer.children(v);
    children[v].assign(kids.begin(), kids.end());
  }

  std::vector<EdgeId> inner_edge(inner.edge_count(), no_edge);
  inner_edge[inner_root] = x;
  for (EdgeId e = 0; e < inner.edge_count(); ++e) {
    if (e == inner_root) continue;
    inner_edge[e] = static_cast<EdgeId>(sources.size());
    sources.push_back(inner_node(inner.source(e)));
    targets.push_back(inner_node(inner.target(e)));
  }
  for (VertexId v = 0; v < inner.vertex_count(); ++v) {
    for (EdgeId c : inner.children(v)) children[v + offset].push_back(inner_edge[c]);
  }

  return Graft{PlanarTree::from_parts(n + m - 1, std::move(sources), std::move(targets), std::move(children)), x, offset,
               std::move(inner_edge)};
}

PlanarTree graft(const PlanarTree& outer, std::uint32_t i, const PlanarTree& inner) {
  return graft_mapped(outer, i, inner).tree;
}

PlanarTree permute_leaves(const PlanarTree& tree, const Permutation& sigma) {
  if (sigma.size() != tree.leaf_count()) {
    throw Error(Errc::permutation_size_mismatch,
                "permutation of degree " + std::to_string(sigma.size()) + " on a " + std::to_string(tree.leaf_count()) + "-tree");
  }
  const Permutation inv = sigma.inverse();
  std::vector<Node> sources, targets;
  std::vector<std::vector<EdgeId>> children;
  for (EdgeId e = 0; e < tree.edge_count(); ++e) {
    Node s = tree.source(e);
    if (s.is_leaf()) s = Node::leaf(inv(s.index));
    sources.push_back(s);
    targets.push_back(tree.target(e));
  }
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    auto kids = tree.children(v);
    children.emplace_back(kids.begin(), kids.end());
  }
  return PlanarTree::from_parts(tree.leaf_count(), std::move(sources), std::move(targets), std::move(children));
}

Contraction contract_edge_mapped(const PlanarTree& tree, EdgeId e) {
  if (e >= tree.edge_count()) throw Error(Errc::unknown_edge, "edge " + std::to_string(e));
  if (!tree.is_internal(e)) throw Error(Errc::not_internal_edge, "edge " + std::to_string(e) + " is external");
  const VertexId lower = tree.source(e).index;
  const VertexId upper = tree.target(e).index;

  std::vector<VertexId> vertex_map(tree.vertex_count());
  for (VertexId v = 0; v < tree.vertex_count(); ++v) vertex_map[v] = v > lower ? v - 1 : v;
  vertex_map[lower] = vertex_map[upper];
  std::vector<EdgeId> edge_map(tree.edge_count());
  for (EdgeId f = 0; f < tree.edge_count(); ++f) edge_map[f] = f > e ? f - 1 : f;
  edge_map[e] = no_edge;

  const auto map_node = [&](Node node) { return node.is_vertex() ? Node::vertex(vertex_map[node.index]) : node; };
  std::vector<Node> sources, targets;
  for (EdgeId f = 0; f < tree.edge_count(); ++f) {
    if (f == e) continue;
    sources.push_back(map_node(tree.source(f)));
    targets.push_back(map_node(tree.target(f)));
  }

  std::vector<std::vector<EdgeId>> children(tree.vertex_count() - 1);
  std::uint32_t position = 0;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (v == lower) continue;
    auto& out = children[vertex_map[v]];
    for (EdgeId c : tree.children(v)) {
      if (c == e) {
        position = static_cast<std::uint32_t>(out.size() + 1);
        for (EdgeId d : tree.children(lower)) out.push_back(edge_map[d]);
      } else {
        out.push_back(edge_map[c]);
      }
    }
  }
  const VertexId merged = vertex_map[upper];
  return Contraction{PlanarTree::from_parts(tree.leaf_count(), std::move(sources), std::move(targets), std::move(children)),
                     merged, std::move(vertex_map), std::move(edge_map), position};
}

PlanarTree contract_edge(const PlanarTree& tree, EdgeId e) { return contract_edge_mapped(tree, e).tree; }

void check_subtree(const RootedTree& tree, const Subtree& sub) {
  const auto fail = [](const std::string& why) { throw Error(Errc::invalid_subtree, why); };
  std::unordered_set<VertexId> vs;
  for (VertexId v : sub.vertices) {
    if (v >= tree.vertex_count()) fail("unknown vertex v" + std::to_string(v));
    if (!vs.insert(v).second) fail("duplicate vertex v" + std::to_string(v));
  }
  std::unordered_set<EdgeId> es;
  for (EdgeId e : sub.edges) {
    if (e >= tree.edge_count()) fail("unknown edge " + std::to_string(e));
    if (!es.insert(e).second) fail("duplicate edge " + std::to_string(e));
  }
  std::set<Node> inputs(sub.inputs.begin(), sub.inputs.end());
  if (inputs.size() != sub.inputs.size()) fail("duplicate input");
  for (Node in : inputs) {
    if (in.is_root()) fail("the root cannot be an input");
    if (in.is_vertex() && vs.count(in.index)) fail("input v" + std::to_string(in.index) + " lies in V_S");
  }
  if (sub.bottom.is_leaf()) fail("0_S must be a vertex or the root");
  if (sub.bottom.is_vertex() && vs.count(sub.bottom.index)) fail("0_S lies in V_S");

  std::size_t bottom_edges = 0;
  for (EdgeId e = 0; e < tree.edge_count(); ++e) {
    const Node t = tree.target(e);
    const Node s = tree.source(e);
    const bool in_e = es.count(e) > 0;
    const bool from_s = s.is_vertex() && vs.count(s.index);
    const bool into_s = t.is_vertex() && vs.count(t.index);
    // E_S = edges out of V_S or the inputs; they land in V_S, or at 0_S for the one edge leaving V_S
    bool ok = in_e == (from_s || inputs.count(s) > 0);
    if (into_s) ok = ok && in_e;
    if (in_e && !into_s) ok = ok && t == sub.bottom && (from_s || vs.empty());
    if (!ok) fail("closure condition fails at edge " + std::to_string(e));
    if (in_e && t == sub.bottom) ++bottom_edges;
  }
  if (bottom_edges != 1) fail("expected exactly one edge into 0_S, found " + std::to_string(bottom_edges));
}

Subtree subtree_from_vertices(const RootedTree& tree, std::span<const VertexId> vertices) {
  if (vertices.empty()) throw Error(Errc::invalid_subtree, "empty vertex set");
  std::unordered_set<VertexId> vs(vertices.begin(), vertices.end());
  Subtree sub;
  sub.vertices.assign(vs.begin(), vs.end());
  std::sort(sub.vertices.begin(), sub.vertices.end());
  bool have_bottom = false;
  for (VertexId v : sub.vertices) {
    if (v >= tree.vertex_count()) throw Error(Errc::invalid_subtree, "unknown vertex v" + std::to_string(v));
    const EdgeId out = tree.out_edge(v);
    const Node t = tree.target(out);
    if (!(t.is_vertex() && vs.count(t.index))) {
      if (have_bottom) throw Error(Errc::invalid_subtree, "vertex set is not connected");
      have_bottom = true;
      sub.bottom = t;
    }
    sub.edges.push_back(out);
    for (EdgeId c : tree.children(v)) {
      const Node s = tree.source(c);
      if (!(s.is_vertex() && vs.count(s.index))) {
        sub.edges.push_back(c);
        sub.inputs.push_back(s);
      }
    }
  }
  std::sort(sub.edges.begin(), sub.edges.end());
  sub.edges.erase(std::unique(sub.edges.begin(), sub.edges.end()), sub.edges.end());
  check_subtree(tree, sub);
  return sub;
}

std::vector<EdgeId> internal_edges_of(const RootedTree& tree, const Subtree& sub) {
  std::unordered_set<VertexId> vs(sub.vertices.begin(), sub.vertices.end());
  std::vector<EdgeId> out;
  for (EdgeId e : sub.edges) {
    const Node s = tree.source(e), t = tree.target(e);
    if (s.is_vertex() && t.is_vertex() && vs.count(s.index) && vs.count(t.index)) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PlanarTree contract_subtree(const PlanarTree& tree, const Subtree& sub) {
  check_subtree(tree, sub);
  const auto order = internal_edges_of(tree, sub);
  return contract_subtree(tree, sub, order);
}

PlanarTree contract_subtree(const PlanarTree& tree, const Subtree& sub, std::span<const EdgeId> order) {
  check_subtree(tree, sub);
  std::vector<EdgeId> expected = internal_edges_of(tree, sub);
  std::vector<EdgeId> given(order.begin(), order.end());
  std::sort(given.begin(), given.end());
  if (given != expected) throw Error(Errc::invalid_subtree, "contraction order must list the internal edges of the subtree");

  PlanarTree current = tree;
  std::vector<EdgeId> id(tree.edge_count());
  for (EdgeId e = 0; e < id.size(); ++e) id[e] = e;
  for (EdgeId e : order) {
    Contraction step = contract_edge_mapped(current, id[e]);
    for (EdgeId& cur : id) {
      if (cur != no_edge) cur = step.edge_map[cur];
    }
    current = std::move(step.tree);
  }
  return current;
}

}  // namespace phylo
