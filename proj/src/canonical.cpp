#include "phylo/canonical.hpp"

#include <algorithm>
#include <numeric>

namespace phylo {

std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

struct Encoder {
  const RootedTree& tree;
  CanonicalMode mode;
  const LabelKey& vertex_key;
  const LabelKey& edge_key;
  std::vector<std::string> code;                 // per edge, memoized
  std::vector<std::vector<EdgeId>> child_order;  // per vertex, canonical

  // Post-order over edges so deep trees do not recurse.
  void run() {
    code.assign(tree.edge_count(), {});
    child_order.assign(tree.vertex_count(), {});
    std::vector<std::pair<EdgeId, bool>> stack{{tree.root_edge(), false}};
    while (!stack.empty()) {
      auto [e, expanded] = stack.back();
      stack.pop_back();
      const Node s = tree.source(e);
      if (s.is_vertex() && !expanded) {
        stack.emplace_back(e, true);
        for (EdgeId c : tree.children(s.index)) stack.emplace_back(c, false);
        continue;
      }
      code[e] = encode(e);
    }
  }

  std::string encode(EdgeId e) {
    std::string out;
    if (edge_key) {
      out += edge_key(e);
      out += ':';
    }
    const Node s = tree.source(e);
    if (s.is_leaf()) {
      out += std::to_string(s.index);
      return out;
    }
    const VertexId v = s.index;
    auto kids = tree.children(v);
    std::vector<EdgeId> order(kids.begin(), kids.end());
    if (mode == CanonicalMode::unordered) {
      std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) { return code[a] < code[b]; });
    }
    if (vertex_key) {
      out += '{';
      out += vertex_key(v);
      out += '}';
    }
    out += '(';
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k) out += ',';
      out += code[order[k]];
    }
    out += ')';
    child_order[v] = std::move(order);
    return out;
  }
};

}  // namespace

CanonicalForm canonical_form(const RootedTree& tree, CanonicalMode mode, const LabelKey& vertex_key,
                             const LabelKey& edge_key) {
  Encoder enc{tree, mode, vertex_key, edge_key, {}, {}};
  enc.run();

  // Renumber in preorder: edges as visited, vertices as first reached.
  std::vector<EdgeId> edge_origin;
  std::vector<VertexId> vertex_origin;
  std::vector<EdgeId> new_edge(tree.edge_count(), no_edge);
  std::vector<VertexId> new_vertex(tree.vertex_count(), no_vertex);
  std::vector<EdgeId> stack{tree.root_edge()};
  while (!stack.empty()) {
    const EdgeId e = stack.back();
    stack.pop_back();
    new_edge[e] = static_cast<EdgeId>(edge_origin.size());
    edge_origin.push_back(e);
    const Node s = tree.source(e);
    if (s.is_vertex()) {
      new_vertex[s.index] = static_cast<VertexId>(vertex_origin.size());
      vertex_origin.push_back(s.index);
      const auto& order = enc.child_order[s.index];
      for (auto it = order.rbegin(); it != order.rend(); ++it) stack.push_back(*it);
    }
  }

  const auto map_node = [&](Node node) { return node.is_vertex() ? Node::vertex(new_vertex[node.index]) : node; };
  std::vector<Node> sources(tree.edge_count()), targets(tree.edge_count());
  for (EdgeId e = 0; e < tree.edge_count(); ++e) {
    sources[new_edge[e]] = map_node(tree.source(e));
    targets[new_edge[e]] = map_node(tree.target(e));
  }
  std::vector<std::vector<EdgeId>> children(tree.vertex_count());
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    for (EdgeId c : enc.child_order[v]) children[new_vertex[v]].push_back(new_edge[c]);
  }

  std::string encoding = std::move(enc.code[tree.root_edge()]);
  const std::uint64_t hash = fnv1a(encoding);
  return CanonicalForm{PlanarTree::from_parts(tree.leaf_count(), std::move(sources), std::move(targets), std::move(children)),
                       std::move(encoding), hash, std::move(edge_origin), std::move(vertex_origin)};
}

}  // namespace phylo
