#include "phylo/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phylo {

namespace {

std::string label_key(const std::optional<double>& x) { return x ? format_length(*x) : std::string("_"); }

// Removes unary vertex v: its child edge takes the place of its outgoing edge.
MixedTree splice_unary(const MixedTree& t, VertexId v, std::optional<double> label) {
  const PlanarTree& tr = t.tree;
  const EdgeId in = tr.children(v)[0];
  const EdgeId out = tr.out_edge(v);
  auto vmap = [&](Node n) {
    if (n.is_vertex() && n.index > v) --n.index;
    return n;
  };
  auto emap = [&](EdgeId e) { return e > out ? e - 1 : e; };

  std::vector<Node> src;
  std::vector<Node> tgt;
  std::vector<std::optional<double>> lengths;
  for (EdgeId e = 0; e < tr.edge_count(); ++e) {
    if (e == out) continue;
    src.push_back(vmap(tr.source(e)));
    tgt.push_back(vmap(e == in ? tr.target(out) : tr.target(e)));
    lengths.push_back(e == in ? label : t.lengths[e]);
  }
  std::vector<std::vector<EdgeId>> children;
  std::vector<VertexKind> kinds;
  for (VertexId u = 0; u < tr.vertex_count(); ++u) {
    if (u == v) continue;
    std::vector<EdgeId> ch;
    for (EdgeId c : tr.children(u)) ch.push_back(emap(c == out ? in : c));
    children.push_back(std::move(ch));
    kinds.push_back(t.kinds[u]);
  }
  return {PlanarTree::from_parts(tr.leaf_count(), std::move(src), std::move(tgt), std::move(children)),
          std::move(kinds), std::move(lengths)};
}

// Inserts a joint on the root edge; the old root edge keeps its label.
MixedTree lift_root(const MixedTree& t) {
  const PlanarTree& tr = t.tree;
  const EdgeId r = tr.root_edge();
  const VertexId j = static_cast<VertexId>(tr.vertex_count());
  std::vector<Node> src;
  std::vector<Node> tgt;
  for (EdgeId e = 0; e < tr.edge_count(); ++e) {
    src.push_back(tr.source(e));
    tgt.push_back(e == r ? Node::vertex(j) : tr.target(e));
  }
  src.push_back(Node::vertex(j));
  tgt.push_back(Node::root());
  std::vector<std::vector<EdgeId>> children;
  for (VertexId u = 0; u < tr.vertex_count(); ++u) children.emplace_back(tr.children(u).begin(), tr.children(u).end());
  children.push_back({r});
  MixedTree out{PlanarTree::from_parts(tr.leaf_count(), std::move(src), std::move(tgt), std::move(children)), t.kinds,
                t.lengths};
  out.kinds.push_back(VertexKind::joint);
  out.lengths.push_back(std::nullopt);
  return out;
}

std::size_t depth_of(const PlanarTree& tr, Node n) {
  std::size_t d = 0;
  while (!n.is_root()) {
    n = tr.target(tr.edge_from(n));
    ++d;
  }
  return d;
}

std::size_t measure(const MixedTree& t) {
  std::size_t m = 2 * t.tree.vertex_count();
  for (EdgeId e = 0; e < t.tree.edge_count(); ++e) {
    if (e != t.tree.root_edge() && !t.lengths[e]) ++m;
  }
  for (VertexId v = 0; v < t.tree.vertex_count(); ++v) {
    if (t.kinds[v] == VertexKind::com && t.tree.children(v).size() == 1) ++m;
  }
  return m;
}

}  // namespace

void check_mixed(const MixedTree& t) {
  if (t.kinds.size() != t.tree.vertex_count() || t.lengths.size() != t.tree.edge_count()) {
    throw Error(Errc::malformed_labelling, "label count does not match the tree");
  }
  for (VertexId v = 0; v < t.tree.vertex_count(); ++v) {
    const std::size_t a = t.tree.children(v).size();
    if (t.kinds[v] == VertexKind::joint && a != 1) {
      throw Error(Errc::malformed_labelling, "unlabelled vertex v" + std::to_string(v) + " is not unary");
    }
    if (t.kinds[v] == VertexKind::com && a == 0) {
      throw Error(Errc::malformed_labelling, "Com vertex v" + std::to_string(v) + " has arity 0");
    }
  }
  for (const auto& x : t.lengths) {
    if (x && !(std::isfinite(*x) && *x >= 0.0)) {
      throw Error(Errc::malformed_labelling, "edge length " + format_length(*x) + " outside [0,inf)");
    }
  }
}

std::string mixed_encoding(const MixedTree& t) {
  return canonical_form(
             t.tree, CanonicalMode::unordered,
             [&](std::uint32_t v) { return std::string(t.kinds[v] == VertexKind::com ? "c" : "j"); },
             [&](std::uint32_t e) { return label_key(t.lengths[e]); })
      .encoding;
}

std::string_view move_name(Move m) noexcept {
  switch (m) {
    case Move::merge_com: return "merge_com";
    case Move::join_lengths: return "join_lengths";
    case Move::unlabel_identity: return "unlabel_identity";
    case Move::drop_root_joint: return "drop_root_joint";
    case Move::label_identity: return "label_identity";
  }
  return "?";
}

std::vector<MoveSite> applicable_moves(const MixedTree& t) {
  const PlanarTree& tr = t.tree;
  std::vector<MoveSite> moves;
  for (EdgeId e = 0; e < tr.edge_count(); ++e) {
    if (tr.is_internal(e) && t.kinds[tr.source(e).index] == VertexKind::com &&
        t.kinds[tr.target(e).index] == VertexKind::com && (!t.lengths[e] || *t.lengths[e] == 0.0)) {
      moves.push_back({Move::merge_com, e});
    }
  }
  for (VertexId v = 0; v < tr.vertex_count(); ++v) {
    const auto ch = tr.children(v);
    const EdgeId out = tr.out_edge(v);
    if (t.kinds[v] == VertexKind::joint) {
      if (t.lengths[ch[0]] && t.lengths[out]) moves.push_back({Move::join_lengths, v});
      if (out == tr.root_edge() && !t.lengths[out] && t.lengths[ch[0]] && *t.lengths[ch[0]] == 0.0) {
        moves.push_back({Move::drop_root_joint, v});
      }
    } else if (ch.size() == 1) {
      moves.push_back({Move::unlabel_identity, v});
    }
  }
  for (EdgeId e = 0; e < tr.edge_count(); ++e) {
    if (e != tr.root_edge() && !t.lengths[e]) moves.push_back({Move::label_identity, e});
  }
  return moves;
}

MixedTree apply_move(const MixedTree& t, MoveSite site) {
  const PlanarTree& tr = t.tree;
  switch (site.move) {
    case Move::merge_com: {
      Contraction c = contract_edge_mapped(tr, site.at);
      std::vector<VertexKind> kinds(c.tree.vertex_count(), VertexKind::com);
      std::vector<std::optional<double>> lengths(c.tree.edge_count());
      MixedTree out{std::move(c.tree), std::move(kinds), std::move(lengths)};
      for (VertexId v = 0; v < tr.vertex_count(); ++v) out.kinds[c.vertex_map[v]] = t.kinds[v];
      for (EdgeId e = 0; e < tr.edge_count(); ++e) {
        if (c.edge_map[e] != no_edge) out.lengths[c.edge_map[e]] = t.lengths[e];
      }
      out.kinds[c.merged] = VertexKind::com;
      return out;
    }
    case Move::join_lengths: {
      const VertexId v = site.at;
      return splice_unary(t, v, *t.lengths[tr.children(v)[0]] + *t.lengths[tr.out_edge(v)]);
    }
    case Move::unlabel_identity: {
      MixedTree out = t;
      out.kinds[site.at] = VertexKind::joint;
      return out;
    }
    case Move::drop_root_joint:
      return splice_unary(t, site.at, std::nullopt);
    case Move::label_identity: {
      MixedTree out = t;
      out.lengths[site.at] = 0.0;
      return out;
    }
  }
  throw Error(Errc::malformed_labelling, "unknown move");
}

std::size_t innermost_first(const MixedTree& t, std::span<const MoveSite> moves) {
  auto site_node = [&](const MoveSite& m) {
    return (m.move == Move::merge_com || m.move == Move::label_identity) ? t.tree.source(m.at) : Node::vertex(m.at);
  };
  std::size_t best = 0;
  std::size_t best_depth = 0;
  for (std::size_t k = 0; k < moves.size(); ++k) {
    const std::size_t d = depth_of(t.tree, site_node(moves[k]));
    const bool better = k == 0 || d > best_depth ||
                        (d == best_depth && std::pair(moves[k].move, moves[k].at) < std::pair(moves[best].move, moves[best].at));
    if (better) {
      best = k;
      best_depth = d;
    }
  }
  return best;
}

ReductionResult reduce_coproduct(const MixedTree& input, const MoveSelector& select) {
  check_mixed(input);
  MixedTree t = input.lengths[input.tree.root_edge()] ? lift_root(input) : input;
  ReductionResult result{t, 0, measure(t)};
  for (;;) {
    const std::vector<MoveSite> moves = applicable_moves(t);
    if (moves.empty()) break;
    const std::size_t k = select(t, moves);
    if (k >= moves.size()) throw Error(Errc::index_out_of_range, "move selector returned " + std::to_string(k));
    t = apply_move(t, moves[k]);
    if (++result.steps > result.step_bound) {
      throw std::logic_error("reduction exceeded its termination bound");
    }
  }
  // Root rule.
  const EdgeId r = t.tree.root_edge();
  const Node below = t.tree.source(r);
  if (below.is_vertex() && t.kinds[below.index] == VertexKind::joint) {
    const EdgeId in = t.tree.children(below.index)[0];
    t = splice_unary(t, below.index, t.lengths[in]);
  } else {
    t.lengths[r] = 0.0;
  }
  result.tree = std::move(t);
  return result;
}

MixedTree reduce_coproduct_tree(const MixedTree& t) { return reduce_coproduct(t).tree; }

PhyloTree to_phylo(const MixedTree& t) {
  check_mixed(t);
  std::vector<double> lengths;
  for (EdgeId e = 0; e < t.tree.edge_count(); ++e) {
    if (!t.lengths[e]) throw Error(Errc::not_reduced, "edge " + std::to_string(e) + " is unlabelled");
    if (t.tree.is_internal(e) && *t.lengths[e] == 0.0) {
      throw Error(Errc::not_reduced, "internal edge " + std::to_string(e) + " has length 0");
    }
    lengths.push_back(*t.lengths[e]);
  }
  for (VertexId v = 0; v < t.tree.vertex_count(); ++v) {
    if (t.kinds[v] != VertexKind::com || t.tree.children(v).size() < 2) {
      throw Error(Errc::not_reduced, "vertex v" + std::to_string(v) + " is unary");
    }
  }
  return PhyloTree::make(t.tree, std::move(lengths));
}

MixedTree from_phylo(const PhyloTree& t) {
  MixedTree out{t.shape(), std::vector<VertexKind>(t.shape().vertex_count(), VertexKind::com), {}};
  for (double x : t.lengths()) out.lengths.emplace_back(x);
  return out;
}

}  // namespace phylo
