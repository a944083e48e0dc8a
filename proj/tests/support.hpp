#pragma once

// Random instances and independent oracles shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "phylo/coalgebra.hpp"
#include "phylo/markov.hpp"
#include "phylo/phylo_tree.hpp"
#include "phylo/reduction.hpp"
#include "phylo/tree_space.hpp"

namespace phylo::testing {

/// The library error code raised by f, or nullopt if it returns normally.
template <class F>
std::optional<Errc> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::size_t uniform_int(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Multiples of 1/4: sums of these are exact, so float addition associates.
inline double dyadic(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return 0.25 * static_cast<double>(uniform_int(rng, lo, hi));
}

/// A random planar n-tree without unary vertices, leaves shuffled.
inline PlanarTree random_shape(std::size_t n, std::mt19937_64& rng, std::size_t max_arity = 4) {
  if (n == 1) return PlanarTree::unit();
  std::vector<Node> sources;
  std::vector<Node> targets;
  std::vector<std::vector<EdgeId>> children;
  std::vector<std::uint32_t> labels(n);
  for (std::uint32_t k = 0; k < n; ++k) labels[k] = k + 1;
  std::shuffle(labels.begin(), labels.end(), rng);
  std::vector<Node> forest;
  for (std::uint32_t k : labels) forest.push_back(Node::leaf(k));
  while (forest.size() > 1) {
    const std::size_t k = uniform_int(rng, 2, std::min(max_arity, forest.size()));
    std::shuffle(forest.begin(), forest.end(), rng);
    const auto v = static_cast<VertexId>(children.size());
    children.emplace_back();
    for (std::size_t c = 0; c < k; ++c) {
      const auto e = static_cast<EdgeId>(sources.size());
      sources.push_back(forest.back());
      targets.push_back(Node::vertex(v));
      children[v].push_back(e);
      forest.pop_back();
    }
    forest.push_back(Node::vertex(v));
  }
  sources.push_back(forest[0]);
  targets.push_back(Node::root());
  return PlanarTree::from_parts(n, std::move(sources), std::move(targets), std::move(children));
}

/// Random phylogenetic n-tree; dyadic lengths keep composition exact.
inline PhyloTree random_phylo(std::size_t n, std::mt19937_64& rng, bool dyadic_lengths = true) {
  PlanarTree shape = random_shape(n, rng);
  std::vector<double> lengths(shape.edge_count());
  for (EdgeId e = 0; e < shape.edge_count(); ++e) {
    const bool internal = shape.is_internal(e);
    if (dyadic_lengths) {
      lengths[e] = internal ? dyadic(rng, 1, 8) : dyadic(rng, 0, 8);
    } else {
      lengths[e] = internal ? uniform_real(rng, 0.05, 2.0) : (uniform_int(rng, 0, 4) == 0 ? 0.0 : uniform_real(rng, 0.0, 2.0));
    }
  }
  return PhyloTree::make(shape, std::move(lengths));
}

inline ExtendedPhyloTree random_extended(std::size_t n, std::mt19937_64& rng) {
  const PhyloTree t = random_phylo(n, rng, false);
  std::vector<ExtendedLength> lengths;
  for (double x : t.lengths()) lengths.push_back(uniform_int(rng, 0, 3) == 0 ? ExtendedLength::infinity() : ExtendedLength{x});
  return ExtendedPhyloTree::make(t.shape(), std::move(lengths));
}

/// Random generator with off-diagonal rates in [0, scale).
inline MarkovGenerator random_generator(std::size_t k, std::mt19937_64& rng, double scale = 1.0) {
  Matrix h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      if (i == j) continue;
      h(i, j) = uniform_real(rng, 0.0, scale);
      sum += h(i, j);
    }
    h(j, j) = -sum;
  }
  return MarkovGenerator::make(StateSpace::indexed(k), std::move(h));
}

inline MarkovGenerator flip_generator() {
  Matrix h(2, 2);
  h << -1, 1, 1, -1;
  return MarkovGenerator::make(StateSpace::indexed(2), h);
}

inline Distribution random_distribution(const StateSpace& s, std::mt19937_64& rng) {
  Vector p(static_cast<Eigen::Index>(s.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = uniform_real(rng, 0.1, 1.0);
  p /= p.sum();
  // renormalize the last entry so the sum is as close to 1 as doubles allow
  p(p.size() - 1) = 1.0 - (p.sum() - p(p.size() - 1));
  return Distribution::make(s, p);
}

/// Naive Taylor series with a fixed number of terms, no scaling.
inline Matrix taylor_oracle(const Matrix& a, int terms = 30) {
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix term = result;
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    result += term;
  }
  return result;
}

/// A random Com + [0,inf) drawing: Com vertices of arity 1..3, joints, and
/// edges that are unlabelled, 0, or carry a positive dyadic length.
inline MixedTree random_mixed(std::mt19937_64& rng, std::size_t max_leaves = 5, std::size_t max_vertices = 9) {
  const std::size_t n = uniform_int(rng, 1, max_leaves);
  std::vector<Node> sources;
  std::vector<Node> targets;
  std::vector<std::vector<EdgeId>> children;
  std::vector<VertexKind> kinds;
  std::vector<std::optional<double>> lengths;
  const auto random_label = [&]() -> std::optional<double> {
    switch (uniform_int(rng, 0, 2)) {
      case 0: return std::nullopt;
      case 1: return 0.0;
      default: return dyadic(rng, 1, 8);
    }
  };
  std::vector<Node> forest;
  for (std::uint32_t k = 1; k <= n; ++k) forest.push_back(Node::leaf(k));
  std::shuffle(forest.begin(), forest.end(), rng);
  const auto attach = [&](std::size_t k, VertexKind kind) {
    const auto v = static_cast<VertexId>(children.size());
    children.emplace_back();
    kinds.push_back(kind);
    for (std::size_t c = 0; c < k; ++c) {
      const auto e = static_cast<EdgeId>(sources.size());
      sources.push_back(forest.back());
      targets.push_back(Node::vertex(v));
      lengths.push_back(random_label());
      children[v].push_back(e);
      forest.pop_back();
    }
    forest.push_back(Node::vertex(v));
    std::shuffle(forest.begin(), forest.end(), rng);
  };
  while (forest.size() > 1 || (children.size() < max_vertices && uniform_int(rng, 0, 2) != 0)) {
    const bool unary = forest.size() == 1 || (children.size() < max_vertices && uniform_int(rng, 0, 2) == 0);
    if (unary) {
      attach(1, uniform_int(rng, 0, 1) == 0 ? VertexKind::com : VertexKind::joint);
    } else {
      attach(uniform_int(rng, 2, std::min<std::size_t>(3, forest.size())), VertexKind::com);
    }
  }
  sources.push_back(forest[0]);
  targets.push_back(Node::root());
  lengths.push_back(uniform_int(rng, 0, 3) == 0 ? random_label() : std::nullopt);
  return {PlanarTree::from_parts(n, std::move(sources), std::move(targets), std::move(children)), std::move(kinds),
          std::move(lengths)};
}

/// Count of rooted binary topologies by explicit leaf insertion: leaf k is
/// grafted onto every edge (root edge included) of every tree on k-1 leaves.
/// Trees are parent arrays over nodes; returns the list of clade sets.
inline std::vector<std::set<Clade>> insertion_topologies(std::size_t n) {
  struct T {
    std::vector<int> parent;  // nodes 0..n-1 are leaves, the rest internal; -1 = root
  };
  std::vector<T> trees(1);
  trees[0].parent = {-1};  // the single leaf 1
  for (std::size_t k = 2; k <= n; ++k) {
    std::vector<T> next;
    for (const T& t : trees) {
      // nodes: leaves first (0..k-2), then internal nodes
      for (std::size_t e = 0; e < t.parent.size(); ++e) {
        // insert above node e: new internal node w with children e and leaf k
        T u;
        const std::size_t old_leaves = k - 1;
        // renumber: leaves 0..k-1 (new leaf k-1), internal old i -> i+1
        const auto map = [&](int x) { return x < 0 ? -1 : (static_cast<std::size_t>(x) < old_leaves ? x : x + 1); };
        u.parent.assign(t.parent.size() + 2, -1);
        for (std::size_t x = 0; x < t.parent.size(); ++x) u.parent[static_cast<std::size_t>(map(static_cast<int>(x)))] = map(t.parent[x]);
        const int w = static_cast<int>(u.parent.size() - 1);
        const int ee = map(static_cast<int>(e));
        u.parent[static_cast<std::size_t>(w)] = u.parent[static_cast<std::size_t>(ee)];
        u.parent[static_cast<std::size_t>(ee)] = w;
        u.parent[old_leaves] = w;
        next.push_back(std::move(u));
      }
    }
    trees = std::move(next);
  }
  std::vector<std::set<Clade>> out;
  for (const T& t : trees) {
    std::vector<Clade> below(t.parent.size(), 0);
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
      for (int x = static_cast<int>(leaf); x >= 0; x = t.parent[static_cast<std::size_t>(x)]) below[static_cast<std::size_t>(x)] |= Clade{1} << leaf;
    }
    std::set<Clade> clades;
    for (std::size_t x = n; x < t.parent.size(); ++x) {
      const int size = std::popcount(below[x]);
      if (size >= 2 && static_cast<std::size_t>(size) < n) clades.insert(below[x]);
    }
    out.push_back(std::move(clades));
  }
  return out;
}

/// A random point of T_4: a quadrant interior, a ray, or the cone point.
inline MetricTree random_t4(std::mt19937_64& rng, const std::vector<Orthant>& quadrants, double scale = 2.0) {
  const Orthant& o = quadrants[uniform_int(rng, 0, quadrants.size() - 1)];
  switch (uniform_int(rng, 0, 9)) {
    case 0: return MetricTree::from_clades(4, {});
    case 1:
    case 2: return MetricTree::from_clades(4, {{o.axes[uniform_int(rng, 0, 1)], uniform_real(rng, 0.05, scale)}});
    default:
      return MetricTree::from_clades(4, {{o.axes[0], uniform_real(rng, 0.05, scale)}, {o.axes[1], uniform_real(rng, 0.05, scale)}});
  }
}

/// Shortest path through T_4 on a grid: points every `step` along the ten
/// boundary rays up to radius max(|x|,|y|), the cone point and x, y. Nodes
/// in a common closed quadrant are joined by straight segments.
inline double grid_distance(const MetricTree& x, const MetricTree& y, double step = 0.01) {
  const std::vector<Orthant> quadrants = enumerate_binary_topologies(4);
  const double radius = std::max(x.norm(), y.norm());
  // node coordinates: (clade a, value a, clade b, value b)
  struct Point {
    std::vector<WeightedClade> coords;
  };
  std::vector<Point> nodes;
  nodes.push_back({x.clades()});
  nodes.push_back({y.clades()});
  nodes.push_back({{}});
  std::vector<Clade> rays;
  for (const Orthant& o : quadrants)
    for (Clade c : o.axes)
      if (std::find(rays.begin(), rays.end(), c) == rays.end()) rays.push_back(c);
  const auto steps = static_cast<std::size_t>(std::floor(radius / step));
  for (Clade c : rays)
    for (std::size_t s = 1; s <= steps; ++s) nodes.push_back({{{c, step * static_cast<double>(s)}}});

  const auto in_quadrant = [](const Point& p, const Orthant& o) {
    return std::all_of(p.coords.begin(), p.coords.end(), [&](const WeightedClade& c) {
      return c.clade == o.axes[0] || c.clade == o.axes[1];
    });
  };
  const auto coord = [](const Point& p, Clade c) {
    for (const auto& w : p.coords)
      if (w.clade == c) return w.length;
    return 0.0;
  };
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(nodes.size());
  for (const Orthant& o : quadrants) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (in_quadrant(nodes[i], o)) members.push_back(i);
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const Point& p = nodes[members[a]];
        const Point& q = nodes[members[b]];
        const double d0 = coord(p, o.axes[0]) - coord(q, o.axes[0]);
        const double d1 = coord(p, o.axes[1]) - coord(q, o.axes[1]);
        const double d = std::hypot(d0, d1);
        adj[members[a]].emplace_back(members[b], d);
        adj[members[b]].emplace_back(members[a], d);
      }
    }
  }
  std::vector<double> dist(nodes.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[0] = 0.0;
  queue.emplace(0.0, 0);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    if (u == 1) break;
    for (const auto& [v, w] : adj[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        queue.emplace(dist[v], v);
      }
    }
  }
  return dist[1];
}

/// Total length from the root to leaf k, root edge included.
inline double path_length(const PhyloTree& t, std::uint32_t leaf) {
  const PlanarTree& s = t.shape();
  double total = 0.0;
  EdgeId e = s.leaf_edge(leaf);
  for (;;) {
    total += t.length(e);
    const Node up = s.target(e);
    if (up.is_root()) return total;
    e = s.out_edge(up.index);
  }
}

}  // namespace phylo::testing
