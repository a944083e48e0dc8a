#include "phylo/tree_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

namespace phylo {

namespace {

constexpr std::size_t max_clade_leaves = 64;

Clade full_set(std::size_t n) { return n >= 64 ? ~Clade{0} : (Clade{1} << n) - 1; }

Clade clade_of(const std::vector<std::uint32_t>& leaves) {
  Clade c = 0;
  for (std::uint32_t k : leaves) c |= Clade{1} << (k - 1);
  return c;
}

void check_clades(std::size_t n, const std::vector<Clade>& clades) {
  const Clade all = full_set(n);
  for (std::size_t i = 0; i < clades.size(); ++i) {
    const Clade c = clades[i];
    const int size = std::popcount(c);
    if ((c & ~all) != 0 || size < 2 || static_cast<std::size_t>(size) > n - 1) {
      throw Error(Errc::phylo_invariant, "clade " + clade_string(c) + " is not an internal edge of an n-tree");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (clades[j] == c) throw Error(Errc::phylo_invariant, "repeated clade " + clade_string(c));
      if (!compatible(clades[j], c)) {
        throw Error(Errc::phylo_invariant, "clades " + clade_string(clades[j]) + " and " + clade_string(c) + " cross");
      }
    }
  }
}

// Distance in the common closed orthant, or +inf when the clade sets cross.
double common_orthant_distance(const MetricTree& x, const MetricTree& y) {
  for (const auto& a : x.clades()) {
    for (const auto& b : y.clades()) {
      if (!compatible(a.clade, b.clade)) return std::numeric_limits<double>::infinity();
    }
  }
  std::map<Clade, std::pair<double, double>> coords;
  for (const auto& a : x.clades()) coords[a.clade].first = a.length;
  for (const auto& b : y.clades()) coords[b.clade].second = b.length;
  double s = 0.0;
  for (const auto& [c, p] : coords) s += (p.first - p.second) * (p.first - p.second);
  return std::sqrt(s);
}

// Geodesic distance for n <= 4, where T_n is the Euclidean cone over its link:
// a metric graph whose vertices are clades and whose edges, one per 2-dim
// orthant, have length pi/2. Then d^2 = r^2 + s^2 - 2 r s cos(min(link, pi)).
double exact_small(const MetricTree& x, const MetricTree& y) {
  const std::size_t n = x.leaf_count();
  if (n <= 2) return 0.0;
  const double rx = x.norm();
  const double ry = y.norm();
  if (rx == 0.0) return ry;
  if (ry == 0.0) return rx;
  // a shared closed orthant is convex, so the straight segment is the geodesic
  const double straight = common_orthant_distance(x, y);
  if (std::isfinite(straight)) return straight;

  std::vector<Clade> vertices;
  for (Clade c = 1; c < full_set(n); ++c) {
    if (std::popcount(c) >= 2) vertices.push_back(c);
  }
  const std::size_t m = vertices.size();
  const double inf = std::numeric_limits<double>::infinity();
  const double quarter = std::numbers::pi / 2;
  std::vector<std::vector<double>> dist(m, std::vector<double>(m, inf));
  for (std::size_t i = 0; i < m; ++i) {
    dist[i][i] = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && compatible(vertices[i], vertices[j])) dist[i][j] = quarter;
    }
  }
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
  auto index = [&](Clade c) {
    return static_cast<std::size_t>(std::find(vertices.begin(), vertices.end(), c) - vertices.begin());
  };

  // A link point: (vertex index, angular offset) for each end of its cell.
  struct Anchor {
    std::size_t vertex;
    double offset;
  };
  auto anchors = [&](const MetricTree& t) {
    const auto& cl = t.clades();
    if (cl.size() == 1) return std::vector<Anchor>{{index(cl[0].clade), 0.0}};
    const double theta = std::atan2(cl[1].length, cl[0].length);
    return std::vector<Anchor>{{index(cl[0].clade), theta}, {index(cl[1].clade), quarter - theta}};
  };
  const std::vector<Anchor> ax = anchors(x);
  const std::vector<Anchor> ay = anchors(y);
  double link = inf;
  if (ax.size() == 2 && ay.size() == 2 && ax[0].vertex == ay[0].vertex && ax[1].vertex == ay[1].vertex) {
    link = std::abs(ax[0].offset - ay[0].offset);
  }
  for (const Anchor& a : ax)
    for (const Anchor& b : ay) link = std::min(link, dist[a.vertex][b.vertex] + (a.offset + b.offset));  // grouped so d(x,y) == d(y,x) exactly

  if (link >= std::numbers::pi) return rx + ry;
  // law of cosines without the cancellation at small angles
  const double half = std::sin(link / 2);
  return std::sqrt((rx - ry) * (rx - ry) + 4.0 * rx * ry * half * half);
}

// Binary trees on the leaf set s, as their internal clades strictly inside s.
std::vector<std::vector<Clade>> binary_clade_sets(Clade s) {
  if (std::popcount(s) == 1) return {{}};
  std::vector<std::vector<Clade>> out;
  const Clade low = s & (~s + 1);
  const Clade rest = s & ~low;
  // a runs over subsets of s containing the lowest leaf, other than s itself
  for (Clade sub = rest;; sub = (sub - 1) & rest) {
    const Clade a = sub | low;
    if (a != s) {
      const Clade b = s & ~a;
      for (const auto& ta : binary_clade_sets(a)) {
        for (const auto& tb : binary_clade_sets(b)) {
          std::vector<Clade> cl = ta;
          cl.insert(cl.end(), tb.begin(), tb.end());
          if (std::popcount(a) >= 2) cl.push_back(a);
          if (std::popcount(b) >= 2) cl.push_back(b);
          out.push_back(std::move(cl));
        }
      }
    }
    if (sub == 0) break;
  }
  return out;
}

void check_census_arity(std::size_t n) {
  if (n < 2) throw Error(Errc::wrong_arity, "binary topologies need n >= 2, got " + std::to_string(n));
  if (n > 7) throw Error(Errc::arity_too_large, "enumeration is capped at n = 7, got " + std::to_string(n));
}

}  // namespace

bool compatible(Clade a, Clade b) noexcept { return (a & b) == 0 || (a & b) == a || (a & b) == b; }

bool clade_less(Clade a, Clade b) noexcept {
  // Lexicographic on ascending leaf lists.
  while (a != 0 && b != 0) {
    const int la = std::countr_zero(a);
    const int lb = std::countr_zero(b);
    if (la != lb) return la < lb;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

std::vector<std::uint32_t> clade_leaves(Clade c) {
  std::vector<std::uint32_t> out;
  for (; c != 0; c &= c - 1) out.push_back(static_cast<std::uint32_t>(std::countr_zero(c)) + 1);
  return out;
}

std::string clade_string(Clade c) {
  std::string s = "{";
  for (std::uint32_t k : clade_leaves(c)) s += (s.size() > 1 ? "," : "") + std::to_string(k);
  return s + "}";
}

std::vector<WeightedClade> weighted_clades(const PhyloTree& t) {
  if (t.leaf_count() > max_clade_leaves) {
    throw Error(Errc::arity_too_large, "clades are limited to 64 leaves");
  }
  std::vector<WeightedClade> out;
  for (EdgeId e : t.shape().internal_edges()) out.push_back({clade_of(t.shape().leaves_below(e)), t.length(e)});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return clade_less(a.clade, b.clade); });
  return out;
}

PlanarTree shape_from_clades(std::size_t n, const std::vector<Clade>& clades, std::vector<EdgeId>* edge_of_clade) {
  if (n == 0 || n > max_clade_leaves) throw Error(Errc::wrong_arity, "clade trees need 1 <= n <= 64");
  if (n == 1) {
    if (!clades.empty()) throw Error(Errc::phylo_invariant, "a 1-tree has no internal edges");
    if (edge_of_clade) edge_of_clade->clear();
    return PlanarTree::unit();
  }
  check_clades(n, clades);
  const std::size_t k = clades.size();
  // vertex 0 holds all leaves, vertex i+1 holds clades[i]
  auto smallest_above = [&](Clade c, std::size_t skip) {
    std::size_t best = 0;
    int best_size = static_cast<int>(n) + 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == skip || clades[i] == c || (clades[i] & c) != c) continue;
      const int size = std::popcount(clades[i]);
      if (size < best_size) {
        best = i + 1;
        best_size = size;
      }
    }
    return static_cast<VertexId>(best);
  };
  std::vector<Node> sources;
  std::vector<Node> targets;
  for (std::uint32_t leaf = 1; leaf <= n; ++leaf) {
    sources.push_back(Node::leaf(leaf));
    targets.push_back(Node::vertex(smallest_above(Clade{1} << (leaf - 1), k)));
  }
  for (std::size_t i = 0; i < k; ++i) {
    sources.push_back(Node::vertex(static_cast<VertexId>(i + 1)));
    targets.push_back(Node::vertex(smallest_above(clades[i], i)));
  }
  sources.push_back(Node::vertex(0));
  targets.push_back(Node::root());
  if (edge_of_clade) {
    edge_of_clade->clear();
    for (std::size_t i = 0; i < k; ++i) edge_of_clade->push_back(static_cast<EdgeId>(n + i));
  }
  return PlanarTree::from_rooted(RootedTree::from_parts(n, k + 1, std::move(sources), std::move(targets)));
}

MetricTree::MetricTree(PhyloTree t) : tree_(std::move(t)) {
  if (tree_.leaf_count() >= 2) clades_ = weighted_clades(tree_);
}

MetricTree MetricTree::make(PhyloTree tree) {
  for (EdgeId e = 0; e < tree.shape().edge_count(); ++e) {
    if (!tree.shape().is_internal(e) && tree.length(e) != 0.0) {
      throw Error(Errc::phylo_invariant, "external edge of a metric tree has length " + format_length(tree.length(e)));
    }
  }
  return MetricTree(std::move(tree));
}

MetricTree MetricTree::from_clades(std::size_t n, std::vector<WeightedClade> clades) {
  std::vector<Clade> cl;
  for (const auto& c : clades) cl.push_back(c.clade);
  std::vector<EdgeId> edge_of;
  PlanarTree shape = shape_from_clades(n, cl, &edge_of);
  std::vector<double> lengths(shape.edge_count(), 0.0);
  for (std::size_t i = 0; i < clades.size(); ++i) lengths[edge_of[i]] = clades[i].length;
  return MetricTree(PhyloTree::make(shape, std::move(lengths)));
}

double MetricTree::norm() const {
  double s = 0.0;
  for (const auto& c : clades_) s += c.length * c.length;
  return std::sqrt(s);
}

Decomposition decompose(const PhyloTree& t) {
  const std::size_t n = t.leaf_count();
  if (n < 2) throw Error(Errc::wrong_arity, "decompose needs n >= 2; use decompose1");
  ExternalLengths external(n + 1);
  external[0] = t.root_length();
  for (std::uint32_t k = 1; k <= n; ++k) external[k] = t.leaf_length(k);
  std::vector<double> lengths(t.lengths().begin(), t.lengths().end());
  for (EdgeId e = 0; e < lengths.size(); ++e) {
    if (!t.shape().is_internal(e)) lengths[e] = 0.0;
  }
  return {MetricTree::make(PhyloTree::make(t.shape(), std::move(lengths))), std::move(external)};
}

std::pair<MetricTree, double> decompose1(const PhyloTree& t) {
  if (t.leaf_count() != 1) throw Error(Errc::wrong_arity, "decompose1 needs n = 1");
  return {MetricTree::make(PhyloTree::unit(0.0)), t.root_length()};
}

PhyloTree recompose(const MetricTree& m, const ExternalLengths& external) {
  const std::size_t n = m.leaf_count();
  const std::size_t expected = n == 1 ? 1 : n + 1;
  if (external.size() != expected) {
    throw Error(Errc::arity_mismatch, "expected " + std::to_string(expected) + " external lengths, got " +
                                          std::to_string(external.size()));
  }
  const PlanarTree& shape = m.tree().shape();
  std::vector<double> lengths(m.tree().lengths().begin(), m.tree().lengths().end());
  lengths[shape.root_edge()] = external[0];
  if (n >= 2) {
    for (std::uint32_t k = 1; k <= n; ++k) lengths[shape.leaf_edge(k)] = external[k];
  }
  return PhyloTree::make(shape, std::move(lengths));
}

Orthant orthant_from_clades(std::size_t n, std::vector<Clade> clades) {
  PlanarTree shape = shape_from_clades(n, clades);
  CanonicalForm canon = canonical_form(shape, CanonicalMode::unordered);
  std::sort(clades.begin(), clades.end(), clade_less);
  return {std::move(canon.tree), std::move(clades), std::move(canon.encoding)};
}

std::vector<Orthant> enumerate_binary_topologies(std::size_t n) {
  check_census_arity(n);
  std::map<std::string, Orthant> unique;
  for (auto& clades : binary_clade_sets(full_set(n))) {
    Orthant o = orthant_from_clades(n, std::move(clades));
    unique.emplace(o.encoding, std::move(o));
  }
  std::vector<Orthant> out;
  for (auto& [key, o] : unique) out.push_back(std::move(o));
  return out;
}

std::vector<std::size_t> orthant_census(std::size_t n) {
  check_census_arity(n);
  std::set<std::vector<Clade>> faces;
  for (const Orthant& o : enumerate_binary_topologies(n)) {
    const std::size_t k = o.axes.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      std::vector<Clade> face;
      for (std::size_t i = 0; i < k; ++i) {
        if (mask >> i & 1) face.push_back(o.axes[i]);
      }
      faces.insert(std::move(face));
    }
  }
  std::vector<std::size_t> counts(n - 1, 0);
  for (const auto& f : faces) ++counts[f.size()];
  return counts;
}

OrthantLocation orthant_of(const MetricTree& m) {
  std::vector<Clade> clades;
  std::vector<double> coordinates;
  for (const auto& c : m.clades()) {
    clades.push_back(c.clade);
    coordinates.push_back(c.length);
  }
  OrthantLocation loc{m.is_binary(), orthant_from_clades(m.leaf_count(), clades), std::move(coordinates), {}};
  if (loc.binary) {
    loc.adjacent.push_back(loc.orthant);
  } else if (m.leaf_count() <= 7) {
    for (Orthant& o : enumerate_binary_topologies(m.leaf_count())) {
      const bool refines = std::all_of(clades.begin(), clades.end(), [&](Clade c) {
        return std::find(o.axes.begin(), o.axes.end(), c) != o.axes.end();
      });
      if (refines) loc.adjacent.push_back(std::move(o));
    }
  }
  return loc;
}

double bhv_distance(const MetricTree& x, const MetricTree& y, DistanceMode mode) {
  const std::size_t n = x.leaf_count();
  if (y.leaf_count() != n) {
    throw Error(Errc::arity_mismatch, "trees have " + std::to_string(n) + " and " + std::to_string(y.leaf_count()) +
                                          " leaves");
  }
  if (mode == DistanceMode::automatic) mode = n <= 4 ? DistanceMode::exact4 : DistanceMode::cone;
  if (mode == DistanceMode::exact4) {
    if (n > 4) throw Error(Errc::exact_unsupported, "exact distances are available for n <= 4");
    return exact_small(x, y);
  }
  return std::min(common_orthant_distance(x, y), x.norm() + y.norm());
}

void check_open_set(const BasicOpenSet& u) {
  const std::size_t n = u.n;
  if (n == 0) throw Error(Errc::invalid_open_set, "n must be positive");
  try {
    shape_from_clades(n, u.base);
  } catch (const Error& e) {
    throw Error(Errc::invalid_open_set, e.what());
  }
  if (!std::is_sorted(u.base.begin(), u.base.end(), clade_less)) {
    throw Error(Errc::invalid_open_set, "base clades must be in canonical axis order");
  }
  const std::size_t externals = n == 1 ? 1 : n + 1;
  const std::size_t missing = n >= 2 ? n - 2 - u.base.size() : 0;
  if (u.internal.size() != u.base.size() || u.external.size() != externals || u.radii.size() != missing) {
    throw Error(Errc::invalid_open_set, "interval or radius count does not match the base topology");
  }
  for (const Interval& i : u.internal) {
    if (!(i.lo >= 0.0 && i.lo < i.hi) || i.closed_lo) {
      throw Error(Errc::invalid_open_set, "internal intervals must be open subsets of (0,inf)");
    }
  }
  for (const Interval& i : u.external) {
    if (!(i.lo >= 0.0 && i.lo < i.hi) || (i.closed_lo && i.lo != 0.0)) {
      throw Error(Errc::invalid_open_set, "external intervals must be open subsets of [0,inf)");
    }
  }
  for (double r : u.radii) {
    if (!(r > 0.0)) throw Error(Errc::invalid_open_set, "resolution radii must be positive");
  }
}

bool neighborhood_contains(const BasicOpenSet& u, const PhyloTree& z) {
  check_open_set(u);
  const std::size_t n = u.n;
  if (z.leaf_count() != n) {
    throw Error(Errc::arity_mismatch, "open set has n = " + std::to_string(n) + ", tree has " +
                                          std::to_string(z.leaf_count()) + " leaves");
  }
  if (n == 1) return u.external[0].contains(z.root_length());
  if (!u.external[0].contains(z.root_length())) return false;
  for (std::uint32_t k = 1; k <= n; ++k) {
    if (!u.external[k].contains(z.leaf_length(k))) return false;
  }
  const std::vector<WeightedClade> zc = weighted_clades(z);
  std::vector<WeightedClade> extra;
  std::size_t matched = 0;
  for (const WeightedClade& c : zc) {
    const auto it = std::find(u.base.begin(), u.base.end(), c.clade);
    if (it == u.base.end()) {
      extra.push_back(c);
      continue;
    }
    if (!u.internal[static_cast<std::size_t>(it - u.base.begin())].contains(c.length)) return false;
    ++matched;
  }
  if (matched != u.base.size()) return false;  // z does not refine T
  if (extra.empty()) return true;
  if (zc.size() != n - 2) return false;  // only binary refinements count
  for (std::size_t i = 0; i < extra.size(); ++i) {
    if (!(extra[i].length < u.radii[i])) return false;
  }
  return true;
}

}  // namespace phylo
