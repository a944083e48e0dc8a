#pragma once

// BHV tree space T_n and the splitting Phyl_n = T_n x [0,inf)^{n+1}.
//
// Internal edges of an n-tree are identified with clades: the set of leaves
// above the edge, stored as a bitmask (bit k-1 for leaf k). A clade of a
// rooted tree has between 2 and n-1 leaves; two clades fit in one tree iff
// they are nested or disjoint.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "phylo/phylo_tree.hpp"

namespace phylo {

using Clade = std::uint64_t;

inline constexpr double metric_tolerance = 1e-9;

bool compatible(Clade a, Clade b) noexcept;
/// Canonical axis order: leaf lists compared lexicographically.
bool clade_less(Clade a, Clade b) noexcept;
std::vector<std::uint32_t> clade_leaves(Clade c);
std::string clade_string(Clade c);

struct WeightedClade {
  Clade clade = 0;
  double length = 0.0;
  friend bool operator==(const WeightedClade&, const WeightedClade&) = default;
};

/// A point of T_n: external lengths 0, internal lengths positive.
class MetricTree {
 public:
  /// PhyloInvariantError unless every external edge has length 0.
  static MetricTree make(PhyloTree tree);
  /// Builds the tree on leaves 1..n from a pairwise compatible clade set.
  static MetricTree from_clades(std::size_t n, std::vector<WeightedClade> clades);

  std::size_t leaf_count() const noexcept { return tree_.leaf_count(); }
  const PhyloTree& tree() const noexcept { return tree_; }
  /// Internal edges in canonical axis order.
  const std::vector<WeightedClade>& clades() const noexcept { return clades_; }
  double norm() const;
  bool is_binary() const { return leaf_count() < 2 || clades_.size() == leaf_count() - 2; }

  friend bool operator==(const MetricTree& a, const MetricTree& b) { return a.tree_ == b.tree_; }

 private:
  explicit MetricTree(PhyloTree t);
  PhyloTree tree_;
  std::vector<WeightedClade> clades_;
};

/// Index 0 is the root edge, 1..n the leaf edges.
using ExternalLengths = std::vector<double>;

/// Internal edges of any tree as weighted clades (canonical order); n <= 64.
std::vector<WeightedClade> weighted_clades(const PhyloTree& t);

/// A tree on leaves 1..n with the given internal clades; `edge_of_clade`
/// receives the edge id of each clade, in input order.
PlanarTree shape_from_clades(std::size_t n, const std::vector<Clade>& clades,
                             std::vector<EdgeId>* edge_of_clade = nullptr);

struct Decomposition {
  MetricTree metric;
  ExternalLengths external;
};

/// n >= 2, else WrongArity.
Decomposition decompose(const PhyloTree& t);
/// n = 1, else WrongArity.
std::pair<MetricTree, double> decompose1(const PhyloTree& t);
/// ArityMismatch unless external has n+1 entries (1 entry when n = 1).
PhyloTree recompose(const MetricTree& m, const ExternalLengths& external);

struct Orthant {
  PlanarTree topology;      // canonical unordered shape
  std::vector<Clade> axes;  // canonical axis order
  std::string encoding;
  std::size_t dimension() const noexcept { return axes.size(); }
};

/// Orthant of a compatible clade set (not necessarily maximal).
Orthant orthant_from_clades(std::size_t n, std::vector<Clade> clades);

/// All rooted binary topologies on n leaves; 2 <= n <= 7.
std::vector<Orthant> enumerate_binary_topologies(std::size_t n);

/// Faces of the orthant complex: counts[k] = number of k-dimensional cells.
std::vector<std::size_t> orthant_census(std::size_t n);

struct OrthantLocation {
  bool binary = false;
  Orthant orthant;                   // the cell containing the point in its interior
  std::vector<double> coordinates;   // along orthant.axes
  std::vector<Orthant> adjacent;     // maximal orthants whose closure contains the point
};

OrthantLocation orthant_of(const MetricTree& m);

enum class DistanceMode { exact4, cone, automatic };

/// exact4: exact geodesic for n <= 4 (ExactUnsupported otherwise);
/// cone: min(common orthant distance when compatible, |x| + |y|), an upper bound.
double bhv_distance(const MetricTree& x, const MetricTree& y, DistanceMode mode = DistanceMode::automatic);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_lo = false;
  bool contains(double x) const noexcept { return (closed_lo ? x >= lo : x > lo) && x < hi; }
};

// U_T: the base topology's internal lengths in `internal` (canonical axis
// order), external lengths in `external` (root, leaves 1..n), and binary
// refinements whose new edges, taken in canonical axis order, lie in (0, r_i).
struct BasicOpenSet {
  std::size_t n = 0;
  std::vector<Clade> base;  // internal clades of T
  std::vector<Interval> internal;
  std::vector<Interval> external;
  std::vector<double> radii;  // one per missing edge, n - 2 - k of them
};

/// Checks the shape of U (InvalidOpenSet).
void check_open_set(const BasicOpenSet& u);
/// ArityMismatch if z has another leaf count.
bool neighborhood_contains(const BasicOpenSet& u, const PhyloTree& z);

}  // namespace phylo
