#pragma once

// R^X as a coalgebra of Phyl and of Com + [0,inf]: a tree with n leaves acts
// as a linear map R^X -> R^{X^n}. Edges act through alpha(length) = exp(tH)
// and a k-ary vertex duplicates. Tensor layout is row-major with leaf 1 the
// outermost index.

#include <cstdint>
#include <optional>
#include <vector>

#include "phylo/markov.hpp"
#include "phylo/permutation.hpp"
#include "phylo/phylo_tree.hpp"

namespace phylo {

inline constexpr std::size_t tensor_cap = 1'000'000;

class LeafTensor {
 public:
  /// ShapeMismatch unless data has |X|^n entries; SizeCap above 1e6 entries.
  static LeafTensor make(StateSpace states, std::size_t n, std::vector<double> data);

  const StateSpace& states() const noexcept { return states_; }
  std::size_t leaf_count() const noexcept { return n_; }
  const std::vector<double>& data() const noexcept { return data_; }
  /// One state index per leaf, leaf 1 first.
  double at(std::span<const std::size_t> leaf_states) const;
  double sum() const;

 private:
  LeafTensor(StateSpace s, std::size_t n, std::vector<double> d) : states_(std::move(s)), n_(n), data_(std::move(d)) {}
  StateSpace states_;
  std::size_t n_;
  std::vector<double> data_;
};

/// |X|^n, or SizeCap beyond the tensor cap.
std::size_t tensor_size(std::size_t states, std::size_t n);

/// The diagonal embedding R^X -> R^{X^k}; BadArity for k = 0.
Matrix duplication_matrix(std::size_t k, std::size_t states);
LeafTensor duplicate(std::size_t k, const StateSpace& states, const Vector& f);

/// Evaluation with finite lengths.
Matrix evaluate_operator(const PhyloTree& tree, const MarkovGenerator& g);
LeafTensor evaluate(const PhyloTree& tree, const MarkovGenerator& g, const Distribution& f);

/// Evaluates extended trees; alpha(inf) is the limit operator, computed once.
class ExtendedEvaluator {
 public:
  explicit ExtendedEvaluator(MarkovGenerator g) : g_(std::move(g)) {}

  const MarkovGenerator& generator() const noexcept { return g_; }
  Matrix alpha(ExtendedLength t);
  Matrix evaluate_operator(const ExtendedPhyloTree& tree);

 private:
  MarkovGenerator g_;
  std::optional<Matrix> limit_;
};

LeafTensor evaluate_extended(const ExtendedPhyloTree& tree, const MarkovGenerator& g, const Distribution& f);

/// (I^{i-1} (x) inner (x) I^{m-i}) * outer, for outer with m output leaves.
Matrix slot_compose(const Matrix& outer, std::size_t m, std::uint32_t i, const Matrix& inner, std::size_t states);

/// The operator of T.sigma from that of T: output leaf k reads leaf sigma(k).
Matrix permute_leaf_indices(const Matrix& op, const Permutation& sigma, std::size_t states);

/// Sum over all leaves but `leaf`; IndexOutOfRange.
Vector marginal(const LeafTensor& t, std::uint32_t leaf);

/// True iff the root edge and every leaf edge have length inf.
bool w_membership(const ExtendedPhyloTree& tree);

/// psi(t) = 1 - e^{-t}, an isomorphism ([0,inf], +) -> ([0,1], *) with
/// x * y = x + y - xy. DomainError outside the domains.
double monoid_iso(ExtendedLength t);
ExtendedLength monoid_iso_inv(double u);
double monoid_star(double x, double y);

/// External lengths move to psi^{-1}((1-t) psi(l) + t); internal lengths stay.
/// ParameterOutOfRange unless 0 <= t <= 1.
ExtendedPhyloTree homotopy_retract(const ExtendedPhyloTree& tree, double t);

}  // namespace phylo
