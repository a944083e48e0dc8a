#include "phylo/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "phylo/error.hpp"

namespace phylo {

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size() + 1, false);
  for (std::uint32_t k : images_) {
    if (k < 1 || k > images_.size() || seen[k]) {
      throw Error(Errc::invalid_permutation, "not a permutation of 1.." + std::to_string(images_.size()));
    }
    seen[k] = true;
  }
}

Permutation::Permutation(std::initializer_list<std::uint32_t> images)
    : Permutation(std::vector<std::uint32_t>(images)) {}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 1u);
  return Permutation(std::move(images));
}

Permutation Permutation::random(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 1u);
  std::shuffle(images.begin(), images.end(), rng);
  return Permutation(std::move(images));
}

Permutation Permutation::transposition(std::size_t n, std::uint32_t a, std::uint32_t b) {
  Permutation p = identity(n);
  std::swap(p.images_.at(a - 1), p.images_.at(b - 1));
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> inv(images_.size());
  for (std::size_t k = 0; k < images_.size(); ++k) inv[images_[k] - 1] = static_cast<std::uint32_t>(k + 1);
  Permutation p;
  p.images_ = std::move(inv);
  return p;
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t k = 0; k < images_.size(); ++k) {
    if (images_[k] != k + 1) return false;
  }
  return true;
}

Permutation operator*(const Permutation& lhs, const Permutation& rhs) {
  if (lhs.size() != rhs.size()) throw Error(Errc::permutation_size_mismatch, "product of permutations of different degree");
  Permutation p;
  p.images_.resize(rhs.size());
  for (std::size_t k = 0; k < rhs.size(); ++k) p.images_[k] = lhs.images_[rhs.images_[k] - 1];
  return p;
}

std::string Permutation::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < images_.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(images_[k]);
  }
  return out;
}

Permutation outer_block(const Permutation& sigma, std::uint32_t i, std::size_t n) {
  const std::size_t m = sigma.size();
  const std::uint32_t j = sigma(i);
  const auto shift_after = [&](std::uint32_t p, std::uint32_t pivot) {
    return p < pivot ? p : static_cast<std::uint32_t>(p + n - 1);
  };
  // inv maps a label of f o_j g to the label the same leaf carries in (f.sigma) o_i g.
  std::vector<std::uint32_t> inv(m + n - 1);
  for (std::uint32_t k = 1; k <= m; ++k) {
    if (k == j) continue;
    inv[shift_after(k, j) - 1] = shift_after(sigma.inverse()(k), i);
  }
  for (std::uint32_t l = 1; l <= n; ++l) inv[l + j - 2] = l + i - 1;
  return Permutation(std::move(inv)).inverse();
}

Permutation inner_block(std::size_t m, std::uint32_t i, const Permutation& tau) {
  const std::size_t n = tau.size();
  std::vector<std::uint32_t> images(m + n - 1);
  std::iota(images.begin(), images.end(), 1u);
  for (std::uint32_t p = i; p < i + n; ++p) images[p - 1] = tau(p - i + 1) + i - 1;
  return Permutation(std::move(images));
}

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::source_not_bijective: return "SourceNotBijective";
    case Errc::invalid_endpoint: return "InvalidEndpoint";
    case Errc::no_root_edge: return "NoRootEdge";
    case Errc::multiple_root_edges: return "MultipleRootEdges";
    case Errc::unreachable_root: return "UnreachableRoot";
    case Errc::empty_edge_set: return "EmptyEdgeSet";
    case Errc::unknown_vertex: return "UnknownVertex";
    case Errc::unknown_edge: return "UnknownEdge";
    case Errc::leaf_index_out_of_range: return "LeafIndexOutOfRange";
    case Errc::permutation_size_mismatch: return "PermutationSizeMismatch";
    case Errc::invalid_permutation: return "InvalidPermutation";
    case Errc::not_internal_edge: return "NotInternalEdge";
    case Errc::invalid_subtree: return "InvalidSubtree";
    case Errc::arity_label_mismatch: return "ArityLabelMismatch";
    case Errc::malformed_labelling: return "MalformedLabelling";
    case Errc::not_reduced: return "NotReduced";
    case Errc::phylo_invariant: return "PhyloInvariantError";
    case Errc::wrong_arity: return "WrongArity";
    case Errc::arity_too_large: return "ArityTooLarge";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::exact_unsupported: return "ExactUnsupported";
    case Errc::invalid_open_set: return "InvalidOpenSet";
    case Errc::negative_off_diagonal: return "NegativeOffDiagonal";
    case Errc::column_sum_nonzero: return "ColumnSumNonzero";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::negative_time: return "NegativeTime";
    case Errc::non_finite_time: return "NonFiniteTime";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::bad_rate: return "BadRate";
    case Errc::bad_alphabet: return "BadAlphabet";
    case Errc::size_cap: return "SizeCap";
    case Errc::not_stochastic: return "NotStochastic";
    case Errc::bad_arity: return "BadArity";
    case Errc::state_space_mismatch: return "StateSpaceMismatch";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::domain_error: return "DomainError";
    case Errc::parameter_out_of_range: return "ParameterOutOfRange";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::leaf_label_error: return "LeafLabelError";
  }
  return "Unknown";
}

}  // namespace phylo
