#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phylo {

// Every failure the library reports. Grouped by the layer that raises it.
enum class Errc {
  // tree-core
  source_not_bijective,
  invalid_endpoint,
  no_root_edge,
  multiple_root_edges,
  unreachable_root,
  empty_edge_set,
  unknown_vertex,
  unknown_edge,
  leaf_index_out_of_range,
  permutation_size_mismatch,
  invalid_permutation,
  not_internal_edge,
  invalid_subtree,
  // operad-core
  arity_label_mismatch,
  malformed_labelling,
  not_reduced,
  phylo_invariant,
  // tree-space
  wrong_arity,
  arity_too_large,
  arity_mismatch,
  exact_unsupported,
  invalid_open_set,
  // markov
  negative_off_diagonal,
  column_sum_nonzero,
  shape_mismatch,
  negative_time,
  non_finite_time,
  no_convergence,
  bad_rate,
  bad_alphabet,
  size_cap,
  not_stochastic,
  // coalgebra
  bad_arity,
  state_space_mismatch,
  index_out_of_range,
  domain_error,
  parameter_out_of_range,
  // serialization
  syntax_error,
  leaf_label_error,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised by the Newick and JSON readers; carries the byte offset of the fault.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error(Errc::syntax_error, "at offset " + std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace phylo
