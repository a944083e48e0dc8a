#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace phylo {

/// A permutation of {1..n} in one-line notation: image(k) is sigma(k).
///
/// Products follow function composition, (sigma * tau)(k) = sigma(tau(k)),
/// which makes leaf relabelling a right action: (T.sigma).tau = T.(sigma*tau).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> images);
  Permutation(std::initializer_list<std::uint32_t> images);

  static Permutation identity(std::size_t n);
  static Permutation random(std::size_t n, std::mt19937_64& rng);
  // Transposition of a and b in S_n.
  static Permutation transposition(std::size_t n, std::uint32_t a, std::uint32_t b);

  std::size_t size() const noexcept { return images_.size(); }
  std::uint32_t operator()(std::uint32_t k) const { return images_[k - 1]; }
  std::span<const std::uint32_t> images() const noexcept { return images_; }

  Permutation inverse() const;
  bool is_identity() const noexcept;

  friend Permutation operator*(const Permutation& lhs, const Permutation& rhs);
  friend bool operator==(const Permutation&, const Permutation&) = default;

  std::string to_string() const;

 private:
  std::vector<std::uint32_t> images_;
};

// Block permutations relating the two sides of the equivariance laws for
// partial composition, with f of arity m, g of arity n:
//
//   (f . sigma) o_i g   ==  (f o_{sigma(i)} g) . outer_block(sigma, i, n)
//   f o_i (g . tau)     ==  (f o_i g) . inner_block(m, i, tau)
Permutation outer_block(const Permutation& sigma, std::uint32_t i, std::size_t n);
Permutation inner_block(std::size_t m, std::uint32_t i, const Permutation& tau);

}  // namespace phylo
