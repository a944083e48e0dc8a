#pragma once

// Finite-state continuous-time Markov processes. Column-stochastic throughout:
// matrices act on column vectors of probabilities, columns sum to 1, and a
// generator's columns sum to 0.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phylo/phylo_tree.hpp"

namespace phylo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class StateSpace {
 public:
  /// BadAlphabet on an empty or repeated label set.
  static StateSpace make(std::vector<std::string> labels);
  /// States "0".."k-1".
  static StateSpace indexed(std::size_t k);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  /// BadAlphabet if absent.
  std::size_t index_of(const std::string& label) const;

  friend bool operator==(const StateSpace&, const StateSpace&) = default;

 private:
  explicit StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {}
  std::vector<std::string> labels_;
};

inline constexpr double generator_tolerance = 1e-12;
inline constexpr double stochastic_tolerance = 1e-10;
inline constexpr double clamp_tolerance = 1e-12;

class MarkovGenerator {
 public:
  /// ShapeMismatch, NegativeOffDiagonal, ColumnSumNonzero.
  static MarkovGenerator make(StateSpace states, Matrix h);

  const StateSpace& states() const noexcept { return states_; }
  const Matrix& rates() const noexcept { return h_; }

 private:
  MarkovGenerator(StateSpace s, Matrix h) : states_(std::move(s)), h_(std::move(h)) {}
  StateSpace states_;
  Matrix h_;
};

class StochasticMatrix {
 public:
  /// Clamps entries in [-1e-12, 0) to 0; NotStochastic on larger negatives or
  /// column sums off by more than 1e-10; ShapeMismatch.
  static StochasticMatrix make(StateSpace states, Matrix m);

  const StateSpace& states() const noexcept { return states_; }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  StochasticMatrix(StateSpace s, Matrix m) : states_(std::move(s)), m_(std::move(m)) {}
  StateSpace states_;
  Matrix m_;
};

class Distribution {
 public:
  /// NotStochastic unless entries are >= 0 and sum to 1 within 1e-12.
  static Distribution make(StateSpace states, Vector p);
  static Distribution uniform(StateSpace states);

  const StateSpace& states() const noexcept { return states_; }
  const Vector& p() const noexcept { return p_; }

 private:
  Distribution(StateSpace s, Vector p) : states_(std::move(s)), p_(std::move(p)) {}
  StateSpace states_;
  Vector p_;
};

/// exp(A) by scaling and squaring around a Taylor core.
Matrix expm_matrix(const Matrix& a);
/// Max column sum of |a|.
double norm1(const Matrix& a);
/// Max row sum of |a|.
double norm_inf(const Matrix& a);
Matrix kron(const Matrix& a, const Matrix& b);

/// alpha(t) = exp(tH). NegativeTime, NonFiniteTime.
StochasticMatrix expm(const MarkovGenerator& g, double t);

struct LimitResult {
  StochasticMatrix limit;
  std::size_t doublings = 0;
  double residual = 0.0;  // last |P_2t - P_t|_inf
};

/// lim exp(tH) by squaring exp(H); NoConvergence after 64 doublings.
LimitResult limit_operator_detailed(const MarkovGenerator& g);
StochasticMatrix limit_operator(const MarkovGenerator& g);

/// Off-diagonal mu, diagonal -(k-1)mu; states A,T,C,G when k = 4.
MarkovGenerator jukes_cantor(double mu, std::size_t k);

/// Kronecker sum over N independent sites; |X|^N <= 64 (SizeCap).
MarkovGenerator site_product(const MarkovGenerator& g, std::size_t sites);

struct JointCounts {
  StateSpace states;
  std::size_t n = 0;
  std::size_t samples = 0;
  std::vector<std::uint64_t> counts;  // |X|^n, leaf 1 outermost
  std::vector<double> frequencies() const;
};

/// Exact jump-chain simulation along the tree; deterministic for a seed.
JointCounts simulate_branching(const PhyloTree& tree, const MarkovGenerator& g, const Distribution& root,
                               std::uint64_t seed, std::size_t samples);

}  // namespace phylo
