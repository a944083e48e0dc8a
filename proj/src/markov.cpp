#include "phylo/markov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace phylo {

namespace {

void check_square(const StateSpace& s, const Matrix& m) {
  if (m.rows() != static_cast<Eigen::Index>(s.size()) || m.cols() != static_cast<Eigen::Index>(s.size())) {
    throw Error(Errc::shape_mismatch, std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                          " matrix for " + std::to_string(s.size()) + " states");
  }
}

// Uniform in [0,1) from the top 53 bits; portable across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t draw(std::mt19937_64& rng, const std::vector<double>& cumulative) {
  const double u = uniform01(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

StateSpace StateSpace::make(std::vector<std::string> labels) {
  if (labels.empty()) throw Error(Errc::bad_alphabet, "empty state space");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw Error(Errc::bad_alphabet, "repeated state label");
  return StateSpace(std::move(labels));
}

StateSpace StateSpace::indexed(std::size_t k) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) labels.push_back(std::to_string(i));
  return make(std::move(labels));
}

std::size_t StateSpace::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error(Errc::bad_alphabet, "unknown state " + label);
  return static_cast<std::size_t>(it - labels_.begin());
}

MarkovGenerator MarkovGenerator::make(StateSpace states, Matrix h) {
  check_square(states, h);
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    double sum = 0.0;
    double scale = 1.0;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      if (!std::isfinite(h(i, j))) throw Error(Errc::shape_mismatch, "non-finite rate");
      if (i != j && h(i, j) < 0.0) {
        throw Error(Errc::negative_off_diagonal,
                    "H[" + std::to_string(i) + "][" + std::to_string(j) + "] = " + format_length(h(i, j)));
      }
      sum += h(i, j);
      scale = std::max(scale, std::abs(h(i, j)));
    }
    if (std::abs(sum) > generator_tolerance * scale) {
      throw Error(Errc::column_sum_nonzero, "column " + std::to_string(j) + " sums to " + format_length(sum));
    }
  }
  return MarkovGenerator(std::move(states), std::move(h));
}

StochasticMatrix StochasticMatrix::make(StateSpace states, Matrix m) {
  check_square(states, m);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!(m(i, j) >= -clamp_tolerance)) {
        throw Error(Errc::not_stochastic, "entry " + std::to_string(i) + "," + std::to_string(j) + " is " +
                                              format_length(m(i, j)));
      }
      if (m(i, j) < 0.0) m(i, j) = 0.0;
    }
    if (std::abs(m.col(j).sum() - 1.0) > stochastic_tolerance) {
      throw Error(Errc::not_stochastic, "column " + std::to_string(j) + " sums to " + format_length(m.col(j).sum()));
    }
  }
  return StochasticMatrix(std::move(states), std::move(m));
}

Distribution Distribution::make(StateSpace states, Vector p) {
  if (p.size() != static_cast<Eigen::Index>(states.size())) {
    throw Error(Errc::shape_mismatch, "distribution has " + std::to_string(p.size()) + " entries");
  }
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p(i) >= 0.0) || !std::isfinite(p(i))) throw Error(Errc::not_stochastic, "negative probability");
  }
  if (std::abs(p.sum() - 1.0) > generator_tolerance) {
    throw Error(Errc::not_stochastic, "probabilities sum to " + format_length(p.sum()));
  }
  return Distribution(std::move(states), std::move(p));
}

Distribution Distribution::uniform(StateSpace states) {
  const auto k = static_cast<Eigen::Index>(states.size());
  return Distribution(std::move(states), Vector::Constant(k, 1.0 / static_cast<double>(k)));
}

double norm1(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff(); }
double norm_inf(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix expm_matrix(const Matrix& a) {
  const double norm = norm1(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix b = a / std::ldexp(1.0, squarings);
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix term = result;
  for (int k = 1; k <= 40; ++k) {
    term = term * b / static_cast<double>(k);
    result += term;
    if (norm1(term) <= 1e-18 * norm1(result)) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

StochasticMatrix expm(const MarkovGenerator& g, double t) {
  if (std::isnan(t) || std::isinf(t)) throw Error(Errc::non_finite_time, "time must be finite; use the limit");
  if (t < 0.0) throw Error(Errc::negative_time, "time " + format_length(t) + " is negative");
  return StochasticMatrix::make(g.states(), expm_matrix(t * g.rates()));
}

LimitResult limit_operator_detailed(const MarkovGenerator& g) {
  Matrix p = expm(g, 1.0).matrix();
  double residual = 0.0;
  std::size_t doublings = 0;
  bool converged = false;
  while (doublings < 64) {
    Matrix next = p * p;
    residual = norm_inf(next - p);
    p = std::move(next);
    ++doublings;
    if (residual < 1e-10) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(Errc::no_convergence, "limit did not settle after 64 doublings, residual " + format_length(residual));
  }
  const double idem = norm_inf(p * p - p);
  if (!(idem < 1e-8)) throw Error(Errc::no_convergence, "limit is not idempotent, |P^2 - P| = " + format_length(idem));
  return {StochasticMatrix::make(g.states(), std::move(p)), doublings, residual};
}

StochasticMatrix limit_operator(const MarkovGenerator& g) { return limit_operator_detailed(g).limit; }

MarkovGenerator jukes_cantor(double mu, std::size_t k) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(Errc::bad_rate, "rate must be positive and finite");
  if (k < 2) throw Error(Errc::bad_alphabet, "alphabet needs at least 2 states");
  StateSpace states = k == 4 ? StateSpace::make({"A", "T", "C", "G"}) : StateSpace::indexed(k);
  Matrix h = Matrix::Constant(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k), mu);
  h.diagonal().setConstant(-static_cast<double>(k - 1) * mu);
  return MarkovGenerator::make(std::move(states), std::move(h));
}

MarkovGenerator site_product(const MarkovGenerator& g, std::size_t sites) {
  const std::size_t k = g.states().size();
  std::size_t total = 1;
  for (std::size_t s = 0; s < sites; ++s) {
    total *= k;
    if (total > 64) break;
  }
  if (sites == 0 || total > 64) throw Error(Errc::size_cap, "site product must have 1 to |X|^N <= 64 states");

  const bool short_labels = std::all_of(g.states().labels().begin(), g.states().labels().end(),
                                        [](const std::string& l) { return l.size() == 1; });
  std::vector<std::string> labels = g.states().labels();
  Matrix h = g.rates();
  for (std::size_t s = 1; s < sites; ++s) {
    std::vector<std::string> next;
    for (const auto& a : labels)
      for (const auto& b : g.states().labels()) next.push_back(a + (short_labels ? "" : ".") + b);
    labels = std::move(next);
    h = kron(h, Matrix::Identity(g.rates().rows(), g.rates().cols())) +
        kron(Matrix::Identity(h.rows(), h.cols()), g.rates());
  }
  return MarkovGenerator::make(StateSpace::make(std::move(labels)), std::move(h));
}

std::vector<double> JointCounts::frequencies() const {
  std::vector<double> f;
  for (std::uint64_t c : counts) f.push_back(static_cast<double>(c) / static_cast<double>(samples));
  return f;
}

JointCounts simulate_branching(const PhyloTree& tree, const MarkovGenerator& g, const Distribution& root,
                               std::uint64_t seed, std::size_t samples) {
  if (!(root.states() == g.states())) throw Error(Errc::state_space_mismatch, "root distribution states differ");
  const std::size_t k = g.states().size();
  const std::size_t n = tree.leaf_count();
  std::size_t cells = 1;
  for (std::size_t i = 0; i < n; ++i) {
    cells *= k;
    if (cells > 1'000'000) throw Error(Errc::size_cap, "joint table exceeds 1e6 cells");
  }
  const Matrix& h = g.rates();
  std::vector<double> hold(k);
  std::vector<std::vector<double>> jump(k, std::vector<double>(k, 0.0));
  for (std::size_t x = 0; x < k; ++x) {
    hold[x] = -h(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x));
    double acc = 0.0;
    for (std::size_t y = 0; y < k; ++y) {
      if (y != x) acc += h(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x));
      jump[x][y] = acc;
    }
  }
  std::vector<double> root_cdf(k);
  double acc = 0.0;
  for (std::size_t x = 0; x < k; ++x) root_cdf[x] = acc += root.p()(static_cast<Eigen::Index>(x));

  // Edges ordered so that each edge follows the edge below it.
  const PlanarTree& shape = tree.shape();
  std::vector<EdgeId> order{shape.root_edge()};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Node s = shape.source(order[i]);
    if (s.is_vertex()) {
      for (EdgeId c : shape.children(s.index)) order.push_back(c);
    }
  }

  std::mt19937_64 rng(seed);
  JointCounts out{g.states(), n, samples, std::vector<std::uint64_t>(cells, 0)};
  std::vector<std::size_t> state(shape.edge_count());
  for (std::size_t s = 0; s < samples; ++s) {
    for (EdgeId e : order) {
      const Node t = shape.target(e);
      std::size_t x = t.is_root() ? draw(rng, root_cdf) : state[shape.out_edge(t.index)];
      const double len = tree.length(e);
      double clock = 0.0;
      while (hold[x] > 0.0) {
        clock += -std::log1p(-uniform01(rng)) / hold[x];
        if (clock > len) break;
        x = draw(rng, jump[x]);
      }
      state[e] = x;
    }
    std::size_t index = 0;
    for (std::uint32_t leaf = 1; leaf <= n; ++leaf) index = index * k + state[shape.leaf_edge(leaf)];
    ++out.counts[index];
  }
  return out;
}

}  // namespace phylo
