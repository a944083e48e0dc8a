#include <cmath>
#include <random>

#include "doctest.h"
#include "phylo/coalgebra.hpp"
#include "phylo/markov.hpp"
#include "phylo/newick.hpp"
#include "support.hpp"

using namespace phylo;
using phylo::testing::error_of;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("state spaces and generators are validated") {
  CHECK(error_of([] { StateSpace::make({}); }) == Errc::bad_alphabet);
  CHECK(error_of([] { StateSpace::make({"A", "A"}); }) == Errc::bad_alphabet);
  CHECK(StateSpace::make({"A", "T"}).index_of("T") == 1);
  CHECK(error_of([] { StateSpace::indexed(2).index_of("x"); }) == Errc::bad_alphabet);

  Matrix h(2, 2);
  h << -1, 2, 1, -2;
  CHECK_NOTHROW(MarkovGenerator::make(StateSpace::indexed(2), h));
  Matrix neg = h;
  neg(0, 1) = -0.5;
  neg(1, 1) = 0.5;
  CHECK(error_of([&] { MarkovGenerator::make(StateSpace::indexed(2), neg); }) == Errc::negative_off_diagonal);
  Matrix rows = h.transpose();  // row sums zero, column sums not
  CHECK(error_of([&] { MarkovGenerator::make(StateSpace::indexed(2), rows); }) == Errc::column_sum_nonzero);
  CHECK(error_of([&] { MarkovGenerator::make(StateSpace::indexed(3), h); }) == Errc::shape_mismatch);
}

TEST_CASE("stochastic matrices and distributions") {
  Matrix m(2, 2);
  m << 1.0, 0.5, -1e-13, 0.5;
  m(0, 0) = 1.0 + 1e-13;
  const StochasticMatrix s = StochasticMatrix::make(StateSpace::indexed(2), m);
  CHECK(s.matrix()(1, 0) == 0.0);
  m(1, 0) = -1e-6;
  CHECK(error_of([&] { StochasticMatrix::make(StateSpace::indexed(2), m); }) == Errc::not_stochastic);
  Vector p(2);
  p << 0.5, 0.6;
  CHECK(error_of([&] { Distribution::make(StateSpace::indexed(2), p); }) == Errc::not_stochastic);
  CHECK(Distribution::uniform(StateSpace::indexed(4)).p().sum() == doctest::Approx(1.0));
}

TEST_CASE("expm of a two-state flip chain in closed form") {
  // exp(tH) for H = [[-1,1],[1,-1]]: diagonal (1 + e^{-2t})/2
  const MarkovGenerator g = phylo::testing::flip_generator();
  for (double t : {0.0, 0.1, 1.0, 3.5, 20.0}) {
    const Matrix p = expm(g, t).matrix();
    const double same = 0.5 * (1.0 + std::exp(-2.0 * t));
    CHECK(std::abs(p(0, 0) - same) < 1e-14);
    CHECK(std::abs(p(1, 0) - (1.0 - same)) < 1e-14);
  }
  CHECK(error_of([&] { expm(g, -1.0); }) == Errc::negative_time);
  CHECK(error_of([&] { expm(g, std::numeric_limits<double>::infinity()); }) == Errc::non_finite_time);
}

TEST_CASE("Jukes-Cantor in closed form") {
  const MarkovGenerator jc = jukes_cantor(0.7, 4);
  CHECK(jc.states().labels() == std::vector<std::string>{"A", "T", "C", "G"});
  for (double t : {0.05, 0.5, 2.0}) {
    const Matrix p = expm(jc, t).matrix();
    const double decay = std::exp(-4.0 * 0.7 * t);
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) {
        const double expected = i == j ? 0.25 + 0.75 * decay : 0.25 - 0.25 * decay;
        CHECK(std::abs(p(i, j) - expected) < 1e-14);
      }
  }
  CHECK(error_of([] { jukes_cantor(0.0, 4); }) == Errc::bad_rate);
  CHECK(error_of([] { jukes_cantor(1.0, 1); }) == Errc::bad_alphabet);
}

TEST_CASE("expm agrees with a plain Taylor series") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const MarkovGenerator g = phylo::testing::random_generator(4, rng);
    const double t = phylo::testing::uniform_real(rng, 0.0, 2.0) / std::max(1.0, norm1(g.rates()));
    CHECK(max_abs(expm(g, t).matrix() - phylo::testing::taylor_oracle(t * g.rates())) < 1e-12);
  }
}

TEST_CASE("semigroup law") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    const MarkovGenerator g = phylo::testing::random_generator(phylo::testing::uniform_int(rng, 2, 5), rng, 3.0);
    const double s = phylo::testing::uniform_real(rng, 0.0, 3.0);
    const double t = phylo::testing::uniform_real(rng, 0.0, 3.0);
    CHECK(max_abs(expm(g, s).matrix() * expm(g, t).matrix() - expm(g, s + t).matrix()) < 1e-10);
  }
}

TEST_CASE("limit operators") {
  const LimitResult flip = limit_operator_detailed(phylo::testing::flip_generator());
  CHECK(max_abs(flip.limit.matrix() - Matrix::Constant(2, 2, 0.5)) < 1e-10);
  CHECK(flip.residual < 1e-10);

  const Matrix p = limit_operator(jukes_cantor(1.0, 4)).matrix();
  CHECK(max_abs(p - Matrix::Constant(4, 4, 0.25)) < 1e-8);
  CHECK(norm_inf(p * p - p) < 1e-8);

  // two absorbing states: the limit keeps them apart
  Matrix h = Matrix::Zero(3, 3);
  h(0, 2) = 1.0;
  h(1, 2) = 3.0;
  h(2, 2) = -4.0;
  const Matrix q = limit_operator(MarkovGenerator::make(StateSpace::indexed(3), h)).matrix();
  CHECK(std::abs(q(0, 2) - 0.25) < 1e-10);
  CHECK(std::abs(q(1, 2) - 0.75) < 1e-10);
  CHECK(std::abs(q(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("independent sites factor as a Kronecker product") {
  std::mt19937_64 rng(53);
  const MarkovGenerator g = phylo::testing::random_generator(2, rng);
  const MarkovGenerator g2 = site_product(g, 2);
  CHECK(g2.states().size() == 4);
  CHECK(g2.states().labels()[1] == "01");
  for (double t : {0.3, 1.7}) {
    const Matrix p = expm(g, t).matrix();
    CHECK(max_abs(expm(g2, t).matrix() - kron(p, p)) < 1e-12);
  }
  const MarkovGenerator g3 = site_product(jukes_cantor(1.0, 4), 3);
  CHECK(g3.states().size() == 64);
  CHECK(g3.states().labels()[1] == "AAT");
  CHECK(error_of([&] { site_product(jukes_cantor(1.0, 4), 4); }) == Errc::size_cap);
}

TEST_CASE("norms") {
  Matrix a(2, 2);
  a << 1, -2, 3, 4;
  CHECK(norm1(a) == 6.0);
  CHECK(norm_inf(a) == 7.0);
  CHECK(kron(Matrix::Identity(2, 2), a).rows() == 4);
}

TEST_CASE("simulation is seeded and matches the analytic tensor") {
  const PhyloTree t = parse_newick("(1:1,2:0.5):0.2;");
  const MarkovGenerator g = phylo::testing::flip_generator();
  const Distribution f = Distribution::uniform(g.states());
  const JointCounts a = simulate_branching(t, g, f, 7, 20000);
  const JointCounts b = simulate_branching(t, g, f, 7, 20000);
  CHECK(a.counts == b.counts);
  CHECK(simulate_branching(t, g, f, 8, 20000).counts != a.counts);
  std::uint64_t total = 0;
  for (auto c : a.counts) total += c;
  CHECK(total == 20000);
  const LeafTensor exact = evaluate(t, g, f);
  const std::vector<double> freq = a.frequencies();
  double tv = 0.0;
  for (std::size_t i = 0; i < freq.size(); ++i) tv += 0.5 * std::abs(freq[i] - exact.data()[i]);
  CHECK(tv < 0.03);
  const Distribution other = Distribution::uniform(StateSpace::indexed(3));
  CHECK(error_of([&] { simulate_branching(t, g, other, 1, 10); }) == Errc::state_space_mismatch);
}
