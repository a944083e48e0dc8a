#include "phylo/coalgebra.hpp"

#include <algorithm>
#include <cmath>

namespace phylo {

namespace {

// Post-order evaluation: each edge gets the operator R^X -> R^{X^L} for the
// sorted leaf set L above it, ending with alpha(length of that edge).
template <class Tree, class Alpha>
Matrix evaluate_with(const Tree& tree, std::size_t k, Alpha&& alpha) {
  const PlanarTree& shape = tree.shape();
  tensor_size(k, shape.leaf_count());
  std::vector<EdgeId> order{shape.root_edge()};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Node s = shape.source(order[i]);
    if (s.is_vertex()) {
      for (EdgeId c : shape.children(s.index)) order.push_back(c);
    }
  }
  std::vector<Matrix> ops(shape.edge_count());
  std::vector<std::vector<std::uint32_t>> leaves(shape.edge_count());
  const auto kk = static_cast<Eigen::Index>(k);

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const EdgeId e = *it;
    const Node s = shape.source(e);
    if (s.is_leaf()) {
      leaves[e] = {s.index};
      ops[e] = alpha(e);
      continue;
    }
    const auto children = shape.children(s.index);
    std::vector<std::uint32_t>& all = leaves[e];
    for (EdgeId c : children) all.insert(all.end(), leaves[c].begin(), leaves[c].end());
    std::sort(all.begin(), all.end());

    // For each position of `all`: owning child and stride in its index.
    const std::size_t width = all.size();
    std::vector<std::size_t> owner(width);
    std::vector<std::size_t> stride(width);
    for (std::size_t ci = 0; ci < children.size(); ++ci) {
      const auto& sub = leaves[children[ci]];
      std::size_t st = 1;
      for (std::size_t r = sub.size(); r-- > 0;) {
        const std::size_t p = static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), sub[r]) - all.begin());
        owner[p] = ci;
        stride[p] = st;
        st *= k;
      }
    }
    const std::size_t rows = tensor_size(k, width);
    Matrix combined(static_cast<Eigen::Index>(rows), kk);
    std::vector<std::size_t> digit(width, 0);
    std::vector<std::size_t> sub(children.size(), 0);
    std::vector<double> factors(children.size());
    for (std::size_t idx = 0; idx < rows; ++idx) {
      for (Eigen::Index x = 0; x < kk; ++x) {
        for (std::size_t ci = 0; ci < children.size(); ++ci) factors[ci] = ops[children[ci]](static_cast<Eigen::Index>(sub[ci]), x);
        // sorted, so relabelling leaves (which reorders children) gives bit-identical products
        if (factors.size() > 2) std::sort(factors.begin(), factors.end());
        double v = 1.0;
        for (double f : factors) v *= f;
        combined(static_cast<Eigen::Index>(idx), x) = v;
      }
      for (std::size_t p = width; p-- > 0;) {
        if (++digit[p] < k) {
          sub[owner[p]] += stride[p];
          break;
        }
        digit[p] = 0;
        sub[owner[p]] -= (k - 1) * stride[p];
      }
    }
    for (EdgeId c : children) ops[c] = Matrix();
    ops[e] = combined * alpha(e);
  }
  return std::move(ops[shape.root_edge()]);
}

void check_states(const MarkovGenerator& g, const Distribution& f) {
  if (!(g.states() == f.states())) throw Error(Errc::state_space_mismatch, "distribution and generator states differ");
}

std::vector<double> to_std(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

std::size_t tensor_size(std::size_t states, std::size_t n) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    size *= states;
    if (size > tensor_cap) throw Error(Errc::size_cap, "tensor exceeds 1e6 entries");
  }
  return size;
}

LeafTensor LeafTensor::make(StateSpace states, std::size_t n, std::vector<double> data) {
  if (data.size() != tensor_size(states.size(), n)) {
    throw Error(Errc::shape_mismatch, "tensor needs |X|^n entries, got " + std::to_string(data.size()));
  }
  return LeafTensor(std::move(states), n, std::move(data));
}

double LeafTensor::at(std::span<const std::size_t> leaf_states) const {
  if (leaf_states.size() != n_) throw Error(Errc::index_out_of_range, "one state per leaf expected");
  std::size_t idx = 0;
  for (std::size_t x : leaf_states) {
    if (x >= states_.size()) throw Error(Errc::index_out_of_range, "state index out of range");
    idx = idx * states_.size() + x;
  }
  return data_[idx];
}

double LeafTensor::sum() const {
  double s = 0.0;
  for (double x : data_) s += x;
  return s;
}

Matrix duplication_matrix(std::size_t k, std::size_t states) {
  if (k == 0) throw Error(Errc::bad_arity, "duplication needs arity >= 1");
  const std::size_t rows = tensor_size(states, k);
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(states));
  // the diagonal index (x,...,x) is x * (1 + s + ... + s^{k-1})
  std::size_t ones = 0;
  for (std::size_t i = 0; i < k; ++i) ones = ones * states + 1;
  for (std::size_t x = 0; x < states; ++x) d(static_cast<Eigen::Index>(x * ones), static_cast<Eigen::Index>(x)) = 1.0;
  return d;
}

LeafTensor duplicate(std::size_t k, const StateSpace& states, const Vector& f) {
  if (f.size() != static_cast<Eigen::Index>(states.size())) throw Error(Errc::shape_mismatch, "vector size");
  return LeafTensor::make(states, k, to_std(duplication_matrix(k, states.size()) * f));
}

Matrix evaluate_operator(const PhyloTree& tree, const MarkovGenerator& g) {
  return evaluate_with(tree, g.states().size(), [&](EdgeId e) { return expm(g, tree.length(e)).matrix(); });
}

LeafTensor evaluate(const PhyloTree& tree, const MarkovGenerator& g, const Distribution& f) {
  check_states(g, f);
  return LeafTensor::make(g.states(), tree.leaf_count(), to_std(evaluate_operator(tree, g) * f.p()));
}

Matrix ExtendedEvaluator::alpha(ExtendedLength t) {
  if (!t.is_infinite()) return expm(g_, t.value).matrix();
  if (!limit_) limit_ = limit_operator(g_).matrix();
  return *limit_;
}

Matrix ExtendedEvaluator::evaluate_operator(const ExtendedPhyloTree& tree) {
  return evaluate_with(tree, g_.states().size(), [&](EdgeId e) { return alpha(tree.length(e)); });
}

LeafTensor evaluate_extended(const ExtendedPhyloTree& tree, const MarkovGenerator& g, const Distribution& f) {
  check_states(g, f);
  ExtendedEvaluator ev(g);
  return LeafTensor::make(g.states(), tree.leaf_count(), to_std(ev.evaluate_operator(tree) * f.p()));
}

Matrix slot_compose(const Matrix& outer, std::size_t m, std::uint32_t i, const Matrix& inner, std::size_t states) {
  if (i < 1 || i > m) throw Error(Errc::leaf_index_out_of_range, "slot " + std::to_string(i));
  const auto id = [&](std::size_t p) {
    const auto s = static_cast<Eigen::Index>(tensor_size(states, p));
    return Matrix::Identity(s, s);
  };
  return kron(kron(id(i - 1), inner), id(m - i)) * outer;
}

Matrix permute_leaf_indices(const Matrix& op, const Permutation& sigma, std::size_t states) {
  const std::size_t n = sigma.size();
  const std::size_t rows = tensor_size(states, n);
  if (static_cast<std::size_t>(op.rows()) != rows) throw Error(Errc::permutation_size_mismatch, "operator rows");
  Matrix out(op.rows(), op.cols());
  std::vector<std::size_t> digit(n);
  std::vector<std::size_t> old(n);
  for (std::size_t idx = 0; idx < rows; ++idx) {
    std::size_t rest = idx;
    for (std::size_t p = n; p-- > 0;) {
      digit[p] = rest % states;
      rest /= states;
    }
    // new leaf j is old leaf sigma(j)
    for (std::uint32_t j = 1; j <= n; ++j) old[sigma(j) - 1] = digit[j - 1];
    std::size_t src = 0;
    for (std::size_t p = 0; p < n; ++p) src = src * states + old[p];
    out.row(static_cast<Eigen::Index>(idx)) = op.row(static_cast<Eigen::Index>(src));
  }
  return out;
}

Vector marginal(const LeafTensor& t, std::uint32_t leaf) {
  const std::size_t n = t.leaf_count();
  if (leaf < 1 || leaf > n) throw Error(Errc::index_out_of_range, "leaf " + std::to_string(leaf));
  const std::size_t k = t.states().size();
  std::size_t stride = 1;
  for (std::size_t p = leaf; p < n; ++p) stride *= k;
  Vector out = Vector::Zero(static_cast<Eigen::Index>(k));
  for (std::size_t idx = 0; idx < t.data().size(); ++idx) out(static_cast<Eigen::Index>(idx / stride % k)) += t.data()[idx];
  return out;
}

bool w_membership(const ExtendedPhyloTree& tree) {
  const PlanarTree& shape = tree.shape();
  for (EdgeId e = 0; e < shape.edge_count(); ++e) {
    if (!shape.is_internal(e) && !tree.length(e).is_infinite()) return false;
  }
  return true;
}

double monoid_iso(ExtendedLength t) {
  if (std::isnan(t.value) || t.value < 0.0) throw Error(Errc::domain_error, "psi needs t in [0,inf]");
  return -std::expm1(-t.value);
}

ExtendedLength monoid_iso_inv(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw Error(Errc::domain_error, "inverse needs u in [0,1]");
  if (u == 1.0) return ExtendedLength::infinity();
  return {-std::log1p(-u)};
}

double monoid_star(double x, double y) { return x + y - x * y; }

ExtendedPhyloTree homotopy_retract(const ExtendedPhyloTree& tree, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::parameter_out_of_range, "t must lie in [0,1]");
  if (t == 0.0) return tree;
  const PlanarTree& shape = tree.shape();
  std::vector<ExtendedLength> lengths(tree.lengths().begin(), tree.lengths().end());
  for (EdgeId e = 0; e < shape.edge_count(); ++e) {
    if (shape.is_internal(e)) continue;
    const double u = std::min(1.0, (1.0 - t) * monoid_iso(lengths[e]) + t);
    lengths[e] = monoid_iso_inv(u);
  }
  return ExtendedPhyloTree::make(shape, std::move(lengths));
}

}  // namespace phylo
