#pragma once

// Operads presented by partial composition, the free operad on a collection
// (C-trees under grafting) and the counit that evaluates a U(O)-tree in O.

#include <algorithm>
#include <charconv>
#include <concepts>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "phylo/labelled_tree.hpp"
#include "phylo/length.hpp"
#include "phylo/permutation.hpp"

namespace phylo {

/// A collection: labels with an arity, decidable equality and a printable key.
template <class C>
concept Collection = requires(const typename C::Label& f) {
  { C::arity(f) } -> std::convertible_to<std::size_t>;
  { C::equal(f, f) } -> std::convertible_to<bool>;
  { C::key(f) } -> std::convertible_to<std::string>;
};

/// An operad: a collection with partial composition, unit and S_n action.
template <class O>
concept Operad = Collection<O> && requires(const typename O::Label& f, std::uint32_t i, const Permutation& sigma) {
  { O::compose(f, i, f) } -> std::same_as<typename O::Label>;
  { O::identity() } -> std::same_as<typename O::Label>;
  { O::act(f, sigma) } -> std::same_as<typename O::Label>;
};

// --- Built-in instances ------------------------------------------------------

/// Com: one operation per positive arity, represented by its arity.
struct Com {
  struct Label {
    std::size_t arity = 1;
    friend bool operator==(const Label&, const Label&) = default;
  };
  static std::size_t arity(const Label& f) { return f.arity; }
  static bool equal(const Label& a, const Label& b) { return a == b; }
  static std::string key(const Label& f) { return "f" + std::to_string(f.arity); }
  static Label make(std::size_t n);
  static Label compose(const Label& f, std::uint32_t i, const Label& g);
  static Label identity() { return {1}; }
  static Label act(const Label& f, const Permutation& sigma);
};

/// Com_+: the terminal operad, one operation in every arity including 0.
struct ComPlus {
  struct Label {
    std::size_t arity = 1;
    friend bool operator==(const Label&, const Label&) = default;
  };
  static std::size_t arity(const Label& f) { return f.arity; }
  static bool equal(const Label& a, const Label& b) { return a == b; }
  static std::string key(const Label& f) { return "f" + std::to_string(f.arity); }
  static Label compose(const Label& f, std::uint32_t i, const Label& g);
  static Label identity() { return {1}; }
  static Label act(const Label& f, const Permutation& sigma);
};

/// The monoid ([0,inf), +) as an operad with only unary operations.
struct HalfLine {
  using Label = double;
  static std::size_t arity(const Label&) { return 1; }
  static bool equal(const Label& a, const Label& b) { return a == b; }
  static std::string key(const Label& f) { return length_key(f); }
  static Label compose(const Label& f, std::uint32_t i, const Label& g);
  static Label identity() { return 0.0; }
  static Label act(const Label& f, const Permutation& sigma);
};

/// The monoid ([0,inf], +) with inf absorbing.
struct ExtendedHalfLine {
  using Label = ExtendedLength;
  static std::size_t arity(const Label&) { return 1; }
  static bool equal(const Label& a, const Label& b) { return a == b; }
  static std::string key(const Label& f) { return length_key(f); }
  static Label compose(const Label& f, std::uint32_t i, const Label& g);
  static Label identity() { return ExtendedLength{0.0}; }
  static Label act(const Label& f, const Permutation& sigma);
};

// --- Free operad -----------------------------------------------------------

/// A C-tree: a planar tree whose k-ary vertices carry k-ary labels of C.
template <Collection C>
using CTree = LabelledTree<typename C::Label>;

template <Collection C>
void check_arities(const CTree<C>& t) {
  for (VertexId v = 0; v < t.tree.vertex_count(); ++v) {
    if (C::arity(t.labels[v]) != t.tree.children(v).size()) {
      throw Error(Errc::arity_label_mismatch, "vertex v" + std::to_string(v) + " has arity " +
                                                  std::to_string(t.tree.children(v).size()) + " but label " + C::key(t.labels[v]));
    }
  }
}

/// The corolla iota(f) with leaves 1..n in order.
template <Collection C>
CTree<C> corolla_of(const typename C::Label& f) {
  return CTree<C>(PlanarTree::corolla(C::arity(f)), {f});
}

template <Collection C>
CTree<C> free_compose(const CTree<C>& outer, std::uint32_t i, const CTree<C>& inner) {
  check_arities<C>(outer);
  check_arities<C>(inner);
  return graft(outer, i, inner);
}

/// Equality of C-trees: planar isomorphism preserving labels.
template <Collection C>
bool ctree_equal(const CTree<C>& a, const CTree<C>& b) {
  const auto key = [](const typename C::Label& f) { return C::key(f); };
  return canonical_form(a, CanonicalMode::planar, key).encoding == canonical_form(b, CanonicalMode::planar, key).encoding;
}

/// The free operad C-Tree as an Operad instance.
template <Collection C>
struct FreeOperad {
  using Label = CTree<C>;
  static std::size_t arity(const Label& t) { return t.leaf_count(); }
  static bool equal(const Label& a, const Label& b) { return ctree_equal<C>(a, b); }
  static std::string key(const Label& t) {
    return canonical_form(t, CanonicalMode::planar, [](const typename C::Label& f) { return C::key(f); }).encoding;
  }
  static Label compose(const Label& f, std::uint32_t i, const Label& g) { return free_compose<C>(f, i, g); }
  static Label identity() { return Label(PlanarTree::unit(), {}); }
  static Label act(const Label& f, const Permutation& sigma) { return permute_leaves(f, sigma); }
};

// --- Counit ------------------------------------------------------------------

/// Evaluates a U(O)-tree to one operation of O by contracting internal edges
/// in the given order (ids of `t`), then reading off the corolla.
template <Operad O>
typename O::Label counit_eval(const CTree<O>& t, std::span<const EdgeId> order) {
  check_arities<O>(t);
  std::vector<EdgeId> expected = t.tree.internal_edges();
  std::vector<EdgeId> given(order.begin(), order.end());
  std::sort(given.begin(), given.end());
  if (given != expected) throw Error(Errc::invalid_subtree, "contraction order must list every internal edge");

  CTree<O> current = t;
  std::vector<EdgeId> id(t.tree.edge_count());
  for (EdgeId e = 0; e < id.size(); ++e) id[e] = e;
  for (EdgeId e : order) {
    const EdgeId now = id[e];
    const Contraction c = contract_edge_mapped(current.tree, now);
    current = contract_edge(current, now, [](const typename O::Label& f, std::uint32_t pos, const typename O::Label& g) {
      return O::compose(f, pos, g);
    });
    for (EdgeId& cur : id) {
      if (cur != no_edge) cur = c.edge_map[cur];
    }
  }

  if (current.tree.vertex_count() == 0) return O::identity();
  // A corolla whose leaves read p_1..p_n in planar order is iota(F).tau with tau^{-1}(k) = p_k.
  std::vector<std::uint32_t> planar;
  for (EdgeId c : current.tree.children(0)) planar.push_back(current.tree.source(c).index);
  const Permutation tau = Permutation(std::move(planar)).inverse();
  return O::act(current.labels[0], tau);
}

template <Operad O>
typename O::Label counit_eval(const CTree<O>& t) {
  const auto order = t.tree.internal_edges();
  return counit_eval<O>(t, order);
}

template <Operad O>
bool counit_equivalent(const CTree<O>& a, const CTree<O>& b) {
  if (a.leaf_count() != b.leaf_count()) return false;
  return O::equal(counit_eval<O>(a), counit_eval<O>(b));
}

// --- Law suite -------------------------------------------------------------

struct LawResult {
  std::string law;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::string counterexample;

  bool passed() const noexcept { return failures == 0 && trials > 0; }
};

struct LawReport {
  std::vector<LawResult> laws;

  bool all_passed() const noexcept {
    for (const auto& l : laws) {
      if (!l.passed()) return false;
    }
    return true;
  }
  const LawResult& operator[](std::string_view name) const;
};

template <Operad O>
using OperationSampler = std::function<typename O::Label(std::mt19937_64&)>;

namespace detail {

template <Operad O>
void record(LawResult& r, bool ok, const std::string& context) {
  ++r.trials;
  if (!ok) {
    if (r.failures == 0) r.counterexample = context;
    ++r.failures;
  }
}

template <Operad O>
std::string triple(const typename O::Label& f, std::uint32_t i, const typename O::Label& g, std::uint32_t j,
                   const typename O::Label& h) {
  return "f=" + O::key(f) + " i=" + std::to_string(i) + " g=" + O::key(g) + " j=" + std::to_string(j) + " h=" + O::key(h);
}

}  // namespace detail

/// Checks associativity, both unit laws, both equivariance laws and the
/// action laws on `samples` random draws per law.
template <Operad O>
LawReport operad_law_suite(const OperationSampler<O>& sample, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto uniform = [&](std::size_t lo, std::size_t hi) {
    return static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(lo, hi)(rng));
  };
  const auto draw_positive = [&]() {
    for (;;) {
      auto f = sample(rng);
      if (O::arity(f) > 0) return f;
    }
  };

  LawResult assoc{"associativity"}, left_unit{"left unit"}, right_unit{"right unit"};
  LawResult eq_outer{"equivariance (outer)"}, eq_inner{"equivariance (inner)"}, action{"action"};
  const auto id = O::identity();

  for (std::size_t s = 0; s < samples; ++s) {
    // (f o_i g) o_j h, sequential or parallel according to j.
    {
      const auto f = draw_positive();
      const auto g = sample(rng);
      const auto h = sample(rng);
      const std::size_t m = O::arity(f), n = O::arity(g), p = O::arity(h);
      const std::uint32_t i = uniform(1, m);
      if (m + n - 1 == 0) {
        --s;
        continue;
      }
      const std::uint32_t j = uniform(1, m + n - 1);
      const auto lhs = O::compose(O::compose(f, i, g), j, h);
      typename O::Label rhs = f;
      if (j < i) {
        rhs = O::compose(O::compose(f, j, h), static_cast<std::uint32_t>(i + p - 1), g);
      } else if (j < i + n) {
        rhs = O::compose(f, i, O::compose(g, j - i + 1, h));
      } else {
        rhs = O::compose(O::compose(f, static_cast<std::uint32_t>(j - n + 1), h), i, g);
      }
      detail::record<O>(assoc, O::equal(lhs, rhs), detail::triple<O>(f, i, g, j, h));
    }
    {
      const auto f = sample(rng);
      detail::record<O>(left_unit, O::equal(O::compose(id, 1, f), f), "f=" + O::key(f));
    }
    {
      const auto f = draw_positive();
      const std::uint32_t i = uniform(1, O::arity(f));
      detail::record<O>(right_unit, O::equal(O::compose(f, i, id), f), "f=" + O::key(f) + " i=" + std::to_string(i));
    }
    {
      const auto f = draw_positive();
      const auto g = sample(rng);
      const std::size_t m = O::arity(f), n = O::arity(g);
      const Permutation sigma = Permutation::random(m, rng);
      const std::uint32_t i = uniform(1, m);
      const auto lhs = O::compose(O::act(f, sigma), i, g);
      const auto rhs = O::act(O::compose(f, sigma(i), g), outer_block(sigma, i, n));
      detail::record<O>(eq_outer, O::equal(lhs, rhs),
                        "f=" + O::key(f) + " sigma=" + sigma.to_string() + " i=" + std::to_string(i) + " g=" + O::key(g));
    }
    {
      const auto f = draw_positive();
      const auto g = sample(rng);
      const std::size_t m = O::arity(f), n = O::arity(g);
      const Permutation tau = Permutation::random(n, rng);
      const std::uint32_t i = uniform(1, m);
      const auto lhs = O::compose(f, i, O::act(g, tau));
      const auto rhs = O::act(O::compose(f, i, g), inner_block(m, i, tau));
      detail::record<O>(eq_inner, O::equal(lhs, rhs),
                        "f=" + O::key(f) + " i=" + std::to_string(i) + " g=" + O::key(g) + " tau=" + tau.to_string());
    }
    {
      const auto f = sample(rng);
      const std::size_t n = O::arity(f);
      const Permutation sigma = Permutation::random(n, rng);
      const Permutation tau = Permutation::random(n, rng);
      const bool ok = O::equal(O::act(f, Permutation::identity(n)), f) &&
                      O::equal(O::act(O::act(f, sigma), tau), O::act(f, sigma * tau));
      detail::record<O>(action, ok, "f=" + O::key(f) + " sigma=" + sigma.to_string() + " tau=" + tau.to_string());
    }
  }
  return LawReport{{assoc, left_unit, right_unit, eq_outer, eq_inner, action}};
}

}  // namespace phylo
