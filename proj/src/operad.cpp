#include "phylo/operad.hpp"

#include <array>
#include <charconv>

namespace phylo {

std::string format_length(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

namespace {

void check_position(std::size_t arity, std::uint32_t i) {
  if (i < 1 || i > arity) {
    throw Error(Errc::leaf_index_out_of_range, "position " + std::to_string(i) + " of an operation of arity " + std::to_string(arity));
  }
}

void check_degree(std::size_t arity, const Permutation& sigma) {
  if (sigma.size() != arity) {
    throw Error(Errc::permutation_size_mismatch, "permutation of degree " + std::to_string(sigma.size()) + " on arity " + std::to_string(arity));
  }
}

}  // namespace

Com::Label Com::make(std::size_t n) {
  if (n == 0) throw Error(Errc::bad_arity, "Com has no nullary operation");
  return {n};
}

Com::Label Com::compose(const Label& f, std::uint32_t i, const Label& g) {
  check_position(f.arity, i);
  return {f.arity + g.arity - 1};
}

Com::Label Com::act(const Label& f, const Permutation& sigma) {
  check_degree(f.arity, sigma);
  return f;
}

ComPlus::Label ComPlus::compose(const Label& f, std::uint32_t i, const Label& g) {
  check_position(f.arity, i);
  return {f.arity + g.arity - 1};
}

ComPlus::Label ComPlus::act(const Label& f, const Permutation& sigma) {
  check_degree(f.arity, sigma);
  return f;
}

HalfLine::Label HalfLine::compose(const Label& f, std::uint32_t i, const Label& g) {
  check_position(1, i);
  return f + g;
}

HalfLine::Label HalfLine::act(const Label& f, const Permutation& sigma) {
  check_degree(1, sigma);
  return f;
}

ExtendedHalfLine::Label ExtendedHalfLine::compose(const Label& f, std::uint32_t i, const Label& g) {
  check_position(1, i);
  return f + g;
}

ExtendedHalfLine::Label ExtendedHalfLine::act(const Label& f, const Permutation& sigma) {
  check_degree(1, sigma);
  return f;
}

const LawResult& LawReport::operator[](std::string_view name) const {
  for (const auto& l : laws) {
    if (l.law == name) return l;
  }
  throw std::out_of_range("no law named " + std::string(name));
}

}  // namespace phylo
