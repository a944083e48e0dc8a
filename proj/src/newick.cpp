#include "phylo/newick.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <set>

namespace phylo {

namespace {

struct Parsed {
  PlanarTree shape;
  std::vector<double> lengths;
};

class Parser {
 public:
  Parser(std::string_view text, bool allow_inf) : text_(text), allow_inf_(allow_inf) {}

  Parsed run() {
    const EdgeId root = subtree(true);
    targets_[root] = Node::root();
    skip();
    expect(';');
    skip();
    if (pos_ != text_.size()) fail("trailing characters after ';'");
    check_labels();
    return {PlanarTree::from_parts(labels_.size(), std::move(sources_), std::move(targets_), std::move(children_)),
            std::move(lengths_)};
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(pos_, what); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  EdgeId subtree(bool top) {
    if (++depth_ > 100000) fail("nesting too deep");
    Node node;
    const EdgeId e = static_cast<EdgeId>(sources_.size());
    sources_.emplace_back();
    targets_.emplace_back();
    lengths_.push_back(0.0);
    if (peek() == '(') {
      ++pos_;
      const auto v = static_cast<VertexId>(children_.size());
      children_.emplace_back();
      for (;;) {
        const EdgeId c = subtree(false);
        targets_[c] = Node::vertex(v);
        children_[v].push_back(c);
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
      node = Node::vertex(v);
    } else {
      node = Node::leaf(label());
    }
    sources_[e] = node;
    if (peek() == ':') {
      ++pos_;
      lengths_[e] = length();
    } else if (!top) {
      fail("expected ':' and a branch length");
    }
    --depth_;
    return e;
  }

  std::uint32_t label() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a leaf label or '('");
    std::uint32_t k = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, k);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      throw Error(Errc::leaf_label_error, "leaf label " + std::string(text_.substr(start, pos_ - start)) + " out of range");
    }
    labels_.push_back(k);
    return k;
  }

  double length() {
    skip();
    const std::size_t start = pos_;
    if (text_.substr(pos_, 3) == "inf") {
      if (!allow_inf_) fail("infinite lengths are not allowed here");
      pos_ += 3;
      return std::numeric_limits<double>::infinity();
    }
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                                   text_[pos_] == 'e' || text_[pos_] == 'E' || text_[pos_] == '+' || text_[pos_] == '-')) {
      ++pos_;
    }
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, x);
    if (start == pos_ || ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed branch length");
    }
    return x;
  }

  void check_labels() const {
    const std::size_t n = labels_.size();
    std::set<std::uint32_t> seen;
    for (std::uint32_t k : labels_) {
      if (k < 1 || k > n) throw Error(Errc::leaf_label_error, "leaf label " + std::to_string(k) + " outside 1.." + std::to_string(n));
      if (!seen.insert(k).second) throw Error(Errc::leaf_label_error, "duplicate leaf label " + std::to_string(k));
    }
  }

  std::string_view text_;
  bool allow_inf_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  std::vector<Node> sources_;
  std::vector<Node> targets_;
  std::vector<std::vector<EdgeId>> children_;
  std::vector<double> lengths_;
  std::vector<std::uint32_t> labels_;
};

// Writes the subtree above edge e; children follow the stored planar order.
template <class Length>
void write(const PlanarTree& shape, EdgeId e, const Length& length, std::string& out) {
  // explicit stack: (edge, next child index)
  std::vector<std::pair<EdgeId, std::size_t>> stack{{e, 0}};
  while (!stack.empty()) {
    auto& [edge, next] = stack.back();
    const Node s = shape.source(edge);
    if (s.is_leaf()) {
      out += std::to_string(s.index);
    } else if (next < shape.children(s.index).size()) {
      out += next == 0 ? "(" : ",";
      const EdgeId c = shape.children(s.index)[next++];
      stack.emplace_back(c, 0);
      continue;
    } else {
      out += ")";
    }
    if constexpr (std::is_invocable_v<Length, EdgeId>) {
      out += ":" + length(edge);
    }
    stack.pop_back();
  }
}

template <class L>
std::string serialize(const BasicPhyloTree<L>& tree) {
  std::string out;
  write(tree.shape(), tree.shape().root_edge(),
        [&](EdgeId e) { return format_length(LengthTraits<L>::value(tree.length(e))); }, out);
  return out + ";";
}

}  // namespace

PhyloTree parse_newick(std::string_view text) {
  Parsed p = Parser(text, false).run();
  return PhyloTree::make(p.shape, std::move(p.lengths));
}

ExtendedPhyloTree parse_newick_extended(std::string_view text) {
  Parsed p = Parser(text, true).run();
  std::vector<ExtendedLength> lengths;
  for (double x : p.lengths) lengths.push_back({x});
  return ExtendedPhyloTree::make(p.shape, std::move(lengths));
}

std::string serialize_newick(const PhyloTree& tree) { return serialize(tree); }
std::string serialize_newick(const ExtendedPhyloTree& tree) { return serialize(tree); }

std::string serialize_shape(const RootedTree& shape) {
  const CanonicalForm canon = canonical_form(shape, CanonicalMode::unordered);
  std::string out;
  write(canon.tree, canon.tree.root_edge(), 0, out);
  return out + ";";
}

}  // namespace phylo
