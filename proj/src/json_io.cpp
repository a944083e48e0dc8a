#include "phylo/json_io.hpp"

#include <charconv>

namespace phylo {

namespace {

// Schema violations in otherwise well-formed JSON.
[[noreturn]] void bad(const std::string& what) { throw SyntaxError(0, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j) {
  if (!j.is_number()) bad("expected a number");
  return j.get<double>();
}

StateSpace states_from(const Json& j) {
  const Json& s = field(j, "states");
  if (!s.is_array()) bad("\"states\" must be an array");
  std::vector<std::string> labels;
  for (const Json& x : s) {
    if (x.is_string()) {
      labels.push_back(x.get<std::string>());
    } else if (x.is_number_integer()) {
      labels.push_back(std::to_string(x.get<long long>()));
    } else {
      bad("state labels must be strings");
    }
  }
  return StateSpace::make(std::move(labels));
}

Json labels_json(const StateSpace& s) { return Json(s.labels()); }

// "L3" -> leaf 3, "v0" -> vertex 0, "root" -> root.
Node node_from(const Json& j, bool target) {
  if (!j.is_string()) bad("edge endpoints must be strings");
  const std::string s = j.get<std::string>();
  if (s == "root") {
    if (!target) bad("the root cannot be an edge source");
    return Node::root();
  }
  if (s.size() < 2 || (s[0] != 'L' && s[0] != 'v')) bad("endpoint \"" + s + "\" is not L<k>, v<i> or root");
  std::uint32_t k = 0;
  const auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), k);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad("endpoint \"" + s + "\" has a bad index");
  if (s[0] == 'L') {
    if (target) bad("a leaf cannot be an edge target");
    return Node::leaf(k);
  }
  return Node::vertex(k);
}

std::string node_name(Node n) {
  if (n.is_root()) return "root";
  return (n.is_leaf() ? "L" : "v") + std::to_string(n.index);
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(e.byte, e.what());
  }
}

Json matrix_to_json(const StateSpace& states, const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"states", labels_json(states)}, {"rows", std::move(rows)}};
}

MarkovGenerator generator_from_json(const Json& j) {
  StateSpace states = states_from(j);
  const Json& rows = field(j, "rows");
  if (!rows.is_array()) bad("\"rows\" must be an array");
  const auto k = static_cast<Eigen::Index>(states.size());
  if (static_cast<Eigen::Index>(rows.size()) != k) {
    throw Error(Errc::shape_mismatch, "expected " + std::to_string(k) + " rows");
  }
  Matrix h(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != k) {
      throw Error(Errc::shape_mismatch, "row " + std::to_string(i) + " must have " + std::to_string(k) + " entries");
    }
    for (Eigen::Index c = 0; c < k; ++c) h(i, c) = number(row[static_cast<std::size_t>(c)]);
  }
  return MarkovGenerator::make(std::move(states), std::move(h));
}

Distribution distribution_from_json(const Json& j) {
  StateSpace states = states_from(j);
  const Json& p = field(j, "p");
  if (!p.is_array()) bad("\"p\" must be an array");
  Vector v(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(p[i]);
  return Distribution::make(std::move(states), std::move(v));
}

Json distribution_to_json(const StateSpace& states, const Vector& p) {
  return Json{{"states", labels_json(states)}, {"p", std::vector<double>(p.data(), p.data() + p.size())}};
}

Json tensor_to_json(const LeafTensor& t) {
  return Json{{"states", labels_json(t.states())}, {"n", t.leaf_count()}, {"data", t.data()}};
}

MixedTree mixed_tree_from_json(const Json& j) {
  const Json& kinds_json = field(j, "kinds");
  const Json& edges = field(j, "edges");
  if (!kinds_json.is_array() || !edges.is_array()) bad("\"kinds\" and \"edges\" must be arrays");
  RawTree raw;
  std::vector<VertexKind> kinds;
  for (std::size_t v = 0; v < kinds_json.size(); ++v) {
    const std::string k = kinds_json[v].is_string() ? kinds_json[v].get<std::string>() : "";
    if (k == "com") {
      kinds.push_back(VertexKind::com);
    } else if (k == "joint") {
      kinds.push_back(VertexKind::joint);
    } else {
      throw Error(Errc::malformed_labelling, "vertex kind must be \"com\" or \"joint\"");
    }
    raw.vertices.push_back(static_cast<std::uint32_t>(v));
  }
  std::vector<std::optional<double>> lengths;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Json& ej = edges[e];
    const Node s = node_from(field(ej, "from"), false);
    if (s.is_leaf()) ++raw.leaves;
    raw.edges.push_back({static_cast<std::uint32_t>(e), s, node_from(field(ej, "to"), true)});
    if (!ej.contains("length") || ej.at("length").is_null()) {
      lengths.emplace_back();
    } else {
      lengths.emplace_back(number(ej.at("length")));
    }
  }
  // validate_planar keeps raw ids in order since they are already dense
  MixedTree t{validate_planar(raw), std::move(kinds), std::move(lengths)};
  check_mixed(t);
  return t;
}

Json mixed_tree_to_json(const MixedTree& t) {
  Json kinds = Json::array();
  for (VertexKind k : t.kinds) kinds.push_back(k == VertexKind::com ? "com" : "joint");
  Json edges = Json::array();
  for (EdgeId e = 0; e < t.tree.edge_count(); ++e) {
    Json ej{{"from", node_name(t.tree.source(e))}, {"to", node_name(t.tree.target(e))}};
    ej["length"] = t.lengths[e] ? Json(*t.lengths[e]) : Json(nullptr);
    edges.push_back(std::move(ej));
  }
  return Json{{"kinds", std::move(kinds)}, {"edges", std::move(edges)}};
}

}  // namespace phylo
