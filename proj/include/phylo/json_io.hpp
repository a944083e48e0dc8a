#pragma once

// JSON schemas shared by the CLI:
//   generator / matrix  {"states": [...], "rows": [[...], ...]}   (rows[i][j] = M[i][j], columns sum to 0 or 1)
//   distribution        {"states": [...], "p": [...]}
//   tensor              {"states": [...], "n": k, "data": [...]}  (row-major, leaf 1 outermost)
//   mixed tree          {"kinds": ["com" | "joint", ...],
//                        "edges": [{"from": "L3" | "v0", "to": "v1" | "root", "length": x | null}, ...]}
//     vertex ids index "kinds"; a vertex's children are its incoming edges in list order.

#include <string_view>

#include <json.hpp>

#include "phylo/coalgebra.hpp"
#include "phylo/markov.hpp"
#include "phylo/reduction.hpp"

namespace phylo {

using Json = nlohmann::ordered_json;

/// SyntaxError carrying the byte offset.
Json parse_json(std::string_view text);

Json matrix_to_json(const StateSpace& states, const Matrix& m);
MarkovGenerator generator_from_json(const Json& j);
Distribution distribution_from_json(const Json& j);
Json distribution_to_json(const StateSpace& states, const Vector& p);
Json tensor_to_json(const LeafTensor& t);

MixedTree mixed_tree_from_json(const Json& j);
Json mixed_tree_to_json(const MixedTree& t);

}  // namespace phylo
