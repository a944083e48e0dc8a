#include "phylo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "phylo/coalgebra.hpp"
#include "phylo/json_io.hpp"
#include "phylo/newick.hpp"
#include "phylo/reduction.hpp"
#include "phylo/tree_space.hpp"

namespace phylo {

namespace {

class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_source(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open " + path);
  buf << file.rdbuf();
  return buf.str();
}

double reporting_tolerance() {
  const char* env = std::getenv("PHYLO_TOL");
  if (env == nullptr || *env == '\0') return 1e-10;
  char* end = nullptr;
  const double tol = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(tol > 0.0) || !std::isfinite(tol)) {
    throw InputError(std::string("PHYLO_TOL must be a positive number, got ") + env);
  }
  return tol;
}

Permutation parse_permutation(const std::string& text) {
  std::vector<std::uint32_t> images;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size() || v > 0xffffffffUL) throw std::invalid_argument(item);
      images.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::logic_error&) {
      throw Error(Errc::invalid_permutation, "bad entry \"" + item + "\"");
    }
  }
  return Permutation(std::move(images));
}

Json clades_json(const std::vector<WeightedClade>& clades) {
  Json out = Json::array();
  for (const auto& c : clades) out.push_back(Json{{"clade", clade_leaves(c.clade)}, {"length", c.length}});
  return out;
}

std::string hex(std::uint64_t h) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

DistanceMode parse_mode(const std::string& m) {
  if (m == "exact4") return DistanceMode::exact4;
  if (m == "cone") return DistanceMode::cone;
  return DistanceMode::automatic;
}

MetricTree metric_part(const PhyloTree& t) {
  if (t.leaf_count() == 1) return decompose1(t).first;
  return decompose(t).metric;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phylogenetic operad toolkit: tree algebra, tree space and Markov coalgebras", "phylo_cli"};
  app.require_subcommand(1);

  std::string file;
  std::string file2;
  std::string model;
  std::string root;
  std::string perm;
  std::string mode = "auto";
  std::uint32_t at = 1;
  std::size_t n = 4;
  std::size_t k = 4;
  std::size_t sites = 1;
  double mu = 1.0;
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  bool extended = false;

  auto* validate_cmd = app.add_subcommand("validate", "check a Newick tree and report diagnostics");
  validate_cmd->add_option("tree", file, "Newick file, - for stdin")->required();
  validate_cmd->add_flag("--extended", extended, "allow inf lengths");

  auto* canon_cmd = app.add_subcommand("canon", "canonical Newick and hash");
  canon_cmd->add_option("tree", file)->required();

  auto* compose_cmd = app.add_subcommand("compose", "partial composition A o_i B");
  compose_cmd->add_option("--at", at, "leaf of A to graft onto")->required();
  compose_cmd->add_option("outer", file)->required();
  compose_cmd->add_option("inner", file2)->required();

  auto* act_cmd = app.add_subcommand("act", "relabel leaves by a permutation");
  act_cmd->add_option("--perm", perm, "one-line notation, e.g. 2,3,1")->required();
  act_cmd->add_option("tree", file)->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "normal form of a Com + [0,inf) labelled tree (JSON)");
  reduce_cmd->add_option("tree", file)->required();

  auto* decompose_cmd = app.add_subcommand("decompose", "split into metric tree and external lengths");
  decompose_cmd->add_option("tree", file)->required();

  auto* recompose_cmd = app.add_subcommand("recompose", "inverse of decompose (JSON input)");
  recompose_cmd->add_option("factors", file)->required();

  auto* topologies_cmd = app.add_subcommand("topologies", "binary topologies and orthant census");
  topologies_cmd->add_option("--n", n, "leaf count, 2..7")->required();

  auto* dist_cmd = app.add_subcommand("dist", "BHV distance between the metric parts of two trees");
  dist_cmd->add_option("--mode", mode)->check(CLI::IsMember({"exact4", "cone", "auto"}));
  dist_cmd->add_option("x", file)->required();
  dist_cmd->add_option("y", file2)->required();

  auto* evaluate_cmd = app.add_subcommand("evaluate", "joint leaf distribution of a tree");
  evaluate_cmd->add_option("--model", model, "generator JSON")->required();
  evaluate_cmd->add_option("--root", root, "root distribution JSON")->required();
  evaluate_cmd->add_flag("--extended", extended, "allow inf lengths");
  evaluate_cmd->add_option("tree", file)->required();

  auto* limit_cmd = app.add_subcommand("limit", "limit operator of a generator");
  limit_cmd->add_option("--model", model)->required();

  auto* jc_cmd = app.add_subcommand("jc", "Jukes-Cantor generator");
  jc_cmd->add_option("--mu", mu, "rate")->required();
  jc_cmd->add_option("--k", k, "alphabet size");
  jc_cmd->add_option("--sites", sites, "independent sites");

  auto* simulate_cmd = app.add_subcommand("simulate", "sample leaf states along a tree");
  simulate_cmd->add_option("--model", model)->required();
  simulate_cmd->add_option("--root", root)->required();
  simulate_cmd->add_option("--seed", seed);
  simulate_cmd->add_option("--samples", samples)->check(CLI::PositiveNumber);
  simulate_cmd->add_option("tree", file)->required();

  auto* wcheck_cmd = app.add_subcommand("wcheck", "is the tree in W(Com)? (inf lengths allowed)");
  wcheck_cmd->add_option("tree", file)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_invalid_input;
  }

  const auto emit = [&](const Json& j) { out << j.dump(2) << '\n'; };
  const auto newick = [&](const std::string& path) { return parse_newick(read_source(path, in)); };

  try {
    const double tol = reporting_tolerance();
    if (*validate_cmd) {
      try {
        const std::string text = read_source(file, in);
        Json j{{"valid", true}};
        if (extended) {
          const ExtendedPhyloTree t = parse_newick_extended(text);
          j["n"] = t.leaf_count();
          j["vertices"] = t.shape().vertex_count();
          j["edges"] = t.shape().edge_count();
          j["newick"] = serialize_newick(t);
        } else {
          const PhyloTree t = parse_newick(text);
          j["n"] = t.leaf_count();
          j["vertices"] = t.shape().vertex_count();
          j["edges"] = t.shape().edge_count();
          j["newick"] = serialize_newick(t);
        }
        emit(j);
      } catch (const Error& e) {
        Json j{{"valid", false}, {"error", errc_name(e.code())}, {"message", e.what()}};
        if (const auto* s = dynamic_cast<const SyntaxError*>(&e)) j["position"] = s->position();
        emit(j);
        err << "invalid: " << e.what() << '\n';
        return exit_invalid_input;
      }
    } else if (*canon_cmd) {
      const PhyloTree t = newick(file);
      emit(Json{{"newick", serialize_newick(t)}, {"hash", hex(t.hash())}});
    } else if (*compose_cmd) {
      const PhyloTree a = newick(file);
      const PhyloTree b = newick(file2);
      emit(Json{{"newick", serialize_newick(phylo_compose(a, at, b))}});
    } else if (*act_cmd) {
      const PhyloTree t = newick(file);
      emit(Json{{"newick", serialize_newick(phylo_act(t, parse_permutation(perm)))}});
    } else if (*reduce_cmd) {
      const MixedTree t = mixed_tree_from_json(parse_json(read_source(file, in)));
      const ReductionResult r = reduce_coproduct(t);
      emit(Json{{"steps", r.steps},
                {"reduced", mixed_tree_to_json(r.tree)},
                {"newick", serialize_newick(to_phylo(r.tree))}});
    } else if (*decompose_cmd) {
      const PhyloTree t = newick(file);
      if (t.leaf_count() == 1) {
        const auto [m, len] = decompose1(t);
        emit(Json{{"n", 1}, {"metric", serialize_newick(m.tree())}, {"internal", Json::array()}, {"external", {len}}});
      } else {
        const Decomposition d = decompose(t);
        emit(Json{{"n", t.leaf_count()},
                  {"metric", serialize_newick(d.metric.tree())},
                  {"internal", clades_json(d.metric.clades())},
                  {"external", d.external}});
      }
    } else if (*recompose_cmd) {
      const Json j = parse_json(read_source(file, in));
      if (!j.is_object() || !j.contains("metric") || !j["metric"].is_string() || !j.contains("external") ||
          !j["external"].is_array()) {
        throw SyntaxError(0, "expected {\"metric\": newick, \"external\": [...]}");
      }
      ExternalLengths external;
      for (const Json& x : j["external"]) {
        if (!x.is_number()) throw SyntaxError(0, "external lengths must be numbers");
        external.push_back(x.get<double>());
      }
      const MetricTree m = MetricTree::make(parse_newick(j["metric"].get<std::string>()));
      emit(Json{{"newick", serialize_newick(recompose(m, external))}});
    } else if (*topologies_cmd) {
      const std::vector<Orthant> all = enumerate_binary_topologies(n);
      Json list = Json::array();
      for (const Orthant& o : all) list.push_back(serialize_shape(o.topology));
      emit(Json{{"n", n}, {"count", all.size()}, {"census", orthant_census(n)}, {"topologies", std::move(list)}});
    } else if (*dist_cmd) {
      const MetricTree x = metric_part(newick(file));
      const MetricTree y = metric_part(newick(file2));
      emit(Json{{"mode", mode}, {"distance", bhv_distance(x, y, parse_mode(mode))}});
    } else if (*evaluate_cmd) {
      const MarkovGenerator g = generator_from_json(parse_json(read_source(model, in)));
      const Distribution f = distribution_from_json(parse_json(read_source(root, in)));
      const std::string text = read_source(file, in);
      const LeafTensor t = extended ? evaluate_extended(parse_newick_extended(text), g, f) : evaluate(parse_newick(text), g, f);
      Json j = tensor_to_json(t);
      j["sum"] = t.sum();
      j["normalized"] = std::abs(t.sum() - 1.0) <= tol;
      emit(j);
    } else if (*limit_cmd) {
      const MarkovGenerator g = generator_from_json(parse_json(read_source(model, in)));
      const LimitResult r = limit_operator_detailed(g);
      const Matrix& p = r.limit.matrix();
      Json j = matrix_to_json(g.states(), p);
      j["doublings"] = r.doublings;
      j["residual"] = r.residual;
      j["idempotent"] = norm_inf(p * p - p) <= std::max(tol, 1e-8);
      emit(j);
    } else if (*jc_cmd) {
      const MarkovGenerator g = site_product(jukes_cantor(mu, k), sites);
      emit(matrix_to_json(g.states(), g.rates()));
    } else if (*simulate_cmd) {
      const MarkovGenerator g = generator_from_json(parse_json(read_source(model, in)));
      const Distribution f = distribution_from_json(parse_json(read_source(root, in)));
      const JointCounts c = simulate_branching(newick(file), g, f, seed, samples);
      emit(Json{{"states", c.states.labels()},
                {"n", c.n},
                {"samples", c.samples},
                {"seed", seed},
                {"counts", c.counts},
                {"frequencies", c.frequencies()}});
    } else if (*wcheck_cmd) {
      const ExtendedPhyloTree t = parse_newick_extended(read_source(file, in));
      emit(Json{{"member", w_membership(t)}, {"newick", serialize_newick(t)}});
    }
    return exit_ok;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::no_convergence ? exit_no_convergence : exit_invalid_input;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << '\n';
    return exit_invalid_input;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid_input;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
}

}  // namespace phylo
