#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vndim/harness.hpp"

using namespace vndim;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f.good()) fail(ErrorKind::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f.good()) fail(ErrorKind::IoError, "cannot write " + path);
  f << text;
}

GroupRingMatrix load_op(const std::string& path) {
  std::ifstream f(path);
  if (!f.good()) fail(ErrorKind::IoError, "cannot open operator file " + path);
  return GroupRingMatrix::load(f);
}

ColoredGraph load_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f.good()) fail(ErrorKind::IoError, "cannot open graph file " + path);
  return ColoredGraph::load(f);
}

void save_graph(const ColoredGraph& g, const std::string& path) {
  std::ofstream f(path);
  if (!f.good()) fail(ErrorKind::IoError, "cannot write graph file " + path);
  g.save(f);
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

std::vector<std::vector<std::int64_t>> parse_int_lists(const std::string& s) {
  std::vector<std::vector<std::int64_t>> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ';')) out.push_back(parse_int_list(tok));
  return out;
}

void emit_graphs(const std::vector<ColoredGraph>& graphs, const std::string& out_dir,
                 const std::string& stem) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    std::string path = out_dir + "/" + stem + "_" + std::to_string(i) + ".graph";
    save_graph(graphs[i], path);
    std::cout << "wrote " << path << "\n";
  }
}

int cmd_group_info(const std::string& spec) {
  auto ctx = GroupContext::parse(spec);
  std::cout << "group " << ctx.spec_string() << "\n";
  std::cout << "finite: " << (ctx.is_finite() ? "yes" : "no") << "\n";
  std::cout << "generators (" << ctx.n_generators() << "):\n";
  for (int i = 0; i < ctx.n_generators(); ++i)
    std::cout << "  s" << i << " = (" << ctx.format_element(ctx.generators()[i])
              << "), inverse s" << ctx.inverse_index(i) << "\n";
  std::cout << "ball sizes:";
  for (std::int64_t k = 0; k <= 4; ++k) std::cout << " |B_" << k << "|=" << ctx.ball_elements(k).size();
  std::cout << "\n";
  return 0;
}

int cmd_op_show(const std::string& path) {
  auto A = load_op(path);
  std::cout << "group " << A.context().spec_string() << ", d = " << A.block_dim() << "\n";
  std::cout << "support size " << A.support().size() << ", propagation "
            << (A.is_zero() ? 0 : propagation(A)) << "\n";
  A.save(std::cout);
  return 0;
}

std::vector<FolnerSet> exhaustion_for(const GroupContext& ctx,
                                      const std::vector<std::int64_t>& radii) {
  std::vector<FolnerSet> out;
  for (auto r : radii) out.push_back(folner_shape(ctx, r));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite approximation toolkit for kernel dimensions of group-ring operators"};
  app.require_subcommand(1);

  // group info
  auto* group = app.add_subcommand("group", "group utilities");
  group->require_subcommand(1);
  auto* ginfo = group->add_subcommand("info", "print generators and ball sizes");
  std::string g_spec;
  ginfo->add_option("spec", g_spec, "group spec, e.g. Z^2, Z^2/(10,10), H3, H3/7")->required();

  // op show
  auto* op = app.add_subcommand("op", "operator utilities");
  op->require_subcommand(1);
  auto* oshow = op->add_subcommand("show", "parse and display an operator file");
  std::string o_path;
  oshow->add_option("file", o_path, "operator file")->required();

  // folner build
  auto* folner = app.add_subcommand("folner", "Folner subgraph sequences");
  folner->require_subcommand(1);
  auto* fbuild = folner->add_subcommand("build", "induced subgraphs on boxes/balls");
  std::string f_group = "Z";
  std::string f_sizes = "5,10";
  std::string f_out;
  std::int64_t f_profile = 0;
  fbuild->add_option("--group", f_group, "group spec");
  fbuild->add_option("--sizes", f_sizes, "comma separated radii");
  fbuild->add_option("--out-dir", f_out, "directory for .graph files");
  fbuild->add_option("--profile", f_profile, "also print |Q_k|/|V| at this k");

  // quotient build
  auto* quot = app.add_subcommand("quotient", "finite quotient Cayley graphs");
  quot->require_subcommand(1);
  auto* qbuild = quot->add_subcommand("build", "full Cayley graphs of (Z/m)^d");
  std::string q_group = "Z";
  std::string q_moduli = "4,8";
  std::string q_out;
  qbuild->add_option("--group", q_group, "free abelian group spec");
  qbuild->add_option("--moduli", q_moduli, "comma separated moduli");
  qbuild->add_option("--out-dir", q_out, "directory for .graph files");

  // diagonal build
  auto* diag = app.add_subcommand("diagonal", "diagonal quotient-Folner sequences");
  diag->require_subcommand(1);
  auto* dbuild = diag->add_subcommand("build", "Folner boxes inside growing quotients");
  int d_dim = 2;
  std::string d_subgroups = "2,0;4,0";
  std::string d_folner = "10,20";
  std::string d_out;
  std::int64_t d_profile = 1;
  dbuild->add_option("--dim", d_dim, "coordinate count");
  dbuild->add_option("--subgroups", d_subgroups, "semicolon separated moduli vectors (0 = Z)");
  dbuild->add_option("--folner", d_folner, "comma separated box radii");
  dbuild->add_option("--out-dir", d_out, "directory for .graph files");
  dbuild->add_option("--profile", d_profile, "print |Q_k|/|V| at this k");

  // tile run / verify
  auto* tile = app.add_subcommand("tile", "quasi-tilings");
  tile->require_subcommand(1);
  auto* trun = tile->add_subcommand("run", "quasi-tile a graph");
  std::string t_graph, t_out = "tiling.json";
  std::string t_eps = "1/4";
  std::string t_radii = "1,2,3,4,5,6,7,8,9,10,11,12";
  std::string t_group;
  trun->add_option("--graph", t_graph, "graph file")->required();
  trun->add_option("--epsilon", t_eps, "tiling epsilon as p/q");
  trun->add_option("--shape-radii", t_radii, "exhaustion radii for the shape chain");
  trun->add_option("--group", t_group,
                   "base group for shapes and similarity (default: the graph's own group; "
                   "set to the infinite group when tiling quotient graphs)");
  trun->add_option("--out", t_out, "output tiling JSON");
  auto* tverify = tile->add_subcommand("verify", "re-verify a tiling from file");
  std::string v_graph, v_tiling;
  tverify->add_option("--graph", v_graph, "graph file")->required();
  tverify->add_option("--tiling", v_tiling, "tiling JSON file")->required();

  // dimseq run
  auto* dimseq = app.add_subcommand("dimseq", "dimension sequence experiments");
  dimseq->require_subcommand(1);
  auto* drun = dimseq->add_subcommand("run", "run an experiment spec");
  std::string ds_spec;
  std::uint64_t ds_seed = 0;
  drun->add_option("--spec", ds_spec, "experiment JSON file")->required();
  drun->add_option("--seed", ds_seed, "override the spec seed");

  // oracle torus
  auto* oracle = app.add_subcommand("oracle", "ground-truth oracles");
  oracle->require_subcommand(1);
  auto* otorus = oracle->add_subcommand("torus", "generic symbol rank over Z^d");
  std::string ot_op;
  std::uint64_t ot_seed = 1;
  otorus->add_option("--op", ot_op, "operator file")->required();
  otorus->add_option("--seed", ot_seed, "evaluation point seed");

  // bounds check
  auto* bounds = app.add_subcommand("bounds", "two-sided dimension bounds");
  bounds->require_subcommand(1);
  auto* bcheck = bounds->add_subcommand("check", "verify the bound pair on one graph");
  std::string b_graph, b_op, b_tiling, b_eps = "1/4", b_delta = "1/10", b_target;
  std::uint64_t b_seed = 1;
  std::int64_t b_trials = 20;
  bcheck->add_option("--graph", b_graph, "graph file")->required();
  bcheck->add_option("--op", b_op, "operator file")->required();
  bcheck->add_option("--tiling", b_tiling, "tiling JSON file")->required();
  bcheck->add_option("--epsilon", b_eps, "epsilon as p/q");
  bcheck->add_option("--delta", b_delta, "delta as p/q");
  bcheck->add_option("--target", b_target, "target dimension (default: torus oracle)");
  bcheck->add_option("--seed", b_seed, "sampling seed");
  bcheck->add_option("--trials", b_trials, "sampled property-check trials");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ginfo) return cmd_group_info(g_spec);
    if (*oshow) return cmd_op_show(o_path);

    if (*fbuild) {
      auto ctx = GroupContext::parse(f_group);
      auto sizes = parse_int_list(f_sizes);
      auto graphs = folner_sequence(ctx, sizes);
      for (std::size_t i = 0; i < graphs.size(); ++i) {
        std::vector<GroupElement> elems;
        for (std::int64_t p = 0; p < graphs[i].n_vertices(); ++p)
          elems.push_back(graphs[i].label_at(p));
        std::cout << "n=" << sizes[i] << " vertices=" << graphs[i].n_vertices()
                  << " i(F)=" << rat_str(iso_ratio(ctx, elems));
        if (f_profile > 0) {
          std::vector<ColoredGraph> one{graphs[i]};
          std::cout << " |Q_" << f_profile
                    << "|/|V|=" << rat_str(convergence_profile(one, ctx, f_profile)[0]);
        }
        std::cout << "\n";
      }
      emit_graphs(graphs, f_out, "folner");
      return 0;
    }

    if (*qbuild) {
      auto ctx = GroupContext::parse(q_group);
      auto moduli = parse_int_list(q_moduli);
      auto graphs = quotient_sequence(ctx, moduli);
      for (std::size_t i = 0; i < graphs.size(); ++i)
        std::cout << "m=" << moduli[i] << " vertices=" << graphs[i].n_vertices() << "\n";
      emit_graphs(graphs, q_out, "quotient");
      return 0;
    }

    if (*dbuild) {
      auto subgroups = parse_int_lists(d_subgroups);
      auto radii = parse_int_list(d_folner);
      auto graphs = diagonal_sequence(d_dim, subgroups, radii);
      auto base = GroupContext::free_abelian(d_dim);
      for (std::size_t i = 0; i < graphs.size(); ++i) {
        std::cout << "step " << i << " vertices=" << graphs[i].n_vertices();
        if (d_profile > 0) {
          std::vector<ColoredGraph> one{graphs[i]};
          std::cout << " |Q_" << d_profile
                    << "|/|V|=" << rat_str(convergence_profile(one, base, d_profile)[0]);
        }
        std::cout << "\n";
      }
      emit_graphs(graphs, d_out, "diagonal");
      return 0;
    }

    if (*trun) {
      auto B = load_graph(t_graph);
      auto ctx = t_group.empty() ? B.context() : GroupContext::parse(t_group);
      auto ex = exhaustion_for(ctx, parse_int_list(t_radii));
      auto tiling = quasi_tile(B, ctx, ex, rat_parse(t_eps));
      auto verif = verify_tiling(B, tiling);
      std::cout << "tiles " << tiling.tiles.size() << " over " << tiling.shapes.size()
                << " shapes; cover " << rat_str(verif.cover) << " ("
                << rat_decimal(verif.cover, 4) << "), disjoint "
                << (verif.disjoint ? "yes" : "NO") << ", params "
                << (verif.params_ok ? "ok" : "VIOLATED") << "\n";
      write_file(t_out, tiling_to_json(tiling));
      std::cout << "wrote " << t_out << "\n";
      return 0;
    }

    if (*tverify) {
      auto B = load_graph(v_graph);
      auto tiling = tiling_from_json(read_file(v_tiling));
      auto verif = verify_tiling(B, tiling);
      std::cout << "cover " << rat_str(verif.cover) << " (" << rat_decimal(verif.cover, 4)
                << ")\ndisjoint " << (verif.disjoint ? "yes" : "NO") << "\nparams "
                << (verif.params_ok ? "ok" : "VIOLATED") << "\n";
      bool pass = verif.disjoint && verif.params_ok &&
                  verif.cover >= 1 - tiling.params.epsilon;
      std::cout << (pass ? "VERIFIED" : "FAILED") << "\n";
      return pass ? 0 : 1;
    }

    if (*drun) {
      auto spec = ExperimentSpec::from_json(read_file(ds_spec));
      if (drun->count("--seed")) spec.seed = ds_seed;
      auto rep = dimension_sequence(spec);
      std::cout << "step  n  |V|  dim_ker  normalized  wall_s\n";
      for (std::size_t i = 0; i < rep.steps.size(); ++i) {
        const auto& s = rep.steps[i];
        if (s.failed) {
          std::cout << i << "  " << s.n << "  FAILED: " << s.error << "\n";
          continue;
        }
        std::cout << i << "  " << s.n << "  " << s.vertices << "  " << s.dim_ker << "  "
                  << rat_str(s.normalized) << " = " << rat_decimal(s.normalized, 6) << "  "
                  << s.wall_seconds << "\n";
      }
      if (rep.oracle)
        std::cout << "oracle dim_G(ker A) = " << rat_str(*rep.oracle) << "\n";
      if (!spec.csv_path.empty()) write_file(spec.csv_path, rep.to_csv());
      if (!spec.json_path.empty()) write_file(spec.json_path, rep.to_json());
      if (!spec.svg_path.empty()) write_file(spec.svg_path, rep.to_svg());
      return 0;
    }

    if (*otorus) {
      auto A = load_op(ot_op);
      auto dim = torus_oracle(A, ot_seed);
      std::cout << "dim_G(ker A) = " << rat_str(dim) << "\n";
      return 0;
    }

    if (*bcheck) {
      auto B = load_graph(b_graph);
      auto A = load_op(b_op);
      auto tiling = tiling_from_json(read_file(b_tiling));
      Rat target = b_target.empty() ? torus_oracle(A, b_seed) : rat_parse(b_target);
      auto ctx = A.context();
      auto rep = bound_check(ctx, A, B, tiling, rat_parse(b_eps), rat_parse(b_delta), target,
                             b_seed, b_trials);
      std::cout << "target " << rat_str(rep.target) << ", dim_ker " << rep.dim_ker << " / "
                << rep.vertices << " = " << rat_str(rep.normalized_dim) << "\n";
      std::cout << "cover " << rat_str(rep.cover) << ", tile mass " << rep.tile_mass << "\n";
      std::cout << "lower (target-delta)(1-eps) = " << rat_str(rep.lower.bound) << " : "
                << (rep.lower.holds ? "PASS" : "FAIL") << "\n";
      std::cout << "upper (target+delta)/(1-eps)+eps = " << rat_str(rep.upper.bound) << " : "
                << (rep.upper.holds ? "PASS" : "FAIL") << "\n";
      return rep.lower.holds && rep.upper.holds ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
