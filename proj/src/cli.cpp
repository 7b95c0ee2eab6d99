#include "loclab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "loclab/barrier.hpp"
#include "loclab/cw.hpp"
#include "loclab/error.hpp"
#include "loclab/io.hpp"
#include "loclab/lab.hpp"
#include "loclab/parallel.hpp"
#include "loclab/reduction.hpp"
#include "loclab/subspace.hpp"

namespace loclab {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* yes(bool b) { return b ? "true" : "false"; }

template <class T>
void positive(T value, const char* name) {
  if (value <= 0) throw InputError(std::string("cap ") + name + " must be positive");
}

}  // namespace

void validate_config(const RunConfig& c) {
  positive(c.caps.table_vars, "table");
  positive(c.caps.dist_bits, "dist");
  positive(c.caps.family, "family");
  positive(c.caps.max_weight, "weight");
  positive(c.caps.max_combinations, "combinations");
  positive(c.caps.search_nodes, "nodes");
  if (c.workers < 1) throw InputError("workers must be at least 1");
  if (c.format != "json" && c.format != "csv") throw InputError("format must be json or csv");
}

RunConfig load_config(const std::optional<std::string>& path) {
  RunConfig c;
  c.workers = default_workers();
  if (!path) return c;
  Json j;
  try {
    j = Json::parse(read_file(*path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what(), e.byte);
  }
  if (!j.is_object()) throw InputError("config must be a JSON object");
  // Signed reads so negative caps are reported instead of wrapping.
  auto read_positive = [](const Json& v, const std::string& key) -> std::int64_t {
    if (!v.is_number_integer()) throw InputError("config value " + key + " must be an integer");
    auto x = v.get<std::int64_t>();
    if (x <= 0) throw InputError("config value " + key + " must be positive");
    return x;
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "workers") {
        c.workers = static_cast<int>(read_positive(v, key));
      } else if (key == "format") {
        c.format = v.get<std::string>();
      } else if (key == "out") {
        c.out = v.get<std::string>();
      } else if (key == "verbosity") {
        c.verbosity = v.get<int>();
      } else if (key == "caps") {
        for (const auto& [ck, cv] : v.items()) {
          auto x = read_positive(cv, "caps." + ck);
          if (ck == "table_vars") {
            c.caps.table_vars = static_cast<int>(x);
          } else if (ck == "dist_bits") {
            c.caps.dist_bits = static_cast<int>(x);
          } else if (ck == "family") {
            c.caps.family = static_cast<std::uint64_t>(x);
          } else if (ck == "max_weight") {
            c.caps.max_weight = static_cast<int>(x);
          } else if (ck == "max_combinations") {
            c.caps.max_combinations = static_cast<std::uint64_t>(x);
          } else if (ck == "search_nodes") {
            c.caps.search_nodes = static_cast<std::uint64_t>(x);
          } else {
            throw InputError("unknown cap \"" + ck + "\" in config");
          }
        }
      } else {
        throw InputError("unknown config key \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed config: ") + e.what());
  }
  validate_config(c);
  return c;
}

namespace {

// Everything a command needs once flags are resolved. `out` takes the human
// summary; with --out - it is discarded so stdout carries only the report.
struct Context {
  RunConfig config;
  std::ostream& out;
  std::ostream& err;
  std::ostream& sink;

  Json with_config(Json report) const {
    report["config"] = Json{{"seed", config.seed}, {"caps", caps_to_json(config.caps)}};
    return report;
  }

  void emit(const std::string& command, Json report, const std::optional<std::string>& csv = std::nullopt) const {
    if (config.out.empty()) return;
    std::string text;
    if (config.format == "csv") {
      if (!csv) throw InputError("csv output is not available for " + command);
      text = *csv;
    } else {
      Json full{{"command", command}};
      const Json body = with_config(std::move(report));
      for (const auto& [k, v] : body.items()) full[k] = v;
      text = full.dump(2) + "\n";
    }
    if (config.out == "-") {
      sink << text;
      return;
    }
    std::ofstream file(config.out);
    if (!file) throw InputError("cannot write " + config.out);
    file << text;
  }
};

using Action = std::function<int(const Context&)>;

MultilinearPoly poly_arg(const std::string& expr, int n) {
  if (n < 0) throw InputError("--n must be nonnegative");
  return parse_poly(expr, n);
}

PolySystem load_system(const std::string& file, const std::vector<std::string>& exprs, std::optional<int> n) {
  std::string text = file.empty() ? "" : read_file(file);
  for (const auto& e : exprs) text += "\n" + e;
  const int vars = n ? *n : max_variable_index(text);
  if (vars < 1) throw InputError("cannot tell the number of variables; pass --n");
  return parse_system(text, vars);
}

Point support_mask(const std::vector<int>& coords, int n) {
  Point m = 0;
  for (int c : coords) {
    if (c < 1 || c > n) throw InputError("support coordinate " + std::to_string(c) + " outside 1.." + std::to_string(n));
    m |= Point{1} << (c - 1);
  }
  return m;
}

LocalSource local_of(const Source& s) {
  if (const auto* l = std::get_if<LocalSource>(&s)) return *l;
  if (const auto* b = std::get_if<NobfSource>(&s)) return nobf_as_local(*b);
  throw InputError("a local source description is required");
}

Json points_json(std::span<const Point> pts, int n) {
  Json a = Json::array();
  for (Point p : pts) a.push_back(point_to_string(p, n));
  return a;
}

Json affine_json(const AffineSubspace& s) { return source_to_json(Source{s}); }

// poly ---------------------------------------------------------------------

void add_poly(CLI::App& app, Action& action) {
  auto* poly = app.add_subcommand("poly", "polynomial arithmetic over F2");
  poly->require_subcommand(1);
  auto n = std::make_shared<int>(0);
  auto expr = std::make_shared<std::string>();
  auto common = [&](CLI::App* sub) {
    sub->add_option("--n", *n, "number of variables")->required();
    sub->add_option("--expr", *expr, "polynomial, e.g. \"1 + x1*x2\"")->required();
  };

  auto* parse = poly->add_subcommand("parse", "print the canonical form");
  common(parse);
  parse->callback([&, n, expr] {
    action = [n, expr](const Context& c) {
      auto f = poly_arg(*expr, *n);
      c.out << f.to_string() << "\n";
      c.emit("poly parse", Json{{"poly", f.to_string()}, {"degree", f.degree()}, {"monomials", f.size()}});
      return 0;
    };
  });

  auto point = std::make_shared<std::string>();
  auto* eval = poly->add_subcommand("eval", "evaluate at a point");
  common(eval);
  eval->add_option("--point", *point, "bitstring, x1 first")->required();
  eval->callback([&, n, expr, point] {
    action = [n, expr, point](const Context& c) {
      auto f = poly_arg(*expr, *n);
      const bool v = f.evaluate(parse_point(*point, *n));
      c.out << (v ? 1 : 0) << "\n";
      c.emit("poly eval", Json{{"poly", f.to_string()}, {"point", *point}, {"value", v ? 1 : 0}});
      return 0;
    };
  });

  auto* bias_cmd = poly->add_subcommand("bias", "exact bias");
  common(bias_cmd);
  bias_cmd->callback([&, n, expr] {
    action = [n, expr](const Context& c) {
      auto f = poly_arg(*expr, *n);
      auto b = bias(f, c.config.caps);
      c.out << to_string(b) << "\n";
      c.emit("poly bias", Json{{"poly", f.to_string()}, {"bias", rational_json(b)}});
      return 0;
    };
  });

  auto other = std::make_shared<std::string>();
  auto* corr = poly->add_subcommand("corr", "exact correlation of two polynomials");
  common(corr);
  corr->add_option("--with", *other, "second polynomial")->required();
  corr->callback([&, n, expr, other] {
    action = [n, expr, other](const Context& c) {
      auto f = poly_arg(*expr, *n);
      auto g = poly_arg(*other, *n);
      auto q = correlation(f, g, c.config.caps);
      c.out << to_string(q) << "\n";
      c.emit("poly corr", Json{{"f", f.to_string()}, {"g", g.to_string()}, {"correlation", rational_json(q)}});
      return 0;
    };
  });

  auto dirs = std::make_shared<std::vector<std::string>>();
  auto* derive = poly->add_subcommand("derive", "directional derivative");
  common(derive);
  derive->add_option("--dir", *dirs, "direction bitstring (repeatable)")->required();
  derive->callback([&, n, expr, dirs] {
    action = [n, expr, dirs](const Context& c) {
      auto f = poly_arg(*expr, *n);
      std::vector<Point> vs;
      for (const auto& d : *dirs) vs.push_back(parse_point(d, *n));
      auto g = directional_derivative(f, vs);
      c.out << g.to_string() << "\n";
      c.emit("poly derive", Json{{"poly", f.to_string()}, {"directions", *dirs}, {"derivative", g.to_string()}});
      return 0;
    };
  });

  auto args = std::make_shared<std::vector<std::string>>();
  auto k = std::make_shared<int>(0);
  auto* compose = poly->add_subcommand("compose", "substitute polynomials for the variables");
  common(compose);
  compose->add_option("--arg", *args, "polynomial in k variables, one per variable of f")->required();
  compose->add_option("--k", *k, "variables of the arguments")->required();
  compose->callback([&, n, expr, args, k] {
    action = [n, expr, args, k](const Context& c) {
      auto f = poly_arg(*expr, *n);
      if (static_cast<int>(args->size()) != *n) throw InputError("compose needs exactly n arguments");
      std::vector<MultilinearPoly> as;
      for (const auto& a : *args) as.push_back(poly_arg(a, *k));
      auto g = substitute(f, as, c.config.caps);
      c.out << g.to_string() << "\n";
      c.emit("poly compose", Json{{"poly", f.to_string()}, {"args", *args}, {"result", g.to_string()}});
      return 0;
    };
  });
}

// cw -----------------------------------------------------------------------

void add_cw(CLI::App& app, Action& action) {
  auto* cw = app.add_subcommand("cw", "Chevalley-Warning checks");
  cw->require_subcommand(1);
  auto file = std::make_shared<std::string>();
  auto exprs = std::make_shared<std::vector<std::string>>();
  auto n = std::make_shared<int>(0);
  auto system_opts = [&](CLI::App* sub) {
    sub->add_option("--file", *file, "system file, one polynomial per line");
    sub->add_option("--expr", *exprs, "polynomial (repeatable)");
    return sub->add_option("--n", *n, "number of variables (default: largest index used)");
  };
  auto system = [file, exprs, n](CLI::Option* n_opt) {
    std::optional<int> vars;
    if (n_opt && n_opt->count() > 0) vars = *n;
    return load_system(*file, *exprs, vars);
  };

  auto* solve = cw->add_subcommand("solve", "all common solutions and the classical count bound");
  auto* solve_n = system_opts(solve);
  solve->callback([&, system, solve_n] {
    auto* opt = solve_n;
    action = [system, opt](const Context& c) {
      auto sys = system(opt);
      auto sols = common_solutions(sys, c.config.caps);
      for (Point x : sols) c.out << point_to_string(x, sys.n_vars()) << "\n";
      c.out << "count: " << sols.size() << "\n";
      Json report{{"n", sys.n_vars()},
                  {"linear_degree", sys.linear_degree()},
                  {"nonlinear_degree", sys.nonlinear_degree()},
                  {"count", sols.size()},
                  {"solutions", points_json(sols, sys.n_vars())}};
      int code = 0;
      if (!sys.is_solution(0)) {
        c.out << "bound: not applicable (0 is not a solution)\n";
      } else {
        auto chk = cw_count_check(sys, c.config.caps);
        report["applicable"] = chk.applicable;
        if (!chk.applicable) {
          c.out << "bound: not applicable (total degree >= n)\n";
        } else {
          c.out << "bound: 2^" << chk.exponent << "\nholds: " << yes(chk.holds) << "\n";
          report["bound_exponent"] = chk.exponent;
          report["holds"] = chk.holds;
          if (!chk.holds) code = 1;
        }
      }
      std::ostringstream csv;
      csv << "solution\n";
      for (Point x : sols) csv << point_to_string(x, sys.n_vars()) << "\n";
      c.emit("cw solve", report, csv.str());
      return code;
    };
  });

  auto support = std::make_shared<std::vector<int>>();
  auto check = std::make_shared<bool>(false);
  auto* minw = cw->add_subcommand("minweight", "lowest-weight nonzero common solution");
  auto* minw_n = system_opts(minw);
  minw->add_option("--support", *support, "allowed coordinates, 1-based")->delimiter(',');
  minw->add_flag("--check", *check, "also check the low-weight bound");
  minw->callback([&, system, minw_n, support, check] {
    auto* opt = minw_n;
    action = [system, opt, support, check](const Context& c) {
      auto sys = system(opt);
      std::optional<Point> allowed;
      if (!support->empty()) allowed = support_mask(*support, sys.n_vars());
      auto r = min_weight_nontrivial_solution(sys, allowed, c.config.caps);
      Json report{{"n", sys.n_vars()}, {"status", to_string(r.status)}, {"searched_weight", r.searched_weight},
                  {"candidates", r.candidates}};
      int code = 0;
      switch (r.status) {
        case SearchStatus::Found:
          c.out << point_to_string(r.vector, sys.n_vars()) << " " << r.weight << "\n";
          report["witness"] = point_to_string(r.vector, sys.n_vars());
          report["min_weight"] = r.weight;
          break;
        case SearchStatus::None:
          c.out << "none\n";
          break;
        case SearchStatus::WeightLimit:
          c.out << "none up to weight " << r.searched_weight << " (weight cap)\n";
          code = 3;
          break;
        case SearchStatus::Truncated:
          c.out << "truncated after " << r.candidates - 1 << " candidates, none up to weight " << r.searched_weight
                << "\n";
          code = 3;
          break;
      }
      if (*check && code == 0) {
        auto low = low_weight_cw_check(sys, c.config.caps);
        c.out << "bound: " << low.bound << "\nholds: " << yes(low.holds) << "\n";
        report["bound"] = low.bound;
        report["holds"] = low.holds;
        report["technical_holds"] = low.technical_holds;
        if (!low.holds || !low.technical_holds) code = 1;
      }
      c.emit("cw minweight", report);
      return code;
    };
  });

  auto expr = std::make_shared<std::string>();
  auto r = std::make_shared<int>(0);
  auto pn = std::make_shared<int>(0);
  auto* clp = cw->add_subcommand("clprank", "rank of M[x][y] = f(x + y)");
  clp->add_option("--n", *pn, "number of variables")->required();
  clp->add_option("--expr", *expr, "polynomial")->required();
  clp->add_option("--r", *r, "degree bound (default: degree of f)");
  clp->callback([&, expr, r, pn, clp] {
    const bool r_given = clp->count("--r") > 0;
    action = [expr, r, pn, r_given](const Context& c) {
      auto f = poly_arg(*expr, *pn);
      const int rr = r_given ? *r : std::max(f.degree(), 0);
      auto res = clp_rank_check(f, rr, c.config.caps);
      c.out << "rank: " << res.rank << "\nbound: " << res.bound.str() << "\nholds: " << yes(res.holds) << "\n";
      c.emit("cw clprank", Json{{"poly", f.to_string()}, {"r", rr}, {"rank", res.rank}, {"bound", res.bound.str()},
                                {"holds", res.holds}});
      return res.holds ? 0 : 1;
    };
  });
}

// subspace -----------------------------------------------------------------

void add_subspace(CLI::App& app, Action& action) {
  auto* sub = app.add_subcommand("subspace", "d-local monochromatic subspaces");
  sub->require_subcommand(1);
  auto n = std::make_shared<int>(0);
  auto expr = std::make_shared<std::string>();
  auto d = std::make_shared<int>(1);
  auto r = std::make_shared<int>(0);

  auto* grow = sub->add_subcommand("grow", "greedy low-weight growth");
  grow->add_option("--n", *n)->required();
  grow->add_option("--expr", *expr)->required();
  grow->add_option("--d", *d, "locality")->required();
  grow->add_option("--r", *r, "degree bound (default: degree of f)");
  grow->callback([&, n, expr, d, r, grow] {
    const bool r_given = grow->count("--r") > 0;
    action = [n, expr, d, r, r_given](const Context& c) {
      auto f = poly_arg(*expr, *n);
      const int rr = r_given ? *r : std::max(f.degree(), 0);
      auto g = grow_local_subspace(f, *d, rr, c.config.caps);
      const bool mono = verify_monochromatic(f, 0, g.basis, c.config.caps);
      const bool local = verify_d_local(g.basis, *d);
      const bool indep = f2_matrix_rank(std::span<const Point>(g.basis)) == g.basis.size();
      for (Point v : g.basis) c.out << point_to_string(v, *n) << "\n";
      c.out << "dimension: " << g.dimension() << "\nconstant: " << (g.constant_value ? 1 : 0)
            << "\nmonochromatic: " << yes(mono) << "\nd-local: " << yes(local) << "\nindependent: " << yes(indep)
            << "\ntruncated: " << yes(g.truncated) << "\n";
      Json trace = Json::array();
      for (const auto& s : g.trace) {
        trace.push_back(Json{{"chosen", point_to_string(s.chosen, *n)},
                             {"weight", s.weight},
                             {"alpha", s.alpha + 1},
                             {"linear_degree", s.linear_degree},
                             {"nonlinear_degree", s.nonlinear_degree},
                             {"unique", s.unique},
                             {"saturated", s.saturated},
                             {"column_weights", s.column_weights}});
      }
      c.out << "trace: " << trace.dump() << "\n";
      c.emit("subspace grow", Json{{"poly", f.to_string()},
                                   {"d", *d},
                                   {"r", rr},
                                   {"constant_value", g.constant_value ? 1 : 0},
                                   {"basis", points_json(g.basis, *n)},
                                   {"dimension", g.dimension()},
                                   {"truncated", g.truncated},
                                   {"monochromatic", mono},
                                   {"d_local", local},
                                   {"independent", indep},
                                   {"trace", trace}});
      if (!mono || !local || !indep) return 1;
      return g.truncated ? 3 : 0;
    };
  });

  auto basis = std::make_shared<std::vector<std::string>>();
  auto shift = std::make_shared<std::string>();
  auto* verify = sub->add_subcommand("verify", "check a given subspace");
  verify->add_option("--n", *n)->required();
  verify->add_option("--expr", *expr)->required();
  verify->add_option("--d", *d)->required();
  verify->add_option("--basis", *basis, "basis bitstring (repeatable)");
  verify->add_option("--shift", *shift, "shift bitstring (default 0)");
  verify->callback([&, n, expr, d, basis, shift] {
    action = [n, expr, d, basis, shift](const Context& c) {
      auto f = poly_arg(*expr, *n);
      std::vector<Point> b;
      for (const auto& s : *basis) b.push_back(parse_point(s, *n));
      const Point sh = shift->empty() ? 0 : parse_point(*shift, *n);
      const bool mono = verify_monochromatic(f, sh, b, c.config.caps);
      const bool local = verify_d_local(b, *d);
      const bool indep = f2_matrix_rank(std::span<const Point>(b)) == b.size();
      c.out << "monochromatic: " << yes(mono) << "\nd-local: " << yes(local) << "\nindependent: " << yes(indep)
            << "\n";
      c.emit("subspace verify", Json{{"poly", f.to_string()}, {"d", *d}, {"monochromatic", mono}, {"d_local", local},
                                     {"independent", indep}, {"column_weights", column_weights(b, *n)}});
      return mono && local && indep ? 0 : 1;
    };
  });

  auto max_dim = std::make_shared<int>(4);
  auto* oracle = sub->add_subcommand("oracle", "exhaustive best dimension (n <= 8)");
  oracle->add_option("--n", *n)->required();
  oracle->add_option("--expr", *expr)->required();
  oracle->add_option("--d", *d)->required();
  oracle->add_option("--max-dim", *max_dim, "largest dimension searched");
  oracle->callback([&, n, expr, d, max_dim] {
    action = [n, expr, d, max_dim](const Context& c) {
      auto f = poly_arg(*expr, *n);
      const int best = exhaustive_best_dimension(f, *d, {*max_dim, c.config.caps.search_nodes});
      const auto g = grow_local_subspace(f, *d, std::max(f.degree(), 0), c.config.caps);
      c.out << "best: " << best << "\ngrow: " << g.dimension() << "\n";
      c.emit("subspace oracle", Json{{"poly", f.to_string()}, {"d", *d}, {"max_dim", *max_dim}, {"best", best},
                                     {"grow", g.dimension()}});
      return 0;
    };
  });
}

// reduce -------------------------------------------------------------------

void add_reduce(CLI::App& app, Action& action) {
  auto* red = app.add_subcommand("reduce", "local source to NOBF mixtures");
  red->require_subcommand(1);
  auto source = std::make_shared<std::string>();
  auto t = std::make_shared<int>(1);
  auto truncate = std::make_shared<bool>(false);

  auto components_text = [](const Context& c, const std::vector<WeightedNobf>& comps) {
    for (const auto& w : comps) c.out << to_string(w.weight) << " k=" << w.source.k() << " " << w.path << "\n";
  };
  auto components_json = [](const std::vector<WeightedNobf>& comps) {
    Json a = Json::array();
    for (const auto& w : comps) a.push_back(weighted_to_json(w));
    return a;
  };
  auto guarantee_json = [](const DebiasGuarantee& g) {
    return Json{{"mu", to_string(g.mu)}, {"k_prime", to_string(g.k_prime)}, {"epsilon_approx", g.epsilon}};
  };

  auto* to_nobf = red->add_subcommand("to-nobf", "fixing tree, then debiasing");
  to_nobf->add_option("--source", *source, "source JSON")->required();
  to_nobf->add_option("--t", *t, "target number of good bits")->required();
  to_nobf->add_flag("--truncate", *truncate, "drop components below k' good bits");
  to_nobf->callback([=, &action] {
    action = [=](const Context& c) {
      auto s = local_of(parse_source(read_file(*source)));
      auto res = local_to_nobf(s, *t, LocalToNobfOptions{*truncate}, c.config.caps);
      components_text(c, res.components);
      c.out << "components: " << res.components.size() << "\nmu: " << to_string(res.guarantee.mu)
            << "\nepsilon: " << res.guarantee.epsilon << "\n";
      Json report{{"target", *t},
                  {"truncate", *truncate},
                  {"guarantee", guarantee_json(res.guarantee)},
                  {"dropped_weight", to_string(res.dropped_weight)},
                  {"components", components_json(res.components)},
                  {"tree", fixing_tree_to_json(res.tree)}};
      c.emit("reduce to-nobf", report);
      return 0;
    };
  });

  auto* debias = red->add_subcommand("debias", "split a biased NOBF source into unbiased ones");
  debias->add_option("--source", *source, "NOBF source JSON")->required();
  debias->callback([=, &action] {
    action = [=](const Context& c) {
      auto parsed = parse_source(read_file(*source));
      const auto* nobf = std::get_if<NobfSource>(&parsed);
      if (!nobf) throw InputError("debias needs a NOBF source description");
      auto res = debias_nobf(*nobf, c.config.caps);
      components_text(c, res.components);
      c.out << "mu: " << to_string(res.guarantee.mu) << "\nepsilon: " << res.guarantee.epsilon << "\n";
      c.emit("reduce debias", Json{{"guarantee", guarantee_json(res.guarantee)},
                                   {"components", components_json(res.components)}});
      return 0;
    };
  });

  auto* verify = red->add_subcommand("verify", "exact distance of the decomposition from the source");
  verify->add_option("--source", *source, "source JSON")->required();
  verify->add_option("--t", *t, "target number of good bits")->required();
  verify->add_flag("--truncate", *truncate, "drop components below k' good bits");
  verify->callback([=, &action] {
    action = [=](const Context& c) {
      auto s = local_of(parse_source(read_file(*source)));
      auto res = local_to_nobf(s, *t, LocalToNobfOptions{*truncate}, c.config.caps);
      auto dist = verify_decomposition(s, to_combination(res.components), c.config.caps);
      const bool holds = *truncate ? leq_pow2_neg(dist, res.guarantee.k_prime) : dist == 0;
      c.out << "distance: " << to_string(dist) << "\nepsilon: " << (*truncate ? res.guarantee.epsilon : 0.0)
            << "\nholds: " << yes(holds) << "\n";
      c.emit("reduce verify", Json{{"target", *t},
                                   {"truncate", *truncate},
                                   {"distance", rational_json(dist)},
                                   {"guarantee", guarantee_json(res.guarantee)},
                                   {"holds", holds}});
      return holds ? 0 : 1;
    };
  });
}

// lab ----------------------------------------------------------------------

void add_lab(CLI::App& app, Action& action) {
  auto* lab = app.add_subcommand("lab", "desk-scale experiments");
  lab->require_subcommand(1);
  auto spec = std::make_shared<FamilySpec>();
  auto fam_r = std::make_shared<int>(0);
  auto expr = std::make_shared<std::string>();
  auto family_opts = [&](CLI::App* sub) {
    sub->add_option("--n", spec->n)->required();
    sub->add_option("--k", spec->k, "good bits")->required();
    sub->add_option("--d", spec->d, "locality")->required();
  };

  auto* census = lab->add_subcommand("census", "max bias of f over a NOBF family");
  family_opts(census);
  census->add_option("--family-r", *fam_r, "restrict bad functions to degree <= r");
  census->add_option("--expr", *expr)->required();
  census->callback([&, spec, fam_r, expr, census] {
    FamilySpec s = *spec;
    if (census->count("--family-r") > 0) s.r = *fam_r;
    action = [s, expr](const Context& c) {
      auto f = poly_arg(*expr, s.n);
      auto res = extractor_census(f, s, c.config.workers, c.config.caps);
      c.out << "max_bias: " << to_string(res.max_bias) << "\nworst_index: " << res.worst_index
            << "\nsources: " << res.sources << "\n";
      c.emit("lab census", Json{{"poly", f.to_string()}, {"n", s.n}, {"k", s.k}, {"d", s.d},
                                {"max_bias", rational_json(res.max_bias)}, {"worst_index", res.worst_index},
                                {"worst", nobf_to_json(res.worst)}, {"sources", res.sources}});
      return 0;
    };
  });

  auto r = std::make_shared<int>(2);
  auto trials = std::make_shared<std::uint64_t>(100);
  auto eps = std::make_shared<std::string>("1/4");
  auto exhaustive = std::make_shared<bool>(false);
  auto* search = lab->add_subcommand("search", "random low-degree extractor search");
  family_opts(search);
  search->add_option("--r", *r, "degree of the random polynomials");
  search->add_option("--trials", *trials);
  search->add_option("--eps", *eps, "target error as num/den; success is max bias <= 2 eps");
  search->add_flag("--exhaustive", *exhaustive, "every polynomial of degree <= r instead of random ones");
  search->callback([&, spec, r, trials, eps, exhaustive] {
    FamilySpec s = *spec;
    action = [s, r, trials, eps, exhaustive](const Context& c) {
      const Rational e = parse_rational(*eps);
      auto res = *exhaustive ? extractor_search_exhaustive(s, *r, e, c.config.workers, c.config.caps)
                             : extractor_search(s, *r, *trials, c.config.seed, e, c.config.workers, c.config.caps);
      c.out << "best_bias: " << to_string(res.best_bias) << "\nbest_poly: " << res.best.to_string()
            << "\nsuccess_fraction: " << to_string(res.success_fraction()) << "\n";
      Json per = Json::array();
      for (const auto& b : res.max_biases) per.push_back(to_string(b));
      std::ostringstream csv;
      csv << "trial,max_bias,max_bias_approx\n";
      for (std::size_t i = 0; i < res.max_biases.size(); ++i) {
        csv << i << "," << to_string(res.max_biases[i]) << "," << to_double(res.max_biases[i]) << "\n";
      }
      c.emit("lab search",
             Json{{"n", s.n}, {"k", s.k}, {"d", s.d}, {"r", *r}, {"eps", to_string(e)}, {"trials", res.trials},
                  {"exhaustive", *exhaustive}, {"best_bias", rational_json(res.best_bias)},
                  {"best_poly", res.best.to_string()}, {"best_trial", res.best_trial},
                  {"success_fraction", rational_json(res.success_fraction())}, {"max_biases", per}},
             csv.str());
      return 0;
    };
  });

  auto* disperse = lab->add_subcommand("disperse", "hitting-degree disperser census");
  family_opts(disperse);
  disperse->add_option("--r", *r, "degree bound of the generating functions")->required();
  disperse->add_option("--expr", *expr)->required();
  disperse->callback([&, spec, r, expr] {
    FamilySpec s = *spec;
    s.r = *r;
    action = [s, expr](const Context& c) {
      auto f = poly_arg(*expr, s.n);
      auto res = disperser_census_via_hitting(f, s, c.config.caps);
      c.out << "all_hit: " << yes(res.all_hit) << "\ntuples: " << res.tuples << "\n";
      Json report{{"poly", f.to_string()}, {"n", s.n}, {"k", s.k}, {"d", s.d}, {"r", *s.r},
                  {"all_hit", res.all_hit}, {"tuples", res.tuples}};
      if (!res.all_hit) {
        Json tuple = Json::array();
        for (const auto& a : res.failing_tuple) tuple.push_back(a.to_string());
        c.out << "failing_index: " << *res.failing_index << "\n";
        report["failing_index"] = *res.failing_index;
        report["failing_tuple"] = tuple;
      }
      c.emit("lab disperse", report);
      return res.all_hit ? 0 : 1;
    };
  });

  auto sn = std::make_shared<int>(0);
  auto against = std::make_shared<std::string>();
  auto majority = std::make_shared<bool>(false);
  auto* survey = lab->add_subcommand("survey", "bias or correlation of random polynomials");
  survey->add_option("--n", *sn)->required();
  survey->add_option("--r", *r, "degree")->required();
  survey->add_option("--trials", *trials);
  survey->add_option("--against", *against, "fixed polynomial g for a correlation survey");
  survey->add_flag("--majority", *majority, "correlate against majority on n bits");
  survey->callback([&, sn, r, trials, against, majority] {
    action = [sn, r, trials, against, majority](const Context& c) {
      SurveyReport rep;
      if (*majority || !against->empty()) {
        const TruthTable g = *majority ? majority_table(*sn) : truth_table(poly_arg(*against, *sn), c.config.caps);
        rep = correlation_survey(g, *r, *trials, c.config.seed, c.config.workers, c.config.caps);
      } else {
        rep = random_bias_survey(*sn, *r, *trials, c.config.seed, c.config.workers, c.config.caps);
      }
      for (const auto& q : rep.quantiles) c.out << "p" << q.p << ": " << to_string(q.value) << "\n";
      c.emit("lab survey", survey_to_json(rep), survey_to_csv(rep));
      return 0;
    };
  });

  auto m = std::make_shared<int>(0);
  auto center = std::make_shared<std::string>();
  auto radius = std::make_shared<std::size_t>(0);
  auto* rm = lab->add_subcommand("rm", "Reed-Muller code parameters");
  rm->add_option("--m", *m)->required();
  rm->add_option("--r", *r)->required();
  rm->add_option("--center", *center, "received word as a bitstring of length 2^m");
  rm->add_option("--radius", *radius);
  rm->callback([&, m, r, center, radius] {
    action = [m, r, center, radius](const Context& c) {
      auto code = rm_code(*m, *r, c.config.caps);
      const auto dist = rm_min_distance(code);
      const std::size_t expected = *r >= *m ? 1 : std::size_t{1} << (*m - *r);
      c.out << "size: " << code.codewords.size() << "\nblock_length: " << code.block_length()
            << "\nmin_distance: " << dist << "\n";
      Json report{{"m", *m}, {"r", *r}, {"size", code.codewords.size()}, {"block_length", code.block_length()},
                  {"min_distance", dist}, {"expected_distance", expected}};
      if (!center->empty()) {
        if (center->size() != code.block_length()) throw InputError("center length must be 2^m");
        BitVector word(code.block_length());
        for (std::size_t i = 0; i < center->size(); ++i) {
          if ((*center)[i] != '0' && (*center)[i] != '1') throw InputError("center must be a bitstring");
          word.set(i, (*center)[i] == '1');
        }
        auto count = rm_list_size(code, word, *radius);
        c.out << "list_size: " << count << "\n";
        report["radius"] = *radius;
        report["list_size"] = count;
      }
      c.emit("lab rm", report);
      return dist == expected ? 0 : 1;
    };
  });
}

// barrier ------------------------------------------------------------------

void add_barrier(CLI::App& app, Action& action) {
  auto* bar = app.add_subcommand("barrier", "clique-source barrier");
  bar->require_subcommand(1);
  auto k = std::make_shared<int>(3);

  auto* sidon = bar->add_subcommand("sidon", "Sidon check of the clique set");
  sidon->add_option("--k", *k)->required();
  sidon->callback([&, k] {
    action = [k](const Context& c) {
      auto q = clique_set(*k);
      auto res = sidon_check(q.points);
      c.out << "sidon: " << yes(res.is_sidon) << "\n";
      Json report{{"k", *k}, {"points", q.points.size()}, {"sidon", res.is_sidon},
                  {"max_ordered_representations", res.max_ordered}};
      if (res.violating) {
        c.out << "violating: " << point_to_string(*res.violating, q.n) << "\n";
        report["violating"] = point_to_string(*res.violating, q.n);
      }
      c.emit("barrier sidon", report);
      return res.is_sidon ? 0 : 1;
    };
  });

  auto t = std::make_shared<int>(4);
  auto trials = std::make_shared<std::uint64_t>(1000);
  auto exhaustive = std::make_shared<bool>(false);
  auto affine = std::make_shared<bool>(false);
  auto* evade = bar->add_subcommand("evade", "clique fraction inside random subspaces");
  evade->add_option("--k", *k)->required();
  evade->add_option("--t", *t, "subspace dimension")->required();
  evade->add_option("--trials", *trials);
  evade->add_flag("--exhaustive", *exhaustive, "every subspace instead of random ones");
  evade->add_flag("--affine", *affine, "affine subspaces (random shift or every coset)");
  evade->callback([&, k, t, trials, exhaustive, affine] {
    action = [k, t, trials, exhaustive, affine](const Context& c) {
      auto res = evasiveness_scan(*k, *t, {*exhaustive, *trials, c.config.seed, *affine}, c.config.caps);
      const bool ok = res.holds && res.all_sidon && res.pair_bound_holds;
      c.out << "max_fraction: " << to_string(res.max_fraction) << "\nholds: " << yes(res.holds)
            << "\nsidon: " << yes(res.all_sidon) << "\npair_bound: " << yes(res.pair_bound_holds)
            << "\nscanned: " << res.scanned << "\n";
      c.emit("barrier evade", Json{{"k", *k}, {"t", *t}, {"exhaustive", *exhaustive}, {"affine", *affine},
                                   {"scanned", res.scanned}, {"max_fraction", rational_json(res.max_fraction)},
                                   {"bound_exponent", "-(t-3)/2"}, {"holds", res.holds}, {"sidon", res.all_sidon},
                                   {"pair_bound", res.pair_bound_holds}, {"worst", affine_json(res.worst)}});
      return ok ? 0 : 1;
    };
  });

  auto file = std::make_shared<std::string>();
  auto random = std::make_shared<int>(0);
  auto dim = std::make_shared<int>(0);
  auto* mix = bar->add_subcommand("mixture", "distance lower bound against affine mixtures");
  mix->add_option("--k", *k)->required();
  mix->add_option("--components", *file, "JSON {components: [affine...], weights: [\"num/den\"...]}");
  mix->add_option("--random", *random, "number of random components of dimension --dim");
  mix->add_option("--dim", *dim);
  mix->callback([&, k, file, random, dim] {
    action = [k, file, random, dim](const Context& c) {
      std::vector<AffineSubspace> comps;
      std::vector<Rational> weights;
      if (!file->empty()) {
        Json j;
        try {
          j = Json::parse(read_file(*file));
          for (const auto& s : j.at("components")) {
            auto src = source_from_json(s);
            const auto* a = std::get_if<AffineSubspace>(&src);
            if (!a) throw InputError("mixture components must be affine");
            comps.push_back(*a);
          }
          if (j.contains("weights")) {
            for (const auto& w : j.at("weights")) weights.push_back(parse_rational(w.get<std::string>()));
          }
        } catch (const nlohmann::json::exception& e) {
          throw InputError(std::string("malformed components file: ") + e.what());
        }
      } else {
        if (*random < 1) throw InputError("give --components or --random");
        std::mt19937_64 rng(c.config.seed);
        const int n = clique_length(*k);
        for (int i = 0; i < *random; ++i) {
          comps.push_back(AffineSubspace{n, rng() & low_mask(n), random_full_rank_basis(rng, n, *dim)});
          weights.emplace_back(1, *random);
        }
      }
      auto res = affine_mixture_distance_bound(*k, comps, weights, c.config.caps);
      c.out << "bound: " << to_string(res.bound) << "\n";
      Json report{{"k", *k}, {"components", comps.size()}, {"bound", rational_json(res.bound)}};
      Json fr = Json::array();
      for (const auto& f : res.fractions) fr.push_back(to_string(f));
      report["fractions"] = fr;
      bool ok = true;
      if (res.exact_distance) {
        ok = res.bound <= *res.exact_distance;
        c.out << "distance: " << to_string(*res.exact_distance) << "\nholds: " << yes(ok) << "\n";
        report["distance"] = rational_json(*res.exact_distance);
        report["holds"] = ok;
      }
      c.emit("barrier mixture", report);
      return ok ? 0 : 1;
    };
  });
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact experiments on local sources, low-degree polynomials and NOBF reductions", "loclab"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  int cap_table = 0;
  int cap_dist = 0;
  std::int64_t cap_family = 0;
  int cap_weight = 0;
  std::int64_t cap_combinations = 0;
  std::int64_t cap_nodes = 0;
  int workers = 0;
  std::string out_path;
  std::string format;
  int verbosity = 0;
  auto* o_config = app.add_option("--config", config_path, "JSON config file; flags override it");
  auto* o_seed = app.add_option("--seed", seed, "seed for every random choice");
  auto* o_table = app.add_option("--cap-table", cap_table, "largest truth table, in variables");
  auto* o_dist = app.add_option("--cap-dist", cap_dist, "largest exact distribution, in seed bits");
  auto* o_family = app.add_option("--cap-family", cap_family, "largest enumerated family");
  auto* o_weight = app.add_option("--cap-weight", cap_weight, "largest weight in solution search");
  auto* o_comb = app.add_option("--cap-combinations", cap_combinations, "candidates in solution search");
  auto* o_nodes = app.add_option("--cap-nodes", cap_nodes, "nodes in exhaustive searches");
  auto* o_workers = app.add_option("--workers", workers, "worker threads");
  auto* o_out = app.add_option("--out", out_path, "report file, - for stdout");
  auto* o_format = app.add_option("--format", format, "report format: json or csv");
  auto* o_verbose = app.add_option("--verbosity", verbosity);

  Action action;
  add_poly(app, action);
  add_cw(app, action);
  add_subspace(app, action);
  add_reduce(app, action);
  add_lab(app, action);
  add_barrier(app, action);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig config = load_config(o_config->count() ? std::optional<std::string>(config_path) : std::nullopt);
    if (o_seed->count()) config.seed = seed;
    if (o_table->count()) config.caps.table_vars = cap_table;
    if (o_dist->count()) config.caps.dist_bits = cap_dist;
    if (o_family->count()) {
      positive(cap_family, "family");
      config.caps.family = static_cast<std::uint64_t>(cap_family);
    }
    if (o_weight->count()) config.caps.max_weight = cap_weight;
    if (o_comb->count()) {
      positive(cap_combinations, "combinations");
      config.caps.max_combinations = static_cast<std::uint64_t>(cap_combinations);
    }
    if (o_nodes->count()) {
      positive(cap_nodes, "nodes");
      config.caps.search_nodes = static_cast<std::uint64_t>(cap_nodes);
    }
    if (o_workers->count()) config.workers = workers;
    if (o_out->count()) config.out = out_path;
    if (o_format->count()) config.format = format;
    if (o_verbose->count()) config.verbosity = verbosity;
    validate_config(config);
    std::ostringstream discard;
    Context ctx{config, config.out == "-" ? static_cast<std::ostream&>(discard) : out, err, out};
    if (!action) throw InputError("no command given");
    return action(ctx);
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    err << "internal check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace loclab
