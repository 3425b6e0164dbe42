#include "klsat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "klsat/config.hpp"
#include "klsat/experiments.hpp"
#include "klsat/glp.hpp"
#include "klsat/instance.hpp"
#include "klsat/local.hpp"
#include "klsat/matching.hpp"
#include "klsat/pool.hpp"
#include "klsat/text.hpp"

namespace klsat {

namespace {

// Every option is collected as a raw string and overlaid onto the config
// under its key; typed validation happens in one place, the Config
// getters. Precedence: config file first, then explicit flags.
class FlagTable {
 public:
  void add(CLI::App* sub, const char* flag, const char* key,
           const char* desc) {
    auto slot = std::make_shared<std::string>();
    CLI::Option* opt = sub->add_option(flag, *slot, desc);
    options_.push_back({opt, slot, key});
  }

  void add_switch(CLI::App* sub, const char* flag, const char* key,
                  const char* desc) {
    CLI::Option* opt = sub->add_flag(std::string(flag));
    opt->description(desc);
    switches_.push_back({opt, nullptr, key});
  }

  void overlay(Config& cfg) const {
    for (const auto& e : options_)
      if (e.opt->count() > 0) cfg.set(e.key, *e.slot);
    for (const auto& e : switches_)
      if (e.opt->count() > 0) cfg.set(e.key, "true");
  }

 private:
  struct Entry {
    CLI::Option* opt;
    std::shared_ptr<std::string> slot;
    const char* key;
  };
  std::vector<Entry> options_, switches_;
};

std::uint64_t base_seed_of(const Config& cfg) {
  return cfg.get_u64("base_seed", cfg.get_u64("seed", 0));
}

// Writes metadata plus body to --out when given, otherwise to stdout.
void emit(const Config& cfg, const std::string& body, std::ostream& out) {
  std::string full = cfg.metadata_block() + body;
  if (cfg.has("out"))
    text::write_file(cfg.get_string("out"), full);
  else
    out << full;
}

// Result-style commands always print `line` to stdout; --out additionally
// records it with the metadata block.
void emit_line(const Config& cfg, const std::string& line,
               std::ostream& out) {
  out << line << '\n';
  if (cfg.has("out"))
    text::write_file(cfg.get_string("out"), cfg.metadata_block() + line + "\n");
}

std::string bool_word(bool v) { return v ? "true" : "false"; }

std::string svg_line_chart(const std::vector<double>& xs,
                           const std::vector<double>& ys,
                           const std::string& x_label,
                           const std::string& y_label) {
  const double width = 640, height = 400;
  const double ml = 70, mr = 20, mt = 20, mb = 50;
  double x_lo = xs[0], x_hi = xs[0], y_lo = ys[0], y_hi = ys[0];
  for (double v : xs) {
    x_lo = std::min(x_lo, v);
    x_hi = std::max(x_hi, v);
  }
  for (double v : ys) {
    y_lo = std::min(y_lo, v);
    y_hi = std::max(y_hi, v);
  }
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) y_hi = y_lo + 1;
  auto px = [&](double x) {
    return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr);
  };
  auto py = [&](double y) {
    return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb);
  };
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
       "height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  auto num = [](double v) { return text::fmt_double(v); };
  s += "<line x1=\"" + num(ml) + "\" y1=\"" + num(height - mb) + "\" x2=\"" +
       num(width - mr) + "\" y2=\"" + num(height - mb) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) +
       "\" y2=\"" + num(height - mb) + "\" stroke=\"black\"/>\n";
  s += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" "
       "points=\"";
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += num(px(xs[i])) + ',' + num(py(ys[i]));
  }
  s += "\"/>\n";
  for (size_t i = 0; i < xs.size(); ++i) {
    s += "<circle cx=\"" + num(px(xs[i])) + "\" cy=\"" + num(py(ys[i])) +
         "\" r=\"3\" fill=\"#1f6fb2\"/>\n";
  }
  s += "<text x=\"" + num(ml) + "\" y=\"" + num(height - mb + 18) +
       "\" font-size=\"12\" text-anchor=\"middle\">" + num(x_lo) +
       "</text>\n";
  s += "<text x=\"" + num(width - mr) + "\" y=\"" + num(height - mb + 18) +
       "\" font-size=\"12\" text-anchor=\"middle\">" + num(x_hi) +
       "</text>\n";
  s += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(height - mb) +
       "\" font-size=\"12\" text-anchor=\"end\">" + num(y_lo) + "</text>\n";
  s += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(mt + 6) +
       "\" font-size=\"12\" text-anchor=\"end\">" + num(y_hi) + "</text>\n";
  s += "<text x=\"" + num((ml + width - mr) / 2) + "\" y=\"" +
       num(height - 12) + "\" font-size=\"13\" text-anchor=\"middle\">" +
       x_label + "</text>\n";
  s += "<text x=\"16\" y=\"" + num((mt + height - mb) / 2) +
       "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       num((mt + height - mb) / 2) + ")\">" + y_label + "</text>\n";
  s += "</svg>\n";
  return s;
}

// ---- subcommand handlers ----

// With --pool the output is an instance; without it, a weighted graph.
int cmd_gen(const Config& cfg, std::ostream& out, std::ostream&) {
  cfg.require({"n", "c"});
  if (cfg.has("pool")) {
    Pool pool = load_pool(cfg.get_string("pool"));
    Instance inst = generate_instance(
        pool, static_cast<int>(cfg.get_int("n")), cfg.get_double("c"),
        cfg.get_u64("seed", 0), cfg.get_bool("replacement", false));
    emit(cfg, instance_to_string(inst), out);
    return 0;
  }
  WeightDistSpec wd = cfg.has("wdist")
                          ? WeightDistSpec::parse(cfg.get_string("wdist"))
                          : WeightDistSpec::constant(1.0);
  WeightedGraph g = gen_graph(static_cast<int>(cfg.get_int("n")),
                              cfg.get_double("c"), wd, cfg.get_u64("seed", 0));
  emit(cfg, graph_to_string(g), out);
  return 0;
}

int cmd_solve(const Config& cfg, std::ostream& out, std::ostream& err) {
  cfg.require({"pool"});
  Pool pool = load_pool(cfg.get_string("pool"));
  Instance inst;
  if (cfg.has("instance")) {
    inst = load_instance(cfg.get_string("instance"), pool);
  } else {
    cfg.require({"n", "c"});
    inst = generate_instance(
        pool, static_cast<int>(cfg.get_int("n")), cfg.get_double("c"),
        cfg.get_u64("seed", 0), cfg.get_bool("replacement", false));
  }
  GlpResult res = solve_glp(inst);
  if (res.solution.status != SolveStatus::optimal) {
    err << "solve: "
        << (res.solution.status == SolveStatus::infeasible_input
                ? "instance is infeasible"
                : "numerical failure")
        << '\n';
    return 2;
  }
  emit(cfg, solution_to_string(res.solution), out);
  return 0;
}

int cmd_check_pool(const Config& cfg, std::ostream& out, std::ostream& err) {
  cfg.require({"pool"});
  Pool pool = load_pool(cfg.get_string("pool"));
  int l = static_cast<int>(cfg.get_int("l", 2));
  double nu = cfg.get_double("nu", 0.25);
  ConditionAResult a = check_condition_a(pool);
  ConditionBResult b = check_condition_b(pool, l, nu);
  std::string line = "condition_a=" + bool_word(a.holds) + " condition_b(l=" +
                     std::to_string(l) + ",nu=" + text::fmt_double(nu) +
                     ")=" + bool_word(b.holds) +
                     " b_psi=" + text::fmt_double(b_psi(pool));
  emit_line(cfg, line, out);
  if (!a.holds && a.witness)
    err << "single-coordinate completability fails at template "
        << a.witness->template_index << ", coordinate "
        << a.witness->coordinate << ", value "
        << text::fmt_double(a.witness->value) << '\n';
  if (!b.holds && b.failing_cube) {
    err << "cube violation fails at cube (";
    for (size_t i = 0; i < b.failing_cube->size(); ++i) {
      if (i) err << ',';
      err << (*b.failing_cube)[i];
    }
    err << ")\n";
  }
  return 0;
}

int cmd_scan(const Config& cfg, std::ostream& out, std::ostream&) {
  cfg.require({"pool", "c_grid", "n", "seeds"});
  Pool pool = load_pool(cfg.get_string("pool"));
  std::vector<ScanRecord> recs = scan_f(
      pool, cfg.get_double_list("c_grid"), static_cast<int>(cfg.get_int("n")),
      static_cast<int>(cfg.get_int("seeds")), base_seed_of(cfg),
      static_cast<int>(cfg.get_int("workers", 1)));
  std::string csv = "c,n,seeds,mean_scaled,std_scaled,mean_runtime_s\n";
  for (const ScanRecord& r : recs) {
    csv += text::fmt_double(r.c) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.seeds) + ',' + text::fmt_double(r.mean_scaled) +
           ',' + text::fmt_double(r.std_scaled) + ',' +
           text::fmt_double(r.mean_runtime) + '\n';
  }
  emit(cfg, csv, out);
  if (cfg.has("svg")) {
    std::vector<double> xs, ys;
    for (const ScanRecord& r : recs) {
      xs.push_back(r.c);
      ys.push_back(r.mean_scaled);
    }
    text::write_file(cfg.get_string("svg"),
                     svg_line_chart(xs, ys, "c", "mean scaled optimum"));
  }
  return 0;
}

int cmd_threshold(const Config& cfg, std::ostream& out, std::ostream&) {
  cfg.require({"pool", "n", "seeds", "eps_feas", "c_max", "tol"});
  Pool pool = load_pool(cfg.get_string("pool"));
  ThresholdEstimate est = estimate_threshold(
      pool, static_cast<int>(cfg.get_int("n")),
      static_cast<int>(cfg.get_int("seeds")), cfg.get_double("eps_feas"),
      cfg.get_double("c_max"), cfg.get_double("tol"), base_seed_of(cfg));
  std::string line =
      "c_lo=" + text::fmt_double(est.c_lo) +
      " c_hi=" + text::fmt_double(est.c_hi) +
      " eps_feas=" + text::fmt_double(est.eps_feas) +
      " n=" + std::to_string(est.n) + " seeds=" + std::to_string(est.seeds) +
      " never_exceeded=" + bool_word(est.never_exceeded);
  emit_line(cfg, line, out);
  return 0;
}

int cmd_concentrate(const Config& cfg, std::ostream& out, std::ostream&) {
  cfg.require({"pool", "c", "n_list", "seeds"});
  Pool pool = load_pool(cfg.get_string("pool"));
  std::vector<ConcentrationRecord> recs = concentration_report(
      pool, cfg.get_double("c"), cfg.get_int_list("n_list"),
      static_cast<int>(cfg.get_int("seeds")), base_seed_of(cfg));
  std::string csv = "n,seeds,mean_scaled,std_scaled\n";
  for (const ConcentrationRecord& r : recs) {
    csv += std::to_string(r.n) + ',' + std::to_string(r.seeds) + ',' +
           text::fmt_double(r.mean_scaled) + ',' +
           text::fmt_double(r.std_scaled) + '\n';
  }
  emit(cfg, csv, out);
  return 0;
}

int cmd_couple(const Config& cfg, std::ostream& out, std::ostream&) {
  cfg.require({"pool", "n", "c1", "c2", "seeds"});
  Pool pool = load_pool(cfg.get_string("pool"));
  std::vector<CouplingResult> recs = coupling_monotone_test(
      pool, static_cast<int>(cfg.get_int("n")), cfg.get_double("c1"),
      cfg.get_double("c2"), static_cast<int>(cfg.get_int("seeds")),
      base_seed_of(cfg));
  std::string csv = "seed,opt1,opt2,pass\n";
  for (const CouplingResult& r : recs) {
    csv += std::to_string(r.seed) + ',' + text::fmt_double(r.opt1) + ',' +
           text::fmt_double(r.opt2) + ',' + (r.pass ? "1" : "0") + '\n';
  }
  emit(cfg, csv, out);
  return 0;
}

int cmd_tree_stats(const Config& cfg, std::ostream& out, std::ostream&) {
  cfg.require({"pool", "n", "c", "d", "samples"});
  Pool pool = load_pool(cfg.get_string("pool"));
  TreeStats ts = tree_stats(pool, static_cast<int>(cfg.get_int("n")),
                            cfg.get_double("c"),
                            static_cast<int>(cfg.get_int("d")),
                            static_cast<int>(cfg.get_int("samples")),
                            base_seed_of(cfg));
  std::string line =
      "tv_degree=" + text::fmt_double(ts.tv_degree) +
      " tree_fraction=" + text::fmt_double(ts.tree_fraction) +
      " gw_tree_fraction=" + text::fmt_double(ts.gw_tree_fraction) +
      " mean_ball_constraints=" + text::fmt_double(ts.mean_ball_constraints) +
      " gw_mean_constraints=" + text::fmt_double(ts.gw_mean_constraints);
  emit_line(cfg, line, out);
  return 0;
}

WeightedGraph graph_for(const Config& cfg) {
  if (cfg.has("graph")) return load_graph(cfg.get_string("graph"));
  cfg.require({"n", "c"});
  WeightDistSpec wd = cfg.has("wdist")
                          ? WeightDistSpec::parse(cfg.get_string("wdist"))
                          : WeightDistSpec::constant(1.0);
  return gen_graph(static_cast<int>(cfg.get_int("n")), cfg.get_double("c"),
                   wd, cfg.get_u64("seed", 0));
}

int cmd_matching(const Config& cfg, std::ostream& out, std::ostream& err) {
  cfg.require({"mode"});
  std::string mode = cfg.get_string("mode");
  WeightedGraph g = graph_for(cfg);
  int b = static_cast<int>(cfg.get_int("b", 1));
  if (mode == "primal") {
    Lpm0Primal relax = lpm0_primal(g, b);
    if (relax.status != SolveStatus::optimal) {
      err << "matching: relaxation solve failed\n";
      return 2;
    }
    out << "value=" << text::fmt_double(relax.value) << '\n';
    if (cfg.has("out")) {
      std::string body = "value=" + text::fmt_double17(relax.value) + "\n";
      for (size_t e = 0; e < relax.x.size(); ++e)
        body += "x " + std::to_string(e) + ' ' +
                text::fmt_double17(relax.x[e]) + '\n';
      text::write_file(cfg.get_string("out"), cfg.metadata_block() + body);
    }
    return 0;
  }
  if (mode == "dual") {
    Lpm0Dual dual = lpm0_dual(g, b);
    if (dual.status != SolveStatus::optimal) {
      err << "matching: dual solve failed\n";
      return 2;
    }
    out << "value=" << text::fmt_double(dual.value) << '\n';
    if (cfg.has("out")) {
      std::string body = "value=" + text::fmt_double17(dual.value) + "\n";
      for (size_t i = 0; i < dual.y.size(); ++i)
        body += "y " + std::to_string(i) + ' ' + text::fmt_double17(dual.y[i]) +
                '\n';
      for (size_t e = 0; e < dual.psi.size(); ++e)
        body += "psi " + std::to_string(e) + ' ' +
                text::fmt_double17(dual.psi[e]) + '\n';
      text::write_file(cfg.get_string("out"), cfg.metadata_block() + body);
    }
    return 0;
  }
  if (mode == "certify") {
    cfg.require({"d"});
    MatchingCertificate cert =
        certify_bmatching(g, b, static_cast<int>(cfg.get_int("d")));
    std::string line = "lpm0=" + text::fmt_double(cert.lpm0) +
                       " d=" + std::to_string(cert.d) +
                       " m_d=" + std::to_string(cert.m_d) +
                       " w_max=" + text::fmt_double(cert.w_max) +
                       " lower=" + text::fmt_double(cert.lower) +
                       " upper=" + text::fmt_double(cert.upper);
    emit_line(cfg, line, out);
    return 0;
  }
  if (mode == "ks") {
    KarpSipserResult ks = karp_sipser(g);
    std::string line =
        "marked=" + std::to_string(ks.marked_edges.size()) +
        " residual_nodes=" + std::to_string(ks.residual.n) +
        " residual_edges=" + std::to_string(ks.residual.m()) +
        " exact_total=" +
        (ks.exact_total ? std::to_string(*ks.exact_total)
                        : std::string("none"));
    emit_line(cfg, line, out);
    return 0;
  }
  throw std::invalid_argument(
      "matching: mode must be primal, dual, certify or ks");
}

int cmd_ks_curve(const Config& cfg, std::ostream& out, std::ostream&) {
  cfg.require({"c_grid", "n", "seeds"});
  std::vector<MatchingLimitRecord> recs = matching_limit_report(
      cfg.get_double_list("c_grid"), static_cast<int>(cfg.get_int("n")),
      static_cast<int>(cfg.get_int("seeds")),
      static_cast<int>(cfg.get_int("b", 1)), base_seed_of(cfg));
  std::string csv = "c,n,lpm0_frac,ks_lower_frac,ks_printed,ks_degnorm\n";
  for (const MatchingLimitRecord& r : recs) {
    csv += text::fmt_double(r.c) + ',' + std::to_string(r.n) + ',' +
           text::fmt_double(r.lpm0_frac) + ',' +
           text::fmt_double(r.ks_lower_frac) + ',' +
           text::fmt_double(r.ks_printed) + ',' +
           text::fmt_double(r.ks_degnorm) + '\n';
  }
  emit(cfg, csv, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"laboratory for random linear constraint programs"};
  app.require_subcommand(1);
  app.fallthrough();

  FlagTable flags;
  std::string config_path;
  app.add_option("--config", config_path,
                 "key = value file applied before explicit flags");
  flags.add(&app, "--seed", "seed", "RNG seed (default 0)");
  flags.add(&app, "--out", "out", "write the result to this file");

  struct SubDef {
    const char* name;
    const char* desc;
    int (*run)(const Config&, std::ostream&, std::ostream&);
  };
  const std::vector<SubDef> defs = {
      {"gen", "generate a random instance from a pool", cmd_gen},
      {"solve", "solve an instance to optimality with certificate", cmd_solve},
      {"check-pool", "verify pool completability and cube violation",
       cmd_check_pool},
      {"scan", "mean scaled optimum over a density grid", cmd_scan},
      {"threshold", "bisect the density where the mean crosses eps_feas",
       cmd_threshold},
      {"concentrate", "scaled-optimum spread across sizes", cmd_concentrate},
      {"couple", "monotonicity check on nested instances", cmd_couple},
      {"tree-stats", "local neighborhood statistics vs the branching process",
       cmd_tree_stats},
      {"matching", "b-matching relaxation, duality and leaf removal",
       cmd_matching},
      {"ks-curve", "simulated matching fractions vs the limit formulas",
       cmd_ks_curve},
  };

  std::vector<CLI::App*> subs;
  for (const SubDef& def : defs) {
    CLI::App* sub = app.add_subcommand(def.name, def.desc);
    flags.add(sub, "--pool", "pool", "pool file");
    flags.add(sub, "--graph", "graph", "graph file");
    flags.add(sub, "--instance", "instance", "instance file");
    flags.add(sub, "--n", "n", "variable or node count");
    flags.add(sub, "--c", "c", "constraint density");
    flags.add(sub, "--c1", "c1", "lower density (couple)");
    flags.add(sub, "--c2", "c2", "upper density (couple)");
    flags.add(sub, "--c-grid", "c_grid", "comma-separated densities");
    flags.add(sub, "--n-list", "n_list", "comma-separated sizes");
    flags.add(sub, "--seeds", "seeds", "instances per point");
    flags.add(sub, "--samples", "samples", "samples (tree-stats)");
    flags.add(sub, "--base-seed", "base_seed", "batch seed base");
    flags.add(sub, "--eps-feas", "eps_feas", "threshold level");
    flags.add(sub, "--c-max", "c_max", "bisection upper bound");
    flags.add(sub, "--tol", "tol", "bisection tolerance");
    flags.add(sub, "--d", "d", "depth / girth parameter");
    flags.add(sub, "--b", "b", "degree bound (matching)");
    flags.add(sub, "--l", "l", "cube subdivision (check-pool)");
    flags.add(sub, "--nu", "nu", "violation margin (check-pool)");
    flags.add(sub, "--wdist", "wdist", "weight distribution, e.g. uniform(0,1)");
    flags.add(sub, "--mode", "mode", "matching mode: primal|dual|certify|ks");
    flags.add(sub, "--workers", "workers", "parallel solves (scan)");
    flags.add(sub, "--fallback", "fallback", "local projection fallback value");
    flags.add(sub, "--grid-step", "grid_step", "oracle grid step");
    flags.add(sub, "--svg", "svg", "also write an SVG chart here");
    flags.add_switch(sub, "--replacement", "replacement",
                     "sample variable tuples with replacement");
    subs.push_back(sub);
  }

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("klsat");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg = Config::load(config_path);
    flags.overlay(cfg);
    cfg.set("version", kToolVersion);
    for (size_t i = 0; i < defs.size(); ++i) {
      if (subs[i]->parsed()) {
        cfg.set("subcommand", defs[i].name);
        return defs[i].run(cfg, out, err);
      }
    }
    err << "no subcommand selected\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace klsat
