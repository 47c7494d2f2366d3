#include "wsbm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsbm/bounds.hpp"
#include "wsbm/estimator.hpp"
#include "wsbm/harness.hpp"
#include "wsbm/io.hpp"
#include "wsbm/svg.hpp"

namespace wsbm::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void echo_config(std::ostream& err, const ojson& cfg) {
  err << "config " << cfg.dump() << "\n";
}

// ---- gen ----------------------------------------------------------------

struct GenArgs {
  int K = 2;
  long n = 0;
  std::vector<double> a, b;
  double p = -1, q1 = -1, q2 = -1;
  double mu = 0, sigma = 0;
  bool gaussian = false;
  long cap = 20000;
  std::uint64_t seed = 0;
  std::string out_path = "graph.wsbm";
};

int run_gen(const GenArgs& args, std::ostream& out, std::ostream& err) {
  const bool family_mode = !args.a.empty() || !args.b.empty();
  const bool censored_mode = args.p >= 0 || args.q1 >= 0 || args.q2 >= 0;
  const bool gaussian_mode = args.gaussian;
  if (family_mode + censored_mode + gaussian_mode != 1)
    throw validation_error(
        "pick exactly one model: --a/--b, --p/--q1/--q2, or --mu/--sigma");

  ModelSpec spec;
  ojson cfg{{"cmd", "gen"}, {"n", args.n}, {"seed", args.seed},
            {"out", args.out_path}};
  if (family_mode) {
    ScaledFamily fam{args.a, args.b, args.n};
    auto [within, between] = make_scaled_discrete(fam);
    spec.K = args.K;
    spec.n = args.n;
    spec.within = within;
    spec.between = between;
    cfg["model"] = "family";
    cfg["K"] = args.K;
    cfg["a"] = args.a;
    cfg["b"] = args.b;
  } else if (censored_mode) {
    spec = censored_model(args.n, args.p, args.q1, args.q2);
    cfg["model"] = "censored";
    cfg["p"] = args.p;
    cfg["q1"] = args.q1;
    cfg["q2"] = args.q2;
  } else {
    spec = submatrix_model(args.n, args.K, args.mu, args.sigma);
    cfg["model"] = "gaussian";
    cfg["K"] = args.K;
    cfg["mu"] = args.mu;
    cfg["sigma"] = args.sigma;
  }
  spec.node_cap = args.cap;
  echo_config(err, cfg);

  const auto [graph, truth] = generate_wsbm(spec, args.seed);
  save_graph(args.out_path, graph, spec, args.seed);
  (void)truth;
  (void)out;
  err << "wrote " << args.out_path << " and " << args.out_path
      << ".json (N=" << graph.size() << ", K=" << spec.K << ")\n";
  return 0;
}

// ---- ml -----------------------------------------------------------------

int run_ml(const std::string& in_path, const std::string& solver,
           int restarts, std::uint64_t seed, std::ostream& out,
           std::ostream& err) {
  echo_config(err, ojson{{"cmd", "ml"},
                         {"in", in_path},
                         {"solver", solver},
                         {"restarts", restarts},
                         {"seed", seed}});
  const LoadedGraph loaded = load_graph(in_path);
  const ModelSpec& spec = loaded.spec;
  const LlrMatrix m =
      spec.within.is_discrete()
          ? LlrMatrix(loaded.graph, llr_table(spec.within, spec.between))
          : LlrMatrix(loaded.graph, spec.within, spec.between);

  MLResult res;
  if (solver == "exact")
    res = exact_ml(m, spec.K, spec.n);
  else if (solver == "local_search")
    res = local_search_ml(m, spec.K, spec.n, restarts, seed);
  else
    throw validation_error("unknown solver '" + solver + "'");

  const Assignment truth = ground_truth(spec.K, spec.n);
  const long hamming = hamming_mod_perm(res.assignment, truth, spec.K);
  ojson result{{"solver", solver},
               {"restarts", res.restarts_used},
               {"score", res.score},
               {"hamming", hamming},
               {"recovered", hamming == 0},
               {"assignment", res.assignment.classes}};
  // JSON has no infinities; keep them readable instead of null
  if (std::isinf(res.score)) result["score"] = res.score > 0 ? "inf" : "-inf";
  if (m.all_finite())
    result["certificate_found"] = swap_certificate(m, truth).has_value();
  out << result.dump() << "\n";
  return 0;
}

// ---- renyi --------------------------------------------------------------

struct RenyiArgs {
  std::vector<double> a, b;
  long n = 0;
  std::vector<double> dist_p, dist_q;
  double mu = 0, sigma = 0;
  bool gaussian = false;
  bool asymptotic = false;
};

int run_renyi(const RenyiArgs& args, std::ostream& out, std::ostream& err) {
  const bool family_mode = !args.a.empty() || !args.b.empty();
  const bool pmf_mode = !args.dist_p.empty() || !args.dist_q.empty();
  if (family_mode + pmf_mode + args.gaussian != 1)
    throw validation_error(
        "pick exactly one input: --a/--b/--n, --discrete-p/--discrete-q, "
        "or --mu/--sigma");

  double value = 0.0;
  if (family_mode) {
    ScaledFamily fam{args.a, args.b, args.n};
    echo_config(err, ojson{{"cmd", "renyi"},
                           {"a", args.a},
                           {"b", args.b},
                           {"n", args.n},
                           {"asymptotic", args.asymptotic}});
    if (args.asymptotic) {
      value = renyi_asymptotic(fam);
    } else {
      const auto [within, between] = make_scaled_discrete(fam);
      value = renyi_half(within, between);
    }
  } else if (pmf_mode) {
    if (args.asymptotic)
      throw validation_error("--asymptotic needs the --a/--b/--n form");
    echo_config(err, ojson{{"cmd", "renyi"}, {"discrete_p", args.dist_p},
                           {"discrete_q", args.dist_q}});
    value = renyi_half(LabelDistribution::discrete(args.dist_p),
                       LabelDistribution::discrete(args.dist_q));
  } else {
    if (args.asymptotic)
      throw validation_error("--asymptotic needs the --a/--b/--n form");
    echo_config(err, ojson{{"cmd", "renyi"}, {"mu", args.mu},
                           {"sigma", args.sigma}});
    value = renyi_half(LabelDistribution::gaussian(args.mu, args.sigma * args.sigma),
                       LabelDistribution::gaussian(0.0, args.sigma * args.sigma));
  }
  out << fmt6(value) << "\n";
  return 0;
}

// ---- bound --------------------------------------------------------------

struct BoundArgs {
  int thm = 0;
  long n = 0;
  int K = 2;
  double I = -1;
  std::vector<double> a, b;
};

int run_bound(const BoundArgs& args, std::ostream& out, std::ostream& err) {
  const bool thm_mode = args.thm != 0;
  const bool family_mode = !args.a.empty() || !args.b.empty();
  if (thm_mode == family_mode)
    throw validation_error("pick exactly one of --thm/--I or --a/--b");

  if (thm_mode) {
    if (args.I < 0)
      throw validation_error("--thm needs a divergence --I >= 0");
    echo_config(err, ojson{{"cmd", "bound"},
                           {"thm", args.thm},
                           {"n", args.n},
                           {"K", args.K},
                           {"I", args.I}});
    double value = 0.0;
    if (args.thm == 1)
      value = ml_failure_bound_k2(args.n, args.I);
    else if (args.thm == 2)
      value = ml_failure_bound_kcomm(args.n, args.K, args.I);
    else
      throw validation_error("--thm must be 1 or 2");
    out << fmt6(value) << "\n";
    return 0;
  }

  echo_config(err, ojson{{"cmd", "bound"}, {"a", args.a}, {"b", args.b},
                         {"n", args.n}});
  const ScaledFamily fam{args.a, args.b, args.n};
  const ThresholdReport rep = threshold_report(fam);
  const double bound = args.K == 2
                           ? ml_failure_bound_k2(args.n, rep.I)
                           : ml_failure_bound_kcomm(args.n, args.K, rep.I);
  out << ojson{{"C", rep.C},
               {"I", rep.I},
               {"n_I_over_log_n", rep.n_I_over_log_n},
               {"verdict", to_string(rep.verdict)},
               {"failure_bound", bound}}
             .dump()
      << "\n";
  return 0;
}

// ---- sweep --------------------------------------------------------------

// Grid entries go through two stages. Structural problems (wrong JSON
// shapes, mode conflicts, unknown solvers) abort the sweep with exit 1;
// numeric model validation happens per row later, so one infeasible corner
// of a parameter scan cannot take down the other rows.
struct GridEntry {
  enum class Mode { family, censored, gaussian };
  Mode mode = Mode::family;
  long n = 0;
  int K = 2;
  std::vector<double> a, b;
  double p = 0.0, q1 = 0.0, q2 = 0.0;
  double mu = 0.0, sigma = 0.0;
  SolverKind solver = SolverKind::local_search;
  int restarts = 10;
  long trials = 0;
  std::uint64_t base_seed = 0;
  std::optional<long> node_cap;
};

GridEntry parse_grid_entry(const nlohmann::json& e, long default_trials) {
  if (!e.is_object()) throw validation_error("grid entries must be objects");
  GridEntry ge;
  ge.n = e.at("n").get<long>();
  const bool family = e.contains("a") || e.contains("b");
  const bool censored = e.contains("p") || e.contains("q1") || e.contains("q2");
  const bool gaussian = e.contains("mu") || e.contains("sigma");
  if (family + censored + gaussian != 1)
    throw validation_error(
        "grid entry needs exactly one of a/b, p/q1/q2, or mu/sigma");
  if (family) {
    ge.mode = GridEntry::Mode::family;
    ge.a = e.at("a").get<std::vector<double>>();
    ge.b = e.at("b").get<std::vector<double>>();
    ge.K = e.value("K", 2);
  } else if (censored) {
    ge.mode = GridEntry::Mode::censored;
    ge.p = e.at("p").get<double>();
    ge.q1 = e.at("q1").get<double>();
    ge.q2 = e.at("q2").get<double>();
  } else {
    ge.mode = GridEntry::Mode::gaussian;
    ge.mu = e.at("mu").get<double>();
    ge.sigma = e.at("sigma").get<double>();
    ge.K = e.value("K", 2);
  }
  const std::string solver = e.value("solver", std::string("local_search"));
  if (solver == "exact")
    ge.solver = SolverKind::exact;
  else if (solver == "local_search")
    ge.solver = SolverKind::local_search;
  else if (solver == "certificate_only")
    ge.solver = SolverKind::certificate_only;
  else
    throw validation_error("unknown solver '" + solver + "' in grid");
  ge.restarts = e.value("restarts", 10);
  ge.trials = e.value("trials", default_trials);
  ge.base_seed = e.value("base_seed", 0ULL);
  if (e.contains("node_cap")) ge.node_cap = e.at("node_cap").get<long>();
  return ge;
}

TrialConfig entry_to_config(const GridEntry& ge) {
  TrialConfig cfg;
  switch (ge.mode) {
    case GridEntry::Mode::family:
      cfg = config_from_family({ge.a, ge.b, ge.n}, ge.K);
      break;
    case GridEntry::Mode::censored:
      cfg = config_from_censored(ge.n, ge.p, ge.q1, ge.q2);
      break;
    case GridEntry::Mode::gaussian:
      cfg = config_from_gaussian(ge.n, ge.K, ge.mu, ge.sigma);
      break;
  }
  cfg.solver = ge.solver;
  cfg.restarts = ge.restarts;
  cfg.trials = ge.trials;
  cfg.base_seed = ge.base_seed;
  if (ge.node_cap) cfg.spec.node_cap = *ge.node_cap;
  return cfg;
}

// metadata-only row for an entry whose model cannot be built at all
SweepRow unbuildable_row(const GridEntry& ge, const std::string& why) {
  SweepRow row;
  row.n = ge.n;
  row.K = ge.mode == GridEntry::Mode::censored ? 2 : ge.K;
  switch (ge.mode) {
    case GridEntry::Mode::family:
      row.L = static_cast<int>(ge.a.size());
      break;
    case GridEntry::Mode::censored:
      row.L = 2;
      break;
    case GridEntry::Mode::gaussian:
      row.L = 0;
      break;
  }
  row.a = ge.a;
  row.b = ge.b;
  row.trials = ge.trials;
  row.solver = to_string(ge.solver);
  if (ge.solver == SolverKind::local_search)
    row.solver += ":" + std::to_string(ge.restarts);
  row.base_seed = ge.base_seed;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.C = row.I = row.n_I_over_log_n = row.thm_bound = nan;
  row.failure_rate = row.ci_low = row.ci_high = row.certificate_rate = nan;
  row.error = why;
  return row;
}

int run_sweep(const std::string& grid_path, const std::string& out_path,
              const std::string& svg_path, long default_trials,
              std::ostream& out, std::ostream& err) {
  echo_config(err, ojson{{"cmd", "sweep"},
                         {"grid", grid_path},
                         {"out", out_path.empty() ? "-" : out_path},
                         {"svg", svg_path.empty() ? "" : svg_path},
                         {"trials", default_trials}});
  std::ifstream is(grid_path);
  if (!is) throw validation_error("cannot open grid '" + grid_path + "'");
  nlohmann::json grid_json;
  try {
    is >> grid_json;
  } catch (const nlohmann::json::exception& ex) {
    throw validation_error("bad grid JSON: " + std::string(ex.what()));
  }
  if (!grid_json.is_array())
    throw validation_error("grid must be a JSON array of entries");
  std::vector<GridEntry> entries;
  entries.reserve(grid_json.size());
  for (const auto& e : grid_json)
    entries.push_back(parse_grid_entry(e, default_trials));
  if (entries.empty()) throw validation_error("sweep grid is empty");

  std::vector<SweepRow> rows(entries.size());
  std::vector<TrialConfig> grid;
  std::vector<std::size_t> grid_rows;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    try {
      grid.push_back(entry_to_config(entries[i]));
      grid_rows.push_back(i);
    } catch (const validation_error& ex) {
      rows[i] = unbuildable_row(entries[i], ex.what());
    }
  }
  if (!grid.empty()) {
    std::vector<SweepRow> swept = sweep(grid);
    for (std::size_t j = 0; j < swept.size(); ++j)
      rows[grid_rows[j]] = std::move(swept[j]);
  }
  for (const SweepRow& row : rows)
    if (!row.error.empty())
      err << "row n=" << row.n << " solver=" << row.solver
          << " failed: " << row.error << "\n";
  if (out_path.empty())
    out << sweep_csv(rows);
  else
    write_sweep_csv(out_path, rows);
  if (!svg_path.empty()) write_failure_plot(svg_path, rows);
  return 0;
}

// ---- censored / submatrix ------------------------------------------------

int run_censored(long n, double p, double q1, double q2, std::ostream& out,
                 std::ostream& err) {
  echo_config(err, ojson{{"cmd", "censored"},
                         {"n", n},
                         {"p", p},
                         {"q1", q1},
                         {"q2", q2}});
  const double stat = censored_stat(n, p, q1, q2);
  out << ojson{{"stat", stat}, {"verdict", to_string(verdict_from_stat(stat))}}
             .dump()
      << "\n";
  return 0;
}

int run_submatrix(long n, int K, double mu, double sigma, std::ostream& out,
                  std::ostream& err) {
  echo_config(err, ojson{{"cmd", "submatrix"},
                         {"n", n},
                         {"K", K},
                         {"mu", mu},
                         {"sigma", sigma}});
  const ModelSpec spec = submatrix_model(n, K, mu, sigma);
  const double I = renyi_half(spec.within, spec.between);
  const RegimeReport rep = recovery_regime(I, n);
  out << ojson{{"I", I},
               {"n_I_over_log_n", rep.ratio},
               {"verdict", to_string(rep.verdict)}}
             .dump()
      << "\n";
  return 0;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"weighted stochastic block model toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* sc_gen = app.add_subcommand("gen", "sample a graph and save it");
  sc_gen->add_option("--K", gen.K, "communities")->check(CLI::Range(2, 65535));
  sc_gen->add_option("--n", gen.n, "community size")->required();
  sc_gen->add_option("--a", gen.a, "within intensities")->delimiter(',');
  sc_gen->add_option("--b", gen.b, "between intensities")->delimiter(',');
  sc_gen->add_option("--p", gen.p, "censored: observation rate");
  sc_gen->add_option("--q1", gen.q1, "censored: within flip rate");
  sc_gen->add_option("--q2", gen.q2, "censored: between flip rate");
  auto* gen_mu = sc_gen->add_option("--mu", gen.mu, "gaussian: within mean");
  sc_gen->add_option("--sigma", gen.sigma, "gaussian: shared sd")
      ->needs(gen_mu);
  sc_gen->add_flag("--gaussian", gen.gaussian,
                   "use the gaussian model (implied by --mu/--sigma)");
  sc_gen->add_option("--seed", gen.seed, "generation seed");
  sc_gen->add_option("--cap", gen.cap, "node-count safety cap");
  sc_gen->add_option("--out", gen.out_path, "output path");

  std::string ml_in, ml_solver = "local_search";
  int ml_restarts = 10;
  std::uint64_t ml_seed = 0;
  auto* sc_ml = app.add_subcommand("ml", "recover communities from a graph");
  sc_ml->add_option("--in", ml_in, "graph container path")->required();
  sc_ml->add_option("--solver", ml_solver, "exact | local_search");
  sc_ml->add_option("--restarts", ml_restarts, "local search restarts");
  sc_ml->add_option("--seed", ml_seed, "local search seed");

  RenyiArgs renyi;
  auto* sc_renyi =
      app.add_subcommand("renyi", "order-1/2 Renyi divergence");
  sc_renyi->add_option("--a", renyi.a, "within intensities")->delimiter(',');
  sc_renyi->add_option("--b", renyi.b, "between intensities")->delimiter(',');
  sc_renyi->add_option("--n", renyi.n, "community size");
  sc_renyi->add_option("--discrete-p", renyi.dist_p, "within pmf")
      ->delimiter(',');
  sc_renyi->add_option("--discrete-q", renyi.dist_q, "between pmf")
      ->delimiter(',');
  auto* renyi_mu =
      sc_renyi->add_option("--mu", renyi.mu, "gaussian within mean");
  sc_renyi->add_option("--sigma", renyi.sigma, "gaussian shared sd")
      ->needs(renyi_mu);
  sc_renyi->add_flag("--gaussian", renyi.gaussian,
                     "gaussian pair N(mu, sigma^2) vs N(0, sigma^2)");
  sc_renyi->add_flag("--asymptotic", renyi.asymptotic,
                     "leading-order value C log(n)/n instead of exact");

  BoundArgs bound;
  auto* sc_bound =
      app.add_subcommand("bound", "failure bounds and threshold verdicts");
  sc_bound->add_option("--thm", bound.thm, "bound form: 1 (K=2) or 2 (K>=2)");
  sc_bound->add_option("--n", bound.n, "community size")->required();
  sc_bound->add_option("--K", bound.K, "communities");
  sc_bound->add_option("--I", bound.I, "divergence value");
  sc_bound->add_option("--a", bound.a, "within intensities")->delimiter(',');
  sc_bound->add_option("--b", bound.b, "between intensities")->delimiter(',');

  std::string sweep_grid, sweep_out, sweep_svg;
  long sweep_trials = 100;
  auto* sc_sweep = app.add_subcommand("sweep", "run a Monte Carlo grid");
  sc_sweep->add_option("--grid", sweep_grid, "grid JSON path")->required();
  sc_sweep->add_option("--out", sweep_out, "CSV output path (default stdout)");
  sc_sweep->add_option("--svg", sweep_svg, "also plot failure rate vs C");
  sc_sweep->add_option("--trials", sweep_trials,
                       "trials for grid entries that do not set their own");

  long cen_n = 0;
  double cen_p = 0, cen_q1 = 0, cen_q2 = 0;
  auto* sc_cen =
      app.add_subcommand("censored", "censored-model threshold statistic");
  sc_cen->add_option("--n", cen_n, "community size")->required();
  sc_cen->add_option("--p", cen_p, "observation rate")->required();
  sc_cen->add_option("--q1", cen_q1, "within flip rate")->required();
  sc_cen->add_option("--q2", cen_q2, "between flip rate")->required();

  long sub_n = 0;
  int sub_K = 2;
  double sub_mu = 0, sub_sigma = 1;
  auto* sc_sub =
      app.add_subcommand("submatrix", "gaussian block localization regime");
  sc_sub->add_option("--n", sub_n, "block size")->required();
  sc_sub->add_option("--K", sub_K, "blocks");
  sc_sub->add_option("--mu", sub_mu, "within mean")->required();
  sc_sub->add_option("--sigma", sub_sigma, "shared sd")->required();

  std::reverse(args.begin(), args.end());  // CLI11 consumes back-to-front
  try {
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (sc_gen->parsed()) {
      if (sc_gen->count("--mu") > 0 || sc_gen->count("--sigma") > 0)
        gen.gaussian = true;
      return run_gen(gen, out, err);
    }
    if (sc_ml->parsed())
      return run_ml(ml_in, ml_solver, ml_restarts, ml_seed, out, err);
    if (sc_renyi->parsed()) {
      if (sc_renyi->count("--mu") > 0) renyi.gaussian = true;
      return run_renyi(renyi, out, err);
    }
    if (sc_bound->parsed()) return run_bound(bound, out, err);
    if (sc_sweep->parsed())
      return run_sweep(sweep_grid, sweep_out, sweep_svg, sweep_trials, out,
                       err);
    if (sc_cen->parsed())
      return run_censored(cen_n, cen_p, cen_q1, cen_q2, out, err);
    if (sc_sub->parsed())
      return run_submatrix(sub_n, sub_K, sub_mu, sub_sigma, out, err);
    err << "error: no subcommand\n";
    return 1;
  } catch (const infinite_divergence&) {
    out << "inf\n";  // a legitimate value, not a failure
    return 0;
  } catch (const validation_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace wsbm::cli
