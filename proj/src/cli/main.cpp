#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "dimer/harness.hpp"
#include "dimer/inference.hpp"
#include "dimer/matching_poly.hpp"
#include "dimer/models.hpp"
#include "dimer/rng.hpp"
#include "dimer/templates.hpp"

namespace {

using namespace dimer;

// Common model flag bundle. lambda comes from --zeta (lambda = 1/(zeta n)) or
// --lambda (a number, or "inf"); raw lambda above 1/(30n) gets a warning since
// the truncated series is only controlled below that.
struct ModelFlags {
  int n = 0;
  double p = 0;
  std::optional<double> q;
  std::optional<double> zeta;
  std::string lambda_text;
  std::string regime = "equal-ambient";

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "number of vertices")->required();
    cmd->add_option("--p", p, "planted-model pair density")->required();
    cmd->add_option("--q", q, "null density override");
    auto* z = cmd->add_option("--zeta", zeta, "lambda = 1/(zeta*n)");
    cmd->add_option("--lambda", lambda_text, "activity, or \"inf\"")->excludes(z);
    cmd->add_option("--regime", regime, "equal-ambient | equal-average")
        ->check(CLI::IsMember({"equal-ambient", "equal-average"}));
  }

  double lambda() const {
    if (zeta) {
      if (!(*zeta > 0)) throw std::invalid_argument("zeta must be positive");
      return 1.0 / (*zeta * n);
    }
    if (lambda_text.empty())
      throw std::invalid_argument("specify --zeta or --lambda");
    if (lambda_text == "inf") return kLambdaInf;
    double l = std::stod(lambda_text);
    if (!(l > 0)) throw std::invalid_argument("lambda must be positive");
    if (l > 1.0 / (30.0 * n))
      std::cerr << "warning: lambda > 1/(30n); series truncation bounds do not"
                   " apply\n";
    return l;
  }

  ModelParams resolve() const {
    double l = lambda();
    ModelParams mp = (regime == "equal-ambient")
                         ? ModelParams::equal_ambient(n, p, l)
                         : ModelParams::equal_average(n, p, l);
    if (q) {
      mp.q = *q;
      if (!(*q > 0 && *q < 1))
        throw std::invalid_argument("q must be in (0,1)");
    }
    return mp;
  }
};

// Main output to --out (or stdout); the fully resolved config goes next to the
// output file, or to stderr for stdout runs, so every run is replayable.
void emit(const std::string& out_path, const std::string& content,
          const std::string& config) {
  if (out_path.empty()) {
    std::cout << content;
    std::cerr << "# resolved config\n" << config;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << content;
  std::ofstream c(out_path + ".config");
  if (!c) throw std::runtime_error("cannot write " + out_path + ".config");
  c << config;
}

Graph load_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return from_edge_list(f);
}

Statistic parse_statistic(const std::string& s) {
  if (s == "edge") return Statistic::EdgeTest;
  if (s == "wedge") return Statistic::WedgeTest;
  if (s == "exact-llr") return Statistic::ExactLLR;
  if (s == "ce-llr") return Statistic::CeLLR;
  if (s == "approx-rhs") return Statistic::ApproxRHS;
  throw std::invalid_argument("unknown statistic: " + s);
}

int run(int argc, char** argv) {
  CLI::App app{"planted-matching detection in Erdos-Renyi graphs"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "draw a planted or null graph");
  ModelFlags sample_mf;
  sample_mf.attach(sample);
  std::string sample_model = "planted";
  uint64_t sample_seed = 0;
  std::string sample_out, hidden_out;
  sample->add_option("--model", sample_model, "planted | null")
      ->check(CLI::IsMember({"planted", "null"}));
  sample->add_option("--seed", sample_seed, "rng seed")->required();
  sample->add_option("--out", sample_out, "edge list path");
  sample->add_option("--hidden-out", hidden_out, "hidden matching path");

  // stats
  auto* stats = app.add_subcommand("stats", "signed edge and wedge counts");
  std::string stats_graph;
  double stats_center = 0;
  stats->add_option("--graph", stats_graph, "edge list file")->required();
  stats->add_option("--center", stats_center, "centering density")->required();

  // llr
  auto* llr = app.add_subcommand("llr", "log-likelihood ratio of a graph");
  ModelFlags llr_mf;
  llr_mf.attach(llr);
  std::string llr_graph, llr_out;
  bool llr_exact = false, llr_ce = false;
  int llr_mmax = 4;
  llr->add_option("--graph", llr_graph, "edge list file")->required();
  llr->add_flag("--exact", llr_exact, "exact ratio");
  llr->add_flag("--ce", llr_ce, "truncated series ratio");
  llr->add_option("--M-max", llr_mmax, "series truncation order");
  llr->add_option("--out", llr_out, "output path");

  // ce group
  auto* ce = app.add_subcommand("ce", "cluster-expansion tools");
  ce->require_subcommand(1);

  auto* ce_logz = ce->add_subcommand("logz", "truncated log Z series on K_n");
  int cz_n = 0, cz_mmax = 4;
  std::optional<double> cz_zeta;
  std::string cz_lambda;
  cz_n = 0;
  ce_logz->add_option("--n", cz_n, "vertices")->required();
  auto* cz_zopt = ce_logz->add_option("--zeta", cz_zeta, "lambda = 1/(zeta*n)");
  ce_logz->add_option("--lambda", cz_lambda, "activity")->excludes(cz_zopt);
  ce_logz->add_option("--M-max", cz_mmax, "truncation order");

  auto* ce_em = ce->add_subcommand("expectM", "truncated mean matching size");
  int em_n = 0, em_mmax = 4;
  std::optional<double> em_zeta;
  std::string em_lambda;
  bool em_trees = false;
  ce_em->add_option("--n", em_n, "vertices")->required();
  auto* em_zopt = ce_em->add_option("--zeta", em_zeta, "lambda = 1/(zeta*n)");
  ce_em->add_option("--lambda", em_lambda, "activity")->excludes(em_zopt);
  ce_em->add_option("--M-max", em_mmax, "truncation order");
  ce_em->add_flag("--trees-only", em_trees, "restrict to simple trees");

  auto* ce_tpl = ce->add_subcommand("templates", "dump template table");
  int tpl_max = 4;
  std::string tpl_filter = "all", tpl_out;
  ce_tpl->add_option("--max-edges", tpl_max, "edge budget")->required();
  ce_tpl->add_option("--filter", tpl_filter,
                     "all | simple-trees | one-rep | two-rep | cyclic")
      ->check(CLI::IsMember({"all", "simple-trees", "one-rep", "two-rep",
                             "cyclic"}));
  ce_tpl->add_option("--out", tpl_out, "output path");

  auto* ce_id = ce->add_subcommand("identities", "tree convolution identities");
  std::string id_which = "onerep";
  int id_m = 1;
  ce_id->add_option("--which", id_which, "onerep | wedge | triple")
      ->check(CLI::IsMember({"onerep", "wedge", "triple"}));
  ce_id->add_option("--m", id_m, "identity order")->required();

  auto* ce_pen = ce->add_subcommand("penrose", "signed-sum vs tree-count bound");
  int pen_trials = 100, pen_maxv = 7;
  uint64_t pen_seed = 0;
  ce_pen->add_option("--trials", pen_trials, "random graphs to check");
  ce_pen->add_option("--max-vertices", pen_maxv, "graph size cap")
      ->check(CLI::Range(2, 16));
  ce_pen->add_option("--seed", pen_seed, "rng seed")->required();

  auto* ce_kl = ce->add_subcommand("clique-kl",
                                   "partial chi-square sum for a planted clique");
  int kl_n = 0, kl_vmax = 4;
  double kl_k = 0;
  ce_kl->add_option("--n", kl_n, "vertices")->required();
  ce_kl->add_option("--k", kl_k, "clique size")->required();
  ce_kl->add_option("--v-max", kl_vmax, "largest subgraph order");

  // test
  auto* test = app.add_subcommand("test", "run a threshold test on a graph");
  ModelFlags test_mf;
  test_mf.attach(test);
  std::string test_graph, test_stat = "edge";
  test->add_option("--graph", test_graph, "edge list file")->required();
  test->add_option("--statistic", test_stat, "edge | wedge")
      ->check(CLI::IsMember({"edge", "wedge"}));

  // experiment
  auto* exp = app.add_subcommand("experiment", "Monte Carlo error estimate");
  ModelFlags exp_mf;
  exp_mf.attach(exp);
  std::string exp_stat = "edge", exp_out, exp_format = "csv";
  int exp_trials = 0, exp_workers = 1, exp_mmax = 4;
  uint64_t exp_seed = 0;
  exp->add_option("--statistic", exp_stat,
                  "edge | wedge | exact-llr | ce-llr | approx-rhs");
  exp->add_option("--trials", exp_trials, "trials per arm")->required();
  exp->add_option("--seed", exp_seed, "rng seed")->required();
  exp->add_option("--workers", exp_workers, "worker threads");
  exp->add_option("--M-max", exp_mmax, "series truncation order");
  exp->add_option("--out", exp_out, "output path");
  exp->add_option("--format", exp_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  // sweep
  auto* sw = app.add_subcommand("sweep", "error experiments over a grid");
  std::vector<int> sw_ns;
  std::vector<double> sw_ps;
  std::string sw_stat = "edge", sw_regime = "equal-ambient", sw_lambda, sw_out;
  std::optional<double> sw_zeta;
  int sw_trials = 0, sw_workers = 1, sw_mmax = 4;
  uint64_t sw_seed = 0;
  std::vector<std::string> sw_skip;
  sw->add_option("--n", sw_ns, "vertex counts")->required();
  sw->add_option("--p", sw_ps, "densities")->required();
  auto* sw_zopt = sw->add_option("--zeta", sw_zeta, "lambda = 1/(zeta*n)");
  sw->add_option("--lambda", sw_lambda, "activity, or \"inf\"")
      ->excludes(sw_zopt);
  sw->add_option("--regime", sw_regime, "equal-ambient | equal-average")
      ->check(CLI::IsMember({"equal-ambient", "equal-average"}));
  sw->add_option("--statistic", sw_stat,
                 "edge | wedge | exact-llr | ce-llr | approx-rhs");
  sw->add_option("--trials", sw_trials, "trials per arm")->required();
  sw->add_option("--seed", sw_seed, "rng seed")->required();
  sw->add_option("--workers", sw_workers, "worker threads");
  sw->add_option("--M-max", sw_mmax, "series truncation order");
  sw->add_option("--skip-key", sw_skip, "result keys to skip");
  sw->add_option("--out", sw_out, "output path");

  // moments
  auto* mom = app.add_subcommand("moments", "signed-count moment diagnostics");
  ModelFlags mom_mf;
  mom_mf.attach(mom);
  int mom_trials = 0;
  uint64_t mom_seed = 0;
  std::string mom_out;
  mom->add_option("--trials", mom_trials, "samples per model")->required();
  mom->add_option("--seed", mom_seed, "rng seed")->required();
  mom->add_option("--out", mom_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  if (sample->parsed()) {
    ModelParams mp = sample_mf.resolve();
    std::string config = mp.to_config() + "model = " + sample_model +
                         "\nseed = " + std::to_string(sample_seed) + "\n";
    if (sample_model == "planted") {
      PlantedSample ps = sample_planted(mp, sample_seed);
      emit(sample_out, to_edge_list(ps.graph), config);
      if (!hidden_out.empty()) {
        std::ofstream h(hidden_out);
        for (auto [a, b] : ps.hidden) h << a + 1 << " " << b + 1 << "\n";
      }
    } else {
      emit(sample_out, to_edge_list(sample_null(mp, sample_seed)), config);
    }
    return 0;
  }

  if (stats->parsed()) {
    Graph g = load_graph(stats_graph);
    std::cout << "edges " << g.edge_count() << "\n"
              << "signed_edges "
              << format_double(signed_edge_count(g, {stats_center})) << "\n"
              << "signed_wedges "
              << format_double(signed_wedge_count(g, {stats_center})) << "\n";
    return 0;
  }

  if (llr->parsed()) {
    if (llr_exact == llr_ce)
      throw std::invalid_argument("pick exactly one of --exact / --ce");
    ModelParams mp = llr_mf.resolve();
    Graph g = load_graph(llr_graph);
    std::ostringstream out;
    if (llr_exact) {
      LlrResult r = exact_llr(g, mp);
      if (r.impossible)
        out << "impossible\n";
      else
        out << format_double(r.value) << "\n";
    } else {
      LlrBreakdown b = ce_llr(g, mp, llr_mmax);
      out << format_double(b.total) << "\n";
      out << "F " << format_double(b.F) << "\n";
      for (const auto& [k, v] : b.ce_parts)
        out << k << " " << format_double(v) << "\n";
    }
    std::string config = mp.to_config() +
                         std::string("mode = ") + (llr_exact ? "exact" : "ce") +
                         "\nM_max = " + std::to_string(llr_mmax) + "\n";
    emit(llr_out, out.str(), config);
    return 0;
  }

  if (ce_logz->parsed()) {
    double l = cz_zeta ? 1.0 / (*cz_zeta * cz_n) : std::stod(cz_lambda);
    std::cout << format_double(ce_log_Z_Kn(cz_n, l, cz_mmax)) << "\n"
              << "tail_bound "
              << format_double(ce_truncation_tail_bound(cz_n, l, cz_mmax))
              << "\n";
    return 0;
  }

  if (ce_em->parsed()) {
    double l = em_zeta ? 1.0 / (*em_zeta * em_n) : std::stod(em_lambda);
    std::cout << format_double(ce_expected_M(em_n, l, em_mmax, em_trees))
              << "\n";
    return 0;
  }

  if (ce_tpl->parsed()) {
    TemplateFilter f = TemplateFilter::All;
    if (tpl_filter == "simple-trees") f = TemplateFilter::SimpleTrees;
    else if (tpl_filter == "one-rep") f = TemplateFilter::OneRepTrees;
    else if (tpl_filter == "two-rep") f = TemplateFilter::TwoRepTrees;
    else if (tpl_filter == "cyclic") f = TemplateFilter::SimpleCyclic;
    std::ostringstream out;
    for (const auto& t : enumerate_templates(tpl_max, f))
      out << dump_template(template_weights(t)) << "\n";
    std::string config = "max_edges = " + std::to_string(tpl_max) +
                         "\nfilter = " + tpl_filter + "\n";
    emit(tpl_out, out.str(), config);
    return 0;
  }

  if (ce_id->parsed()) {
    UrsellIdentity which = UrsellIdentity::OneRepConvolution;
    if (id_which == "wedge") which = UrsellIdentity::WedgeMarked;
    else if (id_which == "triple") which = UrsellIdentity::TripleEdge;
    IdentityReport rep = verify_ursell_identity(which, id_m);
    std::cout << "lhs " << rep.lhs.numerator().str() << "/"
              << rep.lhs.denominator().str() << "\n"
              << "rhs " << rep.rhs.numerator().str() << "/"
              << rep.rhs.denominator().str() << "\n"
              << (rep.equal ? "equal" : "DIFFER") << "\n";
    return rep.equal ? 0 : 1;
  }

  if (ce_pen->parsed()) {
    Rng rng(pen_seed);
    int failures = 0;
    for (int t = 0; t < pen_trials; ++t) {
      int m = 2 + int(rng.uniform_int(uint64_t(pen_maxv - 1)));
      // random connected slot graph: spanning path plus random extras
      std::vector<std::pair<int, int>> edges;
      for (int i = 0; i + 1 < m; ++i) edges.emplace_back(i, i + 1);
      for (int i = 0; i < m; ++i)
        for (int j = i + 2; j < m; ++j)
          if (rng.bernoulli(0.3)) edges.emplace_back(i, j);
      if (!penrose_check(make_incompat_graph(m, edges))) ++failures;
    }
    std::cout << "checked " << pen_trials << " failures " << failures << "\n";
    return failures == 0 ? 0 : 1;
  }

  if (ce_kl->parsed()) {
    std::cout << format_double(planted_clique_partial_kl(kl_n, kl_k, kl_vmax))
              << "\n";
    return 0;
  }

  if (test->parsed()) {
    ModelParams mp = test_mf.resolve();
    Graph g = load_graph(test_graph);
    bool verdict =
        test_stat == "edge" ? edge_test(g, mp) : wedge_test(g, mp);
    std::cout << (verdict ? 1 : 0) << "\n";
    return 0;
  }

  if (exp->parsed()) {
    ExperimentConfig cfg;
    cfg.params = exp_mf.resolve();
    cfg.trials = exp_trials;
    cfg.seed = exp_seed;
    cfg.statistic = parse_statistic(exp_stat);
    cfg.workers = exp_workers;
    cfg.M_max = exp_mmax;
    ErrorEstimate e = run_error_experiment(cfg);
    std::string content = exp_format == "json"
                              ? error_json(cfg, e)
                              : error_csv_header() + "\n" + error_csv_row(cfg, e) +
                                    "\n";
    emit(exp_out, content, cfg.to_config());
    return 0;
  }

  if (sw->parsed()) {
    std::vector<ExperimentConfig> grid;
    for (int n : sw_ns)
      for (double p : sw_ps) {
        double l;
        if (sw_zeta) l = 1.0 / (*sw_zeta * n);
        else if (sw_lambda == "inf") l = kLambdaInf;
        else if (!sw_lambda.empty()) l = std::stod(sw_lambda);
        else throw std::invalid_argument("specify --zeta or --lambda");
        ExperimentConfig cfg;
        cfg.params = (sw_regime == "equal-ambient")
                         ? ModelParams::equal_ambient(n, p, l)
                         : ModelParams::equal_average(n, p, l);
        cfg.trials = sw_trials;
        cfg.seed = sw_seed;
        cfg.statistic = parse_statistic(sw_stat);
        cfg.workers = sw_workers;
        cfg.M_max = sw_mmax;
        grid.push_back(cfg);
      }
    auto rows = sweep(grid, sw_skip);
    std::ostringstream config;
    config << "cells = " << grid.size() << "\nseed = " << sw_seed
           << "\ntrials = " << sw_trials << "\nstatistic = " << sw_stat << "\n";
    emit(sw_out, sweep_csv(rows), config.str());
    return 0;
  }

  if (mom->parsed()) {
    ModelParams mp = mom_mf.resolve();
    MomentReport rep = moment_check(mp, mom_trials, mom_seed);
    std::string config = mp.to_config() +
                         "trials = " + std::to_string(mom_trials) +
                         "\nseed = " + std::to_string(mom_seed) + "\n";
    emit(mom_out, moment_csv(mp, mom_trials, mom_seed, rep), config);
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
