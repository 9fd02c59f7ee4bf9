#include "dimer/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "dimer/rng.hpp"

namespace dimer {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

const char* statistic_name(Statistic s) {
  switch (s) {
    case Statistic::EdgeTest: return "edge_test";
    case Statistic::WedgeTest: return "wedge_test";
    case Statistic::ExactLLR: return "exact_llr";
    case Statistic::CeLLR: return "ce_llr";
    case Statistic::ApproxRHS: return "approx_rhs";
  }
  return "?";
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

// The worker count is an execution detail: it is kept out of the config
// string, the key, and every output so reruns with a different worker count
// are bit-identical.
std::string ExperimentConfig::to_config() const {
  std::ostringstream out;
  out << params.to_config();
  out << "trials = " << trials << "\n"
      << "seed = " << seed << "\n"
      << "statistic = " << statistic_name(statistic) << "\n"
      << "under = " << (under == Under::UnderNull ? "null" : "planted") << "\n"
      << "M_max = " << M_max << "\n";
  return out.str();
}

std::string ExperimentConfig::key() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                (unsigned long long)fnv1a(to_config()));
  return buf;
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  if (workers < 1) throw std::invalid_argument("workers must be positive");
  if (workers == 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  int nthreads = std::min(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  std::atomic<bool> failed{false};
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          failed.store(true);
          throw;  // std::terminate: worker exceptions are programming errors
        }
      }
    });
  for (auto& th : pool) th.join();
}

namespace {

// arm 0 = planted, arm 1 = null; child seeds depend only on (seed, trial, arm)
double statistic_value(const ExperimentConfig& cfg, int trial, int arm) {
  uint64_t child = hash64(cfg.seed, uint64_t(trial), uint64_t(arm));
  Graph g = (arm == 0) ? sample_planted(cfg.params, child).graph
                       : sample_null(cfg.params, child);
  switch (cfg.statistic) {
    case Statistic::EdgeTest: {
      double pairs = double(cfg.params.n) * (cfg.params.n - 1) / 2.0;
      return signed_edge_count(g, {cfg.params.q}) /
             std::sqrt(pairs * cfg.params.p * (1 - cfg.params.p));
    }
    case Statistic::WedgeTest: {
      double n = cfg.params.n, q = cfg.params.q;
      double triples = n * (n - 1) * (n - 2) / 6.0;
      return signed_wedge_count(g, {q}) /
             std::sqrt(3.0 * triples * q * q * (1 - q * q));
    }
    case Statistic::ExactLLR: {
      LlrResult r = exact_llr(g, cfg.params);
      return r.impossible ? -INFINITY : r.value;
    }
    case Statistic::CeLLR:
      return ce_llr(g, cfg.params, cfg.M_max).total;
    case Statistic::ApproxRHS:
      return llr_approx_rhs(g, cfg.params);
  }
  return 0;
}

// decision: 1 = "planted"
bool classify(const ExperimentConfig& cfg, int trial, int arm) {
  if (cfg.statistic == Statistic::EdgeTest || cfg.statistic == Statistic::WedgeTest) {
    uint64_t child = hash64(cfg.seed, uint64_t(trial), uint64_t(arm));
    Graph g = (arm == 0) ? sample_planted(cfg.params, child).graph
                         : sample_null(cfg.params, child);
    return cfg.statistic == Statistic::EdgeTest ? edge_test(g, cfg.params)
                                                : wedge_test(g, cfg.params);
  }
  return statistic_value(cfg, trial, arm) >= 0.0;
}

double theoretical_total_error(const ExperimentConfig& cfg) {
  switch (cfg.statistic) {
    case Statistic::EdgeTest:
      return theoretical_error(cfg.params, TestKind::Edge);
    case Statistic::WedgeTest:
      return theoretical_error(cfg.params, TestKind::Wedge);
    default: {
      // limiting optimal error of the likelihood ratio test
      double var = llr_gaussian_prediction(cfg.params, Under::UnderNull).var;
      return 2.0 * normal_cdf(-std::sqrt(var) / 2.0);
    }
  }
}

}  // namespace

ErrorEstimate run_error_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("need at least one trial");
  std::vector<char> planted_as_null(cfg.trials), null_as_planted(cfg.trials);
  parallel_for(cfg.trials, cfg.workers, [&](int i) {
    planted_as_null[i] = !classify(cfg, i, 0);
    null_as_planted[i] = classify(cfg, i, 1);
  });
  double t2 = 0, t1 = 0;
  for (int i = 0; i < cfg.trials; ++i) {
    t2 += planted_as_null[i];
    t1 += null_as_planted[i];
  }
  t1 /= cfg.trials;
  t2 /= cfg.trials;
  ErrorEstimate e;
  e.type1 = t1;
  e.type2 = t2;
  e.total = t1 + t2;
  e.se_total = std::sqrt(t1 * (1 - t1) / cfg.trials + t2 * (1 - t2) / cfg.trials);
  e.theoretical = theoretical_total_error(cfg);
  return e;
}

DistributionSummary run_llr_distribution(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("need at least one trial");
  DistributionSummary s;
  s.values.assign(cfg.trials, 0.0);
  int arm = (cfg.under == Under::UnderPlanted) ? 0 : 1;
  parallel_for(cfg.trials, cfg.workers,
               [&](int i) { s.values[i] = statistic_value(cfg, i, arm); });
  double mean = 0;
  for (double v : s.values) mean += v;
  mean /= cfg.trials;
  s.mean = mean;
  if (cfg.trials >= 2) {
    double ss = 0;
    for (double v : s.values) ss += (v - mean) * (v - mean);
    s.var = ss / (cfg.trials - 1);
    s.var_defined = true;
  } else {
    s.var = NAN;
  }
  s.prediction = llr_gaussian_prediction(cfg.params, cfg.under);
  return s;
}

MomentReport moment_check(const ModelParams& params, int trials, uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("need at least two trials");
  std::vector<double> ne(trials), nw(trials), pe(trials), pw(trials);
  for (int i = 0; i < trials; ++i) {
    Graph gn = sample_null(params, hash64(seed, uint64_t(i), 1));
    ne[i] = signed_edge_count(gn, {params.q});
    nw[i] = signed_wedge_count(gn, {params.q});
    Graph gp = sample_planted(params, hash64(seed, uint64_t(i), 0)).graph;
    pe[i] = signed_edge_count(gp, {params.q});
    pw[i] = signed_wedge_count(gp, {params.q});
  }
  auto mean_of = [&](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    return m / trials;
  };
  auto var_of = [&](const std::vector<double>& v, double m) {
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / (trials - 1);
  };
  double n = params.n, p = params.p, q = params.q;
  double pairs = n * (n - 1) / 2.0;
  double triples = n * (n - 1) * (n - 2) / 6.0;

  MomentReport rep;
  auto mean_row = [&](const std::string& name, const std::vector<double>& v,
                      double expected, double reference) {
    double m = mean_of(v);
    double se = std::sqrt(var_of(v, m) / trials);
    rep.rows.push_back(MomentRow{name, m, expected, reference, se,
                                 se > 0 ? (m - expected) / se : 0.0});
  };
  auto var_row = [&](const std::string& name, const std::vector<double>& v,
                     double expected) {
    double m = mean_of(v);
    double vv = var_of(v, m);
    double se = vv * std::sqrt(2.0 / (trials - 1));  // normal approximation
    rep.rows.push_back(
        MomentRow{name, vv, expected, expected, se, (vv - expected) / se});
  };

  mean_row("null_mean_signed_edges", ne, 0.0, 0.0);
  var_row("null_var_signed_edges", ne, pairs * q * (1 - q));
  mean_row("null_mean_signed_wedges", nw, 0.0, 0.0);
  var_row("null_var_signed_wedges", nw, 3.0 * triples * q * q * (1 - q) * (1 - q));
  // E_planted edges = E|M| + (pairs - E|M|) p, recentred at pairs * q
  double pe_exact = params.expected_M * (1 - p) + pairs * (p - q);
  mean_row("planted_mean_signed_edges", pe, pe_exact,
           params.expected_M * (1 - p));
  double pw_exact = planted_mean_signed_wedges(params);
  double pw_asym = -2.0 * params.expected_M * params.expected_M / n;
  mean_row("planted_mean_signed_wedges", pw, pw_exact, pw_asym);
  return rep;
}

std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& grid,
                            const std::vector<std::string>& skip_keys) {
  std::set<std::string> skip(skip_keys.begin(), skip_keys.end());
  std::vector<SweepRow> rows;
  for (const auto& cfg : grid) {
    SweepRow row;
    row.cfg = cfg;
    row.key = cfg.key();
    if (skip.count(row.key)) {
      row.status = "skipped";
      rows.push_back(std::move(row));
      continue;
    }
    try {
      row.estimate = run_error_experiment(cfg);
      row.status = "ok";
    } catch (const std::exception& ex) {
      row.status = "error";
      row.message = ex.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string regime_name(Regime r) {
  return r == Regime::EqualAmbient ? "equal_ambient" : "equal_average";
}

std::string config_fields(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << cfg.params.n << "," << format_double(cfg.params.p) << ","
      << format_double(cfg.params.q) << ","
      << (cfg.params.lambda_infinite() ? "inf"
                                       : format_double(cfg.params.lambda))
      << "," << regime_name(cfg.params.regime) << ","
      << statistic_name(cfg.statistic) << "," << cfg.trials << "," << cfg.seed;
  return out.str();
}

}  // namespace

std::string error_csv_header() {
  return "key,n,p,q,lambda,regime,statistic,trials,seed,"
         "type1,type2,total,se_total,theoretical";
}

std::string error_csv_row(const ExperimentConfig& cfg, const ErrorEstimate& e) {
  std::ostringstream out;
  out << cfg.key() << "," << config_fields(cfg) << "," << format_double(e.type1)
      << "," << format_double(e.type2) << "," << format_double(e.total) << ","
      << format_double(e.se_total) << "," << format_double(e.theoretical);
  return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "key,status,n,p,q,lambda,regime,statistic,trials,seed,"
         "type1,type2,total,se_total,theoretical,message\n";
  for (const auto& r : rows) {
    out << r.key << "," << r.status << "," << config_fields(r.cfg) << ",";
    if (r.status == "ok")
      out << format_double(r.estimate.type1) << ","
          << format_double(r.estimate.type2) << ","
          << format_double(r.estimate.total) << ","
          << format_double(r.estimate.se_total) << ","
          << format_double(r.estimate.theoretical);
    else
      out << ",,,,";
    out << "," << r.message << "\n";
  }
  return out.str();
}

std::string moment_csv(const ModelParams& params, int trials, uint64_t seed,
                       const MomentReport& report) {
  std::ostringstream out;
  std::istringstream cfg(params.to_config());
  std::string line;
  while (std::getline(cfg, line)) out << "# " << line << "\n";
  out << "# trials = " << trials << "\n# seed = " << seed << "\n";
  out << "name,empirical,expected,reference,se,z\n";
  for (const auto& r : report.rows)
    out << r.name << "," << format_double(r.empirical) << ","
        << format_double(r.expected) << "," << format_double(r.reference) << ","
        << format_double(r.se) << "," << format_double(r.z) << "\n";
  return out.str();
}

std::string error_json(const ExperimentConfig& cfg, const ErrorEstimate& e) {
  nlohmann::json j;
  j["key"] = cfg.key();
  j["config"]["n"] = cfg.params.n;
  j["config"]["p"] = cfg.params.p;
  j["config"]["q"] = cfg.params.q;
  if (cfg.params.lambda_infinite())
    j["config"]["lambda"] = "inf";
  else
    j["config"]["lambda"] = cfg.params.lambda;
  j["config"]["regime"] = regime_name(cfg.params.regime);
  j["config"]["expected_M"] = cfg.params.expected_M;
  j["config"]["statistic"] = statistic_name(cfg.statistic);
  j["config"]["trials"] = cfg.trials;
  j["config"]["seed"] = cfg.seed;
  j["config"]["M_max"] = cfg.M_max;
  j["estimate"]["type1"] = e.type1;
  j["estimate"]["type2"] = e.type2;
  j["estimate"]["total"] = e.total;
  j["estimate"]["se_total"] = e.se_total;
  j["estimate"]["theoretical"] = e.theoretical;
  return j.dump(2) + "\n";
}

std::string distribution_csv(const ExperimentConfig& cfg,
                             const DistributionSummary& s) {
  std::ostringstream out;
  std::istringstream conf(cfg.to_config());
  std::string line;
  while (std::getline(conf, line)) out << "# " << line << "\n";
  out << "# mean = " << format_double(s.mean) << "\n";
  out << "# var = " << format_double(s.var) << "\n";
  out << "# predicted_mean = " << format_double(s.prediction.mean) << "\n";
  out << "# predicted_var = " << format_double(s.prediction.var) << "\n";
  out << "trial,value\n";
  for (size_t i = 0; i < s.values.size(); ++i)
    out << i << "," << format_double(s.values[i]) << "\n";
  return out.str();
}

}  // namespace dimer
