#include "doctest.h"

#include <cmath>
#include <vector>

#include "dimer/inference.hpp"
#include "dimer/matching_poly.hpp"
#include "dimer/rng.hpp"

using namespace dimer;

namespace {

// All matchings of K_n (including the empty one), by recursing on the lowest
// free vertex.
void all_matchings(int n, int from, std::vector<char>& used, Matching& cur,
                   std::vector<Matching>& out) {
  int v = from;
  while (v < n && used[v]) ++v;
  if (v >= n) {
    out.push_back(cur);
    return;
  }
  used[v] = 1;
  // v stays single
  all_matchings(n, v + 1, used, cur, out);
  for (int u = v + 1; u < n; ++u) {
    if (used[u]) continue;
    used[u] = 1;
    cur.emplace_back(v, u);
    all_matchings(n, v + 1, used, cur, out);
    cur.pop_back();
    used[u] = 0;
  }
  used[v] = 0;
}

std::vector<Matching> matchings_of_Kn(int n) {
  std::vector<char> used(n, 0);
  Matching cur;
  std::vector<Matching> out;
  all_matchings(n, 0, used, cur, out);
  return out;
}

// log P(A)/Q(A) by direct summation over the matching prior.
double oracle_llr(const Graph& g, const ModelParams& mp,
                  const std::vector<Matching>& matchings) {
  int n = mp.n;
  double pairs = n * (n - 1) / 2.0;
  double z = 0;
  std::vector<double> weights(matchings.size());
  for (size_t i = 0; i < matchings.size(); ++i) {
    if (mp.lambda_infinite())
      weights[i] = (int(matchings[i].size()) == n / 2) ? 1.0 : 0.0;
    else
      weights[i] = std::pow(mp.lambda, double(matchings[i].size()));
    z += weights[i];
  }
  double planted = 0;
  for (size_t i = 0; i < matchings.size(); ++i) {
    if (weights[i] == 0) continue;
    bool inside = true;
    for (auto [a, b] : matchings[i])
      if (!g.has(a, b)) {
        inside = false;
        break;
      }
    if (!inside) continue;
    double extra = double(g.edge_count()) - double(matchings[i].size());
    planted += weights[i] / z * std::pow(mp.p, extra) *
               std::pow(1 - mp.p, pairs - g.edge_count());
  }
  double null_prob = std::pow(mp.q, double(g.edge_count())) *
                     std::pow(1 - mp.q, pairs - g.edge_count());
  return std::log(planted) - std::log(null_prob);
}

}  // namespace

TEST_CASE("prefactor") {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  CHECK(prefactor_F(g, 0.3, 0.3) == 0.0);
  double p = 0.2, q = 0.5;
  double expect = 2 * std::log(p * (1 - q) / (q * (1 - p))) +
                  6 * std::log((1 - p) / (1 - q));
  CHECK(prefactor_F(g, p, q) == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(prefactor_F(g, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("exact llr matches enumeration, finite activity") {
  Rng rng(1234);
  for (int n : {4, 6, 8}) {
    auto matchings = matchings_of_Kn(n);
    for (int trial = 0; trial < 25; ++trial) {
      double p = 0.15 + 0.1 * (trial % 7);
      double lambda = 0.02 + 0.3 * rng.uniform();
      ModelParams mp = (trial % 2) ? ModelParams::equal_average(n, p, lambda)
                                   : ModelParams::equal_ambient(n, p, lambda);
      Graph g = sample_gnq(n, 0.5, rng.next());
      LlrResult r = exact_llr(g, mp);
      REQUIRE(!r.impossible);
      CHECK(r.value ==
            doctest::Approx(oracle_llr(g, mp, matchings)).epsilon(1e-10));
    }
  }
}

TEST_CASE("exact llr matches enumeration, perfect matching prior") {
  for (int n : {4, 6, 8, 10}) {
    auto matchings = matchings_of_Kn(n);
    Rng rng(77 + n);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
      double p = 0.3 + 0.1 * (trial % 4);
      ModelParams mp = (trial % 2) ? ModelParams::equal_average(n, p, kLambdaInf)
                                   : ModelParams::equal_ambient(n, p, kLambdaInf);
      Graph g = sample_gnq(n, 0.6, rng.next());
      LlrResult r = exact_llr(g, mp);
      if (count_perfect_matchings(g) == 0) {
        CHECK(r.impossible);
        continue;
      }
      ++checked;
      CHECK(r.value ==
            doctest::Approx(oracle_llr(g, mp, matchings)).epsilon(1e-10));
    }
    CHECK(checked > 5);
  }
}

TEST_CASE("series llr tracks the exact llr") {
  int n = 10;
  ModelParams mp = ModelParams::equal_ambient(n, 0.4, 1.0 / (40.0 * n));
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    Graph g = sample_gnq(n, 0.4, rng.next());
    LlrBreakdown b = ce_llr(g, mp, 5);
    CHECK(b.total == doctest::Approx(exact_llr(g, mp).value).epsilon(1e-6));
    CHECK(b.total == doctest::Approx(b.F + b.series));
    double parts = 0;
    for (auto& [k, v] : b.ce_parts) parts += v;
    CHECK(parts == doctest::Approx(b.series).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ce_llr(Graph(4), ModelParams::equal_ambient(4, 0.5, kLambdaInf), 3),
                  std::invalid_argument);
}

TEST_CASE("threshold tests") {
  int n = 12;
  ModelParams mp = ModelParams::equal_ambient(n, 0.3, kLambdaInf);
  // complete graph: maximal edge statistic, fires "planted"
  CHECK(edge_test(Graph::complete(n), mp));
  CHECK(!edge_test(Graph(n), mp));
  // wedge test fires on *small* signed wedge counts; both the empty and the
  // complete graph push the statistic positive, so neither fires
  ModelParams mw = ModelParams::equal_average(n, 0.3, kLambdaInf);
  CHECK(!wedge_test(Graph(n), mw));
  CHECK(!wedge_test(Graph::complete(n), mw));
  // decision agrees with the standardized statistic on random graphs
  int nn = 40;
  ModelParams mr = ModelParams::equal_average(nn, 0.2, kLambdaInf);
  double triples = nn * (nn - 1.0) * (nn - 2.0) / 6.0;
  double sigma = std::sqrt(3.0 * triples * mr.q * mr.q * (1 - mr.q * mr.q));
  double thresh = -mr.c() * mr.c() / (2.0 * std::sqrt(2.0) * mr.theta());
  for (int t = 0; t < 20; ++t) {
    Graph g = sample_null(mr, 600 + t);
    double stat = signed_wedge_count(g, {mr.q}) / sigma;
    CHECK(wedge_test(g, mr) == (stat <= thresh));
  }
  // and the edge decision likewise
  double pairs = nn * (nn - 1.0) / 2.0;
  ModelParams ma = ModelParams::equal_ambient(nn, 0.2, kLambdaInf);
  double esig = std::sqrt(pairs * ma.p * (1 - ma.p));
  double ethresh =
      ma.c() / (2.0 * std::sqrt(2.0)) * std::sqrt((1 - ma.p) / ma.p);
  for (int t = 0; t < 20; ++t) {
    Graph g = sample_planted(ma, 700 + t).graph;
    double stat = signed_edge_count(g, {ma.q}) / esig;
    CHECK(edge_test(g, ma) == (stat >= ethresh));
  }
}

TEST_CASE("limiting test errors") {
  ModelParams edge = ModelParams::equal_ambient(400, 0.3, kLambdaInf);
  CHECK(theoretical_error(edge, TestKind::Edge) ==
        doctest::Approx(0.5891544654500583).epsilon(1e-12));
  // theta = 1: n = 2500, p = 0.02
  ModelParams wedge = ModelParams::equal_average(2500, 0.02, kLambdaInf);
  CHECK(wedge.theta() == doctest::Approx(1.0));
  CHECK(theoretical_error(wedge, TestKind::Wedge) ==
        doctest::Approx(0.7236736098317631).epsilon(1e-12));
}

TEST_CASE("gaussian llr prediction") {
  ModelParams amb = ModelParams::equal_ambient(400, 0.3, kLambdaInf);
  auto null_pred = llr_gaussian_prediction(amb, Under::UnderNull);
  CHECK(null_pred.var == doctest::Approx(0.7 / 0.6));
  CHECK(null_pred.mean == doctest::Approx(-null_pred.var / 2));
  auto planted_pred = llr_gaussian_prediction(amb, Under::UnderPlanted);
  CHECK(planted_pred.mean == doctest::Approx(null_pred.var / 2));

  ModelParams avg = ModelParams::equal_average(2500, 0.02, kLambdaInf);
  auto w = llr_gaussian_prediction(avg, Under::UnderNull);
  CHECK(w.var == doctest::Approx(1.0 / (2.0 * avg.theta() * avg.theta())));
}

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-6));
  CHECK(normal_cdf(3.0) + normal_cdf(-3.0) == doctest::Approx(1.0));
}

TEST_CASE("projection coefficients normalize on the base statistics") {
  ModelParams mp = ModelParams::equal_average(200, 0.05, kLambdaInf);
  // projecting the signed edge count onto itself
  auto [a1, b1] = projection_coeffs(make_template(2, {{0, 1}}), mp);
  CHECK(a1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b1 == doctest::Approx(0.0));
  // projecting the signed wedge count onto itself:
  // cov = (n)_3/aut * gamma q^2 (1-q)^2 with gamma = 1, aut = 2, so cov = var
  auto [a2, b2] = projection_coeffs(make_template(3, {{0, 1}, {1, 2}}), mp);
  CHECK(b2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a2 > 0);
  CHECK_THROWS_AS(projection_coeffs(make_template(3, {{0, 1}, {1, 2}, {0, 2}}), mp),
                  std::invalid_argument);
}

TEST_CASE("projection coefficients match empirical covariances") {
  int n = 80;
  double q = 0.15;
  ModelParams mp = ModelParams::equal_ambient(n, q, 1.0 / (40.0 * n));
  auto path2 = make_template(3, {{0, 1}, {1, 2}});
  auto [alpha, beta] = projection_coeffs(path2, mp);
  int trials = 4000;
  std::vector<double> tm(trials), ke(trials), kp(trials);
  for (int t = 0; t < trials; ++t) {
    Graph g = sample_gnq(n, q, hash64(31337, t, 0));
    tm[t] = count_simple_template(g, path2).convert_to<double>();
    ke[t] = signed_edge_count(g, {q});
    kp[t] = signed_wedge_count(g, {q});
  }
  auto mean = [&](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    return m / v.size();
  };
  double mt = mean(tm), me = mean(ke), mp2 = mean(kp);
  double cov_e = 0, var_e = 0, cov_p = 0, var_p = 0;
  for (int t = 0; t < trials; ++t) {
    cov_e += (tm[t] - mt) * (ke[t] - me);
    var_e += (ke[t] - me) * (ke[t] - me);
    cov_p += (tm[t] - mt) * (kp[t] - mp2);
    var_p += (kp[t] - mp2) * (kp[t] - mp2);
  }
  CHECK(cov_e / var_e == doctest::Approx(alpha).epsilon(0.1));
  CHECK(cov_p / var_p == doctest::Approx(beta).epsilon(0.15));
}

TEST_CASE("tree count variance formula") {
  int n = 80;
  double q = 0.15;
  auto path2 = make_template(3, {{0, 1}, {1, 2}});
  double predicted = tree_count_variance(path2, n, q);
  int trials = 4000;
  double m = 0, ss = 0;
  std::vector<double> vals(trials);
  for (int t = 0; t < trials; ++t) {
    Graph g = sample_gnq(n, q, hash64(424242, t, 0));
    vals[t] = count_simple_template(g, path2).convert_to<double>();
    m += vals[t];
  }
  m /= trials;
  for (double v : vals) ss += (v - m) * (v - m);
  CHECK(ss / (trials - 1) == doctest::Approx(predicted).epsilon(0.15));
  // a single edge has no wedge term; its count variance is Var of K_2(A)
  CHECK(tree_count_variance(make_template(2, {{0, 1}}), n, q) ==
        doctest::Approx(n * (n - 1) / 2.0 * q * (1 - q)).epsilon(1e-12));
}

TEST_CASE("prefactor decomposition in the equal-average regime") {
  int n = 600;
  ModelParams mp = ModelParams::equal_average(n, 0.1, 1.0 / (40.0 * n));
  for (int t = 0; t < 5; ++t) {
    Graph g = sample_gnq(n, mp.q, 555 + t);
    FParts f = F_decomposition(g, mp);
    double tol = 5.0 / std::sqrt(n * mp.q);
    CHECK(std::abs(prefactor_F(g, mp.p, mp.q) - f.sum()) < tol);
  }
}

TEST_CASE("planted wedge mean, exact and asymptotic") {
  ModelParams mp = ModelParams::equal_average(2500, 0.02, kLambdaInf);
  double exact = planted_mean_signed_wedges(mp);
  double asym = -2.0 * mp.expected_M * mp.expected_M / mp.n;
  CHECK(exact == doctest::Approx(asym).epsilon(0.1));
  // Monte Carlo agreement at small scale
  int n = 150;
  ModelParams small = ModelParams::equal_average(n, 0.1, kLambdaInf);
  double target = planted_mean_signed_wedges(small);
  int trials = 4000;
  double total = 0, ss = 0;
  std::vector<double> vals(trials);
  for (int t = 0; t < trials; ++t) {
    Graph g = sample_planted(small, hash64(11, t, 0)).graph;
    vals[t] = signed_wedge_count(g, {small.q});
    total += vals[t];
  }
  double m = total / trials;
  for (double v : vals) ss += (v - m) * (v - m);
  double se = std::sqrt(ss / (trials - 1) / trials);
  CHECK(std::abs(m - target) < 4 * se);
}

TEST_CASE("approximate llr main terms center at minus half the variance") {
  for (auto mp : {ModelParams::equal_ambient(300, 0.3, kLambdaInf),
                  ModelParams::equal_average(300, 0.1, kLambdaInf)}) {
    int trials = 2000;
    double total = 0, ss = 0;
    std::vector<double> vals(trials);
    for (int t = 0; t < trials; ++t) {
      Graph g = sample_null(mp, hash64(8, t, 1));
      vals[t] = llr_approx_rhs(g, mp);
      total += vals[t];
    }
    double m = total / trials;
    for (double v : vals) ss += (v - m) * (v - m);
    double var = ss / (trials - 1);
    // the comparison involves the variance estimate too, so fold in its
    // standard error
    double se = std::sqrt(var / trials) + var * std::sqrt(2.0 / (trials - 1)) / 2;
    CHECK(std::abs(m - (-var / 2.0)) < 5 * se + 1e-12);
  }
}
