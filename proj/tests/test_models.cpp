#include "doctest.h"

#include <cmath>
#include <map>
#include <set>

#include "dimer/matching_poly.hpp"
#include "dimer/models.hpp"

using namespace dimer;

namespace {

bool is_valid_matching(const Matching& m, int n) {
  std::set<int> seen;
  for (auto [a, b] : m) {
    if (a < 0 || b < 0 || a >= n || b >= n || a >= b) return false;
    if (!seen.insert(a).second || !seen.insert(b).second) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("q from p balances the mean edge count") {
  CHECK(q_from_p(4, 0.5, kLambdaInf) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  int n = 30;
  double p = 0.2, lambda = 0.05;
  double q = q_from_p(n, p, lambda);
  double em = expected_matching_size(n, lambda);
  double pairs = n * (n - 1) / 2.0;
  // null mean edges == planted mean edges
  CHECK(pairs * q == doctest::Approx(em + (pairs - em) * p).epsilon(1e-12));
  CHECK_THROWS_AS(q_from_p(5, 0.5, kLambdaInf), std::invalid_argument);
}

TEST_CASE("model parameter factories") {
  auto amb = ModelParams::equal_ambient(20, 0.3, 0.01);
  CHECK(amb.q == amb.p);
  CHECK(amb.regime == Regime::EqualAmbient);
  CHECK(amb.expected_M == doctest::Approx(expected_matching_size(20, 0.01)));
  CHECK(!amb.lambda_infinite());
  CHECK(amb.zeta() == doctest::Approx(1.0 / (0.01 * 20)));
  CHECK(amb.c() == doctest::Approx(c_of_zeta(amb.zeta())));

  auto avg = ModelParams::equal_average(20, 0.3, kLambdaInf);
  CHECK(avg.q > avg.p);
  CHECK(avg.expected_M == 10.0);
  CHECK(avg.c() == 1.0);
  CHECK(avg.theta() == doctest::Approx(0.3 * std::sqrt(20.0)));

  CHECK_THROWS_AS(ModelParams::equal_ambient(10, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams::equal_ambient(10, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams::equal_ambient(1, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("config round trip") {
  for (auto mp : {ModelParams::equal_ambient(40, 0.25, 1.0 / 1200),
                  ModelParams::equal_average(16, 0.125, kLambdaInf)}) {
    ModelParams back = ModelParams::from_config(mp.to_config());
    CHECK(back.n == mp.n);
    CHECK(back.p == mp.p);
    CHECK(back.q == mp.q);
    CHECK(back.lambda == mp.lambda);
    CHECK(back.regime == mp.regime);
    CHECK(back.expected_M == mp.expected_M);
  }
  CHECK_THROWS_AS(ModelParams::from_config("n = 4\n"), std::invalid_argument);
}

TEST_CASE("gibbs matchings are valid and hit the mean size") {
  int n = 14;
  double lambda = 0.5;
  double total = 0;
  int trials = 3000;
  for (int t = 0; t < trials; ++t) {
    Matching m = sample_matching_gibbs(n, lambda, 100 + t);
    REQUIRE(is_valid_matching(m, n));
    total += double(m.size());
  }
  double expect = expected_matching_size(n, lambda);
  double sd = std::sqrt(variance_matching_size(n, lambda) / trials);
  CHECK(std::abs(total / trials - expect) < 4 * sd);
}

TEST_CASE("uniform perfect matchings") {
  // K_4 has exactly 3 perfect matchings; frequencies should be even
  std::map<std::string, int> freq;
  int trials = 3000;
  for (int t = 0; t < trials; ++t) {
    Matching m = sample_uniform_perfect_matching(4, 900 + t);
    REQUIRE(m.size() == 2);
    REQUIRE(is_valid_matching(m, 4));
    std::string key;
    for (auto [a, b] : m) key += std::to_string(a) + std::to_string(b);
    freq[key]++;
  }
  REQUIRE(freq.size() == 3);
  for (auto& [k, c] : freq) CHECK(std::abs(c - trials / 3.0) < 5 * std::sqrt(trials * 2.0 / 9.0));
  CHECK_THROWS_AS(sample_uniform_perfect_matching(5, 1), std::invalid_argument);
}

TEST_CASE("planted samples contain the hidden matching") {
  auto mp = ModelParams::equal_ambient(40, 0.2, kLambdaInf);
  double off_edges = 0;
  int trials = 200;
  for (int t = 0; t < trials; ++t) {
    PlantedSample s = sample_planted(mp, 5000 + t);
    REQUIRE(s.hidden.size() == 20);
    REQUIRE(is_valid_matching(s.hidden, 40));
    for (auto [a, b] : s.hidden) CHECK(s.graph.has(a, b));
    off_edges += double(s.graph.edge_count()) - 20.0;
  }
  // non-matching pairs are Bernoulli(p); allow for matching pairs that would
  // have been sampled anyway
  double pairs = 40 * 39 / 2.0 - 20.0;
  double mean = off_edges / trials;
  double sd = std::sqrt(pairs * 0.2 * 0.8 / trials);
  CHECK(std::abs(mean - pairs * 0.2) < 5 * sd);
}

TEST_CASE("null sampling uses q") {
  auto mp = ModelParams::equal_average(40, 0.2, kLambdaInf);
  double total = 0;
  int trials = 400;
  for (int t = 0; t < trials; ++t)
    total += sample_null(mp, 7000 + t).edge_count();
  double pairs = 40 * 39 / 2.0;
  double sd = std::sqrt(pairs * mp.q * (1 - mp.q) / trials);
  CHECK(std::abs(total / trials - pairs * mp.q) < 5 * sd);
}

TEST_CASE("sampling is seed deterministic") {
  auto mp = ModelParams::equal_ambient(30, 0.3, 0.002);
  PlantedSample a = sample_planted(mp, 11);
  PlantedSample b = sample_planted(mp, 11);
  CHECK(a.hidden == b.hidden);
  CHECK(a.graph.edge_count() == b.graph.edge_count());
  PlantedSample c = sample_planted(mp, 12);
  CHECK((a.hidden != c.hidden || a.graph.edge_count() != c.graph.edge_count()));
}
