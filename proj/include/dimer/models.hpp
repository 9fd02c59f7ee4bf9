#pragma once

#include <limits>
#include <string>

#include "dimer/graph.hpp"

namespace dimer {

inline constexpr double kLambdaInf = std::numeric_limits<double>::infinity();

enum class Regime {
  EqualAmbient,  // q == p
  EqualAverage,  // q chosen so null and planted have equal mean edge density
};

// q = p + E|M| (1-p) / C(n,2), with the exact finite-n E|M| (n/2 when
// lambda = inf).
double q_from_p(int n, double p, double lambda);

// Parameters of the planted model P_lambda and the null model Q = G(n,q).
struct ModelParams {
  int n = 0;
  double p = 0;
  double q = 0;
  double lambda = 0;  // kLambdaInf plants a uniform perfect matching
  Regime regime = Regime::EqualAmbient;
  double expected_M = 0;  // exact E|M| under the Gibbs measure on K_n

  static ModelParams equal_ambient(int n, double p, double lambda);
  static ModelParams equal_average(int n, double p, double lambda);

  bool lambda_infinite() const { return lambda == kLambdaInf; }
  double zeta() const { return 1.0 / (lambda * n); }
  double theta() const;  // p sqrt(n)
  double c() const;      // c(zeta), or 1 for lambda = inf

  // Flat key-value config, one "key = value" per line.
  std::string to_config() const;
  static ModelParams from_config(const std::string& text);
};

struct PlantedSample {
  Graph graph;
  Matching hidden;
};

// Exact Gibbs sampling on K_n: draw the size k with probability proportional
// to m_k lambda^k, then a uniform matching of that size.
Matching sample_matching_gibbs(int n, double lambda, uint64_t seed);

// Uniform over all (n-1)!! perfect matchings.
Matching sample_uniform_perfect_matching(int n, uint64_t seed);

// Planted: hidden matching forced present, every other pair Bernoulli(p).
PlantedSample sample_planted(const ModelParams& params, uint64_t seed);
Graph sample_null(const ModelParams& params, uint64_t seed);

}  // namespace dimer
