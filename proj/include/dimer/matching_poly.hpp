#pragma once

#include <vector>

#include "dimer/graph.hpp"

namespace dimer {

// coeffs[k] = number of k-edge matchings. coeffs[0] == 1 always.
struct MatchingPolynomial {
  std::vector<BigInt> coeffs;
};

// Feasibility bounds for the subset DPs. Not hard-coded magic: adjust here if
// you have the memory (the matching-polynomial table is 8 * 2^n bytes).
struct PolyLimits {
  static int subset_dp_max_n;         // matching_polynomial
  static int perfect_matching_max_n;  // count_perfect_matchings
};

// Exact per-size matching counts via a perfect-matching subset DP:
// a k-matching occupies a 2k-subset that it matches perfectly.
MatchingPolynomial matching_polynomial(const Graph& g);

// Closed form for K_n: coeffs[k] = n! / (k! (n-2k)! 2^k).
MatchingPolynomial matching_polynomial_Kn(int n);

// log sum_k coeffs[k] lambda^k, log-space stable.
double log_Z(const MatchingPolynomial& poly, double lambda);

// Same for K_n at any n, holding the coefficients as log-factorials.
double log_Z_Kn(int n, double lambda);

// Mean and variance of the matching size under the Gibbs measure on K_n.
double expected_matching_size(int n, double lambda);
double variance_matching_size(int n, double lambda);

// Limiting dimer fraction: 1 - ( sqrt(zeta^2 + 4 zeta) - zeta ) / 2.
double c_of_zeta(double zeta);

// Limit of (1/n) log Z_{K_n}(1/(zeta n)): with g = 1 - c, -(1-g)/2 - log g.
double free_energy_limit(double zeta);

// Exact perfect matching count; 0 for odd n.
BigInt count_perfect_matchings(const Graph& g);

// log (n-1)!! = log of the number of perfect matchings of K_n (n even).
double log_perfect_matchings_Kn(int n);

}  // namespace dimer
