#include "dimer/matching_poly.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace dimer {

int PolyLimits::subset_dp_max_n = 26;
int PolyLimits::perfect_matching_max_n = 24;

namespace {

// Adjacency of vertex i as a bitmask.
std::vector<uint32_t> adjacency_masks(const Graph& g) {
  std::vector<uint32_t> adj(g.n(), 0);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      if (i != j && g.has(i, j)) adj[i] |= uint32_t(1) << j;
  return adj;
}

double log_double_factorial_odd(int n_minus_1) {
  // log (m-1)!! for even m: (m-1)!! = m! / (2^{m/2} (m/2)!)
  int m = n_minus_1 + 1;
  return std::lgamma(m + 1) - (m / 2) * std::log(2.0) - std::lgamma(m / 2 + 1);
}

// log m_k for K_n: m_k = n! / (k! (n-2k)! 2^k).
double log_coeff_Kn(int n, int k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - 2 * k + 1) -
         k * std::log(2.0);
}

// Gibbs size weights in log space: log m_k + k log lambda, k = 0..n/2.
std::vector<double> size_log_weights(int n, double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be finite and positive");
  std::vector<double> lw(n / 2 + 1);
  double ll = std::log(lambda);
  for (int k = 0; k <= n / 2; ++k) lw[k] = log_coeff_Kn(n, k) + k * ll;
  return lw;
}

}  // namespace

MatchingPolynomial matching_polynomial(const Graph& g) {
  int n = g.n();
  if (n > PolyLimits::subset_dp_max_n)
    throw std::invalid_argument("graph too large for the matching subset DP");
  auto adj = adjacency_masks(g);
  size_t total = size_t(1) << n;
  // pm[S] = number of perfect matchings of the induced subgraph on S.
  std::vector<uint64_t> pm(total, 0);
  pm[0] = 1;
  for (size_t s = 1; s < total; ++s) {
    if (std::popcount(s) & 1) continue;
    int v = std::countr_zero(s);
    uint32_t partners = adj[v] & uint32_t(s);
    uint64_t acc = 0;
    while (partners) {
      int u = std::countr_zero(partners);
      partners &= partners - 1;
      acc += pm[s & ~((size_t(1) << v) | (size_t(1) << u))];
    }
    pm[s] = acc;
  }
  MatchingPolynomial poly;
  poly.coeffs.assign(n / 2 + 1, 0);
  std::vector<uint64_t> by_size(n / 2 + 1, 0);
  for (size_t s = 0; s < total; ++s)
    if (pm[s]) by_size[std::popcount(s) / 2] += pm[s];
  for (int k = 0; k <= n / 2; ++k) poly.coeffs[k] = by_size[k];
  while (poly.coeffs.size() > 1 && poly.coeffs.back() == 0) poly.coeffs.pop_back();
  return poly;
}

MatchingPolynomial matching_polynomial_Kn(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  MatchingPolynomial poly;
  poly.coeffs.assign(n / 2 + 1, 0);
  BigInt c = 1;
  poly.coeffs[0] = 1;
  for (int k = 1; k <= n / 2; ++k) {
    // m_k = m_{k-1} (n-2k+2)(n-2k+1) / (2k)
    c *= (n - 2 * k + 2);
    c *= (n - 2 * k + 1);
    c /= 2 * k;
    poly.coeffs[k] = c;
  }
  return poly;
}

double log_Z(const MatchingPolynomial& poly, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
  double ll = std::log(lambda);
  double mx = -INFINITY;
  std::vector<double> logs(poly.coeffs.size(), -INFINITY);
  for (size_t k = 0; k < poly.coeffs.size(); ++k) {
    if (poly.coeffs[k] == 0) continue;
    logs[k] = std::log(poly.coeffs[k].convert_to<double>()) + double(k) * ll;
    mx = std::max(mx, logs[k]);
  }
  double acc = 0;
  for (double l : logs)
    if (std::isfinite(l)) acc += std::exp(l - mx);
  return mx + std::log(acc);
}

double log_Z_Kn(int n, double lambda) {
  auto lw = size_log_weights(n, lambda);
  double mx = *std::max_element(lw.begin(), lw.end());
  double acc = 0;
  for (double l : lw) acc += std::exp(l - mx);
  return mx + std::log(acc);
}

double expected_matching_size(int n, double lambda) {
  auto lw = size_log_weights(n, lambda);
  double mx = *std::max_element(lw.begin(), lw.end());
  double z = 0, ek = 0;
  for (int k = 0; k < int(lw.size()); ++k) {
    double w = std::exp(lw[k] - mx);
    z += w;
    ek += k * w;
  }
  return ek / z;
}

double variance_matching_size(int n, double lambda) {
  auto lw = size_log_weights(n, lambda);
  double mx = *std::max_element(lw.begin(), lw.end());
  double z = 0, ek = 0, ek2 = 0;
  for (int k = 0; k < int(lw.size()); ++k) {
    double w = std::exp(lw[k] - mx);
    z += w;
    ek += k * w;
    ek2 += double(k) * k * w;
  }
  ek /= z;
  ek2 /= z;
  return ek2 - ek * ek;
}

double c_of_zeta(double zeta) {
  if (!(zeta > 0)) throw std::invalid_argument("zeta must be positive");
  return 1.0 - (std::sqrt(zeta * zeta + 4.0 * zeta) - zeta) / 2.0;
}

double free_energy_limit(double zeta) {
  double c = c_of_zeta(zeta);
  return -c / 2.0 - std::log1p(-c);
}

BigInt count_perfect_matchings(const Graph& g) {
  int n = g.n();
  if (n % 2 == 1) return 0;
  if (n > PolyLimits::perfect_matching_max_n)
    throw std::invalid_argument("graph too large for the perfect matching DP");
  auto adj = adjacency_masks(g);
  std::unordered_map<uint32_t, uint64_t> memo;
  auto rec = [&](auto&& self, uint32_t s) -> uint64_t {
    if (s == 0) return 1;
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    int v = std::countr_zero(s);
    uint32_t partners = adj[v] & s;
    uint64_t acc = 0;
    while (partners) {
      int u = std::countr_zero(partners);
      partners &= partners - 1;
      acc += self(self, s & ~((uint32_t(1) << v) | (uint32_t(1) << u)));
    }
    memo.emplace(s, acc);
    return acc;
  };
  uint32_t full = (n == 32) ? ~uint32_t(0) : (uint32_t(1) << n) - 1;
  return BigInt(rec(rec, full));
}

double log_perfect_matchings_Kn(int n) {
  if (n % 2 == 1) throw std::invalid_argument("n must be even");
  return log_double_factorial_odd(n - 1);
}

}  // namespace dimer
