#pragma once

#include <map>
#include <string>

#include "dimer/models.hpp"
#include "dimer/templates.hpp"

namespace dimer {

// F(A) = |A| log[p(1-q)/(q(1-p))] + C(n,2) log[(1-q)/(1-p)]^{-1}.
// Zero when p == q.
double prefactor_F(const Graph& g, double p, double q);

// Exact log dP/dQ. For lambda = inf and a graph with no perfect matching the
// planted likelihood is zero; that is reported explicitly, not as a float -inf.
struct LlrResult {
  double value = 0;
  bool impossible = false;  // planted likelihood is exactly 0
};

LlrResult exact_llr(const Graph& g, const ModelParams& params);

struct LlrBreakdown {
  double F = 0;
  double series = 0;  // truncated template series
  double total = 0;   // F + series
  // Partial sums per shape class: simpleTrees, oneRepTrees, twoRepTrees,
  // remainder.
  std::map<std::string, double> ce_parts;
};

LlrBreakdown ce_llr(const Graph& g, const ModelParams& params, int M_max);

// Threshold tests. Edge: standardized signed edge count >= c/(2 sqrt 2) *
// sqrt((1-p)/p). Wedge: standardized signed wedge count <= -c^2/(2 sqrt 2
// theta), standardized by sqrt(3 C(n,3) q^2 (1-q^2)). Returns 1 for "planted".
bool edge_test(const Graph& g, const ModelParams& params);
bool wedge_test(const Graph& g, const ModelParams& params);

enum class Under { UnderNull, UnderPlanted };

struct GaussianPrediction {
  double mean = 0;
  double var = 0;
  Under under = Under::UnderNull;
};

// Limiting Gaussian of the log-likelihood ratio. Mean is -var/2 under the
// null and +var/2 under the planted model.
GaussianPrediction llr_gaussian_prediction(const ModelParams& params, Under under);

enum class TestKind { Edge, Wedge };

// Limiting total error: 2 Phi(-c/(2 sqrt 2) sqrt((1-p)/p)) for the edge test,
// 2 Phi(-c^2/(2 sqrt 2 theta)) for the wedge test.
double theoretical_error(const ModelParams& params, TestKind test);

// The two displayed main terms of the log-likelihood approximation
// (deterministic part plus the standardized signed count term).
double llr_approx_rhs(const Graph& g, const ModelParams& params);

// Projection coefficients of a centered simple-tree count onto the signed
// edge count (alpha) and signed wedge count (beta), under the null density.
std::pair<double, double> projection_coeffs(const ClusterTemplate& t,
                                            const ModelParams& params);

// Leading + subleading variance of the T_m subgraph count under G(n,q):
// 2 m^2 (1-q) q^{2m-1} (n)_{m+1} (n)_{m-1} / aut^2
// + 2 gamma^2 (1-q^2) q^{2m-2} (n)_{m+1} (n)_{m-2} / aut^2.
double tree_count_variance(const ClusterTemplate& t, int n, double q);

struct FParts {
  double F1 = 0;  // -(c_n/(n q)) * signed edge count
  double F2 = 0;  // -(c_n^2/4) (1-q)/q
  double F3 = 0;  // -(c_n^3/(6n)) (1-q^2)/q^2
  double sum() const { return F1 + F2 + F3; }
};

// Decomposition of F(A) in the equal-average regime, c_n = 2 E|M| / (n-1).
FParts F_decomposition(const Graph& g, const ModelParams& params);

// Exact mean of the signed wedge count (centered at q) under the planted
// model: 3 C(n,3) [ 2 kappa (1-q)(p-q) + (1-2 kappa)(p-q)^2 ] with
// kappa = E|M| / C(n,2). The asymptotic form is -2 (E|M|)^2 / n.
double planted_mean_signed_wedges(const ModelParams& params);

double normal_cdf(double x);

}  // namespace dimer
