#include "dimer/inference.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "dimer/matching_poly.hpp"

namespace dimer {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double prefactor_F(const Graph& g, double p, double q) {
  if (!(p > 0 && p < 1) || !(q > 0 && q < 1))
    throw std::invalid_argument("densities must be in (0,1)");
  if (p == q) return 0.0;
  double pairs = double(g.n()) * (g.n() - 1) / 2.0;
  return double(g.edge_count()) * std::log(p * (1 - q) / (q * (1 - p))) +
         pairs * std::log((1 - p) / (1 - q));
}

LlrResult exact_llr(const Graph& g, const ModelParams& params) {
  if (g.n() != params.n) throw std::invalid_argument("graph size mismatch");
  double F = prefactor_F(g, params.p, params.q);
  if (params.lambda_infinite()) {
    BigInt pm = count_perfect_matchings(g);
    if (pm == 0) return LlrResult{0.0, true};
    double value = F + std::log(pm.convert_to<double>()) -
                   (params.n / 2.0) * std::log(params.p) -
                   log_perfect_matchings_Kn(params.n);
    return LlrResult{value, false};
  }
  MatchingPolynomial poly = matching_polynomial(g);
  double value = F + log_Z(poly, params.lambda / params.p) -
                 log_Z_Kn(params.n, params.lambda);
  return LlrResult{value, false};
}

namespace {

std::mutex g_terms_mutex;
std::map<int, std::vector<TemplateTerm>> g_terms;

const std::vector<TemplateTerm>& series_terms(int M_max) {
  std::lock_guard<std::mutex> lock(g_terms_mutex);
  auto it = g_terms.find(M_max);
  if (it != g_terms.end()) return it->second;
  std::vector<TemplateTerm> terms;
  for (const auto& t : enumerate_templates(M_max, TemplateFilter::All))
    terms.push_back(template_weights(t));
  return g_terms.emplace(M_max, std::move(terms)).first->second;
}

double rat_to_double(const Rat& r) {
  return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
}

std::string class_label(const ClusterTemplate& t) {
  switch (classify(t)) {
    case TemplateClass::SimpleTree: return "simpleTrees";
    case TemplateClass::OneRepTree: return "oneRepTrees";
    case TemplateClass::TwoRepTree: return "twoRepTrees";
    default: return "remainder";
  }
}

}  // namespace

LlrBreakdown ce_llr(const Graph& g, const ModelParams& params, int M_max) {
  if (g.n() != params.n) throw std::invalid_argument("graph size mismatch");
  if (params.lambda_infinite())
    throw std::invalid_argument("the truncated series needs a finite lambda");
  LlrBreakdown out;
  out.F = prefactor_F(g, params.p, params.q);
  out.ce_parts = {{"simpleTrees", 0.0},
                  {"oneRepTrees", 0.0},
                  {"twoRepTrees", 0.0},
                  {"remainder", 0.0}};
  std::map<std::string, double> counts;  // support copies in g, by shape
  for (const auto& term : series_terms(M_max)) {
    ClusterTemplate sup = support(term.tmpl);
    std::string key = std::to_string(sup.v) + ";" + edges_to_string(sup);
    auto it = counts.find(key);
    if (it == counts.end())
      it = counts.emplace(key, count_simple_template(g, sup).convert_to<double>())
               .first;
    int m = term.tmpl.m();
    double w = term.ordering.convert_to<double>() * double(term.psi) *
               rat_to_double(term.ursell);
    double contrib =
        w * (std::pow(params.lambda / params.p, m) * it->second -
             std::pow(params.lambda, m) *
                 count_template_in_Kn(params.n, sup).convert_to<double>());
    out.series += contrib;
    out.ce_parts[class_label(term.tmpl)] += contrib;
  }
  out.total = out.F + out.series;
  return out;
}

namespace {

double edge_sigma(const ModelParams& mp) {
  double pairs = double(mp.n) * (mp.n - 1) / 2.0;
  return std::sqrt(pairs * mp.p * (1 - mp.p));
}

double wedge_sigma(const ModelParams& mp) {
  double n = mp.n, q = mp.q;
  double triples = n * (n - 1) * (n - 2) / 6.0;
  return std::sqrt(3.0 * triples * q * q * (1 - q * q));
}

}  // namespace

bool edge_test(const Graph& g, const ModelParams& params) {
  double stat = signed_edge_count(g, {params.q}) / edge_sigma(params);
  double thresh = params.c() / (2.0 * std::sqrt(2.0)) *
                  std::sqrt((1 - params.p) / params.p);
  return stat >= thresh;
}

bool wedge_test(const Graph& g, const ModelParams& params) {
  double stat = signed_wedge_count(g, {params.q}) / wedge_sigma(params);
  double thresh =
      -params.c() * params.c() / (2.0 * std::sqrt(2.0) * params.theta());
  return stat <= thresh;
}

GaussianPrediction llr_gaussian_prediction(const ModelParams& params,
                                           Under under) {
  double c = params.c();
  double var;
  if (params.regime == Regime::EqualAmbient) {
    var = c * c * (1 - params.p) / (2.0 * params.p);
  } else {
    double th = params.theta();
    var = c * c * c * c / (2.0 * th * th);
  }
  double mean = (under == Under::UnderNull) ? -var / 2.0 : var / 2.0;
  return GaussianPrediction{mean, var, under};
}

double theoretical_error(const ModelParams& params, TestKind test) {
  double c = params.c();
  double arg;
  if (test == TestKind::Edge) {
    arg = c / (2.0 * std::sqrt(2.0)) * std::sqrt((1 - params.p) / params.p);
  } else {
    arg = c * c / (2.0 * std::sqrt(2.0) * params.theta());
  }
  return 2.0 * normal_cdf(-arg);
}

double llr_approx_rhs(const Graph& g, const ModelParams& params) {
  if (params.regime == Regime::EqualAmbient) {
    double r = params.expected_M / params.n;
    double ratio = (1 - params.p) / params.p;
    double z = signed_edge_count(g, {params.q}) / edge_sigma(params);
    return -ratio * r * r + std::sqrt(2.0 * ratio) * r * z;
  }
  double cn = 2.0 * params.expected_M / params.n;
  double q = params.q;
  double z = signed_wedge_count(g, {params.q}) / wedge_sigma(params);
  return -std::pow(cn, 4) / (4.0 * params.n * q * q) +
         cn * cn / (std::sqrt(2.0 * params.n) * q) * z;
}

std::pair<double, double> projection_coeffs(const ClusterTemplate& t,
                                            const ModelParams& params) {
  if (classify(t) != TemplateClass::SimpleTree)
    throw std::invalid_argument("projection coefficients apply to simple trees");
  int m = t.m();
  double n = params.n, q = params.q;
  double aut = double(automorphisms(t));
  double nfall = falling_factorial(params.n, m + 1).convert_to<double>();
  double cov_edge = nfall / aut * m * std::pow(q, m) * (1 - q);
  double var_edge = n * (n - 1) / 2.0 * q * (1 - q);
  double cov_wedge = nfall / aut * double(gamma_of_tree(t)) * std::pow(q, m) *
                     (1 - q) * (1 - q);
  double var_wedge = n * (n - 1) * (n - 2) / 2.0 * q * q * (1 - q) * (1 - q);
  return {cov_edge / var_edge, cov_wedge / var_wedge};
}

double tree_count_variance(const ClusterTemplate& t, int n, double q) {
  if (classify(t) != TemplateClass::SimpleTree)
    throw std::invalid_argument("variance formula applies to simple trees");
  int m = t.m();
  double aut2 = std::pow(double(automorphisms(t)), 2);
  double lead = 2.0 * m * m * (1 - q) * std::pow(q, 2 * m - 1) *
                falling_factorial(n, m + 1).convert_to<double>() *
                falling_factorial(n, m - 1).convert_to<double>() / aut2;
  double gam = double(gamma_of_tree(t));
  double sub = 0.0;
  if (m >= 2)
    sub = 2.0 * gam * gam * (1 - q * q) * std::pow(q, 2 * m - 2) *
          falling_factorial(n, m + 1).convert_to<double>() *
          falling_factorial(n, m - 2).convert_to<double>() / aut2;
  return lead + sub;
}

FParts F_decomposition(const Graph& g, const ModelParams& params) {
  double cn = 2.0 * params.expected_M / (params.n - 1);
  double q = params.q;
  FParts f;
  f.F1 = -cn / (params.n * q) * signed_edge_count(g, {q});
  f.F2 = -cn * cn / 4.0 * (1 - q) / q;
  f.F3 = -std::pow(cn, 3) / (6.0 * params.n) * (1 - q * q) / (q * q);
  return f;
}

double planted_mean_signed_wedges(const ModelParams& params) {
  double n = params.n, p = params.p, q = params.q;
  double kappa = params.expected_M / (n * (n - 1) / 2.0);
  double triples = n * (n - 1) * (n - 2) / 6.0;
  return 3.0 * triples *
         (2.0 * kappa * (1 - q) * (p - q) + (1 - 2.0 * kappa) * (p - q) * (p - q));
}

}  // namespace dimer
