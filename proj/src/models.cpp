#include "dimer/models.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dimer/matching_poly.hpp"
#include "dimer/rng.hpp"

namespace dimer {

namespace {

void check_np(int n, double p) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must be in (0,1)");
}

double exact_expected_M(int n, double lambda) {
  if (lambda == kLambdaInf) {
    if (n % 2 == 1)
      throw std::invalid_argument("lambda = inf needs an even vertex count");
    return n / 2.0;
  }
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
  return expected_matching_size(n, lambda);
}

std::string fmt(double x) {
  if (x == kLambdaInf) return "inf";
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

double parse_double(const std::string& s) {
  if (s == "inf") return kLambdaInf;
  return std::stod(s);
}

}  // namespace

double q_from_p(int n, double p, double lambda) {
  check_np(n, p);
  double em = exact_expected_M(n, lambda);
  double pairs = double(n) * (n - 1) / 2.0;
  return p + em * (1.0 - p) / pairs;
}

ModelParams ModelParams::equal_ambient(int n, double p, double lambda) {
  check_np(n, p);
  ModelParams mp;
  mp.n = n;
  mp.p = p;
  mp.q = p;
  mp.lambda = lambda;
  mp.regime = Regime::EqualAmbient;
  mp.expected_M = exact_expected_M(n, lambda);
  return mp;
}

ModelParams ModelParams::equal_average(int n, double p, double lambda) {
  check_np(n, p);
  ModelParams mp;
  mp.n = n;
  mp.p = p;
  mp.q = q_from_p(n, p, lambda);
  mp.lambda = lambda;
  mp.regime = Regime::EqualAverage;
  mp.expected_M = exact_expected_M(n, lambda);
  return mp;
}

double ModelParams::theta() const { return p * std::sqrt(double(n)); }

double ModelParams::c() const {
  return lambda_infinite() ? 1.0 : c_of_zeta(zeta());
}

std::string ModelParams::to_config() const {
  std::ostringstream out;
  out << "n = " << n << "\n"
      << "p = " << fmt(p) << "\n"
      << "q = " << fmt(q) << "\n"
      << "lambda = " << fmt(lambda) << "\n"
      << "regime = "
      << (regime == Regime::EqualAmbient ? "equal_ambient" : "equal_average")
      << "\n"
      << "expected_M = " << fmt(expected_M) << "\n";
  return out.str();
}

ModelParams ModelParams::from_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const char* key : {"n", "p", "q", "lambda", "regime", "expected_M"})
    if (!kv.count(key))
      throw std::invalid_argument(std::string("config missing key: ") + key);
  ModelParams mp;
  mp.n = std::stoi(kv["n"]);
  mp.p = parse_double(kv["p"]);
  mp.q = parse_double(kv["q"]);
  mp.lambda = parse_double(kv["lambda"]);
  if (kv["regime"] == "equal_ambient") mp.regime = Regime::EqualAmbient;
  else if (kv["regime"] == "equal_average") mp.regime = Regime::EqualAverage;
  else throw std::invalid_argument("unknown regime: " + kv["regime"]);
  mp.expected_M = parse_double(kv["expected_M"]);
  return mp;
}

namespace {

// Uniform matching of size k: pick 2k vertices by partial shuffle, pair the
// shuffled prefix consecutively (every pairing has the same number of
// preimage orders).
Matching uniform_matching_of_size(int n, int k, Rng& rng) {
  std::vector<int> verts(n);
  for (int i = 0; i < n; ++i) verts[i] = i;
  for (int i = 0; i < 2 * k; ++i) {
    int j = i + int(rng.uniform_int(uint64_t(n - i)));
    std::swap(verts[i], verts[j]);
  }
  Matching m;
  m.reserve(k);
  for (int i = 0; i < k; ++i) {
    int a = verts[2 * i], b = verts[2 * i + 1];
    if (a > b) std::swap(a, b);
    m.emplace_back(a, b);
  }
  std::sort(m.begin(), m.end());
  return m;
}

}  // namespace

Matching sample_matching_gibbs(int n, double lambda, uint64_t seed) {
  if (lambda == kLambdaInf) return sample_uniform_perfect_matching(n, seed);
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
  Rng rng(seed);
  // P(|M| = k) proportional to m_k lambda^k.
  int kmax = n / 2;
  std::vector<double> lw(kmax + 1);
  double ll = std::log(lambda);
  for (int k = 0; k <= kmax; ++k)
    lw[k] = std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - 2 * k + 1) -
            k * std::log(2.0) + k * ll;
  double mx = *std::max_element(lw.begin(), lw.end());
  std::vector<double> w(kmax + 1);
  double tot = 0;
  for (int k = 0; k <= kmax; ++k) tot += (w[k] = std::exp(lw[k] - mx));
  double u = rng.uniform() * tot;
  int k = kmax;
  for (int i = 0; i <= kmax; ++i) {
    if (u < w[i]) {
      k = i;
      break;
    }
    u -= w[i];
  }
  return uniform_matching_of_size(n, k, rng);
}

Matching sample_uniform_perfect_matching(int n, uint64_t seed) {
  if (n % 2 == 1)
    throw std::invalid_argument("a perfect matching needs an even vertex count");
  Rng rng(seed);
  return uniform_matching_of_size(n, n / 2, rng);
}

PlantedSample sample_planted(const ModelParams& params, uint64_t seed) {
  Matching hidden =
      sample_matching_gibbs(params.n, params.lambda, hash64(seed, 1, 0));
  Graph g = sample_gnq(params.n, params.p, hash64(seed, 2, 0));
  for (auto [a, b] : hidden) g.add_edge(a, b);
  return PlantedSample{std::move(g), std::move(hidden)};
}

Graph sample_null(const ModelParams& params, uint64_t seed) {
  return sample_gnq(params.n, params.q, hash64(seed, 3, 0));
}

}  // namespace dimer
