#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

#include "dimer/graph.hpp"
#include "dimer/rng.hpp"

using namespace dimer;

namespace {

// Reference subgraph count: injections of the template into g, divided by
// the automorphism count.
long long brute_count(const Graph& g, const ClusterTemplate& t) {
  std::vector<int> verts(g.n());
  std::iota(verts.begin(), verts.end(), 0);
  long long inj = 0;
  std::vector<int> image(t.v);
  std::vector<char> used(g.n(), 0);
  auto rec = [&](auto&& self, int k) -> void {
    if (k == t.v) {
      for (auto [a, b] : t.edges)
        if (!g.has(image[a], image[b])) return;
      ++inj;
      return;
    }
    for (int u = 0; u < g.n(); ++u) {
      if (used[u]) continue;
      used[u] = 1;
      image[k] = u;
      self(self, k + 1);
      used[u] = 0;
    }
  };
  rec(rec, 0);
  return inj / automorphisms(t);
}

double brute_wedges(const Graph& g, double q) {
  double total = 0;
  int n = g.n();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) {
        if (i == j || k == j) continue;
        total += ((g.has(i, j) ? 1.0 : 0.0) - q) * ((g.has(j, k) ? 1.0 : 0.0) - q);
      }
  return total;
}

}  // namespace

TEST_CASE("graph basics") {
  Graph g(5);
  CHECK(g.edge_count() == 0);
  g.add_edge(0, 1);
  g.add_edge(1, 0);  // duplicate is a no-op
  g.add_edge(2, 4);
  CHECK(g.edge_count() == 2);
  CHECK(g.has(1, 0));
  CHECK(!g.has(0, 2));
  CHECK(g.degree(1) == 1);
  CHECK_THROWS_AS(g.add_edge(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 5), std::invalid_argument);

  Graph k = Graph::complete(7);
  CHECK(k.edge_count() == 21);
  for (int i = 0; i < 7; ++i) CHECK(k.degree(i) == 6);
}

TEST_CASE("gnq boundary densities") {
  CHECK(sample_gnq(40, 0.0, 1).edge_count() == 0);
  CHECK(sample_gnq(40, 1.0, 1).edge_count() == 40 * 39 / 2);
  CHECK_THROWS_AS(sample_gnq(10, -0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_gnq(10, 1.1, 1), std::invalid_argument);
}

TEST_CASE("gnq determinism and density") {
  Graph a = sample_gnq(60, 0.1, 99);
  Graph b = sample_gnq(60, 0.1, 99);
  CHECK(a.edge_count() == b.edge_count());
  for (int i = 0; i < 60; ++i)
    for (int j = i + 1; j < 60; ++j) CHECK(a.has(i, j) == b.has(i, j));

  // both sampling paths hit the right density; 0.1 uses geometric skips,
  // 0.5 the plain Bernoulli loop
  for (double q : {0.1, 0.5}) {
    double total = 0;
    int trials = 200, n = 50;
    for (int t = 0; t < trials; ++t)
      total += sample_gnq(n, q, 1000 + t).edge_count();
    double pairs = n * (n - 1) / 2.0;
    double mean = total / trials;
    double sd = std::sqrt(pairs * q * (1 - q) / trials);
    CHECK(std::abs(mean - pairs * q) < 5 * sd);
  }
}

TEST_CASE("signed edge count") {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  CHECK(signed_edge_count(g, {0.5}) == doctest::Approx(2 - 6 * 0.5));
  CHECK(signed_edge_count(g, {0.0}) == doctest::Approx(2));
}

TEST_CASE("signed wedge count matches brute force") {
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = sample_gnq(12, 0.3, 77 + trial);
    double q = 0.2 + 0.05 * trial;
    CHECK(signed_wedge_count(g, {q}) ==
          doctest::Approx(brute_wedges(g, q)).epsilon(1e-10));
  }
}

TEST_CASE("template counts in K_n") {
  auto edge = make_template(2, {{0, 1}});
  auto wedge = make_template(3, {{0, 1}, {1, 2}});
  auto triangle = make_template(3, {{0, 1}, {1, 2}, {0, 2}});
  auto star3 = make_template(4, {{0, 1}, {0, 2}, {0, 3}});
  auto path3 = make_template(4, {{0, 1}, {1, 2}, {2, 3}});
  int n = 9;
  auto c = [](long long a, int b) {
    long long r = 1;
    for (int i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
    return r;
  };
  CHECK(count_template_in_Kn(n, edge) == c(n, 2));
  CHECK(count_template_in_Kn(n, wedge) == 3 * c(n, 3));
  CHECK(count_template_in_Kn(n, triangle) == c(n, 3));
  CHECK(count_template_in_Kn(n, star3) == 4 * c(n, 4));
  CHECK(count_template_in_Kn(n, path3) == 12 * c(n, 4));
}

TEST_CASE("template counting matches brute force on random graphs") {
  std::vector<ClusterTemplate> shapes = {
      make_template(2, {{0, 1}}),
      make_template(3, {{0, 1}, {1, 2}}),
      make_template(3, {{0, 1}, {1, 2}, {0, 2}}),
      make_template(4, {{0, 1}, {1, 2}, {2, 3}}),
      make_template(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}),
      make_template(4, {{0, 1}, {0, 2}, {0, 3}}),
      make_template(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}),
  };
  for (int trial = 0; trial < 6; ++trial) {
    Graph g = sample_gnq(7, 0.5, 500 + trial);
    for (const auto& t : shapes)
      CHECK(count_simple_template(g, t) == brute_count(g, t));
  }
  // complete-graph cross-check
  Graph k7 = Graph::complete(7);
  for (const auto& t : shapes)
    CHECK(count_simple_template(k7, t) == count_template_in_Kn(7, t));
}

TEST_CASE("template counting rejects multigraphs") {
  Graph g = Graph::complete(4);
  auto doubled = make_template(2, {{0, 1}, {0, 1}});
  CHECK_THROWS_AS(count_simple_template(g, doubled), std::invalid_argument);
}

TEST_CASE("edge list round trip") {
  Graph g = sample_gnq(15, 0.3, 42);
  Graph h = from_edge_list_string(to_edge_list(g));
  CHECK(h.n() == g.n());
  CHECK(h.edge_count() == g.edge_count());
  for (int i = 0; i < 15; ++i)
    for (int j = i + 1; j < 15; ++j) CHECK(g.has(i, j) == h.has(i, j));

  CHECK_THROWS_AS(from_edge_list_string("3\n1 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(from_edge_list_string("n 3\n1 4\n"), std::invalid_argument);
  CHECK_THROWS_AS(from_edge_list_string("n 3\n2 2\n"), std::invalid_argument);
}

TEST_CASE("falling factorial") {
  CHECK(falling_factorial(10, 3) == 720);
  CHECK(falling_factorial(5, 0) == 1);
  CHECK(falling_factorial(4, 5) == 0);
}
