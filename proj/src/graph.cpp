#include "dimer/graph.hpp"

#include <bit>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "dimer/rng.hpp"

namespace dimer {

Graph::Graph(int n) : n_(n), words_((n + 63) / 64), edge_count_(0) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  bits_.assign(size_t(n_) * words_, 0);
}

void Graph::add_edge(int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::invalid_argument("bad edge");
  if (has(i, j)) return;
  bits_[size_t(i) * words_ + (j >> 6)] |= uint64_t(1) << (j & 63);
  bits_[size_t(j) * words_ + (i >> 6)] |= uint64_t(1) << (i & 63);
  ++edge_count_;
}

int Graph::degree(int i) const {
  int d = 0;
  const uint64_t* r = row(i);
  for (int w = 0; w < words_; ++w) d += std::popcount(r[w]);
  return d;
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

namespace {

// Row-major position over pairs (i,j), i<j, advanced by geometric skips.
struct PairCursor {
  int n, i = 0, j = 1;
  bool done = false;

  void advance(long long k) {
    while (!done && k > 0) {
      long long left = n - 1 - j;  // pairs remaining in row i after (i,j)
      if (k <= left) {
        j += int(k);
        return;
      }
      k -= left + 1;  // hop to the first pair of the next row
      ++i;
      j = i + 1;
      if (i >= n - 1) done = true;
    }
  }
};

}  // namespace

Graph sample_gnq(int n, double q, uint64_t seed) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must be in [0,1]");
  Graph g(n);
  if (q == 0.0 || n < 2) return g;
  Rng rng(seed);
  if (q >= 0.25) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(q)) g.add_edge(i, j);
    return g;
  }
  // Sparse case: jump straight to the next present pair.
  PairCursor cur{n};
  cur.advance(rng.skip_geometric(q));
  while (!cur.done) {
    g.add_edge(cur.i, cur.j);
    cur.advance(1 + rng.skip_geometric(q));
  }
  return g;
}

double signed_edge_count(const Graph& g, SignedCountParams params) {
  double pairs = double(g.n()) * (g.n() - 1) / 2.0;
  return double(g.edge_count()) - pairs * params.center;
}

double signed_wedge_count(const Graph& g, SignedCountParams params) {
  int n = g.n();
  if (n < 3) throw std::invalid_argument("wedge count needs n >= 3");
  double q = params.center;
  double total = 0;
  for (int j = 0; j < n; ++j) {
    double d = g.degree(j);
    double s = d - (n - 1) * q;                      // sum_i (A_ij - q)
    double t = d * (1 - q) * (1 - q) + (n - 1 - d) * q * q;  // sum_i (A_ij - q)^2
    total += (s * s - t) / 2.0;
  }
  return total;
}

namespace {

// Injective embeddings of the template support into g, counted by
// backtracking over template vertices in a connected order.
unsigned long long count_embeddings(const Graph& g, const ClusterTemplate& sup) {
  int tv = sup.v;
  int n = g.n();
  // Visit order: start anywhere, always extend by a vertex adjacent to the
  // already-placed prefix (the template is connected).
  std::vector<int> order;
  std::vector<char> placed(tv, 0);
  order.push_back(0);
  placed[0] = 1;
  while (int(order.size()) < tv) {
    for (int w = 0; w < tv; ++w) {
      if (placed[w]) continue;
      bool touches = false;
      for (auto [a, b] : sup.edges)
        if ((a == w && placed[b]) || (b == w && placed[a])) touches = true;
      if (touches) {
        order.push_back(w);
        placed[w] = 1;
        break;
      }
    }
  }
  // Adjacency constraints of order[k] against earlier template vertices.
  std::vector<std::vector<int>> earlier(tv);
  std::vector<int> pos(tv);
  for (int k = 0; k < tv; ++k) pos[order[k]] = k;
  for (auto [a, b] : sup.edges) {
    if (pos[a] > pos[b]) std::swap(a, b);
    earlier[pos[b]].push_back(a);
  }

  unsigned long long total = 0;
  std::vector<int> image(tv, -1);
  std::vector<char> used(n, 0);
  std::vector<std::vector<uint64_t>> cand(tv, std::vector<uint64_t>(g.words()));

  auto rec = [&](auto&& self, int k) -> void {
    if (k == tv) {
      ++total;
      return;
    }
    if (earlier[k].empty()) {
      for (int u = 0; u < n; ++u) {
        if (used[u]) continue;
        used[u] = 1;
        image[order[k]] = u;
        self(self, k + 1);
        used[u] = 0;
      }
      return;
    }
    auto& cw = cand[k];
    for (int w = 0; w < g.words(); ++w) cw[w] = ~uint64_t(0);
    for (int a : earlier[k]) {
      const uint64_t* r = g.row(image[a]);
      for (int w = 0; w < g.words(); ++w) cw[w] &= r[w];
    }
    for (int w = 0; w < g.words(); ++w) {
      uint64_t bitsw = cw[w];
      while (bitsw) {
        int u = w * 64 + std::countr_zero(bitsw);
        bitsw &= bitsw - 1;
        if (u >= n || used[u]) continue;
        used[u] = 1;
        image[order[k]] = u;
        self(self, k + 1);
        used[u] = 0;
      }
    }
  };
  rec(rec, 0);
  return total;
}

}  // namespace

BigInt count_simple_template(const Graph& g, const ClusterTemplate& t) {
  if (!is_simple(t))
    throw std::invalid_argument("subgraph counting is defined on simple templates");
  if (!is_connected(t)) throw std::invalid_argument("template must be connected");
  if (t.m() > 7) throw std::invalid_argument("template too large");
  if (t.v > g.n()) return 0;
  unsigned long long emb = count_embeddings(g, t);
  return BigInt(emb) / automorphisms(t);
}

BigInt falling_factorial(int n, int k) {
  if (k < 0) return 0;
  BigInt out = 1;
  for (int i = 0; i < k; ++i) out *= (n - i);
  return out;
}

BigInt count_template_in_Kn(int n, const ClusterTemplate& t) {
  if (!is_simple(t))
    throw std::invalid_argument("subgraph counting is defined on simple templates");
  if (t.v > n) throw std::invalid_argument("template has more vertices than K_n");
  return falling_factorial(n, t.v) / automorphisms(t);
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "n " << g.n() << "\n";
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j)
      if (g.has(i, j)) out << i + 1 << " " << j + 1 << "\n";
  return out.str();
}

Graph from_edge_list(std::istream& in) {
  std::string tag;
  int n = 0;
  if (!(in >> tag >> n) || tag != "n" || n < 1)
    throw std::invalid_argument("edge list must start with a \"n <count>\" header");
  Graph g(n);
  int i, j;
  while (in >> i >> j) {
    if (i < 1 || j < 1 || i > n || j > n || i == j)
      throw std::invalid_argument("edge list entry out of range");
    g.add_edge(i - 1, j - 1);
  }
  return g;
}

Graph from_edge_list_string(const std::string& text) {
  std::istringstream in(text);
  return from_edge_list(in);
}

}  // namespace dimer
