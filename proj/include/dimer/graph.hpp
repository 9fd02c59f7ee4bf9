#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dimer/cluster_template.hpp"

namespace dimer {

using BigInt = boost::multiprecision::cpp_int;

// Simple undirected graph on n labeled vertices (0-indexed internally,
// 1-indexed in the text serialization). Adjacency is stored as n bit-rows so
// neighborhood intersections are word-parallel. Immutable after construction
// by convention; safe to share across threads.
class Graph {
 public:
  explicit Graph(int n);

  int n() const { return n_; }
  long long edge_count() const { return edge_count_; }

  bool has(int i, int j) const {
    return (row(i)[j >> 6] >> (j & 63)) & 1u;
  }
  void add_edge(int i, int j);
  int degree(int i) const;

  const uint64_t* row(int i) const { return bits_.data() + size_t(i) * words_; }
  int words() const { return words_; }

  static Graph complete(int n);

 private:
  int n_;
  int words_;
  long long edge_count_;
  std::vector<uint64_t> bits_;
};

struct SignedCountParams {
  double center;  // centering density in (0,1)
};

// G(n,q): each of the C(n,2) pairs present independently with probability q.
// Deterministic per (n, q, seed).
Graph sample_gnq(int n, double q, uint64_t seed);

// Sum over unordered pairs of (A_ij - center). Equals |A| - C(n,2)*center.
double signed_edge_count(const Graph& g, SignedCountParams params);

// Sum over paths i-j-k of (A_ij - center)(A_jk - center), computed in O(n^2)
// from per-vertex centered degree sums.
double signed_wedge_count(const Graph& g, SignedCountParams params);

// Number of subgraphs of g isomorphic to the (simple, connected) template:
// injective embeddings divided by aut. Exact.
BigInt count_simple_template(const Graph& g, const ClusterTemplate& t);

// Same count in the complete graph: (n)_v / aut(t). Exact.
BigInt count_template_in_Kn(int n, const ClusterTemplate& t);

// Edge-list text format: header "n <n>", then one "i j" pair per line,
// 1-indexed.
std::string to_edge_list(const Graph& g);
Graph from_edge_list(std::istream& in);
Graph from_edge_list_string(const std::string& text);

// A matching as a sorted list of disjoint (i,j) pairs with i<j.
using Matching = std::vector<std::pair<int, int>>;

BigInt falling_factorial(int n, int k);

}  // namespace dimer
