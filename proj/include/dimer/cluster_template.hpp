#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dimer {

// Unlabeled connected multigraph, the index set of the reorganized cluster
// expansion. Edges are unordered pairs over {0..v-1}, stored sorted and
// possibly repeated. Instances are kept in canonical form: the lexicographically
// minimal edge list over all vertex relabelings (v <= 8, brute force).
struct ClusterTemplate {
  int v = 0;
  std::vector<std::pair<int, int>> edges;  // sorted; repeats encode multiplicity

  int m() const { return static_cast<int>(edges.size()); }

  bool operator==(const ClusterTemplate& o) const {
    return v == o.v && edges == o.edges;
  }
  bool operator<(const ClusterTemplate& o) const {
    if (m() != o.m()) return m() < o.m();
    if (v != o.v) return v < o.v;
    return edges < o.edges;
  }
};

// Broad shape classes used to split the log-likelihood series.
enum class TemplateClass {
  SimpleTree,      // no repeated edge, support is a tree
  OneRepTree,      // support tree, exactly one edge doubled
  TwoRepTree,      // support tree, two extra copies (two doubles or one triple)
  SimpleCyclic,    // no repeated edge, contains a cycle
  Other,
};

ClusterTemplate make_template(int v, std::vector<std::pair<int, int>> edges);
ClusterTemplate canonicalize(const ClusterTemplate& t);

// Distinct edges only, multiplicities dropped.
ClusterTemplate support(const ClusterTemplate& t);

// Multiplicity of each distinct edge, aligned with support(t).edges.
std::vector<int> edge_multiplicities(const ClusterTemplate& t);

bool is_connected(const ClusterTemplate& t);
bool is_simple(const ClusterTemplate& t);
TemplateClass classify(const ClusterTemplate& t);

// Vertex automorphisms of the multigraph (permutations preserving the edge
// multiset with multiplicity).
long long automorphisms(const ClusterTemplate& t);

// True if the one edge of t carries multiplicity exactly 3 and the rest 1,
// with tree support. Needed for one of the convolution identities.
bool is_triple_rep_tree(const ClusterTemplate& t);

std::string edges_to_string(const ClusterTemplate& t);

}  // namespace dimer
