#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "dimer/cluster_template.hpp"
#include "dimer/graph.hpp"

namespace dimer {

using Rat = boost::rational<BigInt>;

// Incompatibility graph on the m edge-slots of a cluster: slots are adjacent
// iff the underlying edges share an endpoint (parallel copies always do).
// For a simple template this is the line graph.
struct IncompatibilityGraph {
  int m = 0;
  std::vector<uint32_t> adj;  // bitmask rows, m <= 31

  bool has(int i, int j) const { return (adj[i] >> j) & 1u; }
};

IncompatibilityGraph incompatibility_graph(const ClusterTemplate& t);
IncompatibilityGraph make_incompat_graph(int m,
                                         const std::vector<std::pair<int, int>>& edges);

enum class TemplateFilter { All, SimpleTrees, OneRepTrees, TwoRepTrees, SimpleCyclic };

// One row of the reorganized series: the per-template series contribution is
// ordering * psi * ursell * lambda^m * (support count).
struct TemplateTerm {
  ClusterTemplate tmpl;
  Rat ursell;         // phi of the incompatibility graph, exact
  long long psi;      // placements of the repeated edges on the support
  long long aut;      // vertex automorphisms of the multigraph
  BigInt ordering;    // m! / prod(multiplicity!)
};

inline constexpr int kMaxTemplateEdges = 7;

// All isomorphism classes of connected multigraphs with total edge
// multiplicity <= max_edges, deterministic canonical order.
std::vector<ClusterTemplate> enumerate_templates(int max_edges, TemplateFilter filter);

// phi(H): 1 for a single vertex, else (1/m!) sum over connected spanning
// subgraphs S of (-1)^{|S|}; 0 when H is disconnected.
Rat ursell(const IncompatibilityGraph& h);

TemplateTerm template_weights(const ClusterTemplate& t);

// Matrix-tree determinant over exact integers.
BigInt spanning_tree_count(const IncompatibilityGraph& h);

// |sum over connected spanning subgraphs of (-1)^{|S|}| <= #spanning trees.
bool penrose_check(const IncompatibilityGraph& h);

// Signed connected-spanning-subgraph sum (the numerator of m! * phi).
BigInt connected_spanning_signed_sum(const IncompatibilityGraph& h);

// Truncated series. Remainder is 1/n for lambda <= 1/(30n) when M_max reaches
// 2 log n; below that the documented Penrose tail estimate applies.
double ce_log_Z_Kn(int n, double lambda, int M_max);
double ce_log_Z_A(const Graph& g, double lambda, double p, int M_max);
double ce_expected_M(int n, double lambda, int M_max, bool trees_only);

// Upper bound on the dropped tail of the truncated log Z series:
// (n/2) * sum_{m > M_max} (e lambda (2n-3))^m.
double ce_truncation_tail_bound(int n, double lambda, int M_max);

enum class UrsellIdentity { OneRepConvolution, WedgeMarked, TripleEdge };

struct IdentityReport {
  bool equal;
  Rat lhs;
  Rat rhs;
};

// Exact-rational verification of the three tree convolution identities.
IdentityReport verify_ursell_identity(UrsellIdentity which, int m);

// Sum over connected subgraphs alpha of K_n with >= 1 edge and
// |V(alpha)| <= v_max of (k/n)^{2 |V(alpha)|}.
double planted_clique_partial_kl(int n, double k, int v_max);

// Number of ways to superimpose a wedge: sum_v C(deg(v), 2).
long long gamma_of_tree(const ClusterTemplate& t);

// "m=<m> v=<v> edges=<canonical multiset> psi=<psi> aut=<aut> ordering=<o>
//  ursell=<num>/<den>"
std::string dump_template(const TemplateTerm& term);

}  // namespace dimer
