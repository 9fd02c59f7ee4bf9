#include "dimer/cluster_template.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dimer {

namespace {

std::vector<std::pair<int, int>> apply_perm(
    const std::vector<std::pair<int, int>>& edges, const std::vector<int>& perm) {
  std::vector<std::pair<int, int>> out;
  out.reserve(edges.size());
  for (auto [a, b] : edges) {
    int x = perm[a], y = perm[b];
    if (x > y) std::swap(x, y);
    out.emplace_back(x, y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ClusterTemplate make_template(int v, std::vector<std::pair<int, int>> edges) {
  for (auto& [a, b] : edges) {
    if (a == b) throw std::invalid_argument("template has a self-loop");
    if (a < 0 || b < 0 || a >= v || b >= v)
      throw std::invalid_argument("template edge endpoint out of range");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  ClusterTemplate t{v, std::move(edges)};
  return canonicalize(t);
}

ClusterTemplate canonicalize(const ClusterTemplate& t) {
  std::vector<int> perm(t.v);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::pair<int, int>> best = apply_perm(t.edges, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    auto cand = apply_perm(t.edges, perm);
    if (cand < best) best = std::move(cand);
  }
  return ClusterTemplate{t.v, std::move(best)};
}

ClusterTemplate support(const ClusterTemplate& t) {
  ClusterTemplate s{t.v, t.edges};
  s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());
  return s;
}

std::vector<int> edge_multiplicities(const ClusterTemplate& t) {
  std::vector<int> mult;
  for (size_t i = 0; i < t.edges.size();) {
    size_t j = i;
    while (j < t.edges.size() && t.edges[j] == t.edges[i]) ++j;
    mult.push_back(int(j - i));
    i = j;
  }
  return mult;
}

bool is_connected(const ClusterTemplate& t) {
  if (t.v == 0) return false;
  std::vector<int> stack{0};
  unsigned seen = 1u;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (auto [a, b] : t.edges) {
      int w = -1;
      if (a == u) w = b;
      else if (b == u) w = a;
      if (w >= 0 && !((seen >> w) & 1u)) {
        seen |= 1u << w;
        stack.push_back(w);
      }
    }
  }
  return seen == (1u << t.v) - 1u;
}

bool is_simple(const ClusterTemplate& t) {
  return std::adjacent_find(t.edges.begin(), t.edges.end()) == t.edges.end();
}

TemplateClass classify(const ClusterTemplate& t) {
  ClusterTemplate sup = support(t);
  int se = sup.m();
  bool tree = (se == t.v - 1);  // connected support with v-1 edges
  if (is_simple(t)) {
    if (tree) return TemplateClass::SimpleTree;
    return TemplateClass::SimpleCyclic;
  }
  if (!tree) return TemplateClass::Other;
  int extra = t.m() - se;
  if (extra == 1) return TemplateClass::OneRepTree;
  if (extra == 2) return TemplateClass::TwoRepTree;
  return TemplateClass::Other;
}

long long automorphisms(const ClusterTemplate& t) {
  std::vector<int> perm(t.v);
  std::iota(perm.begin(), perm.end(), 0);
  long long count = 0;
  do {
    if (apply_perm(t.edges, perm) == t.edges) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

bool is_triple_rep_tree(const ClusterTemplate& t) {
  auto mult = edge_multiplicities(t);
  int triples = 0, singles = 0;
  for (int m : mult) {
    if (m == 3) ++triples;
    else if (m == 1) ++singles;
    else return false;
  }
  if (triples != 1) return false;
  return support(t).m() == t.v - 1;
}

std::string edges_to_string(const ClusterTemplate& t) {
  std::ostringstream out;
  for (size_t i = 0; i < t.edges.size(); ++i) {
    if (i) out << ",";
    out << t.edges[i].first + 1 << "-" << t.edges[i].second + 1;
  }
  return out.str();
}

}  // namespace dimer
