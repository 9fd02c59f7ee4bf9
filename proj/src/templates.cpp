#include "dimer/templates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dimer {

namespace {

BigInt fact(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double to_double(const Rat& r) {
  return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
}

std::string serialize(const ClusterTemplate& t) {
  return "v" + std::to_string(t.v) + ";" + edges_to_string(t);
}

}  // namespace

IncompatibilityGraph incompatibility_graph(const ClusterTemplate& t) {
  int m = t.m();
  if (m > 31) throw std::invalid_argument("too many edge slots");
  IncompatibilityGraph h;
  h.m = m;
  h.adj.assign(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      auto [a, b] = t.edges[i];
      auto [c, d] = t.edges[j];
      if (a == c || a == d || b == c || b == d) {
        h.adj[i] |= uint32_t(1) << j;
        h.adj[j] |= uint32_t(1) << i;
      }
    }
  return h;
}

IncompatibilityGraph make_incompat_graph(
    int m, const std::vector<std::pair<int, int>>& edges) {
  if (m < 1 || m > 31) throw std::invalid_argument("slot count out of range");
  IncompatibilityGraph h;
  h.m = m;
  h.adj.assign(m, 0);
  for (auto [i, j] : edges) {
    if (i == j || i < 0 || j < 0 || i >= m || j >= m)
      throw std::invalid_argument("bad slot pair");
    h.adj[i] |= uint32_t(1) << j;
    h.adj[j] |= uint32_t(1) << i;
  }
  return h;
}

namespace {

// Signed sum over connected spanning subgraphs of the induced graph on
// vertex set S, by peeling the component of the lowest vertex:
//   A(S) = sum_{W contains v0} C(W) A(S \ W),  A(S) = [no edges inside S].
BigInt connected_signed_sum_masked(const IncompatibilityGraph& h, uint32_t full) {
  int m = h.m;
  std::vector<BigInt> c(size_t(1) << m, 0);
  auto edgeless = [&](uint32_t s) {
    for (uint32_t t = s; t;) {
      int i = std::countr_zero(t);
      t &= t - 1;
      if (h.adj[i] & s) return false;
    }
    return true;
  };
  // iterate subsets of full in increasing order; c only needed on submasks
  for (uint32_t s = 1; s <= full; ++s) {
    if ((s & full) != s) continue;
    uint32_t v0 = uint32_t(1) << std::countr_zero(s);
    if (s == v0) {
      c[s] = 1;
      continue;
    }
    BigInt acc = edgeless(s) ? 1 : 0;
    // proper submasks W of s with v0 in W
    uint32_t rest = s & ~v0;
    for (uint32_t w = (rest - 1) & rest;; w = (w - 1) & rest) {
      uint32_t comp = (w | v0);
      uint32_t out = s & ~comp;  // nonempty since w proper
      if (edgeless(out)) acc -= c[comp];
      if (w == 0) break;
    }
    c[s] = acc;
  }
  return c[full];
}

}  // namespace

BigInt connected_spanning_signed_sum(const IncompatibilityGraph& h) {
  uint32_t full = (uint32_t(1) << h.m) - 1;
  return connected_signed_sum_masked(h, full);
}

Rat ursell(const IncompatibilityGraph& h) {
  if (h.m == 1) return Rat(1);
  return Rat(connected_spanning_signed_sum(h), fact(h.m));
}

BigInt spanning_tree_count(const IncompatibilityGraph& h) {
  int m = h.m;
  if (m == 1) return 1;
  // Bareiss fraction-free elimination on a Laplacian minor.
  int d = m - 1;
  std::vector<std::vector<BigInt>> a(d, std::vector<BigInt>(d, 0));
  for (int i = 0; i < d; ++i) {
    int deg = 0;
    for (int j = 0; j < m; ++j)
      if (h.has(i, j)) ++deg;
    a[i][i] = deg;
    for (int j = 0; j < d; ++j)
      if (i != j && h.has(i, j)) a[i][j] = -1;
  }
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < d - 1; ++k) {
    if (a[k][k] == 0) {
      int piv = -1;
      for (int r = k + 1; r < d; ++r)
        if (a[r][k] != 0) {
          piv = r;
          break;
        }
      if (piv < 0) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < d; ++i)
      for (int j = k + 1; j < d; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign > 0 ? a[d - 1][d - 1] : -a[d - 1][d - 1];
}

bool penrose_check(const IncompatibilityGraph& h) {
  BigInt s = connected_spanning_signed_sum(h);
  if (s < 0) s = -s;
  return s <= spanning_tree_count(h);
}

namespace {

std::mutex g_enum_mutex;
std::map<int, std::vector<ClusterTemplate>> g_enum_cache;

bool template_less(const ClusterTemplate& a, const ClusterTemplate& b) {
  if (a.m() != b.m()) return a.m() < b.m();
  if (a.v != b.v) return a.v < b.v;
  return a.edges < b.edges;
}

std::vector<ClusterTemplate> enumerate_all(int max_edges) {
  std::vector<ClusterTemplate> out;
  std::set<std::string> seen;
  std::vector<ClusterTemplate> frontier;
  ClusterTemplate base = make_template(2, {{0, 1}});
  out.push_back(base);
  seen.insert(serialize(base));
  frontier.push_back(base);
  for (int m = 2; m <= max_edges; ++m) {
    std::vector<ClusterTemplate> next;
    for (const auto& t : frontier) {
      auto push = [&](int v, std::vector<std::pair<int, int>> edges) {
        ClusterTemplate c = make_template(v, std::move(edges));
        auto key = serialize(c);
        if (seen.insert(key).second) {
          next.push_back(c);
          out.push_back(c);
        }
      };
      // another copy of an edge, or a new edge between existing vertices
      for (int a = 0; a < t.v; ++a)
        for (int b = a + 1; b < t.v; ++b) {
          auto edges = t.edges;
          edges.emplace_back(a, b);
          push(t.v, std::move(edges));
        }
      // pendant edge to a fresh vertex
      for (int a = 0; a < t.v; ++a) {
        auto edges = t.edges;
        edges.emplace_back(a, t.v);
        push(t.v + 1, std::move(edges));
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end(), template_less);
  return out;
}

const std::vector<ClusterTemplate>& cached_templates(int max_edges) {
  std::lock_guard<std::mutex> lock(g_enum_mutex);
  auto it = g_enum_cache.find(max_edges);
  if (it == g_enum_cache.end())
    it = g_enum_cache.emplace(max_edges, enumerate_all(max_edges)).first;
  return it->second;
}

bool passes_filter(const ClusterTemplate& t, TemplateFilter f) {
  switch (f) {
    case TemplateFilter::All: return true;
    case TemplateFilter::SimpleTrees: return classify(t) == TemplateClass::SimpleTree;
    case TemplateFilter::OneRepTrees: return classify(t) == TemplateClass::OneRepTree;
    case TemplateFilter::TwoRepTrees: return classify(t) == TemplateClass::TwoRepTree;
    case TemplateFilter::SimpleCyclic: return classify(t) == TemplateClass::SimpleCyclic;
  }
  return false;
}

}  // namespace

std::vector<ClusterTemplate> enumerate_templates(int max_edges,
                                                 TemplateFilter filter) {
  if (max_edges < 1 || max_edges > kMaxTemplateEdges)
    throw std::invalid_argument("max_edges out of range");
  const auto& all = cached_templates(max_edges);
  std::vector<ClusterTemplate> out;
  for (const auto& t : all)
    if (t.m() <= max_edges && passes_filter(t, filter)) out.push_back(t);
  return out;
}

namespace {

long long compute_psi(const ClusterTemplate& t) {
  ClusterTemplate sup = support(t);
  std::vector<int> mult = edge_multiplicities(t);
  std::sort(mult.begin(), mult.end());
  long long psi = 0;
  do {
    std::vector<std::pair<int, int>> edges;
    for (size_t i = 0; i < sup.edges.size(); ++i)
      for (int r = 0; r < mult[i]; ++r) edges.push_back(sup.edges[i]);
    ClusterTemplate cand = make_template(t.v, std::move(edges));
    if (cand.edges == t.edges) ++psi;
  } while (std::next_permutation(mult.begin(), mult.end()));
  return psi;
}

}  // namespace

TemplateTerm template_weights(const ClusterTemplate& raw) {
  ClusterTemplate t = canonicalize(raw);
  if (!is_connected(t)) throw std::invalid_argument("template must be connected");
  TemplateTerm term;
  term.ursell = ursell(incompatibility_graph(t));
  term.psi = compute_psi(t);
  term.aut = automorphisms(t);
  BigInt ord = fact(t.m());
  for (int mu : edge_multiplicities(t)) ord /= fact(mu);
  term.ordering = ord;
  term.tmpl = std::move(t);
  return term;
}

namespace {

// ordering * psi * ursell per template, cached by edge budget.
std::mutex g_terms_mutex;
std::map<int, std::vector<TemplateTerm>> g_terms;

const std::vector<TemplateTerm>& cached_terms(int max_edges) {
  std::lock_guard<std::mutex> lock(g_terms_mutex);
  auto it = g_terms.find(max_edges);
  if (it != g_terms.end()) return it->second;
  std::vector<TemplateTerm> terms;
  for (const auto& t : cached_templates(max_edges))
    if (t.m() <= max_edges) terms.push_back(template_weights(t));
  return g_terms.emplace(max_edges, std::move(terms)).first->second;
}

double term_weight(const TemplateTerm& term) {
  return term.ordering.convert_to<double>() * double(term.psi) *
         to_double(term.ursell);
}

}  // namespace

double ce_log_Z_Kn(int n, double lambda, int M_max) {
  if (!(lambda > 0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be finite and positive");
  double total = 0;
  for (const auto& term : cached_terms(M_max)) {
    ClusterTemplate sup = support(term.tmpl);
    double cnt = count_template_in_Kn(n, sup).convert_to<double>();
    total += term_weight(term) * std::pow(lambda, term.tmpl.m()) * cnt;
  }
  return total;
}

double ce_log_Z_A(const Graph& g, double lambda, double p, int M_max) {
  if (!(lambda > 0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be finite and positive");
  if (!(p > 0 && p <= 1)) throw std::invalid_argument("p must be in (0,1]");
  // series for log Z_A at activity lambda / p
  std::map<std::string, double> support_counts;
  double total = 0;
  for (const auto& term : cached_terms(M_max)) {
    ClusterTemplate sup = support(term.tmpl);
    auto key = serialize(sup);
    auto it = support_counts.find(key);
    if (it == support_counts.end())
      it = support_counts
               .emplace(key, count_simple_template(g, sup).convert_to<double>())
               .first;
    total += term_weight(term) * std::pow(lambda / p, term.tmpl.m()) * it->second;
  }
  return total;
}

double ce_expected_M(int n, double lambda, int M_max, bool trees_only) {
  if (!(lambda > 0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be finite and positive");
  double total = 0;
  for (const auto& term : cached_terms(M_max)) {
    if (trees_only && classify(term.tmpl) != TemplateClass::SimpleTree) continue;
    ClusterTemplate sup = support(term.tmpl);
    double cnt = count_template_in_Kn(n, sup).convert_to<double>();
    int m = term.tmpl.m();
    total += m * term_weight(term) * std::pow(lambda, m) * cnt;
  }
  return total;
}

double ce_truncation_tail_bound(int n, double lambda, int M_max) {
  double x = std::exp(1.0) * lambda * (2.0 * n - 3.0);
  if (x >= 1.0) return INFINITY;
  return (n / 2.0) * std::pow(x, M_max + 1) / (1.0 - x);
}

namespace {

Rat phi_tilde(const ClusterTemplate& t) {
  // m! * ursell of the slot incompatibility graph
  return ursell(incompatibility_graph(t)) * Rat(fact(t.m()));
}

std::vector<ClusterTemplate> with_class_and_support_edges(
    const std::vector<ClusterTemplate>& all, TemplateClass cls, int support_m) {
  std::vector<ClusterTemplate> out;
  for (const auto& t : all)
    if (classify(t) == cls && support(t).m() == support_m) out.push_back(t);
  return out;
}

}  // namespace

IdentityReport verify_ursell_identity(UrsellIdentity which, int m) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  int budget = (which == UrsellIdentity::TripleEdge)   ? m + 2
               : (which == UrsellIdentity::OneRepConvolution) ? m + 1
                                                              : m;
  if (budget > kMaxTemplateEdges)
    throw std::invalid_argument("identity order exceeds the template budget");
  const auto& all = cached_templates(budget);

  std::vector<std::vector<ClusterTemplate>> trees(budget + 1);
  for (int k = 1; k <= budget; ++k)
    trees[k] = with_class_and_support_edges(all, TemplateClass::SimpleTree, k);

  Rat lhs(0), rhs(0);
  switch (which) {
    case UrsellIdentity::OneRepConvolution: {
      for (const auto& t :
           with_class_and_support_edges(all, TemplateClass::OneRepTree, m))
        lhs += phi_tilde(t) / Rat(2 * automorphisms(t));
      for (int l = 1; l <= m; ++l)
        for (const auto& a : trees[l])
          for (const auto& b : trees[m + 1 - l])
            rhs -= Rat(BigInt(l) * (m + 1 - l)) * phi_tilde(a) * phi_tilde(b) /
                   Rat(BigInt(automorphisms(a)) * automorphisms(b));
      break;
    }
    case UrsellIdentity::WedgeMarked: {
      if (m < 2) throw std::invalid_argument("wedge identity needs m >= 2");
      for (const auto& t : trees[m])
        lhs += phi_tilde(t) * Rat(gamma_of_tree(t)) / Rat(automorphisms(t));
      for (int l = 1; l <= m - 1; ++l)
        for (const auto& a : trees[l])
          for (const auto& b : trees[m - l])
            rhs -= Rat(2) * Rat(BigInt(l) * (m - l)) * phi_tilde(a) *
                   phi_tilde(b) / Rat(BigInt(automorphisms(a)) * automorphisms(b));
      break;
    }
    case UrsellIdentity::TripleEdge: {
      for (const auto& t : all)
        if (is_triple_rep_tree(t) && support(t).m() == m)
          lhs += phi_tilde(t) / Rat(6 * automorphisms(t));
      for (int l = 1; l <= m; ++l)
        for (const auto& a :
             with_class_and_support_edges(all, TemplateClass::OneRepTree, l))
          for (const auto& b : trees[m + 1 - l])
            rhs -= Rat(2, 3) * Rat(BigInt(m + 1 - l)) * phi_tilde(a) *
                   phi_tilde(b) / Rat(BigInt(automorphisms(a)) * automorphisms(b));
      break;
    }
  }
  return IdentityReport{lhs == rhs, lhs, rhs};
}

double planted_clique_partial_kl(int n, double k, int v_max) {
  if (v_max < 2 || v_max > n) throw std::invalid_argument("v_max out of range");
  // conn(v): connected labeled graphs on v vertices
  std::vector<BigInt> conn(v_max + 1, 0);
  auto pow2_choose2 = [](int v) -> BigInt {
    return BigInt(1) << (v * (v - 1) / 2);
  };
  auto choose = [](int a, int b) -> BigInt {
    BigInt r = 1;
    for (int i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
    return r;
  };
  conn[1] = 1;
  for (int v = 2; v <= v_max; ++v) {
    BigInt total = pow2_choose2(v);
    for (int i = 1; i < v; ++i)
      total -= choose(v - 1, i - 1) * conn[i] * pow2_choose2(v - i);
    conn[v] = total;
  }
  double x = k / n;
  double total = 0;
  for (int v = 2; v <= v_max; ++v)
    total += (choose(n, v) * conn[v]).convert_to<double>() *
             std::pow(x, 2.0 * v);
  return total;
}

long long gamma_of_tree(const ClusterTemplate& t) {
  if (!is_simple(t)) throw std::invalid_argument("gamma is defined on simple graphs");
  std::vector<int> deg(t.v, 0);
  for (auto [a, b] : t.edges) {
    ++deg[a];
    ++deg[b];
  }
  long long g = 0;
  for (int d : deg) g += (long long)d * (d - 1) / 2;
  return g;
}

std::string dump_template(const TemplateTerm& term) {
  std::ostringstream out;
  out << "m=" << term.tmpl.m() << " v=" << term.tmpl.v
      << " edges=" << edges_to_string(term.tmpl) << " psi=" << term.psi
      << " aut=" << term.aut << " ordering=" << term.ordering.str()
      << " ursell=" << term.ursell.numerator().str() << "/"
      << term.ursell.denominator().str();
  return out.str();
}

}  // namespace dimer
