#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "gsketch/stream.hpp"

namespace gsketch::oracle {

// Exact, slow reference algorithms. Correctness over speed: these are the
// ground truth the sketch side is tested against.

class ExplicitGraph : public UpdateSink {
 public:
  explicit ExplicitGraph(vertex_t n, weight_t max_weight = 1)
      : n_(n), max_weight_(max_weight), adj_(n + 1) {}

  static ExplicitGraph from_stream(const Stream& stream) {
    ExplicitGraph g(stream.n(), stream.max_weight());
    replay(stream, g);
    return g;
  }

  void on_update(const EdgeUpdate& up) override {
    if (up.delta > 0)
      add_edge(up.u, up.v, up.weight);
    else
      remove_edge(up.u, up.v);
  }

  void add_edge(vertex_t u, vertex_t v, weight_t w = 1) {
    if (u == v) throw InvalidEdge("self-loop");
    if (u > v) std::swap(u, v);
    adj_[u].insert(v);
    adj_[v].insert(u);
    weights_[{u, v}] = w;
  }

  void remove_edge(vertex_t u, vertex_t v) {
    if (u > v) std::swap(u, v);
    adj_[u].erase(v);
    adj_[v].erase(u);
    weights_.erase({u, v});
  }

  bool has_edge(vertex_t u, vertex_t v) const {
    if (u > v) std::swap(u, v);
    return weights_.count({u, v}) > 0;
  }

  vertex_t n() const { return n_; }
  weight_t max_weight() const { return max_weight_; }
  size_t m() const { return weights_.size(); }
  const std::set<vertex_t>& neighbors(vertex_t v) const { return adj_[v]; }
  const std::map<std::pair<vertex_t, vertex_t>, weight_t>& edges() const {
    return weights_;
  }
  size_t degree(vertex_t v) const { return adj_[v].size(); }

  // --- connected components -------------------------------------------------

  // component_of[v] is a 0-based component id; component_of[0] unused.
  std::vector<size_t> component_labels() const {
    std::vector<size_t> label(n_ + 1, SIZE_MAX);
    size_t next = 0;
    std::vector<vertex_t> stack;
    for (vertex_t s = 1; s <= n_; ++s) {
      if (label[s] != SIZE_MAX) continue;
      label[s] = next;
      stack.push_back(s);
      while (!stack.empty()) {
        vertex_t v = stack.back();
        stack.pop_back();
        for (vertex_t w : adj_[v])
          if (label[w] == SIZE_MAX) {
            label[w] = next;
            stack.push_back(w);
          }
      }
      ++next;
    }
    return label;
  }

  std::vector<std::vector<vertex_t>> components() const {
    auto label = component_labels();
    size_t count = 0;
    for (vertex_t v = 1; v <= n_; ++v) count = std::max(count, label[v] + 1);
    std::vector<std::vector<vertex_t>> comps(count);
    for (vertex_t v = 1; v <= n_; ++v) comps[label[v]].push_back(v);
    return comps;
  }

  size_t component_count() const {
    auto label = component_labels();
    size_t count = 0;
    for (vertex_t v = 1; v <= n_; ++v) count = std::max(count, label[v] + 1);
    return count;
  }

  // Number of connected components of size at most size_cap.
  size_t scc_count(size_t size_cap) const {
    size_t out = 0;
    for (const auto& comp : components())
      if (comp.size() <= size_cap) ++out;
    return out;
  }

  bool connected() const { return n_ <= 1 || component_count() == 1; }

  // --- boundaries and neighborhoods ------------------------------------------

  // E(C, V \ C) as canonical vertex pairs.
  std::vector<std::pair<vertex_t, vertex_t>> boundary(
      const std::vector<vertex_t>& set) const {
    std::vector<char> in_set(n_ + 1, 0);
    for (vertex_t v : set) in_set[v] = 1;
    std::vector<std::pair<vertex_t, vertex_t>> out;
    for (vertex_t v : set)
      for (vertex_t w : adj_[v])
        if (!in_set[w]) out.emplace_back(std::min(v, w), std::max(v, w));
    std::sort(out.begin(), out.end());
    return out;
  }

  // Gamma(C): vertices outside C adjacent to C.
  std::vector<vertex_t> neighborhood(const std::vector<vertex_t>& set) const {
    std::vector<char> in_set(n_ + 1, 0);
    for (vertex_t v : set) in_set[v] = 1;
    std::set<vertex_t> out;
    for (vertex_t v : set)
      for (vertex_t w : adj_[v])
        if (!in_set[w]) out.insert(w);
    return {out.begin(), out.end()};
  }

  bool induced_connected(const std::vector<vertex_t>& set) const {
    if (set.empty()) return true;
    std::vector<char> in_set(n_ + 1, 0);
    for (vertex_t v : set) in_set[v] = 1;
    std::vector<char> seen(n_ + 1, 0);
    std::vector<vertex_t> stack{set[0]};
    seen[set[0]] = 1;
    size_t reached = 1;
    while (!stack.empty()) {
      vertex_t v = stack.back();
      stack.pop_back();
      for (vertex_t w : adj_[v])
        if (in_set[w] && !seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
    }
    return reached == set.size();
  }

  // --- minimum spanning tree --------------------------------------------------

  // Kruskal. Returns nullopt when the graph is disconnected.
  std::optional<int64_t> mst_weight() const {
    if (!connected()) return std::nullopt;
    std::vector<std::tuple<weight_t, vertex_t, vertex_t>> sorted;
    sorted.reserve(weights_.size());
    for (const auto& [e, w] : weights_) sorted.emplace_back(w, e.first, e.second);
    std::sort(sorted.begin(), sorted.end());
    UnionFind uf(n_ + 1);
    int64_t total = 0;
    size_t used = 0;
    for (const auto& [w, u, v] : sorted) {
      if (uf.unite(u, v)) {
        total += w;
        if (++used == (size_t)n_ - 1) break;
      }
    }
    return total;
  }

  // cc^{(l)}: component count of the subgraph of edges with weight <= level,
  // for level = 1..W-1. Used to cross-check c(MST) = n - W + sum cc^{(l)}.
  std::vector<size_t> component_counts_by_level() const {
    std::vector<size_t> counts;
    if (max_weight_ < 2) return counts;
    for (weight_t level = 1; level < max_weight_; ++level) {
      UnionFind uf(n_ + 1);
      for (const auto& [e, w] : weights_)
        if (w <= level) uf.unite(e.first, e.second);
      counts.push_back(uf.count() - 1);  // slot 0 is unused
    }
    return counts;
  }

  // --- edge connectivity (Stoer-Wagner global min cut) -----------------------

  // Returns 0 for disconnected graphs; n-1 convention is not used, a complete
  // graph K_n reports n-1 naturally.
  size_t edge_connectivity() const {
    if (n_ < 2) return 0;
    if (!connected()) return 0;
    size_t n = n_;
    std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, 0));
    for (const auto& [e, _] : weights_) {
      w[e.first - 1][e.second - 1] += 1;
      w[e.second - 1][e.first - 1] += 1;
    }
    std::vector<size_t> active(n);
    std::iota(active.begin(), active.end(), 0);
    int64_t best = std::numeric_limits<int64_t>::max();
    while (active.size() > 1) {
      std::vector<int64_t> gain(n, 0);
      std::vector<char> added(n, 0);
      size_t prev = active[0], last = active[0];
      added[last] = 1;
      for (size_t step = 1; step < active.size(); ++step) {
        for (size_t v : active)
          if (!added[v]) gain[v] += w[last][v];
        prev = last;
        int64_t bestg = -1;
        for (size_t v : active)
          if (!added[v] && gain[v] > bestg) {
            bestg = gain[v];
            last = v;
          }
        added[last] = 1;
      }
      best = std::min(best, gain[last]);
      // merge last into prev
      for (size_t v : active)
        if (v != last && v != prev) {
          w[prev][v] += w[last][v];
          w[v][prev] = w[prev][v];
        }
      active.erase(std::find(active.begin(), active.end(), last));
    }
    return (size_t)best;
  }

  // --- vertex connectivity ----------------------------------------------------

  // Brute force for n <= 64 (remove every subset of < k candidate cuts via
  // recursive search), flow-based otherwise.
  size_t vertex_connectivity() const {
    if (n_ < 2) return 0;
    if (!connected()) return 0;
    bool complete = true;
    for (vertex_t v = 1; v <= n_ && complete; ++v)
      if (adj_[v].size() != (size_t)n_ - 1) complete = false;
    if (complete) return n_ - 1;
    return flow_vertex_connectivity();
  }

  // --- distances to properties -------------------------------------------------

  size_t connectivity_distance() const { return component_count() - 1; }

  size_t cycle_freeness_distance() const {
    // Edges to delete: m - (n - cc).
    return m() - ((size_t)n_ - component_count());
  }

  // Minimum edge deletions to make the graph bipartite, exact for m <= 24 via
  // max-cut per component; nullopt when too large (NP-hard in general).
  std::optional<size_t> bipartiteness_distance() const {
    if (m() > 24) return std::nullopt;
    size_t deletions = 0;
    for (const auto& comp : components()) {
      if (comp.size() < 3) continue;
      if (comp.size() > 25) return std::nullopt;
      std::map<vertex_t, size_t> pos;
      for (size_t i = 0; i < comp.size(); ++i) pos[comp[i]] = i;
      std::vector<std::pair<size_t, size_t>> comp_edges;
      for (vertex_t v : comp)
        for (vertex_t u : adj_[v])
          if (v < u) comp_edges.emplace_back(pos[v], pos[u]);
      size_t best_cut = 0;
      for (uint64_t mask = 0; mask < (uint64_t(1) << (comp.size() - 1)); ++mask) {
        size_t cut = 0;
        for (auto [a, b] : comp_edges)
          if (((mask >> a) & 1) != ((mask >> b) & 1)) ++cut;
        best_cut = std::max(best_cut, cut);
      }
      deletions += comp_edges.size() - best_cut;
    }
    return deletions;
  }

  // --- degrees and Eulerianity --------------------------------------------------

  std::vector<vertex_t> odd_degree_vertices() const {
    std::vector<vertex_t> out;
    for (vertex_t v = 1; v <= n_; ++v)
      if (adj_[v].size() % 2 == 1) out.push_back(v);
    return out;
  }

  // Euler path version: connected after dropping isolated vertices, and at
  // most two odd-degree vertices.
  bool is_eulerian() const {
    if (odd_degree_vertices().size() > 2) return false;
    std::optional<vertex_t> root;
    for (vertex_t v = 1; v <= n_; ++v)
      if (!adj_[v].empty()) {
        root = v;
        break;
      }
    if (!root) return true;  // no edges
    auto label = component_labels();
    for (vertex_t v = 1; v <= n_; ++v)
      if (!adj_[v].empty() && label[v] != label[*root]) return false;
    return true;
  }

  // --- bipartiteness -----------------------------------------------------------

  bool is_bipartite() const { return !find_odd_cycle().has_value(); }

  // BFS 2-coloring; returns an odd cycle as a vertex sequence when one exists.
  std::optional<std::vector<vertex_t>> find_odd_cycle() const {
    std::vector<int> color(n_ + 1, -1);
    std::vector<vertex_t> parent(n_ + 1, 0);
    for (vertex_t s = 1; s <= n_; ++s) {
      if (color[s] != -1) continue;
      color[s] = 0;
      std::queue<vertex_t> q;
      q.push(s);
      while (!q.empty()) {
        vertex_t v = q.front();
        q.pop();
        for (vertex_t w : adj_[v]) {
          if (color[w] == -1) {
            color[w] = color[v] ^ 1;
            parent[w] = v;
            q.push(w);
          } else if (color[w] == color[v]) {
            return trace_cycle(v, w, parent);
          }
        }
      }
    }
    return std::nullopt;
  }

 private:
  static std::optional<std::vector<vertex_t>> trace_cycle(
      vertex_t a, vertex_t b, const std::vector<vertex_t>& parent) {
    std::vector<vertex_t> pa{a}, pb{b};
    std::set<vertex_t> seen{a};
    for (vertex_t v = a; parent[v]; v = parent[v]) {
      pa.push_back(parent[v]);
      seen.insert(parent[v]);
    }
    vertex_t meet = b;
    while (!seen.count(meet)) {
      meet = parent[meet];
      pb.push_back(meet);
    }
    std::vector<vertex_t> cycle;
    for (vertex_t v : pa) {
      cycle.push_back(v);
      if (v == meet) break;
    }
    std::reverse(cycle.begin(), cycle.end());
    for (size_t i = 1; i < pb.size() && pb[i - 1] != meet; ++i)
      cycle.push_back(pb[i - 1]);
    return cycle;
  }

  // Vertex connectivity via unit-capacity vertex-split max flow:
  // kappa = min over non-adjacent pairs (restricted per Even's scheme).
  size_t flow_vertex_connectivity() const {
    size_t best = n_ - 1;
    vertex_t s = 1;
    for (vertex_t v = 1; v <= n_; ++v)
      if (adj_[v].size() < adj_[s].size()) s = v;
    best = std::min(best, adj_[s].size());
    for (vertex_t t = 1; t <= n_; ++t)
      if (t != s && !adj_[s].count(t))
        best = std::min(best, max_vertex_flow(s, t, best));
    std::vector<vertex_t> nbrs(adj_[s].begin(), adj_[s].end());
    for (size_t i = 0; i < nbrs.size(); ++i)
      for (size_t j = i + 1; j < nbrs.size(); ++j)
        if (!adj_[nbrs[i]].count(nbrs[j]))
          best = std::min(best, max_vertex_flow(nbrs[i], nbrs[j], best));
    return best;
  }

  // BFS augmenting paths on the vertex-split graph, stopping at `cap`.
  size_t max_vertex_flow(vertex_t s, vertex_t t, size_t cap) const {
    size_t N = 2 * (size_t)n_ + 2;
    // node 2v = in(v), 2v+1 = out(v)
    std::vector<std::vector<std::pair<size_t, size_t>>> g(N);  // (to, rev idx)
    std::vector<std::vector<int>> capmat;
    auto add = [&](size_t a, size_t b, int c) {
      g[a].push_back({b, g[b].size()});
      g[b].push_back({a, g[a].size() - 1});
      capmat[a].push_back(c);
      capmat[b].push_back(0);
    };
    capmat.resize(N);
    for (vertex_t v = 1; v <= n_; ++v)
      add(2 * (size_t)v, 2 * (size_t)v + 1, (v == s || v == t) ? (int)n_ : 1);
    for (const auto& [e, _] : weights_) {
      add(2 * (size_t)e.first + 1, 2 * (size_t)e.second, (int)n_);
      add(2 * (size_t)e.second + 1, 2 * (size_t)e.first, (int)n_);
    }
    size_t flow = 0;
    size_t src = 2 * (size_t)s, dst = 2 * (size_t)t + 1;
    while (flow < cap) {
      std::vector<int> pre_node(N, -1), pre_edge(N, -1);
      std::queue<size_t> q;
      q.push(src);
      pre_node[src] = (int)src;
      while (!q.empty() && pre_node[dst] == -1) {
        size_t v = q.front();
        q.pop();
        for (size_t i = 0; i < g[v].size(); ++i) {
          auto [to, rev] = g[v][i];
          if (capmat[v][i] > 0 && pre_node[to] == -1) {
            pre_node[to] = (int)v;
            pre_edge[to] = (int)i;
            q.push(to);
          }
        }
      }
      if (pre_node[dst] == -1) break;
      for (size_t v = dst; v != src; v = pre_node[v]) {
        size_t u = pre_node[v];
        size_t i = pre_edge[v];
        capmat[u][i] -= 1;
        capmat[v][g[u][i].second] += 1;
      }
      ++flow;
    }
    return flow;
  }

  vertex_t n_;
  weight_t max_weight_;
  std::vector<std::set<vertex_t>> adj_;
  std::map<std::pair<vertex_t, vertex_t>, weight_t> weights_;
};

// l-extreme sets: |E(C, V\C)| = l < k and every proper nonempty subset has a
// strictly larger boundary. Brute force, for cross-checking generators at
// small n.
inline std::vector<std::vector<vertex_t>> find_extreme_sets(
    const ExplicitGraph& g, size_t k) {
  if (g.n() > 20) throw std::invalid_argument("find_extreme_sets: n too large");
  std::vector<std::vector<vertex_t>> out;
  vertex_t n = g.n();
  for (uint32_t mask = 1; mask < (uint32_t(1) << n); ++mask) {
    if (mask == (uint32_t(1) << n) - 1) continue;  // C = V excluded
    std::vector<vertex_t> set;
    for (vertex_t v = 1; v <= n; ++v)
      if ((mask >> (v - 1)) & 1) set.push_back(v);
    size_t cut = g.boundary(set).size();
    if (cut >= k) continue;
    bool extreme = true;
    for (uint32_t sub = (mask - 1) & mask; sub && extreme;
         sub = (sub - 1) & mask) {
      std::vector<vertex_t> subset;
      for (vertex_t v = 1; v <= n; ++v)
        if ((sub >> (v - 1)) & 1) subset.push_back(v);
      if (g.boundary(subset).size() <= cut) extreme = false;
    }
    if (extreme) out.push_back(std::move(set));
  }
  return out;
}

}  // namespace gsketch::oracle
