#pragma once

// Shared helpers for the unit and acceptance suites: deterministic random
// graphs and streams (std::mt19937_64 keeps them identical everywhere).

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "gsketch/oracle.hpp"
#include "gsketch/stream.hpp"

namespace testutil {

using namespace gsketch;

using EdgeList = std::vector<std::pair<vertex_t, vertex_t>>;

inline Stream stream_from_edges(vertex_t n, const EdgeList& edges,
                                weight_t max_weight = 1) {
  Stream s;
  s.header.n = n;
  s.header.max_weight = max_weight;
  for (auto [u, v] : edges) s.updates.push_back(EdgeUpdate::insert(u, v));
  return s;
}

inline Stream weighted_stream(
    vertex_t n, const std::vector<std::tuple<vertex_t, vertex_t, weight_t>>& edges,
    weight_t max_weight) {
  Stream s;
  s.header.n = n;
  s.header.max_weight = max_weight;
  for (auto [u, v, w] : edges) s.updates.push_back(EdgeUpdate::insert(u, v, w));
  return s;
}

inline EdgeList path_edges(vertex_t n, vertex_t first = 1) {
  EdgeList e;
  for (vertex_t v = first; v + 1 < first + n; ++v) e.push_back({v, v + 1});
  return e;
}

inline EdgeList cycle_edges(vertex_t n, vertex_t first = 1) {
  EdgeList e = path_edges(n, first);
  if (n >= 3) e.push_back({first, first + n - 1});
  return e;
}

inline EdgeList clique_edges(const std::vector<vertex_t>& verts) {
  EdgeList e;
  for (size_t i = 0; i < verts.size(); ++i)
    for (size_t j = i + 1; j < verts.size(); ++j)
      e.push_back({verts[i], verts[j]});
  return e;
}

inline EdgeList star_edges(vertex_t n) {
  EdgeList e;
  for (vertex_t v = 2; v <= n; ++v) e.push_back({1, v});
  return e;
}

// Harary-style circulant C_n(1..j): 2j-regular, edge and vertex
// connectivity exactly 2j.
inline EdgeList circulant_edges(vertex_t n, vertex_t j) {
  std::set<std::pair<vertex_t, vertex_t>> e;
  for (vertex_t v = 0; v < n; ++v)
    for (vertex_t d = 1; d <= j; ++d) {
      vertex_t w = (vertex_t)((v + d) % n);
      if (v != w) e.insert({std::min(v, w) + 1, std::max(v, w) + 1});
    }
  return {e.begin(), e.end()};
}

inline EdgeList random_edges(vertex_t n, size_t m, std::mt19937_64& rng) {
  std::set<std::pair<vertex_t, vertex_t>> chosen;
  std::uniform_int_distribution<vertex_t> pick(1, n);
  size_t cap = edge_dimension(n);
  while (chosen.size() < std::min(m, cap)) {
    vertex_t u = pick(rng), v = pick(rng);
    if (u == v) continue;
    chosen.insert({std::min(u, v), std::max(u, v)});
  }
  return {chosen.begin(), chosen.end()};
}

// G(n, p) by expected edge count.
inline EdgeList gnm_edges(vertex_t n, double avg_degree, std::mt19937_64& rng) {
  size_t m = (size_t)(avg_degree * n / 2.0);
  return random_edges(n, m, rng);
}

// Random connected graph: random spanning tree plus extra random edges.
inline EdgeList random_connected_edges(vertex_t n, size_t extra,
                                       std::mt19937_64& rng) {
  std::vector<vertex_t> order(n);
  for (vertex_t v = 0; v < n; ++v) order[v] = v + 1;
  std::shuffle(order.begin(), order.end(), rng);
  std::set<std::pair<vertex_t, vertex_t>> e;
  for (vertex_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<vertex_t> parent(0, i - 1);
    vertex_t u = order[parent(rng)], v = order[i];
    e.insert({std::min(u, v), std::max(u, v)});
  }
  std::uniform_int_distribution<vertex_t> pick(1, n);
  size_t want = std::min((size_t)edge_dimension(n), (size_t)(n - 1) + extra);
  while (e.size() < want) {
    vertex_t u = pick(rng), v = pick(rng);
    if (u != v) e.insert({std::min(u, v), std::max(u, v)});
  }
  return {e.begin(), e.end()};
}

inline Stream random_connected_weighted_stream(vertex_t n, size_t extra,
                                               weight_t max_weight,
                                               std::mt19937_64& rng) {
  EdgeList edges = random_connected_edges(n, extra, rng);
  Stream s;
  s.header.n = n;
  s.header.max_weight = max_weight;
  std::uniform_int_distribution<int> w(1, max_weight);
  for (auto [u, v] : edges)
    s.updates.push_back(EdgeUpdate::insert(u, v, (weight_t)w(rng)));
  return s;
}

// Shuffles insertion order (final graph unchanged).
inline Stream shuffled(const Stream& s, uint64_t seed) {
  Stream out = s;
  std::mt19937_64 rng(seed);
  std::shuffle(out.updates.begin(), out.updates.end(), rng);
  return out;
}

inline oracle::ExplicitGraph graph_of(const Stream& s) {
  return oracle::ExplicitGraph::from_stream(s);
}

}  // namespace testutil
