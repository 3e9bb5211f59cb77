#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gsketch/stream.hpp"

namespace gsketch {

// Induced-subgraph filter: passes an update iff both endpoints are sampled.
inline std::optional<EdgeUpdate> induced_filter(
    const std::unordered_set<vertex_t>& sampled, const EdgeUpdate& up) {
  if (sampled.count(up.u) && sampled.count(up.v)) return up;
  return std::nullopt;
}

// Per-vertex sketches of the signed boundary vectors a^i over the C(n,2)
// edge index space: inserting edge (u,v) with u < v adds +1 at index (u,v)
// to u's vector and -1 to v's. Summed over a set C, internal edges cancel
// and the support is exactly E(C, V\C). All sketches share one seed so
// component aggregation is sketch_merge.
template <typename Sketch>
class EdgeVectorBank : public UpdateSink {
 public:
  EdgeVectorBank(vertex_t n, const std::vector<vertex_t>& vertices,
                 std::function<Sketch()> make)
      : n_(n) {
    sketches_.reserve(vertices.size());
    for (vertex_t v : vertices) {
      slot_.emplace(v, sketches_.size());
      sketches_.push_back(make());
    }
  }

  void on_update(const EdgeUpdate& up) override {
    edge_index_t idx = encode_edge(n_, up.u, up.v);
    auto it = slot_.find(up.u);
    if (it != slot_.end()) sketches_[it->second].update(idx, up.delta);
    it = slot_.find(up.v);
    if (it != slot_.end()) sketches_[it->second].update(idx, -up.delta);
  }

  bool tracks(vertex_t v) const { return slot_.count(v) > 0; }

  const Sketch& sketch(vertex_t v) const { return sketches_.at(slot_.at(v)); }

  // Sketch of a^C = sum of a^v over the component.
  Sketch aggregate(const std::vector<vertex_t>& component) const {
    Sketch out = sketch(component.front());
    for (size_t i = 1; i < component.size(); ++i)
      out.merge(sketch(component[i]));
    return out;
  }

  size_t memory_words() const {
    size_t words = 0;
    for (const auto& s : sketches_) words += s.memory_words();
    return words;
  }

 private:
  vertex_t n_;
  std::unordered_map<vertex_t, size_t> slot_;
  std::vector<Sketch> sketches_;
};

// Per-vertex sketches of the closed-neighborhood vectors b^i over [n]:
// entry j-1 counts edges between i and j, plus a diagonal 1 installed at
// creation. Summed over C, the support is C union Gamma(C).
template <typename Sketch>
class VertexVectorBank : public UpdateSink {
 public:
  VertexVectorBank(vertex_t n, const std::vector<vertex_t>& vertices,
                   std::function<Sketch()> make)
      : n_(n) {
    sketches_.reserve(vertices.size());
    for (vertex_t v : vertices) {
      slot_.emplace(v, sketches_.size());
      sketches_.push_back(make());
      sketches_.back().update(v - 1, +1);  // diagonal b^v_v = 1
    }
  }

  void on_update(const EdgeUpdate& up) override {
    auto it = slot_.find(up.u);
    if (it != slot_.end()) sketches_[it->second].update(up.v - 1, up.delta);
    it = slot_.find(up.v);
    if (it != slot_.end()) sketches_[it->second].update(up.u - 1, up.delta);
  }

  bool tracks(vertex_t v) const { return slot_.count(v) > 0; }

  const Sketch& sketch(vertex_t v) const { return sketches_.at(slot_.at(v)); }

  Sketch aggregate(const std::vector<vertex_t>& component) const {
    Sketch out = sketch(component.front());
    for (size_t i = 1; i < component.size(); ++i)
      out.merge(sketch(component[i]));
    return out;
  }

  size_t memory_words() const {
    size_t words = 0;
    for (const auto& s : sketches_) words += s.memory_words();
    return words;
  }

 private:
  vertex_t n_;
  std::unordered_map<vertex_t, size_t> slot_;
  std::vector<Sketch> sketches_;
};

}  // namespace gsketch
