#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gsketch/one_sparse.hpp"
#include "gsketch/stream.hpp"

namespace gsketch {

struct SpanningForest {
  std::vector<std::pair<vertex_t, vertex_t>> edges;
  std::vector<std::vector<vertex_t>> components;
};

// Cell layout of one AGM vertex block: `rounds` independent groups of
// `chains` l0-sampler chains over the a^i edge space, each chain with
// `levels` nested subsampling levels. The subsampling hashes and the
// fingerprint point z are keyed by (seed, round, chain, level) only - never
// by vertex - so summing blocks of a supernode is again a valid block.
struct AgmLayout {
  vertex_t n = 0;          // vertex count of the underlying graph
  edge_index_t dim = 0;    // C(n,2)
  uint32_t rounds = 0;
  uint32_t chains = 0;
  uint32_t levels = 0;
  uint64_t seed = 0;
  uint64_t z = 1;

  static AgmLayout make(vertex_t n, size_t sketched_vertices, uint64_t seed,
                        uint32_t chains = 3) {
    AgmLayout lay;
    lay.n = n;
    lay.dim = edge_dimension(n);
    lay.chains = chains;
    lay.seed = seed;
    lay.z = derive_field_point(seed, 0x7a);
    uint32_t logv = 1;
    while ((uint64_t(1) << logv) < std::max<size_t>(2, sketched_vertices))
      ++logv;
    lay.rounds = logv + 2;
    lay.levels = 1;
    while ((uint64_t(1) << lay.levels) < lay.dim && lay.levels < 63)
      ++lay.levels;
    ++lay.levels;
    return lay;
  }

  size_t cells_per_vertex() const {
    return (size_t)rounds * chains * levels;
  }
  size_t words_per_vertex() const { return cells_per_vertex() * 3; }

  size_t cell_index(uint32_t round, uint32_t chain, uint32_t level) const {
    return ((size_t)round * chains + chain) * levels + level;
  }

  uint32_t level_depth(uint32_t round, uint32_t chain,
                       edge_index_t index) const {
    uint64_t h = hash64(derive_seed(seed, 0xA6300 + (uint64_t)round * chains + chain),
                        index);
    return std::min((uint32_t)std::countl_zero(h), levels - 1);
  }

  // Applies one a^i coordinate update to a vertex block.
  void apply_update(OneSparseCell* block, edge_index_t index,
                    int64_t value) const {
    uint64_t index_mod = index % kMersenne61;
    uint64_t value_mod = to_mod(value);
    uint64_t zpow = pow_mod(z, index);
    for (uint32_t r = 0; r < rounds; ++r)
      for (uint32_t c = 0; c < chains; ++c) {
        uint32_t depth = level_depth(r, c, index);
        for (uint32_t lev = 0; lev <= depth; ++lev)
          block[cell_index(r, c, lev)].update(index_mod, value_mod, zpow);
      }
  }

  // Same update expressed as sparse (word offset, Z_p delta) pairs, for
  // feeding vertex blocks through a block sparse-recovery sketch.
  std::vector<std::pair<uint32_t, uint64_t>> update_word_deltas(
      edge_index_t index, int64_t value) const {
    uint64_t index_mod = index % kMersenne61;
    uint64_t value_mod = to_mod(value);
    uint64_t zpow = pow_mod(z, index);
    uint64_t wdelta = mul_mod(index_mod, value_mod);
    uint64_t fdelta = mul_mod(value_mod, zpow);
    std::vector<std::pair<uint32_t, uint64_t>> out;
    for (uint32_t r = 0; r < rounds; ++r)
      for (uint32_t c = 0; c < chains; ++c) {
        uint32_t depth = level_depth(r, c, index);
        for (uint32_t lev = 0; lev <= depth; ++lev) {
          uint32_t base = (uint32_t)cell_index(r, c, lev) * 3;
          out.emplace_back(base + 0, value_mod);
          out.emplace_back(base + 1, wdelta);
          out.emplace_back(base + 2, fdelta);
        }
      }
    return out;
  }

  bool operator==(const AgmLayout&) const = default;
};

// Boruvka forest recovery over per-vertex blocks. `block_of(slot)` returns
// the cell array of vertices[slot]. Round r queries the merged round-r
// samplers of each supernode; a verified boundary edge joins two supernodes.
// Returns nullopt (Fail) on structurally impossible samples - a decoded edge
// with an endpoint outside the sketched set or a value other than +/-1.
template <typename BlockAccessor>
std::optional<SpanningForest> boruvka_recover(
    const AgmLayout& layout, const std::vector<vertex_t>& vertices,
    BlockAccessor&& block_of) {
  SpanningForest forest;
  size_t count = vertices.size();
  if (count == 0) return forest;

  std::unordered_map<vertex_t, size_t> slot;
  slot.reserve(count);
  for (size_t i = 0; i < count; ++i) slot.emplace(vertices[i], i);

  UnionFind uf(count);
  std::vector<OneSparseCell> agg((size_t)layout.chains * layout.levels);

  for (uint32_t round = 0; round < layout.rounds && uf.count() > 1; ++round) {
    // group member slots under their current root
    std::vector<std::vector<uint32_t>> members(count);
    for (size_t i = 0; i < count; ++i)
      members[uf.find(i)].push_back((uint32_t)i);

    size_t samples_this_round = 0;
    for (size_t root = 0; root < count; ++root) {
      if (members[root].empty()) continue;
      std::fill(agg.begin(), agg.end(), OneSparseCell{});
      size_t round_base = layout.cell_index(round, 0, 0);
      for (uint32_t member : members[root]) {
        const OneSparseCell* block = block_of(member);
        for (size_t i = 0; i < agg.size(); ++i)
          agg[i].merge(block[round_base + i]);
      }
      for (const OneSparseCell& cell : agg) {
        if (cell.is_zero()) continue;
        auto hit = decode_one_sparse(cell, layout.dim, layout.z);
        if (!hit) continue;
        int64_t value = from_mod(hit->value_mod);
        if (value != 1 && value != -1) return std::nullopt;
        auto [a, b] = decode_edge(layout.n, hit->index);
        auto ita = slot.find(a);
        auto itb = slot.find(b);
        if (ita == slot.end() || itb == slot.end()) return std::nullopt;
        ++samples_this_round;
        if (uf.unite(ita->second, itb->second))
          forest.edges.emplace_back(a, b);
        break;  // one sample per supernode per round
      }
    }
    if (samples_this_round == 0) break;
  }

  std::vector<std::vector<vertex_t>> comps(count);
  for (size_t i = 0; i < count; ++i) comps[uf.find(i)].push_back(vertices[i]);
  for (auto& c : comps)
    if (!c.empty()) forest.components.push_back(std::move(c));
  return forest;
}

// The AGM spanning-forest sketch of G[S]: a block per sampled vertex,
// updates filtered to edges with both endpoints sampled.
class AgmSketch : public UpdateSink {
 public:
  AgmSketch() = default;

  AgmSketch(vertex_t n, const std::vector<vertex_t>& vertices, uint64_t seed,
            uint32_t chains = 3)
      : layout_(AgmLayout::make(n, vertices.size(), seed, chains)),
        vertices_(vertices) {
    for (size_t i = 0; i < vertices_.size(); ++i)
      slot_.emplace(vertices_[i], i);
    cells_.assign(vertices_.size() * layout_.cells_per_vertex(),
                  OneSparseCell{});
  }

  void on_update(const EdgeUpdate& up) override {
    auto iu = slot_.find(up.u);
    if (iu == slot_.end()) return;
    auto iv = slot_.find(up.v);
    if (iv == slot_.end()) return;
    edge_index_t idx = encode_edge(layout_.n, up.u, up.v);
    layout_.apply_update(block(iu->second), idx, up.delta);
    layout_.apply_update(block(iv->second), idx, -up.delta);
  }

  std::optional<SpanningForest> recover_forest() const {
    return boruvka_recover(layout_, vertices_, [this](size_t s) {
      return cells_.data() + s * layout_.cells_per_vertex();
    });
  }

  const AgmLayout& layout() const { return layout_; }
  const std::vector<vertex_t>& vertices() const { return vertices_; }

  void merge(const AgmSketch& other) {
    if (layout_.seed != other.layout_.seed ||
        vertices_ != other.vertices_ ||
        layout_.rounds != other.layout_.rounds ||
        layout_.chains != other.layout_.chains)
      throw IncompatibleSketches("AgmSketch::merge mismatch");
    for (size_t i = 0; i < cells_.size(); ++i) cells_[i].merge(other.cells_[i]);
  }

  size_t memory_words() const { return cells_.size() * 3 + 8; }

  const std::vector<OneSparseCell>& cells() const { return cells_; }

  bool operator==(const AgmSketch& other) const {
    return layout_ == other.layout_ && vertices_ == other.vertices_ &&
           cells_ == other.cells_;
  }

 private:
  OneSparseCell* block(size_t s) {
    return cells_.data() + s * layout_.cells_per_vertex();
  }

  AgmLayout layout_;
  std::vector<vertex_t> vertices_;
  std::unordered_map<vertex_t, size_t> slot_;
  std::vector<OneSparseCell> cells_;
};

}  // namespace gsketch
