#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "gsketch/agm.hpp"
#include "gsketch/ams.hpp"
#include "gsketch/graph_vectors.hpp"
#include "test_util.hpp"

using namespace gsketch;
using namespace testutil;

namespace {

// Exact vector shadow with the same sketch interface; instantiating the
// banks with it validates the a^i / b^i encoding at the vector level before
// any sketching is involved.
struct ExplicitVec {
  std::map<uint64_t, int64_t> entries;

  void update(uint64_t i, int64_t v) {
    entries[i] += v;
    if (entries[i] == 0) entries.erase(i);
  }
  void merge(const ExplicitVec& other) {
    for (auto [i, v] : other.entries) update(i, v);
  }
  size_t memory_words() const { return entries.size() * 2; }

  std::set<uint64_t> support() const {
    std::set<uint64_t> s;
    for (auto [i, v] : entries) s.insert(i);
    return s;
  }
};

std::vector<vertex_t> all_vertices(vertex_t n) {
  std::vector<vertex_t> v(n);
  for (vertex_t i = 1; i <= n; ++i) v[i - 1] = i;
  return v;
}

}  // namespace

TEST(EdgeVectors, TriangleBoundary) {
  Stream s = stream_from_edges(3, clique_edges({1, 2, 3}));
  EdgeVectorBank<ExplicitVec> bank(3, all_vertices(3), [] { return ExplicitVec{}; });
  replay(s, bank);

  ExplicitVec c12 = bank.aggregate({1, 2});
  std::set<uint64_t> want{encode_edge(3, 1, 3), encode_edge(3, 2, 3)};
  EXPECT_EQ(c12.support(), want);

  // C = V cancels everything
  EXPECT_TRUE(bank.aggregate({1, 2, 3}).support().empty());
}

TEST(EdgeVectors, IsolatedVertexIsZero) {
  Stream s = stream_from_edges(4, {{1, 2}});
  EdgeVectorBank<ExplicitVec> bank(4, all_vertices(4), [] { return ExplicitVec{}; });
  replay(s, bank);
  EXPECT_TRUE(bank.sketch(3).support().empty());
  EXPECT_EQ(bank.sketch(1).support().size(), 1u);
}

TEST(VertexVectors, PathNeighborhood) {
  Stream s = stream_from_edges(3, path_edges(3));
  VertexVectorBank<ExplicitVec> bank(3, all_vertices(3), [] { return ExplicitVec{}; });
  replay(s, bank);
  // C = {2}: support is {1,2,3} (0-based indices {0,1,2})
  EXPECT_EQ(bank.sketch(2).support(), (std::set<uint64_t>{0, 1, 2}));
}

TEST(VertexVectors, IsolatedAndStar) {
  Stream s = stream_from_edges(6, star_edges(5));
  VertexVectorBank<ExplicitVec> bank(6, all_vertices(6), [] { return ExplicitVec{}; });
  replay(s, bank);
  EXPECT_EQ(bank.sketch(6).support(), (std::set<uint64_t>{5}));
  EXPECT_EQ(bank.sketch(1).support(), (std::set<uint64_t>{0, 1, 2, 3, 4}));
}

TEST(GraphVectors, SupportsMatchOracleOnRandomGraphs) {
  // a^C support = E(C, V\C), sum b^C support = C u Gamma(C), all C, small n
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    vertex_t n = 3 + (vertex_t)(rng() % 8);  // n <= 10
    Stream s = stream_from_edges(n, gnm_edges(n, 2.2, rng));
    auto g = graph_of(s);
    EdgeVectorBank<ExplicitVec> ebank(n, all_vertices(n), [] { return ExplicitVec{}; });
    VertexVectorBank<ExplicitVec> vbank(n, all_vertices(n), [] { return ExplicitVec{}; });
    std::vector<UpdateSink*> sinks{&ebank, &vbank};
    replay(s, sinks);

    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<vertex_t> set;
      for (vertex_t v = 1; v <= n; ++v)
        if ((mask >> (v - 1)) & 1) set.push_back(v);

      std::set<uint64_t> boundary;
      for (auto [u, v] : g.boundary(set)) boundary.insert(encode_edge(n, u, v));
      ASSERT_EQ(ebank.aggregate(set).support(), boundary);

      std::set<uint64_t> closed;
      for (vertex_t v : set) closed.insert(v - 1);
      for (vertex_t v : g.neighborhood(set)) closed.insert(v - 1);
      ASSERT_EQ(vbank.aggregate(set).support(), closed);
    }
  }
}

TEST(GraphVectors, AmsBankBoundaryZeroTest) {
  // a^C = 0 exactly when C is a union of components
  Stream s = stream_from_edges(6, {{1, 2}, {2, 3}, {4, 5}});
  auto make = [] { return AmsSketch(edge_dimension(6), 1.0 / 64, 555); };
  EdgeVectorBank<AmsSketch> bank(6, all_vertices(6), make);
  replay(s, bank);
  EXPECT_TRUE(bank.aggregate({1, 2, 3}).is_zero());
  EXPECT_TRUE(bank.aggregate({4, 5}).is_zero());
  EXPECT_TRUE(bank.aggregate({6}).is_zero());
  EXPECT_FALSE(bank.aggregate({1, 2}).is_zero());
  EXPECT_FALSE(bank.aggregate({3, 4, 5}).is_zero());
}

TEST(InducedFilter, Basics) {
  EdgeUpdate up = EdgeUpdate::insert(1, 3);
  std::unordered_set<vertex_t> none, all{1, 2, 3}, some{1, 3}, off{1, 2};
  EXPECT_FALSE(induced_filter(none, up).has_value());
  EXPECT_TRUE(induced_filter(all, up).has_value());
  EXPECT_TRUE(induced_filter(some, up).has_value());
  EXPECT_FALSE(induced_filter(off, up).has_value());
}

TEST(Agm, EmptyGraphSingletons) {
  AgmSketch agm(8, all_vertices(8), 99);
  auto forest = agm.recover_forest();
  ASSERT_TRUE(forest.has_value());
  EXPECT_TRUE(forest->edges.empty());
  EXPECT_EQ(forest->components.size(), 8u);
}

TEST(Agm, PathRecoversOneComponent) {
  int ok = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Stream s = stream_from_edges(8, path_edges(8));
    AgmSketch agm(8, all_vertices(8), derive_seed(7, seed));
    replay(s, agm);
    auto forest = agm.recover_forest();
    if (!forest) continue;
    if (forest->components.size() == 1 && forest->edges.size() == 7) ++ok;
  }
  EXPECT_GE(ok, 92);
}

TEST(Agm, ThreeTriangles) {
  int ok = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    EdgeList e;
    for (vertex_t base : {1u, 4u, 7u}) {
      auto t = clique_edges({base, base + 1, base + 2});
      e.insert(e.end(), t.begin(), t.end());
    }
    Stream s = stream_from_edges(9, e);
    AgmSketch agm(9, all_vertices(9), derive_seed(8, seed));
    replay(s, agm);
    auto forest = agm.recover_forest();
    if (forest && forest->components.size() == 3) ++ok;
  }
  EXPECT_GE(ok, 95);
}

TEST(Agm, ForestEdgesAreRealAndPartitionMatchesOracle) {
  std::mt19937_64 rng(606);
  int match = 0;
  const int trials = 120;
  for (int trial = 0; trial < trials; ++trial) {
    vertex_t n = 16 + (vertex_t)(rng() % 48);
    Stream s = stream_from_edges(n, gnm_edges(n, 1.8, rng));
    auto g = graph_of(s);
    AgmSketch agm(n, all_vertices(n), derive_seed(9, trial));
    replay(s, agm);
    auto forest = agm.recover_forest();
    ASSERT_TRUE(forest.has_value());

    // every returned edge is a true edge and the forest is acyclic
    UnionFind uf(n + 1);
    for (auto [u, v] : forest->edges) {
      ASSERT_TRUE(g.has_edge(u, v));
      ASSERT_TRUE(uf.unite(u, v)) << "cycle in forest";
    }

    // compare partitions via sorted component signature
    auto oracle_comps = g.components();
    std::set<std::vector<vertex_t>> want(oracle_comps.begin(), oracle_comps.end());
    std::set<std::vector<vertex_t>> got;
    for (auto comp : forest->components) {
      std::sort(comp.begin(), comp.end());
      got.insert(comp);
    }
    if (got == want) ++match;
  }
  EXPECT_GE(match, trials * 90 / 100);
}

TEST(Agm, InducedSubgraphOnly) {
  // only edges inside the sampled set are sketched
  Stream s = stream_from_edges(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}});
  std::vector<vertex_t> sampled{1, 2, 5, 6};
  AgmSketch agm(6, sampled, 1234);
  replay(s, agm);
  auto forest = agm.recover_forest();
  ASSERT_TRUE(forest.has_value());
  EXPECT_EQ(forest->components.size(), 2u);  // {1,2} and {5,6}
  for (auto [u, v] : forest->edges) {
    bool ok = (u == 1 && v == 2) || (u == 5 && v == 6);
    EXPECT_TRUE(ok) << u << "," << v;
  }
}

TEST(Agm, PartitionedStreamMergesBitExact) {
  // merge(replay(A), replay(B)) == replay(A . B)
  std::mt19937_64 rng(17);
  Stream s = stream_from_edges(24, gnm_edges(24, 2.0, rng));
  // interleave some deletions
  s.updates.push_back(EdgeUpdate::remove(s.updates[0].u, s.updates[0].v));

  AgmSketch full(24, all_vertices(24), 31337);
  for (const auto& up : s.updates) full.on_update(up);

  AgmSketch first(24, all_vertices(24), 31337), second(24, all_vertices(24), 31337);
  size_t half = s.updates.size() / 2;
  for (size_t i = 0; i < half; ++i) first.on_update(s.updates[i]);
  for (size_t i = half; i < s.updates.size(); ++i) second.on_update(s.updates[i]);
  first.merge(second);
  EXPECT_EQ(first, full);
}

TEST(Agm, PermutedInsertionOrderSameState) {
  std::mt19937_64 rng(18);
  Stream s = stream_from_edges(20, gnm_edges(20, 2.0, rng));
  AgmSketch a(20, all_vertices(20), 4242), b(20, all_vertices(20), 4242);
  replay(s, a);
  Stream sp = shuffled(s, 5);
  replay(sp, b);
  EXPECT_EQ(a, b);
}
