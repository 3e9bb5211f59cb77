#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "gsketch/common.hpp"
#include "gsketch/one_sparse.hpp"

namespace gsketch {

// l0-sampler: per chain, ceil(log2 D)+1 nested subsampling levels, one
// one-sparse detector per level. Level l keeps an index iff the top l bits
// of its chain hash are zero. A query scans chains and levels and returns
// the first verified hit; NoSample means no level could certify a
// coordinate this time.
class L0Sampler {
 public:
  L0Sampler() = default;

  L0Sampler(uint64_t dimension, uint64_t seed, uint32_t chains = 3)
      : dimension_(dimension), seed_(seed), chains_(chains) {
    levels_ = 1;
    while ((uint64_t(1) << levels_) < dimension_ && levels_ < 63) ++levels_;
    ++levels_;  // ceil(log2 D) + 1
    z_ = derive_field_point(seed_, 0x7a);
    cells_.assign((size_t)chains_ * levels_, OneSparseCell{});
  }

  void update(uint64_t index, int64_t value) {
    if (index >= dimension_)
      throw std::out_of_range("L0Sampler::update index out of range");
    uint64_t index_mod = index % kMersenne61;
    uint64_t value_mod = to_mod(value);
    uint64_t zpow = pow_mod(z_, index);
    for (uint32_t c = 0; c < chains_; ++c) {
      uint32_t depth = level_depth(c, index);
      for (uint32_t lev = 0; lev <= depth; ++lev)
        cells_[(size_t)c * levels_ + lev].update(index_mod, value_mod, zpow);
    }
  }

  struct Sample {
    uint64_t index;
    int64_t value;
  };

  std::optional<Sample> sample() const {
    for (uint32_t c = 0; c < chains_; ++c)
      for (uint32_t lev = 0; lev < levels_; ++lev) {
        const OneSparseCell& cell = cells_[(size_t)c * levels_ + lev];
        if (cell.is_zero()) continue;
        if (auto hit = decode_one_sparse(cell, dimension_, z_))
          return Sample{hit->index, from_mod(hit->value_mod)};
      }
    return std::nullopt;
  }

  void merge(const L0Sampler& other) {
    if (!compatible(other))
      throw IncompatibleSketches("L0Sampler::merge shape/seed mismatch");
    for (size_t i = 0; i < cells_.size(); ++i) cells_[i].merge(other.cells_[i]);
  }

  bool compatible(const L0Sampler& other) const {
    return dimension_ == other.dimension_ && seed_ == other.seed_ &&
           chains_ == other.chains_ && levels_ == other.levels_;
  }

  uint64_t dimension() const { return dimension_; }
  uint32_t chains() const { return chains_; }
  uint32_t levels() const { return levels_; }
  uint64_t seed() const { return seed_; }

  size_t memory_words() const { return cells_.size() * 3 + 4; }

  bool operator==(const L0Sampler&) const = default;

  void serialize(std::ostream& out) const {
    write_tag(out, "L0S1");
    write_le<uint64_t>(out, dimension_);
    write_le<uint64_t>(out, seed_);
    write_le<uint32_t>(out, chains_);
    write_le<uint32_t>(out, levels_);
    for (const auto& cell : cells_) write_cell(out, cell);
  }

  static L0Sampler deserialize(std::istream& in) {
    expect_tag(in, "L0S1");
    L0Sampler s;
    s.dimension_ = read_le<uint64_t>(in);
    s.seed_ = read_le<uint64_t>(in);
    s.chains_ = read_le<uint32_t>(in);
    s.levels_ = read_le<uint32_t>(in);
    s.z_ = derive_field_point(s.seed_, 0x7a);
    s.cells_.resize((size_t)s.chains_ * s.levels_);
    for (auto& cell : s.cells_) cell = read_cell(in);
    return s;
  }

 private:
  uint32_t level_depth(uint32_t chain, uint64_t index) const {
    uint64_t h = hash64(derive_seed(seed_, 0x5a00 + chain), index);
    uint32_t depth = (uint32_t)std::countl_zero(h);
    return std::min(depth, levels_ - 1);
  }

  uint64_t dimension_ = 0;
  uint64_t seed_ = 0;
  uint32_t chains_ = 0;
  uint32_t levels_ = 0;
  uint64_t z_ = 1;
  std::vector<OneSparseCell> cells_;
};

}  // namespace gsketch
