#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "gsketch/common.hpp"
#include "gsketch/one_sparse.hpp"

namespace gsketch {

// Exact k-sparse recovery with Fail detection.
//
// The sketched object is a vector of `num_blocks` blocks, each a group
// element in Z_p^{block_size} (block_size 1 is the plain scalar case).
// Layout: d = ceil(log2(1/delta)) + 2 rows of b = 2k buckets. Every bucket
// keeps the blockwise sum of the blocks hashed into it plus a one-sparse
// detector over block fingerprints f_u = sum_j block_u[j] * y^j; one more
// detector spans the whole vector. Decoding peels verified one-sparse
// buckets until the global residual is zero.
//
// Contract: a vector with at most k nonzero blocks is recovered exactly with
// probability >= 1 - delta; anything else yields Fail (wrong outputs require
// a fingerprint collision). The all-zero vector reports Zero.
class SparseRecoverySketch {
 public:
  enum class Status { Zero, Ok, Fail };

  struct Decoded {
    Status status = Status::Fail;
    // Nonzero blocks by index, raw Z_p words. Scalars: from_mod(words[0]).
    std::map<uint64_t, std::vector<uint64_t>> blocks;
  };

  SparseRecoverySketch() = default;

  SparseRecoverySketch(uint64_t num_blocks, uint32_t k, double delta,
                       uint64_t seed, uint32_t block_size = 1)
      : num_blocks_(num_blocks),
        block_size_(block_size),
        k_(k),
        delta_(delta),
        seed_(seed) {
    rows_ = (uint32_t)std::max<int64_t>(
                2, (int64_t)std::ceil(std::log2(1.0 / delta))) +
            2;
    buckets_ = std::max<uint32_t>(2, 2 * k);
    y_ = derive_field_point(seed_, 0x79);
    z_ = derive_field_point(seed_, 0x7a);
    ypow_.resize(block_size_);
    ypow_[0] = 1;
    for (uint32_t j = 1; j < block_size_; ++j)
      ypow_[j] = mul_mod(ypow_[j - 1], y_);
    cells_.assign((size_t)rows_ * buckets_, OneSparseCell{});
    sums_.assign((size_t)rows_ * buckets_ * block_size_, 0);
  }

  // Scalar update: adds `value` to coordinate `index`.
  void update(uint64_t index, int64_t value) {
    std::pair<uint32_t, uint64_t> one[1] = {{0, to_mod(value)}};
    update_block(index, one);
  }

  // Adds the given (offset, delta in Z_p) words to block `index`.
  void update_block(uint64_t index,
                    std::span<const std::pair<uint32_t, uint64_t>> deltas) {
    if (index >= num_blocks_)
      throw std::out_of_range("SparseRecoverySketch: block index out of range");
    uint64_t df = 0;  // fingerprint delta of this block change
    for (auto [off, dw] : deltas) df = add_mod(df, mul_mod(dw, ypow_[off]));
    uint64_t index_mod = index % kMersenne61;
    uint64_t zpow = pow_mod(z_, index);
    global_.update(index_mod, df, zpow);
    for (uint32_t r = 0; r < rows_; ++r) {
      size_t bucket = bucket_of(r, index);
      cells_[bucket].update(index_mod, df, zpow);
      uint64_t* words = &sums_[bucket * block_size_];
      for (auto [off, dw] : deltas) words[off] = add_mod(words[off], dw);
    }
  }

  Decoded decode() const {
    Decoded out;
    if (global_.is_zero()) {
      out.status = Status::Zero;
      return out;
    }
    std::vector<OneSparseCell> cells = cells_;
    std::vector<uint64_t> sums = sums_;
    OneSparseCell global = global_;
    std::map<uint64_t, std::vector<uint64_t>> found;

    size_t max_extractions = (size_t)rows_ * buckets_ * 4 + 8;
    size_t extracted = 0;
    bool progress = true;
    while (progress && extracted < max_extractions) {
      progress = false;
      for (size_t bucket = 0; bucket < cells.size() && extracted < max_extractions;
           ++bucket) {
        const OneSparseCell& cell = cells[bucket];
        if (cell.is_zero()) continue;
        auto hit = decode_one_sparse(cell, num_blocks_, z_);
        if (!hit) continue;
        uint64_t index = hit->index;
        std::vector<uint64_t> block(
            sums.begin() + bucket * block_size_,
            sums.begin() + (bucket + 1) * block_size_);
        // accumulate into the result (re-extraction of a residual adds up)
        auto& acc = found.try_emplace(index, block_size_, 0).first->second;
        for (uint32_t j = 0; j < block_size_; ++j)
          acc[j] = add_mod(acc[j], block[j]);
        remove_block(cells, sums, global, index, block);
        ++extracted;
        progress = true;
      }
    }

    if (!global.is_zero()) return out;  // Fail
    for (auto it = found.begin(); it != found.end();) {
      bool zero = true;
      for (uint64_t w : it->second)
        if (w != 0) zero = false;
      it = zero ? found.erase(it) : std::next(it);
    }
    if (found.size() > k_) return out;  // recovered more than k blocks: Fail
    out.status = found.empty() ? Status::Zero : Status::Ok;
    out.blocks = std::move(found);
    return out;
  }

  // Scalar view of decode(): index -> signed value.
  struct DecodedScalar {
    Status status = Status::Fail;
    std::map<uint64_t, int64_t> values;
  };

  DecodedScalar decode_scalar() const {
    Decoded d = decode();
    DecodedScalar out;
    out.status = d.status;
    for (const auto& [idx, block] : d.blocks)
      out.values[idx] = from_mod(block[0]);
    return out;
  }

  void merge(const SparseRecoverySketch& other) {
    if (!compatible(other))
      throw IncompatibleSketches("SparseRecoverySketch::merge mismatch");
    for (size_t i = 0; i < cells_.size(); ++i) cells_[i].merge(other.cells_[i]);
    for (size_t i = 0; i < sums_.size(); ++i)
      sums_[i] = add_mod(sums_[i], other.sums_[i]);
    global_.merge(other.global_);
  }

  bool compatible(const SparseRecoverySketch& other) const {
    return num_blocks_ == other.num_blocks_ &&
           block_size_ == other.block_size_ && k_ == other.k_ &&
           rows_ == other.rows_ && buckets_ == other.buckets_ &&
           seed_ == other.seed_;
  }

  uint64_t num_blocks() const { return num_blocks_; }
  uint32_t block_size() const { return block_size_; }
  uint32_t k() const { return k_; }
  uint32_t rows() const { return rows_; }
  uint32_t buckets_per_row() const { return buckets_; }
  double delta() const { return delta_; }
  uint64_t seed() const { return seed_; }

  size_t memory_words() const {
    return cells_.size() * 3 + sums_.size() + ypow_.size() + 3 + 8;
  }

  bool operator==(const SparseRecoverySketch&) const = default;

  void serialize(std::ostream& out) const {
    write_tag(out, "SRK1");
    write_le<uint64_t>(out, num_blocks_);
    write_le<uint32_t>(out, block_size_);
    write_le<uint32_t>(out, k_);
    write_le<uint32_t>(out, rows_);
    write_le<uint32_t>(out, buckets_);
    write_le<uint64_t>(out, seed_);
    write_le<uint64_t>(out, (uint64_t)(delta_ * 1e18));
    write_cell(out, global_);
    for (const auto& cell : cells_) write_cell(out, cell);
    for (uint64_t w : sums_) write_le<uint64_t>(out, w);
  }

  static SparseRecoverySketch deserialize(std::istream& in) {
    expect_tag(in, "SRK1");
    uint64_t num_blocks = read_le<uint64_t>(in);
    uint32_t block_size = read_le<uint32_t>(in);
    uint32_t k = read_le<uint32_t>(in);
    uint32_t rows = read_le<uint32_t>(in);
    uint32_t buckets = read_le<uint32_t>(in);
    uint64_t seed = read_le<uint64_t>(in);
    double delta = (double)read_le<uint64_t>(in) / 1e18;
    SparseRecoverySketch s(num_blocks, k, delta, seed, block_size);
    if (s.rows_ != rows || s.buckets_ != buckets)
      throw SerializationError("SparseRecoverySketch: shape mismatch");
    s.global_ = read_cell(in);
    for (auto& cell : s.cells_) cell = read_cell(in);
    for (auto& w : s.sums_) w = read_le<uint64_t>(in);
    return s;
  }

 private:
  size_t bucket_of(uint32_t row, uint64_t index) const {
    return (size_t)row * buckets_ +
           hash64(derive_seed(seed_, 0xb0 + row), index) % buckets_;
  }

  void remove_block(std::vector<OneSparseCell>& cells,
                    std::vector<uint64_t>& sums, OneSparseCell& global,
                    uint64_t index, const std::vector<uint64_t>& block) const {
    uint64_t f = 0;
    for (uint32_t j = 0; j < block_size_; ++j)
      f = add_mod(f, mul_mod(block[j], ypow_[j]));
    uint64_t index_mod = index % kMersenne61;
    uint64_t zpow = pow_mod(z_, index);
    OneSparseCell delta;
    delta.update(index_mod, f, zpow);
    global.subtract(delta);
    for (uint32_t r = 0; r < rows_; ++r) {
      size_t bucket = bucket_of(r, index);
      cells[bucket].subtract(delta);
      uint64_t* words = &sums[bucket * block_size_];
      for (uint32_t j = 0; j < block_size_; ++j)
        words[j] = sub_mod(words[j], block[j]);
    }
  }

  uint64_t num_blocks_ = 0;
  uint32_t block_size_ = 1;
  uint32_t k_ = 0;
  double delta_ = 0.5;
  uint64_t seed_ = 0;
  uint32_t rows_ = 0;
  uint32_t buckets_ = 0;
  uint64_t y_ = 1;
  uint64_t z_ = 1;
  std::vector<uint64_t> ypow_;
  OneSparseCell global_;
  std::vector<OneSparseCell> cells_;
  std::vector<uint64_t> sums_;
};

}  // namespace gsketch
