#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gsketch/common.hpp"

namespace gsketch {

// AMS F2 sketch: median over rows of means over 6 counters per row, each
// counter a 4-wise-independent signed sum. Row count is ceil(8 ln(1/delta)),
// i.e. ceil(48 ln(1/delta)) counters total, giving a (1 +/- 1/2) F2
// approximation with probability 1 - delta. Sign-hash coefficients are
// re-derived from the seed on every update; only the counters are stored.
class AmsSketch {
 public:
  static constexpr uint32_t kColsPerRow = 6;

  AmsSketch() = default;

  AmsSketch(uint64_t dimension, double delta, uint64_t seed)
      : dimension_(dimension), delta_(delta), seed_(seed) {
    rows_ = (uint32_t)std::max<int64_t>(
        1, (int64_t)std::ceil(8.0 * std::log(1.0 / delta)));
    counters_.assign((size_t)rows_ * kColsPerRow, 0);
  }

  void update(uint64_t index, int64_t value) {
    if (index >= dimension_)
      throw std::out_of_range("AmsSketch::update index out of range");
    uint64_t x1 = index % kMersenne61;
    uint64_t x2 = mul_mod(x1, x1);
    uint64_t x3 = mul_mod(x2, x1);
    for (size_t cell = 0; cell < counters_.size(); ++cell) {
      SignHash h = SignHash::from_seed(seed_, cell);
      counters_[cell] += h.sign(x1, x2, x3) * value;
    }
  }

  double estimate_f2() const {
    std::vector<double> means(rows_);
    for (uint32_t r = 0; r < rows_; ++r) {
      double sum = 0;
      for (uint32_t c = 0; c < kColsPerRow; ++c) {
        double v = (double)counters_[(size_t)r * kColsPerRow + c];
        sum += v * v;
      }
      means[r] = sum / kColsPerRow;
    }
    std::nth_element(means.begin(), means.begin() + rows_ / 2, means.end());
    return means[rows_ / 2];
  }

  // Exactly true for the zero vector (every counter is identically 0);
  // false with probability >= 1 - delta for any nonzero integer vector.
  bool is_zero() const { return estimate_f2() < 0.5; }

  void merge(const AmsSketch& other) {
    if (!compatible(other))
      throw IncompatibleSketches("AmsSketch::merge shape/seed mismatch");
    for (size_t i = 0; i < counters_.size(); ++i)
      counters_[i] += other.counters_[i];
  }

  bool compatible(const AmsSketch& other) const {
    return dimension_ == other.dimension_ && rows_ == other.rows_ &&
           seed_ == other.seed_;
  }

  uint64_t dimension() const { return dimension_; }
  uint32_t rows() const { return rows_; }
  double delta() const { return delta_; }
  uint64_t seed() const { return seed_; }
  const std::vector<int64_t>& counters() const { return counters_; }

  size_t memory_words() const { return counters_.size() + 4; }

  bool operator==(const AmsSketch&) const = default;

  void serialize(std::ostream& out) const {
    write_tag(out, "AMS1");
    write_le<uint64_t>(out, dimension_);
    write_le<uint32_t>(out, rows_);
    write_le<uint64_t>(out, seed_);
    write_le<uint64_t>(out, (uint64_t)(delta_ * 1e18));
    for (int64_t c : counters_) write_le<int64_t>(out, c);
  }

  static AmsSketch deserialize(std::istream& in) {
    expect_tag(in, "AMS1");
    AmsSketch s;
    s.dimension_ = read_le<uint64_t>(in);
    s.rows_ = read_le<uint32_t>(in);
    s.seed_ = read_le<uint64_t>(in);
    s.delta_ = (double)read_le<uint64_t>(in) / 1e18;
    s.counters_.resize((size_t)s.rows_ * kColsPerRow);
    for (auto& c : s.counters_) c = read_le<int64_t>(in);
    return s;
  }

 private:
  uint64_t dimension_ = 0;
  double delta_ = 0.5;
  uint64_t seed_ = 0;
  uint32_t rows_ = 0;
  std::vector<int64_t> counters_;
};

}  // namespace gsketch
