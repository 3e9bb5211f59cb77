#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsketch {

// ---------------------------------------------------------------------------
// Field arithmetic over the Mersenne prime p = 2^61 - 1.
//
// All sketch fingerprints and cell counters live in Z_p so that sketch state
// forms an abelian group under componentwise addition: merging two sketches
// is exactly componentwise addmod, and block-composed sketches stay linear.
// ---------------------------------------------------------------------------

inline constexpr uint64_t kMersenne61 = (uint64_t(1) << 61) - 1;

inline uint64_t add_mod(uint64_t a, uint64_t b) {
  uint64_t s = a + b;  // both < 2^61, no overflow
  if (s >= kMersenne61) s -= kMersenne61;
  return s;
}

inline uint64_t sub_mod(uint64_t a, uint64_t b) {
  return a >= b ? a - b : a + kMersenne61 - b;
}

inline uint64_t mul_mod(uint64_t a, uint64_t b) {
  unsigned __int128 prod = (unsigned __int128)a * b;
  uint64_t lo = (uint64_t)(prod & kMersenne61);
  uint64_t hi = (uint64_t)(prod >> 61);
  uint64_t s = lo + hi;
  if (s >= kMersenne61) s -= kMersenne61;
  return s;
}

inline uint64_t pow_mod(uint64_t base, uint64_t exp) {
  uint64_t r = 1;
  base %= kMersenne61;
  while (exp) {
    if (exp & 1) r = mul_mod(r, base);
    base = mul_mod(base, base);
    exp >>= 1;
  }
  return r;
}

inline uint64_t inv_mod(uint64_t a) { return pow_mod(a, kMersenne61 - 2); }

// Maps a signed integer into Z_p. Exact for |v| < p.
inline uint64_t to_mod(int64_t v) {
  if (v >= 0) return uint64_t(v) % kMersenne61;
  return kMersenne61 - (uint64_t(-v) % kMersenne61);
}

// Inverse of to_mod for small magnitudes: values in (p/2, p) read as negative.
inline int64_t from_mod(uint64_t v) {
  if (v > kMersenne61 / 2) return -int64_t(kMersenne61 - v);
  return int64_t(v);
}

// ---------------------------------------------------------------------------
// Hashing. Everything randomized in this library is derived from explicit
// 64-bit seeds through these mixers, so runs are reproducible across
// platforms. No std::hash, no global RNG state.
// ---------------------------------------------------------------------------

inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t hash64(uint64_t seed, uint64_t x) {
  return mix64(mix64(x) ^ seed);
}

// Derives an independent child seed from (seed, tag). Chain freely.
inline uint64_t derive_seed(uint64_t seed, uint64_t tag) {
  return mix64(seed ^ mix64(tag ^ 0xd1b54a32d192ed03ULL));
}

inline uint64_t derive_seed(uint64_t seed, uint64_t tag1, uint64_t tag2) {
  return derive_seed(derive_seed(seed, tag1), tag2);
}

// Inclusion threshold for Bernoulli(prob) decisions of the form
// hash64(seed, x) < threshold. Computed with double arithmetic only, so the
// sampled set is identical on every IEEE-754 platform.
inline uint64_t prob_threshold(double prob) {
  if (prob <= 0.0) return 0;
  if (prob >= 1.0) return UINT64_MAX;
  double scaled = prob * 18446744073709551616.0;  // p * 2^64 < 2^64
  if (scaled >= 18446744073709551615.0) return UINT64_MAX;
  return (uint64_t)scaled;
}

inline bool hash_bernoulli(uint64_t seed, uint64_t x, uint64_t threshold) {
  if (threshold == UINT64_MAX) return true;
  return hash64(seed, x) < threshold;
}

// Nonzero field element derived from a seed, used as fingerprint evaluation
// points.
inline uint64_t derive_field_point(uint64_t seed, uint64_t tag) {
  uint64_t v = derive_seed(seed, tag) % kMersenne61;
  return v == 0 ? 1 : v;
}

// 4-wise independent sign hash: degree-3 polynomial over Z_p, sign taken
// from the low bit. Coefficients are derived per (seed, cell) on the fly so
// the sketch state stores counters only.
struct SignHash {
  uint64_t c0, c1, c2, c3;

  static SignHash from_seed(uint64_t seed, uint64_t cell) {
    uint64_t s = derive_seed(seed, cell);
    return SignHash{mix64(s + 1) % kMersenne61, mix64(s + 2) % kMersenne61,
                    mix64(s + 3) % kMersenne61, mix64(s + 4) % kMersenne61};
  }

  // Caller supplies x, x^2, x^3 mod p (shared across cells for one index).
  int sign(uint64_t x1, uint64_t x2, uint64_t x3) const {
    uint64_t v = add_mod(add_mod(c0, mul_mod(c1, x1)),
                         add_mod(mul_mod(c2, x2), mul_mod(c3, x3)));
    return (v & 1) ? 1 : -1;
  }
};

// ---------------------------------------------------------------------------
// Union-find over 0..n-1.
// ---------------------------------------------------------------------------

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n), rank_(n, 0), count_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  size_t find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns true if x and y were in different sets.
  bool unite(size_t x, size_t y) {
    size_t rx = find(x), ry = find(y);
    if (rx == ry) return false;
    if (rank_[rx] < rank_[ry]) std::swap(rx, ry);
    parent_[ry] = rx;
    if (rank_[rx] == rank_[ry]) ++rank_[rx];
    --count_;
    return true;
  }

  size_t count() const { return count_; }
  size_t size() const { return parent_.size(); }

 private:
  std::vector<size_t> parent_;
  std::vector<uint8_t> rank_;
  size_t count_;
};

// ---------------------------------------------------------------------------
// Little-endian byte I/O for the versioned sketch blobs and binary streams.
// ---------------------------------------------------------------------------

struct SerializationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::is_integral_v<T>);
  unsigned char buf[sizeof(T)];
  using U = std::make_unsigned_t<T>;
  U u = (U)value;
  for (size_t i = 0; i < sizeof(T); ++i) buf[i] = (unsigned char)(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  static_assert(std::is_integral_v<T>);
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!in) throw SerializationError("unexpected end of input");
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (size_t i = 0; i < sizeof(T); ++i) u |= (U)buf[i] << (8 * i);
  return (T)u;
}

inline void write_tag(std::ostream& out, const char (&tag)[5]) {
  out.write(tag, 4);
}

inline void expect_tag(std::istream& in, const char (&tag)[5]) {
  char buf[4];
  in.read(buf, 4);
  if (!in || std::memcmp(buf, tag, 4) != 0)
    throw SerializationError(std::string("expected blob tag ") + tag);
}

struct IncompatibleSketches : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace gsketch
