#pragma once

#include <cstdint>
#include <optional>

#include "gsketch/common.hpp"

namespace gsketch {

// One-sparse detector over Z_p: count of values, index-weighted sum, and a
// fingerprint sum value * z^index at a shared random evaluation point z.
// Linear in the sketched vector, so cells merge by componentwise addmod.
struct OneSparseCell {
  uint64_t count = 0;   // sum of values, mod p
  uint64_t weighted = 0;  // sum of index * value, mod p
  uint64_t fingerprint = 0;  // sum of value * z^index, mod p

  // index_mod = index % p, value_mod = value % p, zpow = z^index % p.
  void update(uint64_t index_mod, uint64_t value_mod, uint64_t zpow) {
    count = add_mod(count, value_mod);
    weighted = add_mod(weighted, mul_mod(index_mod, value_mod));
    fingerprint = add_mod(fingerprint, mul_mod(value_mod, zpow));
  }

  void merge(const OneSparseCell& other) {
    count = add_mod(count, other.count);
    weighted = add_mod(weighted, other.weighted);
    fingerprint = add_mod(fingerprint, other.fingerprint);
  }

  void subtract(const OneSparseCell& other) {
    count = sub_mod(count, other.count);
    weighted = sub_mod(weighted, other.weighted);
    fingerprint = sub_mod(fingerprint, other.fingerprint);
  }

  bool is_zero() const {
    return count == 0 && weighted == 0 && fingerprint == 0;
  }

  bool operator==(const OneSparseCell&) const = default;
};

struct OneSparseHit {
  uint64_t index;
  uint64_t value_mod;  // recovered value in Z_p; from_mod for small integers
};

// Verifies that the cell state is consistent with an exactly 1-sparse
// restricted vector and returns (index, value) when it is. A vector that is
// not 1-sparse passes only on a fingerprint collision (prob <= dim/p).
inline std::optional<OneSparseHit> decode_one_sparse(const OneSparseCell& cell,
                                                     uint64_t dim,
                                                     uint64_t z) {
  if (cell.count == 0) return std::nullopt;
  uint64_t index = mul_mod(cell.weighted, inv_mod(cell.count));
  if (index >= dim) return std::nullopt;
  if (cell.fingerprint != mul_mod(cell.count, pow_mod(z, index)))
    return std::nullopt;
  return OneSparseHit{index, cell.count};
}

inline void write_cell(std::ostream& out, const OneSparseCell& cell) {
  write_le<uint64_t>(out, cell.count);
  write_le<uint64_t>(out, cell.weighted);
  write_le<uint64_t>(out, cell.fingerprint);
}

inline OneSparseCell read_cell(std::istream& in) {
  OneSparseCell cell;
  cell.count = read_le<uint64_t>(in);
  cell.weighted = read_le<uint64_t>(in);
  cell.fingerprint = read_le<uint64_t>(in);
  return cell;
}

}  // namespace gsketch
