#pragma once

#include <array>
#include <cstdint>

#include "volvol/stats.hpp"

namespace volvol::rng {

// Philox4x32-10 counter-based generator. Every 128-bit counter block maps to
// four independent 32-bit words under a 64-bit key, so a (key, stream-id)
// pair names a reproducible stream regardless of thread schedule: stream id
// occupies the high counter words, the block position the low ones.

struct Block {
  std::uint32_t x[4];
};

inline Block philox4x32_10(Block ctr, std::uint32_t key0, std::uint32_t key1) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr.x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr.x[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const Block next = {{hi1 ^ ctr.x[1] ^ key0, lo1, hi0 ^ ctr.x[3] ^ key1, lo0}};
    ctr = next;
    if (round < 9) {
      key0 += kWeyl0;
      key1 += kWeyl1;
    }
  }
  return ctr;
}

class Stream {
 public:
  Stream(std::uint64_t key, std::uint64_t stream_id)
      : key_(key), id_(stream_id) {}

  std::uint64_t key() const { return key_; }
  std::uint64_t id() const { return id_; }

  std::uint64_t next_u64() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const Block b = block_at(pos_++);
    spare_ = (static_cast<std::uint64_t>(b.x[2]) << 32) | b.x[3];
    have_spare_ = true;
    return (static_cast<std::uint64_t>(b.x[0]) << 32) | b.x[1];
  }

  // Uniform on the open interval (0,1): never 0, never 1, symmetric. Safe to
  // feed straight into the normal inverse CDF.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  double normal() { return normal_quantile_unchecked(uniform01()); }

  std::pair<double, double> normal_pair() {
    const double a = normal();
    const double b = normal();
    return {a, b};
  }

 private:
  Block block_at(std::uint64_t position) const {
    const Block ctr = {{static_cast<std::uint32_t>(position),
                        static_cast<std::uint32_t>(position >> 32),
                        static_cast<std::uint32_t>(id_),
                        static_cast<std::uint32_t>(id_ >> 32)}};
    return philox4x32_10(ctr, static_cast<std::uint32_t>(key_),
                         static_cast<std::uint32_t>(key_ >> 32));
  }

  std::uint64_t key_;
  std::uint64_t id_;
  std::uint64_t pos_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

// Structured stream ids keep replications provably disjoint without hashing:
// id = n(22 bits) | replication(24 bits) | bootstrap slot(16 bits) | tag(2).
// Bootstrap slot 0 is the data path itself; slot b+1 is bootstrap draw b.
inline std::uint64_t pack_stream_id(std::uint64_t n, std::uint64_t replication,
                                    std::uint64_t boot_slot = 0,
                                    std::uint64_t tag = 0) {
  return (n << 42) | (replication << 18) | (boot_slot << 2) | tag;
}

inline constexpr std::uint64_t kMaxStreamN = (1ull << 22) - 1;
inline constexpr std::uint64_t kMaxStreamReplication = (1ull << 24) - 1;
inline constexpr std::uint64_t kMaxStreamBootSlot = (1ull << 16) - 1;

}  // namespace volvol::rng
