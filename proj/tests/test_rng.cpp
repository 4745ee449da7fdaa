#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "volvol/rng.hpp"

using volvol::rng::Block;
using volvol::rng::pack_stream_id;
using volvol::rng::philox4x32_10;
using volvol::rng::Stream;

namespace {

bool block_eq(const Block& b, std::uint32_t a0, std::uint32_t a1,
              std::uint32_t a2, std::uint32_t a3) {
  return b.x[0] == a0 && b.x[1] == a1 && b.x[2] == a2 && b.x[3] == a3;
}

}  // namespace

TEST_CASE("philox known-answer vectors") {
  CHECK(block_eq(philox4x32_10({{0, 0, 0, 0}}, 0, 0), 0x6627e8d5u,
                 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u));
  CHECK(block_eq(
      philox4x32_10({{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}},
                    0xffffffffu, 0xffffffffu),
      0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu));
  CHECK(block_eq(philox4x32_10({{0x243f6a88u, 0x85a308d3u, 0x13198a2eu,
                                 0x03707344u}},
                               0xa4093822u, 0x299f31d0u),
                 0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u));
}

TEST_CASE("stream words come straight from counter blocks") {
  Stream s(0x0123456789abcdefull, 42);
  const std::uint64_t a = s.next_u64();
  const std::uint64_t b = s.next_u64();
  const std::uint64_t c = s.next_u64();
  // Position 0 and 1 blocks, computed directly.
  const Block b0 = philox4x32_10({{0, 0, 42, 0}}, 0x89abcdefu, 0x01234567u);
  const Block b1 = philox4x32_10({{1, 0, 42, 0}}, 0x89abcdefu, 0x01234567u);
  CHECK(a == ((static_cast<std::uint64_t>(b0.x[0]) << 32) | b0.x[1]));
  CHECK(b == ((static_cast<std::uint64_t>(b0.x[2]) << 32) | b0.x[3]));
  CHECK(c == ((static_cast<std::uint64_t>(b1.x[0]) << 32) | b1.x[1]));
}

TEST_CASE("streams are reproducible and distinct") {
  Stream a(7, 1), b(7, 1), c(7, 2), d(8, 1);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a.next_u64());
    vb.push_back(b.next_u64());
    vc.push_back(c.next_u64());
    vd.push_back(d.next_u64());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  CHECK(vc != vd);
}

TEST_CASE("uniforms live strictly inside (0,1) and normals are finite") {
  Stream s(123, 9);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = s.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);   // the range is actually exercised
  CHECK(hi > 0.99);
  Stream t(123, 10);
  for (int i = 0; i < 20000; ++i) {
    CHECK(std::isfinite(t.normal()));
  }
}

TEST_CASE("normal moments match the standard distribution") {
  Stream s(3141, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("stream ids pack disjointly") {
  CHECK(pack_stream_id(0, 0, 0, 0) == 0);
  CHECK(pack_stream_id(1, 0, 0, 0) == (1ull << 42));
  CHECK(pack_stream_id(0, 1, 0, 0) == (1ull << 18));
  CHECK(pack_stream_id(0, 0, 1, 0) == 4);
  CHECK(pack_stream_id(0, 0, 0, 3) == 3);
  // Distinctness across a small lattice of coordinates.
  std::set<std::uint64_t> ids;
  for (std::uint64_t n : {1ull, 2500ull, 10000ull}) {
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      for (std::uint64_t slot = 0; slot < 5; ++slot) {
        ids.insert(pack_stream_id(n, rep, slot));
      }
    }
  }
  CHECK(ids.size() == 3u * 20u * 5u);
  // The data path (slot 0) and bootstrap draw b (slot b+1) never collide
  // within the replication budget.
  CHECK(pack_stream_id(10000, 3, 0) + (4ull << 2) ==
        pack_stream_id(10000, 3, 4));
}
