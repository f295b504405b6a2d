#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdint>
#include <vector>

#include "bpc/rng.hpp"

using bpc::Philox4x32;
using bpc::StreamKind;

TEST_CASE("philox matches the published 10-round test vectors") {
    // Counter words are {block_lo, block_hi, stream_lo, stream_hi} and key
    // words {seed_lo, seed_hi}, so the reference vectors map directly.
    const auto zero = Philox4x32::block(0, 0, 0);
    CHECK(zero == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du,
                                               0xbc57ac4cu, 0x9b00dbd8u});

    const auto pi = Philox4x32::block(0x299f31d0a4093822ull, 0x0370734413198a2eull,
                                      0x85a308d3243f6a88ull);
    CHECK(pi == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu,
                                             0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streaming interface replays the block function in order") {
    Philox4x32 g(42, 7);
    std::vector<std::uint32_t> seq;
    for (int i = 0; i < 12; ++i) seq.push_back(g.next_u32());
    for (std::uint64_t blk = 0; blk < 3; ++blk) {
        const auto words = Philox4x32::block(42, 7, blk);
        for (int i = 0; i < 4; ++i) CHECK(seq[blk * 4 + i] == words[i]);
    }
}

TEST_CASE("generators are deterministic per (seed, stream) and differ across streams") {
    Philox4x32 a(123, 5), b(123, 5), c(123, 6), d(124, 5);
    bool same_c = true, same_d = true;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u32();
        CHECK(va == b.next_u32());
        same_c = same_c && va == c.next_u32();
        same_d = same_d && va == d.next_u32();
    }
    CHECK_FALSE(same_c);
    CHECK_FALSE(same_d);
}

TEST_CASE("next_double lies in the unit interval and bernoulli honors the extremes") {
    Philox4x32 g(9, 1);
    for (int i = 0; i < 1000; ++i) {
        const double u = g.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    Philox4x32 h(9, 2);
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(h.bernoulli(0.0));
        CHECK(h.bernoulli(1.0));
    }
}

TEST_CASE("next_below stays in range and covers small supports") {
    Philox4x32 g(77, 0);
    std::array<int, 5> seen{};
    for (int i = 0; i < 500; ++i) {
        const auto v = g.next_below(5);
        REQUIRE(v < 5);
        ++seen[v];
    }
    for (int count : seen) CHECK(count > 0);
}

TEST_CASE("stream ids separate role, shot, and index") {
    const auto id = bpc::derive_stream(StreamKind::original_probe, 3, 2);
    CHECK(id == ((std::uint64_t{2} << 56) | (std::uint64_t{2} << 40) | 3));
    CHECK(bpc::derive_stream(StreamKind::template_image, 0) == (std::uint64_t{1} << 56));
    CHECK(bpc::derive_stream(StreamKind::template_image, 1) !=
          bpc::derive_stream(StreamKind::fake_probe, 1));
    CHECK(bpc::derive_stream(StreamKind::trial, 1, 0) !=
          bpc::derive_stream(StreamKind::trial, 1, 1));
}
