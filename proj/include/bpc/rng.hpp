#pragma once

#include <array>
#include <cstdint>

namespace bpc {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
// Counter-based: the stream is a pure function of (key, counter), so disjoint
// streams can be generated in any order, on any number of workers, and still
// agree bit for bit. Key = the 64-bit user seed; counter words 2..3 hold a
// 64-bit stream id and words 0..1 the block index within the stream.
class Philox4x32 {
  public:
    Philox4x32() : Philox4x32(0, 0) {}
    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            block_ = round10(block_index_++);
            pos_ = 0;
        }
        return block_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    // Uniform on {0, ..., n-1} by rejection; unbiased for any n >= 1.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = n * (~std::uint64_t{0} / n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    // One block, addressed directly. This is both the known-answer-test entry
    // point and a keyed 128-bit hash (used for the train/test split).
    static std::array<std::uint32_t, 4> block(std::uint64_t seed,
                                              std::uint64_t stream,
                                              std::uint64_t block_index) {
        return Philox4x32(seed, stream).round10(block_index);
    }

  private:
    static constexpr std::uint32_t kMulA = 0xD2511F53u;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

    std::array<std::uint32_t, 4> round10(std::uint64_t block) const {
        std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(block),
                                         static_cast<std::uint32_t>(block >> 32),
                                         stream_lo_, stream_hi_};
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int r = 0; r < 10; ++r) {
            const std::uint64_t prod0 = std::uint64_t{kMulA} * ctr[0];
            const std::uint64_t prod1 = std::uint64_t{kMulB} * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(prod0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(prod0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(prod1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(prod1);
            ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
            k0 += kWeylA;
            k1 += kWeylB;
        }
        return ctr;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_, stream_hi_;
    std::array<std::uint32_t, 4> block_{};
    std::uint64_t block_index_ = 0;
    int pos_ = 4;
};

// Stream-id layout used across the dataset generator: a small role tag, the
// shot index, and the object index share one 64-bit id, so every (role,
// object, shot) triple gets an independent Philox stream under one root seed.
enum class StreamKind : std::uint64_t {
    template_image = 1,
    original_probe = 2,
    fake_probe = 3,
    split_hash = 4,
    trial = 5,
    codebook_law = 6,
};

inline std::uint64_t derive_stream(StreamKind kind, std::uint64_t index,
                                   std::uint64_t shot = 0) {
    return (static_cast<std::uint64_t>(kind) << 56) | (shot << 40) | index;
}

}  // namespace bpc
