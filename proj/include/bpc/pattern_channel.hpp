#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bpc/codebook.hpp"
#include "bpc/types.hpp"

// Channel mechanics: every interior pixel of a template belongs to the channel
// named by its h*h neighborhood, and comparing template to probe at that pixel
// yields one Bernoulli observation of that channel's flip rate.

namespace bpc {

// Row-major big-endian: the top-left neighborhood bit lands in the most
// significant position, so for h=3 the center pixel is bit 4 and an all-ones
// block encodes to 511.
inline PatternId encode_pattern(const std::vector<std::uint8_t>& block, int h) {
    if (block.size() != static_cast<std::size_t>(h) * h)
        throw std::invalid_argument(
            "encode_pattern: block has " + std::to_string(block.size()) +
            " bits, expected " + std::to_string(h * h));
    PatternId id = 0;
    for (std::uint8_t b : block) id = (id << 1) | (b & 1u);
    return id;
}

namespace detail {

// Neighborhood id at interior pixel (x, y), reading the image directly.
inline PatternId pattern_at(const BinaryImage& im, int x, int y, int h) {
    const int m = h / 2;
    PatternId id = 0;
    for (int dy = -m; dy <= m; ++dy) {
        const std::uint8_t* row =
            im.bits.data() + static_cast<std::size_t>(y + dy) * im.width + (x - m);
        for (int dx = 0; dx < h; ++dx) id = (id << 1) | row[dx];
    }
    return id;
}

}  // namespace detail

// D and L accumulate per channel over all interior pixels; the margin of
// floor(h/2) pixels at each edge never contributes. The TEMPLATE neighborhood
// picks the channel; the probe only supplies the center bit being compared.
inline ChannelObservations extract_channels(const BinaryImage& tmpl,
                                            const BinaryImage& probe,
                                            const ModelConfig& config,
                                            ChannelObservations* accumulate = nullptr) {
    if (tmpl.width != probe.width || tmpl.height != probe.height)
        throw std::invalid_argument(
            "extract_channels: template is " + std::to_string(tmpl.width) + "x" +
            std::to_string(tmpl.height) + " but probe is " +
            std::to_string(probe.width) + "x" + std::to_string(probe.height));
    ChannelObservations local(config);
    ChannelObservations& out = accumulate ? *accumulate : local;
    const int h = config.h, m = config.margin();
    for (int y = m; y < tmpl.height - m; ++y) {
        for (int x = m; x < tmpl.width - m; ++x) {
            const PatternId w = detail::pattern_at(tmpl, x, y, h);
            auto& c = out.per_pattern[w];
            c.D += tmpl.at(x, y) ^ probe.at(x, y);
            c.L += 1;
        }
    }
    return out;
}

inline Codebook codebook_from_counts(const ChannelObservations& pooled) {
    const ModelConfig& config = pooled.config;
    const double lo = config.prob_floor, hi = 1.0 - config.prob_floor;
    std::vector<CodebookEntry> entries(config.num_patterns());
    for (std::size_t w = 0; w < entries.size(); ++w) {
        const auto& c = pooled.per_pattern[w];
        entries[w].occurrences = c.L;
        entries[w].flips = c.D;
        entries[w].p = c.L == 0
                           ? lo
                           : std::clamp(static_cast<double>(c.D) / static_cast<double>(c.L), lo, hi);
    }
    return Codebook(config, std::move(entries));
}

// Pools counts over all pairs first, then divides once; channels never seen
// keep occurrences 0 and sit at the probability floor.
inline Codebook estimate_codebook(
    const std::vector<std::pair<BinaryImage, BinaryImage>>& pairs,
    const ModelConfig& config) {
    if (pairs.empty())
        throw std::invalid_argument("estimate_codebook: no (template, probe) pairs");
    ChannelObservations pooled(config);
    for (const auto& [tmpl, probe] : pairs)
        extract_channels(tmpl, probe, config, &pooled);
    return codebook_from_counts(pooled);
}

inline ProbeFeatures probe_features(const ChannelObservations& obs) {
    ProbeFeatures f;
    f.config = obs.config;
    const std::size_t M = obs.per_pattern.size();
    f.p_hat.resize(M);
    f.support.resize(M);
    for (std::size_t w = 0; w < M; ++w) {
        const auto& c = obs.per_pattern[w];
        f.support[w] = c.L;
        f.p_hat[w] = c.L == 0 ? ProbeFeatures::undefined_marker()
                              : static_cast<double>(c.D) / static_cast<double>(c.L);
    }
    return f;
}

// Multiple captures of the same template are independent looks at the same
// channels, so their counts add.
inline ChannelObservations fuse_multishot(const std::vector<ChannelObservations>& shots) {
    if (shots.empty())
        throw std::invalid_argument("fuse_multishot: no shots");
    ChannelObservations out = shots.front();
    for (std::size_t i = 1; i < shots.size(); ++i) {
        if (shots[i].config != out.config)
            throw std::invalid_argument("fuse_multishot: shot " + std::to_string(i) +
                                        " uses a different model config");
        for (std::size_t w = 0; w < out.per_pattern.size(); ++w) {
            out.per_pattern[w].D += shots[i].per_pattern[w].D;
            out.per_pattern[w].L += shots[i].per_pattern[w].L;
        }
    }
    return out;
}

}  // namespace bpc
