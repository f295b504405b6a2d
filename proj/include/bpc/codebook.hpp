#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bpc/io_util.hpp"
#include "bpc/types.hpp"

namespace bpc {

// One channel's estimated law: how many neighborhood occurrences were pooled,
// how many center bits flipped, and the clamped flip probability.
struct CodebookEntry {
    std::uint64_t occurrences = 0;
    std::uint64_t flips = 0;
    double p = 0.0;

    friend bool operator==(const CodebookEntry& a, const CodebookEntry& b) {
        return a.occurrences == b.occurrences && a.flips == b.flips && a.p == b.p;
    }
};

struct Codebook {
    ModelConfig config;
    std::vector<CodebookEntry> entries;  // length M, indexed by PatternId

    Codebook() = default;
    Codebook(ModelConfig cfg, std::vector<CodebookEntry> e)
        : config(cfg), entries(std::move(e)) {
        if (auto err = validate(*this)) throw std::invalid_argument(*err);
    }

    // All channels share one probability; counts record nothing.
    static Codebook uniform(ModelConfig cfg, double p) {
        const double lo = cfg.prob_floor, hi = 1.0 - cfg.prob_floor;
        std::vector<CodebookEntry> e(cfg.num_patterns(),
                                     CodebookEntry{0, 0, std::clamp(p, lo, hi)});
        return Codebook(cfg, std::move(e));
    }

    double p(PatternId id) const { return entries[id].p; }

    friend bool operator==(const Codebook& a, const Codebook& b) {
        return a.config == b.config && a.entries == b.entries;
    }

    static std::optional<std::string> validate(const Codebook& cb) {
        if (auto err = ModelConfig::validate(cb.config)) return err;
        const std::size_t M = cb.config.num_patterns();
        if (cb.entries.size() != M)
            return "Codebook: " + std::to_string(cb.entries.size()) +
                   " entries, expected " + std::to_string(M);
        const double lo = cb.config.prob_floor, hi = 1.0 - cb.config.prob_floor;
        for (std::size_t w = 0; w < M; ++w) {
            const auto& e = cb.entries[w];
            if (e.flips > e.occurrences)
                return "Codebook: flips > occurrences at pattern " + std::to_string(w);
            if (!(e.p >= lo && e.p <= hi))
                return "Codebook: p out of [prob_floor, 1-prob_floor] at pattern " +
                       std::to_string(w);
        }
        return std::nullopt;
    }
};

inline std::optional<std::string> validate(const Codebook& cb) {
    return Codebook::validate(cb);
}

// Raw per-channel counts from one or more (template, probe) comparisons:
// D = flipped centers, L = neighborhood occurrences.
struct ChannelCount {
    std::uint64_t D = 0;
    std::uint64_t L = 0;

    friend bool operator==(const ChannelCount& a, const ChannelCount& b) {
        return a.D == b.D && a.L == b.L;
    }
};

struct ChannelObservations {
    ModelConfig config;
    std::vector<ChannelCount> per_pattern;  // length M, indexed by PatternId

    ChannelObservations() = default;
    explicit ChannelObservations(ModelConfig cfg)
        : config(cfg), per_pattern(cfg.num_patterns()) {}
    ChannelObservations(ModelConfig cfg, std::vector<ChannelCount> counts)
        : config(cfg), per_pattern(std::move(counts)) {
        if (auto err = validate(*this)) throw std::invalid_argument(*err);
    }

    std::uint64_t total_support() const {
        std::uint64_t s = 0;
        for (const auto& c : per_pattern) s += c.L;
        return s;
    }

    friend bool operator==(const ChannelObservations& a, const ChannelObservations& b) {
        return a.config == b.config && a.per_pattern == b.per_pattern;
    }

    static std::optional<std::string> validate(const ChannelObservations& obs) {
        if (auto err = ModelConfig::validate(obs.config)) return err;
        const std::size_t M = obs.config.num_patterns();
        if (obs.per_pattern.size() != M)
            return "ChannelObservations: " + std::to_string(obs.per_pattern.size()) +
                   " channels, expected " + std::to_string(M);
        for (std::size_t w = 0; w < M; ++w)
            if (obs.per_pattern[w].D > obs.per_pattern[w].L)
                return "ChannelObservations: D > L at pattern " + std::to_string(w);
        return std::nullopt;
    }
};

inline std::optional<std::string> validate(const ChannelObservations& obs) {
    return ChannelObservations::validate(obs);
}

// Empirical flip rates of one probe. Channels the probe never exercised
// (support 0) hold NaN in p_hat, never a fabricated rate; is_defined() is the
// intended test.
struct ProbeFeatures {
    ModelConfig config;
    std::vector<double> p_hat;            // length M; NaN where support is 0
    std::vector<std::uint64_t> support;   // length M

    bool is_defined(PatternId id) const { return support[id] > 0; }

    static constexpr double undefined_marker() {
        return std::numeric_limits<double>::quiet_NaN();
    }
};

// Codebook file format: {"h": int, "prob_floor": float,
// "entries": [[occurrences, flips, p], ...]}. nlohmann emits the shortest
// decimal that round-trips, so probabilities survive bit-exactly.
inline nlohmann::json codebook_to_json_obj(const Codebook& cb) {
    nlohmann::json j;
    j["h"] = cb.config.h;
    j["prob_floor"] = cb.config.prob_floor;
    auto& entries = j["entries"] = nlohmann::json::array();
    for (const auto& e : cb.entries)
        entries.push_back({e.occurrences, e.flips, e.p});
    return j;
}

inline std::string codebook_to_json(const Codebook& cb) {
    return codebook_to_json_obj(cb).dump();
}

inline Codebook codebook_from_json_obj(const nlohmann::json& j,
                                       const std::string& origin = "<json>") {
    try {
        ModelConfig cfg(j.at("h").get<int>(), j.at("prob_floor").get<double>());
        std::vector<CodebookEntry> entries;
        for (const auto& row : j.at("entries")) {
            if (!row.is_array() || row.size() != 3)
                throw std::runtime_error("entry is not [occurrences, flips, p]");
            entries.push_back(CodebookEntry{row[0].get<std::uint64_t>(),
                                            row[1].get<std::uint64_t>(),
                                            row[2].get<double>()});
        }
        return Codebook(cfg, std::move(entries));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(origin + ": bad codebook JSON: " + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(origin + ": invalid codebook: " + e.what());
    }
}

inline Codebook codebook_from_json(const std::string& text, const std::string& origin = "<string>") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(origin + ": not valid JSON: " + e.what());
    }
    return codebook_from_json_obj(j, origin);
}

inline void save_codebook(const Codebook& cb, const std::string& path) {
    write_file_atomic(path, codebook_to_json(cb) + "\n");
}

inline Codebook load_codebook(const std::string& path) {
    return codebook_from_json(read_file(path), path);
}

}  // namespace bpc
