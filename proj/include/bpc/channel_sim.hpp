#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bpc/codebook.hpp"
#include "bpc/image_io.hpp"
#include "bpc/io_util.hpp"
#include "bpc/pattern_channel.hpp"
#include "bpc/rng.hpp"
#include "bpc/stat_tests.hpp"
#include "bpc/types.hpp"

// Forward model of the pattern channel: fair-coin templates, per-neighborhood
// flips drawn from a codebook, dataset generation with one Philox stream per
// (role, object, shot) so any subset can be produced independently under a
// single root seed.

namespace bpc {

struct SimSpec {
    int width = 0;
    int height = 0;
    Codebook codebook;
    std::uint64_t seed = 0;
    int shots = 1;

    static std::optional<std::string> validate(const SimSpec& s) {
        if (s.width <= 0 || s.height <= 0)
            return "SimSpec: dimensions must be positive, got " +
                   std::to_string(s.width) + "x" + std::to_string(s.height);
        if (auto err = Codebook::validate(s.codebook)) return err;
        if (s.shots < 1) return "SimSpec: shots must be >= 1";
        return std::nullopt;
    }
};

inline std::optional<std::string> validate(const SimSpec& s) {
    return SimSpec::validate(s);
}

// Fair Bernoulli pixels from Philox stream (template_image, index).
inline BinaryImage gen_template(int width, int height, std::uint64_t seed,
                                std::uint64_t index = 0) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("gen_template: dimensions must be positive");
    Philox4x32 g(seed, derive_stream(StreamKind::template_image, index));
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * height);
    for (auto& b : bits) b = static_cast<std::uint8_t>(g.next_u32() & 1u);
    return BinaryImage(width, height, std::move(bits));
}

// Each interior center bit flips with the probability its TEMPLATE
// neighborhood dictates; draws are consumed in row-major interior scan order.
// Border pixels are copied unchanged.
inline BinaryImage simulate_probe(const BinaryImage& tmpl, const Codebook& codebook,
                                  std::uint64_t seed,
                                  std::uint64_t stream = derive_stream(StreamKind::original_probe, 0)) {
    if (auto err = BinaryImage::validate(tmpl)) throw std::invalid_argument(*err);
    Philox4x32 g(seed, stream);
    BinaryImage probe = tmpl;
    const int h = codebook.config.h, m = codebook.config.margin();
    for (int y = m; y < tmpl.height - m; ++y)
        for (int x = m; x < tmpl.width - m; ++x) {
            const PatternId w = detail::pattern_at(tmpl, x, y, h);
            if (g.bernoulli(codebook.entries[w].p)) probe.at(x, y) ^= 1u;
        }
    return probe;
}

inline std::string dataset_template_path(const std::string& dir, int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d.pbm", index);
    return dir + "/templates/" + buf;
}

inline std::string dataset_probe_path(const std::string& dir, bool fake, int index, int shot) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04d_shot%d.pbm", index, shot);
    return dir + (fake ? "/fakes/" : "/originals/") + buf;
}

struct DatasetManifest {
    std::uint64_t root_seed = 0;
    int width = 0;
    int height = 0;
    int n_templates = 0;
    int shots = 1;
    Codebook codebook_originals;
    Codebook codebook_fakes;
    bool complete = false;
};

inline std::string manifest_to_json(const DatasetManifest& m) {
    nlohmann::json j;
    j["root_seed"] = m.root_seed;
    j["width"] = m.width;
    j["height"] = m.height;
    j["n_templates"] = m.n_templates;
    j["shots"] = m.shots;
    j["codebook_originals"] = codebook_to_json_obj(m.codebook_originals);
    j["codebook_fakes"] = codebook_to_json_obj(m.codebook_fakes);
    j["complete"] = m.complete;
    return j.dump(2);
}

inline DatasetManifest manifest_from_json(const std::string& text,
                                          const std::string& origin = "<string>") {
    try {
        const auto j = nlohmann::json::parse(text);
        DatasetManifest m;
        m.root_seed = j.at("root_seed").get<std::uint64_t>();
        m.width = j.at("width").get<int>();
        m.height = j.at("height").get<int>();
        m.n_templates = j.at("n_templates").get<int>();
        m.shots = j.at("shots").get<int>();
        m.codebook_originals = codebook_from_json_obj(j.at("codebook_originals"), origin);
        m.codebook_fakes = codebook_from_json_obj(j.at("codebook_fakes"), origin);
        m.complete = j.value("complete", false);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(origin + ": bad dataset manifest: " + e.what());
    }
}

inline DatasetManifest load_manifest(const std::string& dir) {
    const std::string path = dir + "/manifest.json";
    auto m = manifest_from_json(read_file(path), path);
    if (!m.complete)
        throw std::runtime_error(path + ": dataset generation did not finish (no completion sentinel)");
    return m;
}

// Writes templates/NNNN.pbm, originals/NNNN_shotS.pbm, fakes/NNNN_shotS.pbm
// and finally manifest.json; the manifest's completion flag is the sentinel
// that the whole tree landed. Both specs must agree on geometry, pattern size,
// root seed, and shots; they differ only in codebook.
inline DatasetManifest make_dataset(const SimSpec& originals, const SimSpec& fakes,
                                    int n_templates, const std::string& out_dir) {
    if (auto err = SimSpec::validate(originals)) throw std::invalid_argument(*err);
    if (auto err = SimSpec::validate(fakes)) throw std::invalid_argument(*err);
    if (originals.width != fakes.width || originals.height != fakes.height)
        throw std::invalid_argument("make_dataset: specs disagree on dimensions");
    if (originals.codebook.config != fakes.codebook.config)
        throw std::invalid_argument("make_dataset: specs disagree on model config");
    if (originals.seed != fakes.seed)
        throw std::invalid_argument("make_dataset: specs must share one root seed");
    if (originals.shots != fakes.shots)
        throw std::invalid_argument("make_dataset: specs disagree on shots");
    if (n_templates <= 0)
        throw std::invalid_argument("make_dataset: n_templates must be positive");

    const std::uint64_t seed = originals.seed;
    for (int i = 0; i < n_templates; ++i) {
        const BinaryImage tmpl = gen_template(originals.width, originals.height, seed,
                                              static_cast<std::uint64_t>(i));
        write_pbm(tmpl, dataset_template_path(out_dir, i));
        for (int s = 0; s < originals.shots; ++s) {
            write_pbm(simulate_probe(tmpl, originals.codebook, seed,
                                     derive_stream(StreamKind::original_probe,
                                                   static_cast<std::uint64_t>(i),
                                                   static_cast<std::uint64_t>(s))),
                      dataset_probe_path(out_dir, false, i, s));
            write_pbm(simulate_probe(tmpl, fakes.codebook, seed,
                                     derive_stream(StreamKind::fake_probe,
                                                   static_cast<std::uint64_t>(i),
                                                   static_cast<std::uint64_t>(s))),
                      dataset_probe_path(out_dir, true, i, s));
        }
    }
    DatasetManifest m;
    m.root_seed = seed;
    m.width = originals.width;
    m.height = originals.height;
    m.n_templates = n_templates;
    m.shots = originals.shots;
    m.codebook_originals = originals.codebook;
    m.codebook_fakes = fakes.codebook;
    m.complete = true;
    write_file_atomic(out_dir + "/manifest.json", manifest_to_json(m) + "\n");
    return m;
}

// Theory-vs-simulation comparison per informative channel (the error-rate
// scatter behind the per-channel validation figure): theoretical minimum-error
// threshold test vs its empirical error over n_probes simulated counts per
// class. std_error is the binomial standard error of the empirical estimate
// at the theoretical rates.
struct Fig2Row {
    ChannelErrorProfile profile;
    double gamma_crit = 0.5;
    double empirical_p_err = 0.5;
    double std_error = 0.0;
};

inline std::vector<Fig2Row> fig2_experiment(const Codebook& c0, const Codebook& c1,
                                            std::uint64_t L, int n_probes,
                                            std::uint64_t seed) {
    if (c0.config != c1.config)
        throw std::invalid_argument("fig2_experiment: codebooks use different model configs");
    if (L == 0 || n_probes <= 0)
        throw std::invalid_argument("fig2_experiment: L and n_probes must be positive");
    std::vector<Fig2Row> rows;
    const std::size_t M = c0.config.num_patterns();
    for (std::size_t w = 0; w < M; ++w) {
        const double p = c0.entries[w].p, q = c1.entries[w].p;
        if (!channel_informative(p, q)) continue;
        Fig2Row row;
        row.profile = optimal_threshold(L, p, q, static_cast<PatternId>(w));
        row.gamma_crit = gamma_crit(p, q);
        const std::uint64_t cut = static_cast<std::uint64_t>(
            std::llround(row.profile.gamma_opt * static_cast<double>(L)));
        const bool low_is_original = p < q;
        auto count_binom = [&](double rate, std::uint64_t shot) {
            Philox4x32 g(seed, derive_stream(StreamKind::trial, w, shot));
            std::vector<std::uint64_t> ds(static_cast<std::size_t>(n_probes), 0);
            for (auto& d : ds)
                for (std::uint64_t i = 0; i < L; ++i) d += g.bernoulli(rate);
            return ds;
        };
        std::uint64_t miss = 0, fa = 0;
        for (std::uint64_t d : count_binom(p, 0))
            miss += low_is_original ? d > cut : d < cut;
        for (std::uint64_t d : count_binom(q, 1))
            fa += low_is_original ? d <= cut : d >= cut;
        const double n = static_cast<double>(n_probes);
        row.empirical_p_err = 0.5 * (static_cast<double>(miss) / n + static_cast<double>(fa) / n);
        const double pm = row.profile.p_miss, pf = row.profile.p_fa;
        row.std_error = 0.5 * std::sqrt((pm * (1.0 - pm) + pf * (1.0 - pf)) / n);
        rows.push_back(row);
    }
    return rows;
}

// Default synthetic channel laws: original flip rates log-uniform over
// [1e-3, 1e-1], fakes displaced upward by a uniform [0.05, 0.3] uplift,
// clamped to the probability floor band.
inline std::pair<Codebook, Codebook> default_sim_codebooks(const ModelConfig& config,
                                                           std::uint64_t seed) {
    const std::size_t M = config.num_patterns();
    const double lo = config.prob_floor, hi = 1.0 - config.prob_floor;
    std::vector<CodebookEntry> e0(M), e1(M);
    Philox4x32 g(seed, derive_stream(StreamKind::codebook_law, 0));
    const double la = std::log(1e-3), lb = std::log(1e-1);
    for (std::size_t w = 0; w < M; ++w) {
        const double p = std::exp(la + g.next_double() * (lb - la));
        const double uplift = 0.05 + g.next_double() * 0.25;
        e0[w].p = std::clamp(p, lo, hi);
        e1[w].p = std::clamp(p + uplift, lo, hi);
    }
    return {Codebook(config, std::move(e0)), Codebook(config, std::move(e1))};
}

// A harder world for aggregation experiments: only a few channels separate
// originals from fakes (log-uniform [2e-3, 2e-2] rates with a ~0.1 uplift);
// every other channel is equally noisy under both laws, so it carries no
// signal yet pollutes naive averaging once codebooks are estimated from data.
inline std::pair<Codebook, Codebook> mixed_sim_codebooks(const ModelConfig& config,
                                                         std::uint64_t seed,
                                                         std::size_t n_informative = 16) {
    const std::size_t M = config.num_patterns();
    if (n_informative > M)
        throw std::invalid_argument("mixed_sim_codebooks: n_informative exceeds channel count");
    const double lo = config.prob_floor, hi = 1.0 - config.prob_floor;
    std::vector<CodebookEntry> e0(M), e1(M);
    Philox4x32 g(seed, derive_stream(StreamKind::codebook_law, 1));
    for (std::size_t w = 0; w < M; ++w) {
        const double p = 0.1 + g.next_double() * 0.4;
        e0[w].p = std::clamp(p, lo, hi);
        e1[w].p = e0[w].p;
    }
    std::vector<std::size_t> idx(M);
    for (std::size_t i = 0; i < M; ++i) idx[i] = i;
    for (std::size_t i = M; i > 1; --i)
        std::swap(idx[i - 1], idx[g.next_below(i)]);
    const double la = std::log(2e-3), lb = std::log(2e-2);
    for (std::size_t i = 0; i < n_informative; ++i) {
        const std::size_t w = idx[i];
        const double p = std::exp(la + g.next_double() * (lb - la));
        const double uplift = 0.08 + g.next_double() * 0.07;
        e0[w].p = std::clamp(p, lo, hi);
        e1[w].p = std::clamp(p + uplift, lo, hi);
    }
    return {Codebook(config, std::move(e0)), Codebook(config, std::move(e1))};
}

}  // namespace bpc
