// End-to-end numerical gate for the library: each check prints one PASS/FAIL
// line with its runtime and the process exits with the number of failures.
// Oracles are exact rational or 50-digit float evaluation (oracle.hpp), plus
// seeded Monte-Carlo with binomial error bars where a closed form is compared
// against simulation.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "bpc/aggregation.hpp"
#include "bpc/channel_sim.hpp"
#include "bpc/evaluate.hpp"
#include "bpc/imaging.hpp"
#include "bpc/pattern_channel.hpp"
#include "bpc/rng.hpp"
#include "bpc/stat_tests.hpp"
#include "oracle.hpp"

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

int failures = 0;

void report(int id, bool pass, const char* what, double secs) {
    std::printf("[%s] %2d %s (%.2fs)\n", pass ? "PASS" : "FAIL", id, what, secs);
    if (!pass) ++failures;
}

// 1. Closed-form binomial tails against exact rational sums, every cut,
//    L <= 20, four rates; also the floor(gamma L) wrappers at half-integer
//    boundaries. Absolute error <= 1e-12, under one second.
void criterion_tails() {
    Timer t;
    bool ok = true;
    for (const double p : {0.01, 0.1, 0.3, 0.5}) {
        for (std::uint64_t L = 1; L <= 20 && ok; ++L) {
            for (std::uint64_t cut = 0; cut <= L; ++cut) {
                const double up = oracle::to_double(oracle::binom_upper_tail(cut, L, p));
                const double lo = oracle::to_double(oracle::binom_lower_tail(cut, L, p));
                if (std::abs(bpc::binom_upper_tail(cut, L, p) - up) > 1e-12 ||
                    std::abs(bpc::binom_lower_tail(cut, L, p) - lo) > 1e-12) {
                    ok = false;
                    break;
                }
                if (cut < L) {
                    const double gamma = (static_cast<double>(cut) + 0.5) /
                                         static_cast<double>(L);
                    if (std::abs(bpc::p_miss(gamma, L, p) - up) > 1e-12 ||
                        std::abs(bpc::p_false_accept(gamma, L, p) - lo) > 1e-12) {
                        ok = false;
                        break;
                    }
                }
            }
        }
    }
    const double secs = t.secs();
    report(1, ok && secs < 1.0, "binomial tails match the exact rational oracle", secs);
}

// 2. The closed-form decision boundary against 50-digit evaluation and its
//    exact symmetry at complementary rates.
void criterion_boundary() {
    Timer t;
    bool ok = true;
    const double g = bpc::gamma_crit(0.1, 0.4);
    ok &= std::abs(g - 0.226294) <= 1e-6;
    ok &= std::abs(g - oracle::to_double(oracle::gamma_crit_hp(0.1, 0.4))) <= 1e-13;
    for (const double p : {0.05, 0.2, 0.45}) ok &= bpc::gamma_crit(p, 1.0 - p) == 0.5;
    report(2, ok, "critical boundary matches high-precision evaluation and symmetry", t.secs());
}

// 3. The exhaustive minimum-error integer cut always brackets the boundary:
//    cut in {floor(gamma_crit L), ceil(gamma_crit L)} over random rate pairs.
void criterion_cut_brackets() {
    Timer t;
    bool ok = true;
    bpc::Philox4x32 g(41, bpc::derive_stream(bpc::StreamKind::trial, 0));
    for (int i = 0; i < 200 && ok; ++i) {
        double a = 0.001 + g.next_double() * 0.599;
        double b = 0.001 + g.next_double() * 0.599;
        while (std::abs(a - b) < 1e-3) b = 0.001 + g.next_double() * 0.599;
        const double p = std::min(a, b), q = std::max(a, b);
        const double gc = bpc::gamma_crit(p, q);
        for (const std::uint64_t L : {50u, 100u, 400u}) {
            const auto pr = bpc::optimal_threshold(L, p, q);
            const auto cut = static_cast<std::uint64_t>(
                std::llround(pr.gamma_opt * static_cast<double>(L)));
            const double gl = gc * static_cast<double>(L);
            if (cut != static_cast<std::uint64_t>(std::floor(gl)) &&
                cut != static_cast<std::uint64_t>(std::ceil(gl))) {
                ok = false;
                break;
            }
        }
    }
    const double secs = t.secs();
    report(3, ok && secs < 10.0, "optimal integer cut brackets the critical boundary", secs);
}

// 4. Simulated per-channel error of the optimal threshold test stays within
//    3 Monte-Carlo standard errors of the closed form on >= 95% of the 512
//    channels, in under two minutes.
void criterion_channel_error_scatter() {
    Timer t;
    const bpc::ModelConfig config(3, 1e-6);
    const auto [c0, c1] = bpc::default_sim_codebooks(config, 4001);
    const auto rows = bpc::fig2_experiment(c0, c1, 100, 500, 4001);
    std::size_t within = 0;
    for (const auto& r : rows)
        within += std::abs(r.empirical_p_err - r.profile.p_err) <= 3.0 * r.std_error;
    const bool ok = rows.size() == 512 &&
                    static_cast<double>(within) >= 0.95 * static_cast<double>(rows.size());
    const double secs = t.secs();
    report(4, ok && secs < 120.0, "per-channel error rates match simulation", secs);
}

// 5. The per-channel log-likelihood score equals the direct per-bit sum
//    D log P + (L - D) log(1 - P) to 1e-12 relative on simulated probes.
void criterion_pll_identity() {
    Timer t;
    const bpc::ModelConfig config(3, 1e-6);
    const auto [c0, c1] = bpc::default_sim_codebooks(config, 4002);
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
        const auto tmpl = bpc::gen_template(64, 64, 4002, static_cast<std::uint64_t>(i));
        const auto probe = bpc::simulate_probe(
            tmpl, c0, 4002,
            bpc::derive_stream(bpc::StreamKind::original_probe, static_cast<std::uint64_t>(i)));
        const auto obs = bpc::extract_channels(tmpl, probe, config);
        const double pll = bpc::pll_score(bpc::probe_features(obs), c0);
        double direct = 0.0;
        for (std::size_t w = 0; w < obs.per_pattern.size(); ++w) {
            const auto& c = obs.per_pattern[w];
            if (c.L == 0) continue;
            const double p = c0.entries[w].p;
            direct += static_cast<double>(c.D) * std::log(p) +
                      static_cast<double>(c.L - c.D) * std::log1p(-p);
        }
        ok &= std::abs(pll - direct) <= 1e-12 * std::max(1.0, std::abs(direct));
    }
    report(5, ok, "pattern log-likelihood equals the per-bit sum", t.secs());
}

// 6. The normalized log-ratio concentrates: its sample variance under the
//    original law drops by roughly 4x per 4x support increase.
void criterion_variance_decay() {
    Timer t;
    const double p = 0.1, q = 0.4;
    const int trials = 10000;
    std::array<double, 3> var{};
    const std::array<std::uint64_t, 3> Ls{100, 400, 1600};
    for (std::size_t li = 0; li < Ls.size(); ++li) {
        bpc::Philox4x32 g(42, bpc::derive_stream(bpc::StreamKind::trial, li));
        std::vector<double> xs(trials);
        for (auto& x : xs) {
            std::uint64_t d = 0;
            for (std::uint64_t j = 0; j < Ls[li]; ++j) d += g.bernoulli(p);
            x = bpc::np_log_ratio(d, Ls[li], p, q);
        }
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= trials;
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        var[li] = ss / (trials - 1);
    }
    const double r01 = var[0] / var[1], r12 = var[1] / var[2];
    const bool ok = r01 >= 2.8 && r01 <= 5.7 && r12 >= 2.8 && r12 <= 5.7;
    report(6, ok, "normalized log-ratio variance decays like 1/L", t.secs());
}

// 7. The likelihood-ratio statistic and the boundary comparison never
//    disagree in sign, for every count at L = 100 over random rate pairs.
void criterion_sign_agreement() {
    Timer t;
    bool ok = true;
    bpc::Philox4x32 g(43, bpc::derive_stream(bpc::StreamKind::trial, 1));
    auto sgn = [](double v) { return v > 0.0 ? 1 : v < 0.0 ? -1 : 0; };
    const std::uint64_t L = 100;
    for (int i = 0; i < 50 && ok; ++i) {
        double a = 0.001 + g.next_double() * 0.599;
        double b = 0.001 + g.next_double() * 0.599;
        while (std::abs(a - b) < 1e-3) b = 0.001 + g.next_double() * 0.599;
        const double p = std::min(a, b), q = std::max(a, b);
        const double boundary = bpc::gamma_crit(p, q) * static_cast<double>(L);
        for (std::uint64_t d = 0; d <= L; ++d)
            if (sgn(bpc::np_log_ratio(d, L, p, q)) !=
                sgn(boundary - static_cast<double>(d))) {
                ok = false;
                break;
            }
    }
    report(7, ok, "likelihood-ratio sign agrees with the boundary test", t.secs());
}

// 8. Aggregation table on a simulated hard world (16 of 512 channels carry
//    signal): fusing 6 shots never hurts any strategy/ordering cell, and each
//    selective strategy beats plain averaging at its best channel count on
//    the single-shot test.
void criterion_strategy_table() {
    Timer t;
    const bpc::ModelConfig config(3, 1e-6);
    const std::uint64_t seed = 4008;
    const auto [c0, c1] = bpc::mixed_sim_codebooks(config, seed, 16);
    const int n_train = 150, n_test = 500, shots = 6;
    const int W = 228, H = 228;

    bpc::TableInputs in;
    bpc::ChannelObservations pool0(config), pool1(config);
    for (int i = 0; i < n_train + n_test; ++i) {
        const auto tmpl = bpc::gen_template(W, H, seed, static_cast<std::uint64_t>(i));
        const bool train = i < n_train;
        for (const bool fake : {false, true}) {
            const auto& cb = fake ? c1 : c0;
            const auto kind = fake ? bpc::StreamKind::fake_probe
                                   : bpc::StreamKind::original_probe;
            std::vector<bpc::ChannelObservations> per_shot;
            for (int s = 0; s < shots; ++s) {
                const auto probe = bpc::simulate_probe(
                    tmpl, cb, seed,
                    bpc::derive_stream(kind, static_cast<std::uint64_t>(i),
                                       static_cast<std::uint64_t>(s)));
                per_shot.push_back(bpc::extract_channels(tmpl, probe, config));
                if (train)
                    bpc::extract_channels(tmpl, probe, config, fake ? &pool1 : &pool0);
            }
            const auto& single = per_shot.front();
            const auto multi = bpc::fuse_multishot(per_shot);
            if (train) {
                auto& fs = fake ? in.train_fake_single : in.train_orig_single;
                auto& fm = fake ? in.train_fake_multi : in.train_orig_multi;
                fs.push_back(bpc::probe_features(single));
                fm.push_back(bpc::probe_features(multi));
            } else {
                (fake ? in.test_fake_single : in.test_orig_single).push_back(single);
                (fake ? in.test_fake_multi : in.test_orig_multi).push_back(multi);
            }
        }
    }
    in.est_c0 = bpc::codebook_from_counts(pool0);
    in.est_c1 = bpc::codebook_from_counts(pool1);

    bpc::TableExperimentConfig cfg;
    cfg.shots_multi = shots;
    cfg.nominal_L = static_cast<std::uint64_t>((W - 2) * (H - 2)) / config.num_patterns();
    const auto res = bpc::run_table_experiment(in, cfg);

    auto best = [&](bpc::Strategy s, bpc::Ordering o, int sh) {
        for (const auto& c : res.cells)
            if (c.strategy == s && c.ordering == o && c.shots == sh) return c.best.p_err;
        return 2.0;
    };
    bool ok = true;
    for (const auto s : {bpc::Strategy::S1, bpc::Strategy::S2, bpc::Strategy::S3,
                         bpc::Strategy::S4})
        for (const auto o : {bpc::Ordering::AD, bpc::Ordering::DA})
            ok &= best(s, o, shots) <= best(s, o, 1);
    for (const auto s : {bpc::Strategy::S2, bpc::Strategy::S3, bpc::Strategy::S4})
        for (const auto o : {bpc::Ordering::AD, bpc::Ordering::DA})
            ok &= best(s, o, 1) < best(bpc::Strategy::S1, o, 1);
    report(8, ok, "channel selection beats plain averaging and fusion never hurts", t.secs());
}

// 9. The binarization threshold equals the exhaustive exact-arithmetic argmax
//    of between-class variance on random small images.
void criterion_otsu_oracle() {
    Timer t;
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        bpc::Philox4x32 g(44, bpc::derive_stream(bpc::StreamKind::trial,
                                                 static_cast<std::uint64_t>(trial)));
        std::vector<double> px(64);
        for (auto& v : px) v = g.next_double();
        const bpc::GrayImage im(8, 8, px);
        std::array<std::uint64_t, 256> hist{};
        for (double v : im.pixels) {
            int b = static_cast<int>(v * 256);
            if (b > 255) b = 255;
            ++hist[b];
        }
        const int bin = oracle::otsu_best_bin(hist);
        ok &= bin >= 0 &&
              bpc::otsu_binarize(im).threshold == static_cast<double>(bin + 1) / 256.0;
    }
    report(9, ok, "otsu threshold equals the exhaustive argmax", t.secs());
}

// 10. Estimating a codebook from 1000 simulated pairs lands within 3 binomial
//     standard errors of the generating rate on >= 99% of the channels that
//     were observed at least 50 times.
void criterion_estimator_closure() {
    Timer t;
    const bpc::ModelConfig config(3, 1e-6);
    const auto [c0, c1] = bpc::default_sim_codebooks(config, 4010);
    std::vector<std::pair<bpc::BinaryImage, bpc::BinaryImage>> pairs;
    pairs.reserve(1000);
    for (int i = 0; i < 1000; ++i) {
        auto tmpl = bpc::gen_template(64, 64, 4010, static_cast<std::uint64_t>(i));
        auto probe = bpc::simulate_probe(
            tmpl, c0, 4010,
            bpc::derive_stream(bpc::StreamKind::original_probe, static_cast<std::uint64_t>(i)));
        pairs.emplace_back(std::move(tmpl), std::move(probe));
    }
    const auto est = bpc::estimate_codebook(pairs, config);
    std::size_t eligible = 0, within = 0;
    for (std::size_t w = 0; w < est.entries.size(); ++w) {
        const auto& e = est.entries[w];
        if (e.occurrences < 50) continue;
        ++eligible;
        const double p = c0.entries[w].p;
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(e.occurrences));
        within += std::abs(e.p - p) <= 3.0 * se;
    }
    const bool ok = eligible > 0 &&
                    static_cast<double>(within) >= 0.99 * static_cast<double>(eligible);
    report(10, ok, "codebook estimation recovers the generating rates", t.secs());
}

}  // namespace

int main() {
    criterion_tails();
    criterion_boundary();
    criterion_cut_brackets();
    criterion_channel_error_scatter();
    criterion_pll_identity();
    criterion_variance_decay();
    criterion_sign_agreement();
    criterion_strategy_table();
    criterion_otsu_oracle();
    criterion_estimator_closure();
    std::printf("%d of 10 checks passed\n", 10 - failures);
    return failures;
}
