#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bpc/aggregation.hpp"
#include "bpc/codebook.hpp"
#include "bpc/pattern_channel.hpp"
#include "bpc/rng.hpp"
#include "bpc/stat_tests.hpp"

// The strategy-comparison protocol: split templates into train/test by seeded
// hash, estimate codebooks and train the classifier on the train side, then
// score every (strategy, ordering, shot mode) cell on the test side over a
// grid of channel counts.

namespace bpc {

// Deterministic train membership: templates are ranked by a keyed Philox hash
// of their index and the first n_train ranks train. Independent of file
// enumeration order; any n_train of n yields disjoint exhaustive splits.
inline std::vector<bool> split_train_mask(std::uint64_t seed, int n, int n_train) {
    if (n <= 0) throw std::invalid_argument("split_train_mask: n must be positive");
    if (n_train < 0 || n_train > n)
        throw std::invalid_argument("split_train_mask: n_train must lie in [0, n]");
    std::vector<std::pair<std::uint64_t, int>> ranked(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto blk = Philox4x32::block(
            seed, derive_stream(StreamKind::split_hash, static_cast<std::uint64_t>(i)), 0);
        ranked[i] = {(static_cast<std::uint64_t>(blk[1]) << 32) | blk[0], i};
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<bool> mask(static_cast<std::size_t>(n), false);
    for (int r = 0; r < n_train; ++r) mask[ranked[r].second] = true;
    return mask;
}

// Per shot mode, the test observations and the training features feeding S4.
// "single" uses the first capture of each template, "multi" the fusion of all.
struct TableInputs {
    Codebook est_c0;  // estimated from the train split
    Codebook est_c1;
    std::vector<ChannelObservations> test_orig_single, test_fake_single;
    std::vector<ChannelObservations> test_orig_multi, test_fake_multi;
    std::vector<ProbeFeatures> train_orig_single, train_fake_single;
    std::vector<ProbeFeatures> train_orig_multi, train_fake_multi;
};

struct TableExperimentConfig {
    DecisionRule rule = DecisionRule::gamma_crit;
    std::vector<std::size_t> k_grid = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
    double mu = 1.0;
    double nu = 0.5;
    std::uint64_t nominal_L = 100;  // support used for the theoretical S3 ranking
    TrainOptions train;
    int shots_multi = 6;            // label only; inputs already carry the fusion
};

struct TableCell {
    Strategy strategy = Strategy::S1;
    Ordering ordering = Ordering::AD;
    int shots = 1;
    SweepPoint best;
};

struct TableResults {
    std::vector<SweepCsvRow> sweep_rows;  // every (cell, k) point
    std::vector<TableCell> cells;         // best k per cell
    LinearClassifier clf_single;
    LinearClassifier clf_multi;
};

inline std::vector<ChannelErrorProfile> channel_profiles(const Codebook& c0,
                                                         const Codebook& c1,
                                                         std::uint64_t L) {
    if (c0.config != c1.config)
        throw std::invalid_argument("channel_profiles: codebooks use different model configs");
    std::vector<ChannelErrorProfile> out;
    for (std::size_t w = 0; w < c0.entries.size(); ++w) {
        const double p = c0.entries[w].p, q = c1.entries[w].p;
        if (!channel_informative(p, q)) continue;
        out.push_back(optimal_threshold(L, std::min(p, q), std::max(p, q),
                                        static_cast<PatternId>(w)));
    }
    return out;
}

inline TableResults run_table_experiment(const TableInputs& in,
                                         const TableExperimentConfig& cfg) {
    const ModelConfig& mc = in.est_c0.config;
    const std::size_t M = mc.num_patterns();
    const auto profiles = channel_profiles(in.est_c0, in.est_c1, cfg.nominal_L);

    TableResults res;
    res.clf_single = train_linear_classifier(in.train_orig_single, in.train_fake_single,
                                             mc, cfg.train);
    res.clf_multi = train_linear_classifier(in.train_orig_multi, in.train_fake_multi,
                                            mc, cfg.train);

    struct Mode {
        int shots;
        const std::vector<ChannelObservations>* orig;
        const std::vector<ChannelObservations>* fake;
        const LinearClassifier* clf;
    };
    const Mode modes[2] = {
        {1, &in.test_orig_single, &in.test_fake_single, &res.clf_single},
        {cfg.shots_multi, &in.test_orig_multi, &in.test_fake_multi, &res.clf_multi},
    };

    for (const Mode& mode : modes) {
        // Per-probe channel contributions, shared by all strategies of a mode.
        auto ad_contribs = [&](const std::vector<ChannelObservations>& obs) {
            std::vector<std::vector<double>> v;
            v.reserve(obs.size());
            for (const auto& o : obs) v.push_back(channel_contributions(probe_features(o)));
            return v;
        };
        auto da_contribs = [&](const std::vector<ChannelObservations>& obs) {
            std::vector<std::vector<double>> v;
            v.reserve(obs.size());
            for (const auto& o : obs)
                v.push_back(channel_contributions(
                    per_channel_decision(o, in.est_c0, in.est_c1, cfg.rule), M));
            return v;
        };
        const auto ad0 = ad_contribs(*mode.orig), ad1 = ad_contribs(*mode.fake);
        const auto da0 = da_contribs(*mode.orig), da1 = da_contribs(*mode.fake);

        for (const Strategy strategy :
             {Strategy::S1, Strategy::S2, Strategy::S3, Strategy::S4}) {
            for (const Ordering ordering : {Ordering::AD, Ordering::DA}) {
                PlanParams params;
                if (strategy == Strategy::S2) params.mu = cfg.mu;
                if (strategy == Strategy::S3) params.nu = cfg.nu;
                const AggregationPlan plan =
                    build_plan(strategy, ordering, params, in.est_c0, in.est_c1,
                               profiles, strategy == Strategy::S4 ? mode.clf : nullptr);
                const auto& c0s = ordering == Ordering::AD ? ad0 : da0;
                const auto& c1s = ordering == Ordering::AD ? ad1 : da1;
                const auto curve = best_k_sweep(plan, cfg.k_grid, c0s, c1s);

                TableCell cell;
                cell.strategy = strategy;
                cell.ordering = ordering;
                cell.shots = mode.shots;
                cell.best = curve.front();
                for (const auto& pt : curve) {
                    res.sweep_rows.push_back(SweepCsvRow{strategy, ordering, mode.shots,
                                                         pt.k, pt.threshold, pt.p_err});
                    if (pt.p_err < cell.best.p_err) cell.best = pt;
                }
                res.cells.push_back(cell);
            }
        }
    }
    return res;
}

}  // namespace bpc
