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

#include "bpc/codebook.hpp"
#include "bpc/io_util.hpp"
#include "bpc/rng.hpp"
#include "bpc/stat_tests.hpp"
#include "bpc/types.hpp"

// Turns per-channel evidence into one verdict. Strategies pick which channels
// matter (S1 all, S2 low original flip rate, S3 low theoretical error, S4
// trained coefficients); orderings decide whether channels are averaged before
// thresholding (AD) or vote individually and the votes are summed (DA).

namespace bpc {

enum class Strategy { S1, S2, S3, S4 };
enum class Ordering { AD, DA };
enum class DecisionRule { gamma_crit, gamma_opt };

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::S1: return "s1";
        case Strategy::S2: return "s2";
        case Strategy::S3: return "s3";
        case Strategy::S4: return "s4";
    }
    return "?";
}
inline const char* to_string(Ordering o) { return o == Ordering::AD ? "ad" : "da"; }
inline const char* to_string(DecisionRule r) {
    return r == DecisionRule::gamma_crit ? "gamma-crit" : "gamma-opt";
}

// Strategy parameters occupy one slot each: S2 takes mu, S3 takes nu, S4 takes
// an optional top-k restriction of its trained coefficients. S1 takes nothing.
struct PlanParams {
    std::optional<double> mu;
    std::optional<double> nu;
    std::optional<std::size_t> k;
};

// Per-channel linear coefficients with the standardization they were trained
// under. weights/bias act on raw features; mean/std are kept for export.
struct LinearClassifier {
    ModelConfig config;
    std::vector<double> weights;  // length M, raw-feature space
    double bias = 0.0;
    std::vector<double> mean;     // length M, training feature means
    std::vector<double> stddev;   // length M, 1.0 where a channel was constant
};

struct AggregationPlan {
    Strategy strategy = Strategy::S1;
    Ordering ordering = Ordering::AD;
    PlanParams params;
    std::vector<double> weights;            // length M; 0 on unselected channels
    std::vector<PatternId> channel_ranking; // informative channels, best first
};

struct ChannelDecision {
    PatternId pattern = 0;
    std::uint8_t delta = 0;  // 1 votes fake
};

enum class Verdict { original, fake };

struct VerdictReport {
    double score = 0.0;
    double threshold = 0.0;
    bool higher_is_original = false;
    Verdict verdict = Verdict::fake;
    std::vector<ChannelDecision> per_channel;
};

// The plan's channel_ranking lists every informative channel, best first by
// the strategy's own criterion (S1: ascending pattern id; S2: ascending P_b;
// S3: ascending P_err; S4: descending |alpha|), ties by pattern id. Weights
// additionally encode the strategy's selection; non-informative channels
// always carry weight 0.
inline AggregationPlan build_plan(Strategy strategy, Ordering ordering,
                                  const PlanParams& params, const Codebook& c0,
                                  const Codebook& c1,
                                  const std::vector<ChannelErrorProfile>& profiles,
                                  const LinearClassifier* trained = nullptr) {
    if (c0.config != c1.config)
        throw std::invalid_argument("build_plan: codebooks use different model configs");
    const std::size_t M = c0.config.num_patterns();
    std::vector<const ChannelErrorProfile*> by_pattern(M, nullptr);
    for (const auto& pr : profiles) by_pattern[pr.pattern] = &pr;

    AggregationPlan plan;
    plan.strategy = strategy;
    plan.ordering = ordering;
    plan.params = params;
    plan.weights.assign(M, 0.0);

    std::vector<PatternId> informative;
    for (std::size_t w = 0; w < M; ++w)
        if (channel_informative(c0.entries[w].p, c1.entries[w].p))
            informative.push_back(static_cast<PatternId>(w));

    auto profile_of = [&](PatternId w) -> const ChannelErrorProfile& {
        if (!by_pattern[w])
            throw std::invalid_argument("build_plan: no error profile for informative pattern " +
                                        std::to_string(w));
        return *by_pattern[w];
    };

    switch (strategy) {
        case Strategy::S1:
            plan.channel_ranking = informative;
            for (PatternId w : informative) plan.weights[w] = 1.0;
            break;
        case Strategy::S2: {
            if (!params.mu) throw std::invalid_argument("build_plan: S2 requires mu");
            if (!(*params.mu >= 0.0 && *params.mu <= 1.0))
                throw std::invalid_argument("build_plan: mu must lie in [0, 1]");
            // Estimated rates never drop below the clamp floor, so a bound
            // under it still admits the floor channels themselves.
            const double mu = std::max(*params.mu, c0.config.prob_floor);
            plan.channel_ranking = informative;
            std::stable_sort(plan.channel_ranking.begin(), plan.channel_ranking.end(),
                             [&](PatternId a, PatternId b) {
                                 return c0.entries[a].p < c0.entries[b].p;
                             });
            for (PatternId w : informative)
                if (c0.entries[w].p <= mu) plan.weights[w] = 1.0;
            break;
        }
        case Strategy::S3: {
            if (!params.nu) throw std::invalid_argument("build_plan: S3 requires nu");
            if (!(*params.nu >= 0.0 && *params.nu <= 1.0))
                throw std::invalid_argument("build_plan: nu must lie in [0, 1]");
            plan.channel_ranking = informative;
            std::stable_sort(plan.channel_ranking.begin(), plan.channel_ranking.end(),
                             [&](PatternId a, PatternId b) {
                                 return profile_of(a).p_err < profile_of(b).p_err;
                             });
            for (PatternId w : informative)
                if (profile_of(w).p_err <= *params.nu) plan.weights[w] = 1.0;
            break;
        }
        case Strategy::S4: {
            if (!trained)
                throw std::invalid_argument("build_plan: S4 requires trained classifier weights");
            if (trained->config != c0.config)
                throw std::invalid_argument("build_plan: classifier config differs from codebooks");
            plan.channel_ranking = informative;
            std::stable_sort(plan.channel_ranking.begin(), plan.channel_ranking.end(),
                             [&](PatternId a, PatternId b) {
                                 return std::abs(trained->weights[a]) > std::abs(trained->weights[b]);
                             });
            std::size_t keep = params.k ? std::min(*params.k, plan.channel_ranking.size())
                                        : plan.channel_ranking.size();
            for (std::size_t i = 0; i < keep; ++i) {
                const PatternId w = plan.channel_ranking[i];
                plan.weights[w] = trained->weights[w];
            }
            break;
        }
    }
    return plan;
}

namespace detail {

// Integer acceptance cut of a profile: gamma_opt is k/L by construction, so
// rounding recovers k exactly.
inline std::uint64_t profile_cut(const ChannelErrorProfile& pr) {
    return static_cast<std::uint64_t>(
        std::llround(pr.gamma_opt * static_cast<double>(pr.L)));
}

}  // namespace detail

// One vote per supported informative channel. With P_b < Q_b a high flip count
// D > gamma L votes fake; with P_b > Q_b the direction reverses.
inline std::vector<ChannelDecision> per_channel_decision(const ChannelObservations& obs,
                                                         const Codebook& c0,
                                                         const Codebook& c1,
                                                         DecisionRule rule) {
    if (obs.config != c0.config || c0.config != c1.config)
        throw std::invalid_argument("per_channel_decision: mismatched model configs");
    std::vector<ChannelDecision> out;
    for (std::size_t w = 0; w < obs.per_pattern.size(); ++w) {
        const auto& c = obs.per_pattern[w];
        if (c.L == 0) continue;
        const double p = c0.entries[w].p, q = c1.entries[w].p;
        if (!channel_informative(p, q)) continue;
        bool fake;
        if (rule == DecisionRule::gamma_crit) {
            const double bound = gamma_crit(std::min(p, q), std::max(p, q)) *
                                 static_cast<double>(c.L);
            fake = p < q ? static_cast<double>(c.D) > bound
                         : static_cast<double>(c.D) < bound;
        } else {
            const auto pr = optimal_threshold(c.L, std::min(p, q), std::max(p, q));
            const std::uint64_t cut = detail::profile_cut(pr);
            fake = p < q ? c.D > cut : c.D < cut;
        }
        out.push_back({static_cast<PatternId>(w), static_cast<std::uint8_t>(fake)});
    }
    return out;
}

// AD: weighted sum of empirical flip rates. Unsupported channels add nothing.
inline double aggregate(const ProbeFeatures& features, const AggregationPlan& plan) {
    if (plan.ordering != Ordering::AD)
        throw std::invalid_argument("aggregate: features given to a DA plan (needs decisions)");
    if (features.p_hat.size() != plan.weights.size())
        throw std::invalid_argument("aggregate: feature vector length differs from plan");
    double s = 0.0;
    for (std::size_t w = 0; w < plan.weights.size(); ++w)
        if (features.support[w] > 0) s += plan.weights[w] * features.p_hat[w];
    return s;
}

// DA: weighted sum of per-channel fake votes.
inline double aggregate(const std::vector<ChannelDecision>& decisions,
                        const AggregationPlan& plan) {
    if (plan.ordering != Ordering::DA)
        throw std::invalid_argument("aggregate: decisions given to an AD plan (needs features)");
    double s = 0.0;
    for (const auto& d : decisions) s += plan.weights[d.pattern] * d.delta;
    return s;
}

struct TrainOptions {
    int epochs = 200;
    double lambda = 1e-4;
    std::uint64_t seed = 7;
};

// Regularized hinge-loss subgradient descent (Pegasos schedule) on per-channel
// standardized features; labels are +1 fake, -1 original, so positive raw
// coefficients mean "flips point to fake". Coefficients are folded back into
// raw-feature space before returning, which keeps |alpha| rankings and
// weighted sums consistent with unstandardized probe features. Channels with
// no defined value or zero variance in training get weight 0 and stddev 1.
inline LinearClassifier train_linear_classifier(const std::vector<ProbeFeatures>& originals,
                                                const std::vector<ProbeFeatures>& fakes,
                                                const ModelConfig& config,
                                                const TrainOptions& opt = {}) {
    if (originals.empty() || fakes.empty())
        throw std::invalid_argument("train_linear_classifier: both classes need examples");
    const std::size_t M = config.num_patterns();
    const std::size_t n = originals.size() + fakes.size();
    std::vector<const ProbeFeatures*> xs;
    std::vector<double> ys;
    for (const auto& f : originals) { xs.push_back(&f); ys.push_back(-1.0); }
    for (const auto& f : fakes) { xs.push_back(&f); ys.push_back(+1.0); }
    for (const auto* f : xs)
        if (f->config != config)
            throw std::invalid_argument("train_linear_classifier: feature config mismatch");

    // Standardization statistics over defined entries only.
    std::vector<double> mean(M, 0.0), stddev(M, 1.0);
    std::vector<std::uint64_t> cnt(M, 0);
    for (const auto* f : xs)
        for (std::size_t w = 0; w < M; ++w)
            if (f->support[w] > 0) {
                mean[w] += f->p_hat[w];
                ++cnt[w];
            }
    for (std::size_t w = 0; w < M; ++w) mean[w] = cnt[w] ? mean[w] / cnt[w] : 0.0;
    std::vector<double> var(M, 0.0);
    for (const auto* f : xs)
        for (std::size_t w = 0; w < M; ++w)
            if (f->support[w] > 0) {
                const double d = f->p_hat[w] - mean[w];
                var[w] += d * d;
            }
    std::vector<bool> live(M, false);
    for (std::size_t w = 0; w < M; ++w)
        if (cnt[w] > 0 && var[w] > 0.0) {
            live[w] = true;
            stddev[w] = std::sqrt(var[w] / cnt[w]);
        }

    auto z = [&](const ProbeFeatures& f, std::size_t w) {
        return live[w] && f.support[w] > 0 ? (f.p_hat[w] - mean[w]) / stddev[w] : 0.0;
    };

    std::vector<double> w_std(M, 0.0);
    double b = 0.0;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::uint64_t t = 0;
    for (int epoch = 0; epoch < opt.epochs; ++epoch) {
        Philox4x32 g(opt.seed, derive_stream(StreamKind::trial, static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[g.next_below(i)]);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& f = *xs[order[i]];
            const double y = ys[order[i]];
            const double eta = 1.0 / (opt.lambda * static_cast<double>(++t));
            double margin = b;
            for (std::size_t w = 0; w < M; ++w)
                if (w_std[w] != 0.0) margin += w_std[w] * z(f, w);
            const double shrink = 1.0 - eta * opt.lambda;
            for (std::size_t w = 0; w < M; ++w) w_std[w] *= shrink;
            if (y * margin < 1.0) {
                for (std::size_t w = 0; w < M; ++w)
                    if (live[w] && f.support[w] > 0) w_std[w] += eta * y * z(f, w);
                b += eta * y;
            }
        }
    }

    LinearClassifier clf;
    clf.config = config;
    clf.weights.assign(M, 0.0);
    clf.mean = mean;
    clf.stddev = stddev;
    clf.bias = b;
    for (std::size_t w = 0; w < M; ++w)
        if (live[w]) {
            clf.weights[w] = w_std[w] / stddev[w];
            clf.bias -= w_std[w] * mean[w] / stddev[w];
        }
    return clf;
}

inline double classifier_score(const LinearClassifier& clf, const ProbeFeatures& f) {
    if (clf.config != f.config)
        throw std::invalid_argument("classifier_score: config mismatch");
    double s = clf.bias;
    for (std::size_t w = 0; w < clf.weights.size(); ++w)
        if (f.support[w] > 0) s += clf.weights[w] * f.p_hat[w];
    return s;
}

struct EvaluatedThreshold {
    double threshold = 0.0;
    bool higher_is_original = false;
    double p_err = 0.5;
};

// Exhaustive threshold scan: candidates are -inf, midpoints of adjacent
// distinct pooled scores, +inf, tried in both decision directions. Verdicts
// at a candidate t are strict comparisons, which midpoints make unambiguous.
// Ties prefer higher-is-original, then the smallest threshold.
inline EvaluatedThreshold evaluate_scores(const std::vector<double>& scores_originals,
                                          const std::vector<double>& scores_fakes) {
    if (scores_originals.empty() || scores_fakes.empty())
        throw std::invalid_argument("evaluate_scores: both score lists must be non-empty");
    std::vector<double> values;
    values.reserve(scores_originals.size() + scores_fakes.size());
    values.insert(values.end(), scores_originals.begin(), scores_originals.end());
    values.insert(values.end(), scores_fakes.begin(), scores_fakes.end());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> candidates{-inf};
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        candidates.push_back(values[i] + 0.5 * (values[i + 1] - values[i]));
    candidates.push_back(inf);

    const double n0 = static_cast<double>(scores_originals.size());
    const double n1 = static_cast<double>(scores_fakes.size());
    auto count_leq = [](const std::vector<double>& sorted, double t) {
        return static_cast<double>(
            std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
    };
    std::vector<double> so = scores_originals, sf = scores_fakes;
    std::sort(so.begin(), so.end());
    std::sort(sf.begin(), sf.end());

    EvaluatedThreshold best;
    best.p_err = 2.0;
    for (const bool higher_is_original : {true, false}) {
        for (const double t : candidates) {
            // higher=original: verdict original iff score > t.
            const double orig_wrong = higher_is_original ? count_leq(so, t) : n0 - count_leq(so, t);
            const double fake_wrong = higher_is_original ? n1 - count_leq(sf, t) : count_leq(sf, t);
            const double err = 0.5 * (orig_wrong / n0 + fake_wrong / n1);
            if (err < best.p_err) {
                best.p_err = err;
                best.threshold = t;
                best.higher_is_original = higher_is_original;
            }
        }
    }
    return best;
}

inline VerdictReport make_verdict(double score, const EvaluatedThreshold& op,
                                  std::vector<ChannelDecision> per_channel = {}) {
    VerdictReport r;
    r.score = score;
    r.threshold = op.threshold;
    r.higher_is_original = op.higher_is_original;
    const bool original = op.higher_is_original ? score > op.threshold : score < op.threshold;
    r.verdict = original ? Verdict::original : Verdict::fake;
    r.per_channel = std::move(per_channel);
    return r;
}

struct SweepPoint {
    std::size_t k = 0;
    double threshold = 0.0;
    bool higher_is_original = false;
    double p_err = 0.5;
};

// Dense per-channel contribution of one probe to an aggregated score:
// empirical flip rates for AD, fake votes for DA; absent channels read 0.
inline std::vector<double> channel_contributions(const ProbeFeatures& f) {
    std::vector<double> v(f.p_hat.size(), 0.0);
    for (std::size_t w = 0; w < v.size(); ++w)
        if (f.support[w] > 0) v[w] = f.p_hat[w];
    return v;
}

inline std::vector<double> channel_contributions(const std::vector<ChannelDecision>& ds,
                                                 std::size_t M) {
    std::vector<double> v(M, 0.0);
    for (const auto& d : ds) v[d.pattern] = d.delta;
    return v;
}

// Error curve over the number of aggregated channels: for each k the score
// keeps only the plan's top-k ranked channels (unit weights for S1-S3, trained
// coefficients for S4) and the threshold is re-optimized. k = 0 scores carry
// no information and sit at 1/2. k beyond the ranked supply is truncated; the
// caller sees that in the returned k values staying at the maximum.
inline std::vector<SweepPoint> best_k_sweep(const AggregationPlan& plan,
                                            const std::vector<std::size_t>& k_values,
                                            const std::vector<std::vector<double>>& contribs_originals,
                                            const std::vector<std::vector<double>>& contribs_fakes) {
    if (contribs_originals.empty() || contribs_fakes.empty())
        throw std::invalid_argument("best_k_sweep: both classes need probes");
    const std::size_t max_k = plan.channel_ranking.size();
    auto weight_of = [&](PatternId w) {
        return plan.strategy == Strategy::S4 ? plan.weights[w] : 1.0;
    };
    // Cumulative scores along the ranking, one pass per probe.
    auto cumulative = [&](const std::vector<std::vector<double>>& probes) {
        std::vector<std::vector<double>> cum(probes.size());
        for (std::size_t i = 0; i < probes.size(); ++i) {
            cum[i].resize(max_k + 1);
            cum[i][0] = 0.0;
            for (std::size_t r = 0; r < max_k; ++r) {
                const PatternId w = plan.channel_ranking[r];
                cum[i][r + 1] = cum[i][r] + weight_of(w) * probes[i][w];
            }
        }
        return cum;
    };
    const auto cum0 = cumulative(contribs_originals);
    const auto cum1 = cumulative(contribs_fakes);

    std::vector<SweepPoint> curve;
    for (std::size_t k : k_values) {
        const std::size_t kk = std::min(k, max_k);
        SweepPoint pt;
        pt.k = kk;
        if (kk == 0) {
            pt.p_err = 0.5;
            pt.threshold = 0.0;
            curve.push_back(pt);
            continue;
        }
        std::vector<double> s0(cum0.size()), s1(cum1.size());
        for (std::size_t i = 0; i < cum0.size(); ++i) s0[i] = cum0[i][kk];
        for (std::size_t i = 0; i < cum1.size(); ++i) s1[i] = cum1[i][kk];
        const auto ev = evaluate_scores(s0, s1);
        pt.threshold = ev.threshold;
        pt.higher_is_original = ev.higher_is_original;
        pt.p_err = ev.p_err;
        curve.push_back(pt);
    }
    return curve;
}

// Classifier persistence:
// {"weights": [M], "bias": b, "standardization": {"mean": [M], "std": [M]}}.
inline std::string classifier_to_json(const LinearClassifier& clf) {
    nlohmann::json j;
    j["h"] = clf.config.h;
    j["prob_floor"] = clf.config.prob_floor;
    j["weights"] = clf.weights;
    j["bias"] = clf.bias;
    j["standardization"] = {{"mean", clf.mean}, {"std", clf.stddev}};
    return j.dump();
}

inline LinearClassifier classifier_from_json(const std::string& text,
                                             const std::string& origin = "<string>") {
    try {
        const auto j = nlohmann::json::parse(text);
        LinearClassifier clf;
        clf.config = ModelConfig(j.at("h").get<int>(), j.at("prob_floor").get<double>());
        clf.weights = j.at("weights").get<std::vector<double>>();
        clf.bias = j.at("bias").get<double>();
        clf.mean = j.at("standardization").at("mean").get<std::vector<double>>();
        clf.stddev = j.at("standardization").at("std").get<std::vector<double>>();
        const std::size_t M = clf.config.num_patterns();
        if (clf.weights.size() != M || clf.mean.size() != M || clf.stddev.size() != M)
            throw std::runtime_error(origin + ": classifier arrays must have length " +
                                     std::to_string(M));
        return clf;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(origin + ": bad classifier JSON: " + e.what());
    }
}

inline void save_classifier(const LinearClassifier& clf, const std::string& path) {
    write_file_atomic(path, classifier_to_json(clf) + "\n");
}

inline LinearClassifier load_classifier(const std::string& path) {
    return classifier_from_json(read_file(path), path);
}

// Sweep/Table CSV: shots is prepended to the sweep columns so single- and
// multi-shot rows coexist in one file.
struct SweepCsvRow {
    Strategy strategy = Strategy::S1;
    Ordering ordering = Ordering::AD;
    int shots = 1;
    std::size_t k = 0;
    double threshold = 0.0;
    double p_err = 0.5;
};

inline std::string sweep_to_csv(const std::vector<SweepCsvRow>& rows) {
    std::string out = "# schema: strategy-sweep v1\n";
    out += "shots,strategy,ordering,k,threshold,p_err\n";
    for (const auto& r : rows)
        out += std::to_string(r.shots) + "," + to_string(r.strategy) + "," +
               to_string(r.ordering) + "," + std::to_string(r.k) + "," +
               detail::fmt_double(r.threshold) + "," + detail::fmt_double(r.p_err) + "\n";
    return out;
}

}  // namespace bpc
