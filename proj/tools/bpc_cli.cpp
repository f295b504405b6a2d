// Command-line front end: simulate datasets, estimate codebooks from a train
// split, authenticate probes against codebook pairs, and run the full
// strategy-comparison evaluation that produces fig2.csv, fig3.csv, table1.csv.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpc/bpc.hpp"

namespace {

// Train-split templates of a dataset, as (template, probe) pairs per class.
struct SplitData {
    std::vector<int> train_indices;
    std::vector<int> test_indices;
};

SplitData resolve_split(const bpc::DatasetManifest& m, std::uint64_t seed,
                        double train_fraction, std::optional<int> train_count) {
    int n_train = train_count
                      ? *train_count
                      : static_cast<int>(std::lround(train_fraction * m.n_templates));
    if (n_train < 0 || n_train > m.n_templates)
        throw std::runtime_error("train split of " + std::to_string(n_train) +
                                 " templates is outside [0, " +
                                 std::to_string(m.n_templates) + "]");
    const auto mask = bpc::split_train_mask(seed, m.n_templates, n_train);
    SplitData s;
    for (int i = 0; i < m.n_templates; ++i)
        (mask[i] ? s.train_indices : s.test_indices).push_back(i);
    return s;
}

// Pooled per-class channel counts over given templates and all their shots.
std::pair<bpc::Codebook, bpc::Codebook> estimate_split_codebooks(
    const std::string& dataset, const bpc::DatasetManifest& m,
    const std::vector<int>& indices, const bpc::ModelConfig& config) {
    if (indices.empty()) throw std::runtime_error("train split is empty");
    bpc::ChannelObservations pool0(config), pool1(config);
    for (int i : indices) {
        const auto tmpl = bpc::read_pbm(bpc::dataset_template_path(dataset, i));
        for (int s = 0; s < m.shots; ++s) {
            bpc::extract_channels(tmpl,
                                  bpc::read_pbm(bpc::dataset_probe_path(dataset, false, i, s)),
                                  config, &pool0);
            bpc::extract_channels(tmpl,
                                  bpc::read_pbm(bpc::dataset_probe_path(dataset, true, i, s)),
                                  config, &pool1);
        }
    }
    return {bpc::codebook_from_counts(pool0), bpc::codebook_from_counts(pool1)};
}

bpc::Strategy parse_strategy(const std::string& s) {
    if (s == "s1") return bpc::Strategy::S1;
    if (s == "s2") return bpc::Strategy::S2;
    if (s == "s3") return bpc::Strategy::S3;
    if (s == "s4") return bpc::Strategy::S4;
    throw CLI::ValidationError("--strategy", "must be one of s1, s2, s3, s4");
}

bpc::Ordering parse_ordering(const std::string& s) {
    if (s == "ad") return bpc::Ordering::AD;
    if (s == "da") return bpc::Ordering::DA;
    throw CLI::ValidationError("--ordering", "must be ad or da");
}

bpc::DecisionRule parse_rule(const std::string& s) {
    if (s == "gamma-crit") return bpc::DecisionRule::gamma_crit;
    if (s == "gamma-opt") return bpc::DecisionRule::gamma_opt;
    throw CLI::ValidationError("--rule", "must be gamma-crit or gamma-opt");
}

// Expected aggregated score under each population, given which channels the
// probe actually supports; the midpoint is the default acceptance threshold.
struct TheoryThreshold {
    double threshold = 0.0;
    bool higher_is_original = false;
};

TheoryThreshold theory_threshold(const bpc::AggregationPlan& plan,
                                 const bpc::ChannelObservations& obs,
                                 const bpc::Codebook& c0, const bpc::Codebook& c1,
                                 bpc::DecisionRule rule) {
    double e0 = 0.0, e1 = 0.0;
    for (std::size_t w = 0; w < plan.weights.size(); ++w) {
        const double a = plan.weights[w];
        if (a == 0.0) continue;
        const std::uint64_t L = obs.per_pattern[w].L;
        if (L == 0) continue;
        const double p = c0.entries[w].p, q = c1.entries[w].p;
        if (plan.ordering == bpc::Ordering::AD) {
            e0 += a * p;
            e1 += a * q;
        } else {
            if (!bpc::channel_informative(p, q)) continue;
            const double pl = std::min(p, q), qh = std::max(p, q);
            double bound;
            if (rule == bpc::DecisionRule::gamma_crit) {
                bound = bpc::gamma_crit(pl, qh) * static_cast<double>(L);
            } else {
                const auto pr = bpc::optimal_threshold(L, pl, qh);
                bound = pr.gamma_opt * static_cast<double>(L);
            }
            // P(vote fake) under each law, matching per_channel_decision.
            auto vote_prob = [&](double rate) {
                if (p < q) {
                    const auto cut = static_cast<std::uint64_t>(std::floor(bound));
                    return bpc::binom_upper_tail(cut, L, rate);
                }
                const double c = std::ceil(bound) - 1.0;
                if (c < 0.0) return 0.0;
                return bpc::binom_lower_tail(static_cast<std::uint64_t>(c), L, rate);
            };
            e0 += a * vote_prob(p);
            e1 += a * vote_prob(q);
        }
    }
    TheoryThreshold t;
    t.threshold = 0.5 * (e0 + e1);
    t.higher_is_original = e0 > e1;
    return t;
}

int cmd_simulate(const std::string& out_dir, std::uint64_t seed, int width, int height,
                 int n_templates, int shots, int h, double prob_floor,
                 const std::string& world, int informative,
                 const std::string& cb0_path, const std::string& cb1_path) {
    const bpc::ModelConfig config(h, prob_floor);
    bpc::Codebook c0, c1;
    if (!cb0_path.empty() || !cb1_path.empty()) {
        if (cb0_path.empty() || cb1_path.empty())
            throw std::runtime_error("--codebook-orig and --codebook-fake must be given together");
        c0 = bpc::load_codebook(cb0_path);
        c1 = bpc::load_codebook(cb1_path);
    } else if (world == "default") {
        std::tie(c0, c1) = bpc::default_sim_codebooks(config, seed);
    } else if (world == "mixed") {
        std::tie(c0, c1) = bpc::mixed_sim_codebooks(config, seed,
                                                    static_cast<std::size_t>(informative));
    } else {
        throw CLI::ValidationError("--world", "must be default or mixed");
    }
    bpc::SimSpec s0{width, height, c0, seed, shots};
    bpc::SimSpec s1{width, height, c1, seed, shots};
    const auto m = bpc::make_dataset(s0, s1, n_templates, out_dir);
    std::cout << "dataset: " << out_dir << "\n"
              << "templates: " << m.n_templates << ", shots: " << m.shots
              << ", size: " << m.width << "x" << m.height << "\n"
              << "files: " << m.n_templates * (1 + 2 * m.shots) << " images + manifest.json\n";
    return 0;
}

int cmd_estimate(const std::string& dataset, std::optional<std::uint64_t> seed_opt,
                 double train_fraction, std::optional<int> train_count,
                 std::string out0, std::string out1) {
    const auto m = bpc::load_manifest(dataset);
    const std::uint64_t seed = seed_opt.value_or(m.root_seed);
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::runtime_error("--train-fraction must lie in (0, 1)");
    const auto split = resolve_split(m, seed, train_fraction, train_count);
    const bpc::ModelConfig config = m.codebook_originals.config;
    auto [c0, c1] = estimate_split_codebooks(dataset, m, split.train_indices, config);
    if (out0.empty()) out0 = dataset + "/codebook_orig.json";
    if (out1.empty()) out1 = dataset + "/codebook_fake.json";
    bpc::save_codebook(c0, out0);
    bpc::save_codebook(c1, out1);
    std::cout << "train templates: " << split.train_indices.size() << " of "
              << m.n_templates << " (seed " << seed << ")\n"
              << "codebooks: " << out0 << ", " << out1 << "\n";
    return 0;
}

int cmd_authenticate(const std::string& template_path,
                     const std::vector<std::string>& probe_paths,
                     const std::string& cb0_path, const std::string& cb1_path,
                     const std::string& strategy_s, const std::string& ordering_s,
                     std::optional<double> mu, std::optional<double> nu,
                     std::optional<std::size_t> k, const std::string& rule_s,
                     std::optional<double> threshold_opt,
                     const std::string& classifier_path,
                     const std::string& reference_path, const std::string& out_path) {
    const bpc::Codebook c0 = bpc::load_codebook(cb0_path);
    const bpc::Codebook c1 = bpc::load_codebook(cb1_path);
    if (c0.config != c1.config)
        throw std::runtime_error("codebooks use different model configs");
    const bpc::ModelConfig config = c0.config;
    const bpc::Strategy strategy = parse_strategy(strategy_s);
    const bpc::Ordering ordering = parse_ordering(ordering_s);
    const bpc::DecisionRule rule = parse_rule(rule_s);

    const bpc::BinaryImage tmpl = bpc::read_pbm(template_path);
    bpc::PreprocessSpec prep{reference_path.empty() ? bpc::to_gray(tmpl)
                                                    : bpc::read_pgm(reference_path)};
    std::vector<bpc::ChannelObservations> shots;
    std::vector<std::string> warnings;
    for (const auto& path : probe_paths) {
        const auto ing = bpc::ingest_triple(template_path, path, prep);
        if (ing.warning) warnings.push_back(path + ": " + *ing.warning);
        shots.push_back(bpc::extract_channels(ing.tmpl, ing.probe, config));
    }
    const bpc::ChannelObservations obs = bpc::fuse_multishot(shots);

    std::optional<bpc::LinearClassifier> clf;
    if (strategy == bpc::Strategy::S4) {
        if (classifier_path.empty())
            throw std::runtime_error("--strategy s4 needs --classifier with trained weights");
        clf = bpc::load_classifier(classifier_path);
    }
    bpc::PlanParams params{mu, nu, k};
    if (strategy == bpc::Strategy::S2 && !params.mu) params.mu = 1.0;
    if (strategy == bpc::Strategy::S3 && !params.nu) params.nu = 0.5;
    const std::uint64_t nominal_L =
        std::max<std::uint64_t>(1, obs.total_support() / config.num_patterns());
    const auto profiles = bpc::channel_profiles(c0, c1, nominal_L);
    const auto plan = bpc::build_plan(strategy, ordering, params, c0, c1, profiles,
                                      clf ? &*clf : nullptr);

    const auto decisions = bpc::per_channel_decision(obs, c0, c1, rule);
    const double score = ordering == bpc::Ordering::AD
                             ? bpc::aggregate(bpc::probe_features(obs), plan)
                             : bpc::aggregate(decisions, plan);

    bpc::EvaluatedThreshold op;
    if (threshold_opt) {
        op.threshold = *threshold_opt;
        op.higher_is_original = false;
    } else {
        const auto tt = theory_threshold(plan, obs, c0, c1, rule);
        op.threshold = tt.threshold;
        op.higher_is_original = tt.higher_is_original;
    }
    const auto report = bpc::make_verdict(score, op, decisions);

    std::uint64_t supported = 0;
    for (const auto& c : obs.per_pattern) supported += c.L > 0;
    std::cout << "verdict: " << (report.verdict == bpc::Verdict::original ? "original" : "fake")
              << "\n"
              << "score: " << score << " vs threshold " << op.threshold << " ("
              << (op.higher_is_original ? "higher" : "lower") << " favors original)\n"
              << "strategy " << to_string(strategy) << ", ordering " << to_string(ordering)
              << ", rule " << to_string(rule) << ", shots fused: " << shots.size() << "\n"
              << "channels: " << supported << " supported, " << plan.channel_ranking.size()
              << " informative\n";
    for (const auto& w : warnings) std::cout << "warning: " << w << "\n";

    if (!out_path.empty()) {
        nlohmann::json j;
        j["verdict"] = report.verdict == bpc::Verdict::original ? "original" : "fake";
        j["score"] = report.score;
        j["threshold"] = report.threshold;
        j["higher_is_original"] = report.higher_is_original;
        j["strategy"] = to_string(strategy);
        j["ordering"] = to_string(ordering);
        j["rule"] = to_string(rule);
        j["shots_fused"] = shots.size();
        j["pll_original"] = bpc::pll_score(bpc::probe_features(obs), c0);
        j["pll_fake"] = bpc::pll_score(bpc::probe_features(obs), c1);
        if (!warnings.empty()) j["warnings"] = warnings;
        auto& per_channel = j["per_channel"] = nlohmann::json::array();
        for (const auto& d : decisions) {
            const auto& c = obs.per_pattern[d.pattern];
            per_channel.push_back({{"pattern", d.pattern},
                                   {"D", c.D},
                                   {"L", c.L},
                                   {"p_b", c0.entries[d.pattern].p},
                                   {"q_b", c1.entries[d.pattern].p},
                                   {"delta", d.delta}});
        }
        bpc::write_file_atomic(out_path, j.dump(2) + "\n");
        std::cout << "report: " << out_path << "\n";
    }
    return report.verdict == bpc::Verdict::original ? 0 : 2;
}

int cmd_evaluate(const std::string& dataset, std::optional<std::uint64_t> seed_opt,
                 double train_fraction, std::optional<int> train_count,
                 const std::string& cb0_path, const std::string& cb1_path,
                 const std::string& rule_s, std::string out_dir, int fig2_probes,
                 std::uint64_t fig2_L, const std::vector<std::size_t>& k_grid,
                 double mu, double nu) {
    const auto m = bpc::load_manifest(dataset);
    const std::uint64_t seed = seed_opt.value_or(m.root_seed);
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::runtime_error("--train-fraction must lie in (0, 1)");
    const bpc::ModelConfig config = m.codebook_originals.config;
    const auto split = resolve_split(m, seed, train_fraction, train_count);
    if (split.train_indices.empty() || split.test_indices.empty())
        throw std::runtime_error("both splits must be non-empty for evaluation");
    if (out_dir.empty()) out_dir = dataset + "/eval";

    bpc::TableInputs inputs;
    if (!cb0_path.empty() || !cb1_path.empty()) {
        if (cb0_path.empty() || cb1_path.empty())
            throw std::runtime_error("--codebook-orig and --codebook-fake must be given together");
        inputs.est_c0 = bpc::load_codebook(cb0_path);
        inputs.est_c1 = bpc::load_codebook(cb1_path);
        if (inputs.est_c0.config != config || inputs.est_c1.config != config)
            throw std::runtime_error("given codebooks do not match the dataset's model config");
    } else {
        std::tie(inputs.est_c0, inputs.est_c1) =
            estimate_split_codebooks(dataset, m, split.train_indices, config);
    }

    auto gather = [&](int index, bool fake, std::vector<bpc::ChannelObservations>* single,
                      std::vector<bpc::ChannelObservations>* multi) {
        const auto tmpl = bpc::read_pbm(bpc::dataset_template_path(dataset, index));
        std::vector<bpc::ChannelObservations> per_shot;
        for (int s = 0; s < m.shots; ++s)
            per_shot.push_back(bpc::extract_channels(
                tmpl, bpc::read_pbm(bpc::dataset_probe_path(dataset, fake, index, s)), config));
        single->push_back(per_shot.front());
        multi->push_back(bpc::fuse_multishot(per_shot));
    };
    std::vector<bpc::ChannelObservations> train_orig_single, train_fake_single;
    std::vector<bpc::ChannelObservations> train_orig_multi, train_fake_multi;
    for (int i : split.train_indices) {
        gather(i, false, &train_orig_single, &train_orig_multi);
        gather(i, true, &train_fake_single, &train_fake_multi);
    }
    for (int i : split.test_indices) {
        gather(i, false, &inputs.test_orig_single, &inputs.test_orig_multi);
        gather(i, true, &inputs.test_fake_single, &inputs.test_fake_multi);
    }
    auto features_of = [](const std::vector<bpc::ChannelObservations>& v) {
        std::vector<bpc::ProbeFeatures> f;
        f.reserve(v.size());
        for (const auto& o : v) f.push_back(bpc::probe_features(o));
        return f;
    };
    inputs.train_orig_single = features_of(train_orig_single);
    inputs.train_fake_single = features_of(train_fake_single);
    inputs.train_orig_multi = features_of(train_orig_multi);
    inputs.train_fake_multi = features_of(train_fake_multi);

    bpc::TableExperimentConfig cfg;
    cfg.rule = parse_rule(rule_s);
    cfg.k_grid = k_grid;
    cfg.mu = mu;
    cfg.nu = nu;
    cfg.shots_multi = m.shots;
    const std::uint64_t interior =
        static_cast<std::uint64_t>(m.width - 2 * config.margin()) *
        static_cast<std::uint64_t>(m.height - 2 * config.margin());
    cfg.nominal_L = std::max<std::uint64_t>(1, interior / config.num_patterns());

    const auto results = bpc::run_table_experiment(inputs, cfg);

    // fig2: theory vs simulation per channel under the evaluation codebooks.
    const auto fig2 = bpc::fig2_experiment(inputs.est_c0, inputs.est_c1, fig2_L,
                                           fig2_probes, seed);
    std::vector<bpc::ChannelProfileCsvRow> fig2_rows;
    for (const auto& r : fig2)
        fig2_rows.push_back({r.profile, r.gamma_crit, r.empirical_p_err});
    bpc::write_file_atomic(out_dir + "/fig2.csv", bpc::channel_profiles_to_csv(fig2_rows));

    bpc::write_file_atomic(out_dir + "/fig3.csv", bpc::sweep_to_csv(results.sweep_rows));
    std::vector<bpc::SweepCsvRow> table_rows;
    for (const auto& c : results.cells)
        table_rows.push_back(bpc::SweepCsvRow{c.strategy, c.ordering, c.shots, c.best.k,
                                              c.best.threshold, c.best.p_err});
    bpc::write_file_atomic(out_dir + "/table1.csv", bpc::sweep_to_csv(table_rows));
    bpc::save_classifier(results.clf_single, out_dir + "/classifier_single.json");
    bpc::save_classifier(results.clf_multi, out_dir + "/classifier_multi.json");

    std::cout << "test templates: " << split.test_indices.size() << ", train: "
              << split.train_indices.size() << "\n"
              << "wrote " << out_dir << "/fig2.csv, fig3.csv, table1.csv\n";
    for (const auto& c : results.cells)
        std::printf("%s %s shots=%d: p_err=%.4f at k=%zu\n", to_string(c.strategy),
                    to_string(c.ordering), c.shots, c.best.p_err, c.best.k);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pattern-channel CDP authentication toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
    std::string sim_out;
    std::uint64_t sim_seed = 1;
    int sim_w = 228, sim_h = 228, sim_templates = 10, sim_shots = 1, sim_hh = 3;
    int sim_informative = 16;
    double sim_floor = 1e-6;
    std::string sim_world = "default", sim_cb0, sim_cb1;
    sim->add_option("--out", sim_out, "Output dataset directory")->required();
    sim->add_option("--seed", sim_seed, "Root seed");
    sim->add_option("--width", sim_w, "Template width");
    sim->add_option("--height", sim_h, "Template height");
    sim->add_option("--templates", sim_templates, "Number of templates");
    sim->add_option("--shots", sim_shots, "Captures per template per class");
    sim->add_option("--pattern-size", sim_hh, "Pattern side length (odd)");
    sim->add_option("--prob-floor", sim_floor, "Probability clamp");
    sim->add_option("--world", sim_world, "Codebook law: default or mixed");
    sim->add_option("--informative", sim_informative, "Informative channels (mixed world)");
    sim->add_option("--codebook-orig", sim_cb0, "Original codebook JSON (overrides --world)");
    sim->add_option("--codebook-fake", sim_cb1, "Fake codebook JSON (overrides --world)");

    // estimate
    auto* est = app.add_subcommand("estimate", "Estimate codebooks from the train split");
    std::string est_dataset, est_out0, est_out1;
    std::optional<std::uint64_t> est_seed;
    double est_fraction = 0.5;
    std::optional<int> est_count;
    est->add_option("--dataset", est_dataset, "Dataset directory")->required();
    est->add_option("--seed", est_seed, "Split seed (default: dataset root seed)");
    est->add_option("--train-fraction", est_fraction, "Train fraction in (0,1)");
    est->add_option("--train-count", est_count, "Exact train template count");
    est->add_option("--out-orig", est_out0, "Output path for the original codebook");
    est->add_option("--out-fake", est_out1, "Output path for the fake codebook");

    // authenticate
    auto* auth = app.add_subcommand("authenticate", "Decide original vs fake for probe(s)");
    std::string auth_template, auth_cb0, auth_cb1, auth_strategy = "s1", auth_ordering = "ad";
    std::string auth_rule = "gamma-crit", auth_classifier, auth_reference, auth_out;
    std::vector<std::string> auth_probes;
    std::optional<double> auth_mu, auth_nu, auth_threshold;
    std::optional<std::size_t> auth_k;
    auth->add_option("--template", auth_template, "Template PBM")->required();
    auth->add_option("--probe", auth_probes, "Probe image(s); several fuse as shots")
        ->required()
        ->expected(-1);
    auth->add_option("--codebook-orig", auth_cb0, "Original codebook JSON")->required();
    auth->add_option("--codebook-fake", auth_cb1, "Fake codebook JSON")->required();
    auth->add_option("--strategy", auth_strategy, "s1, s2, s3, or s4");
    auth->add_option("--ordering", auth_ordering, "ad or da");
    auth->add_option("--mu", auth_mu, "S2 selection bound on P_b");
    auth->add_option("--nu", auth_nu, "S3 selection bound on P_err");
    auth->add_option("--k", auth_k, "S4 top-k channels");
    auth->add_option("--rule", auth_rule, "gamma-crit or gamma-opt");
    auth->add_option("--threshold", auth_threshold,
                     "Decision threshold (default: theory midpoint; higher = fake)");
    auth->add_option("--classifier", auth_classifier, "Trained classifier JSON (s4)");
    auth->add_option("--reference", auth_reference, "Histogram-matching reference PGM");
    auth->add_option("--out", auth_out, "Write the JSON report here");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Strategy comparison CSVs on the test split");
    std::string ev_dataset, ev_cb0, ev_cb1, ev_rule = "gamma-crit", ev_out;
    std::optional<std::uint64_t> ev_seed;
    double ev_fraction = 0.5, ev_mu = 1.0, ev_nu = 0.5;
    std::optional<int> ev_count;
    int ev_fig2_probes = 500;
    std::uint64_t ev_fig2_L = 100;
    std::vector<std::size_t> ev_k_grid = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
    ev->add_option("--dataset", ev_dataset, "Dataset directory")->required();
    ev->add_option("--seed", ev_seed, "Split seed (default: dataset root seed)");
    ev->add_option("--train-fraction", ev_fraction, "Train fraction in (0,1)");
    ev->add_option("--train-count", ev_count, "Exact train template count");
    ev->add_option("--codebook-orig", ev_cb0, "Original codebook JSON (skip estimation)");
    ev->add_option("--codebook-fake", ev_cb1, "Fake codebook JSON (skip estimation)");
    ev->add_option("--rule", ev_rule, "gamma-crit or gamma-opt");
    ev->add_option("--out", ev_out, "Output directory (default: <dataset>/eval)");
    ev->add_option("--fig2-probes", ev_fig2_probes, "Simulated probes per class per channel");
    ev->add_option("--fig2-L", ev_fig2_L, "Per-channel support for fig2");
    ev->add_option("--k", ev_k_grid, "Channel-count grid for the sweep")->expected(-1);
    ev->add_option("--mu", ev_mu, "S2 selection bound");
    ev->add_option("--nu", ev_nu, "S3 selection bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(sim_out, sim_seed, sim_w, sim_h, sim_templates, sim_shots,
                                sim_hh, sim_floor, sim_world, sim_informative, sim_cb0,
                                sim_cb1);
        if (est->parsed())
            return cmd_estimate(est_dataset, est_seed, est_fraction, est_count, est_out0,
                                est_out1);
        if (auth->parsed())
            return cmd_authenticate(auth_template, auth_probes, auth_cb0, auth_cb1,
                                    auth_strategy, auth_ordering, auth_mu, auth_nu, auth_k,
                                    auth_rule, auth_threshold, auth_classifier,
                                    auth_reference, auth_out);
        if (ev->parsed())
            return cmd_evaluate(ev_dataset, ev_seed, ev_fraction, ev_count, ev_cb0, ev_cb1,
                                ev_rule, ev_out, ev_fig2_probes, ev_fig2_L, ev_k_grid,
                                ev_mu, ev_nu);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
