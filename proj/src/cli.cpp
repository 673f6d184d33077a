#include "wdisc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wdisc/io.hpp"
#include "wdisc/metrics.hpp"
#include "wdisc/scoring.hpp"
#include "wdisc/synth.hpp"
#include "wdisc/wlda.hpp"

namespace fs = std::filesystem;

namespace wdisc::cli {

namespace {

bool verbose() {
    const char* v = std::getenv("WDISCOOD_VERBOSE");
    return v != nullptr && v[0] != '\0' && !(v[0] == '0' && v[1] == '\0');
}

void info(const std::string& line) {
    if (verbose()) std::cerr << "[wdiscood] " << line << '\n';
}

void emitted(const std::string& path) { std::cout << path << '\n'; }

/// Reruns a module operation with the manifest entry (and file) that the
/// data came from prepended to any error, so failures point at the input at
/// fault rather than an internal matrix.
template <typename F>
auto with_context(const std::string& entry, const std::string& path, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), entry + " (" + path + "): " + e.what());
    }
}

struct Overrides {
    std::optional<std::size_t> n_disc;
    std::optional<double> alpha;
    std::optional<double> ridge_rel;
    std::optional<double> whiten_rel_tol;
    std::optional<std::size_t> n_fit;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<std::string>> scorers;
    std::optional<std::string> output_dir;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--n-disc", o.n_disc, "Number of discriminants N_D");
    cmd->add_option("--alpha", o.alpha, "Residual score weight alpha")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--ridge-rel", o.ridge_rel,
                    "Ridge as a fraction of the mean within-scatter eigenvalue")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--whiten-rel-tol", o.whiten_rel_tol,
                    "Relative rank cutoff of the whitening transform");
    cmd->add_option("--n-fit", o.n_fit, "Fitting subsample size");
    cmd->add_option("--seed", o.seed, "Subsampling seed");
    cmd->add_option("--scorers", o.scorers,
                    "Scorers to run (default: manifest or all feature-space scorers)")
        ->delimiter(',');
    cmd->add_option("--output-dir", o.output_dir, "Overrides the manifest output_dir");
}

io::Manifest load_manifest(const std::string& path, const Overrides& o) {
    io::Manifest m = io::read_manifest(path);
    if (o.n_disc) m.wlda_n_disc = *o.n_disc;
    if (o.alpha) m.wlda_alpha = *o.alpha;
    if (o.ridge_rel) m.ridge_rel = *o.ridge_rel;
    if (o.whiten_rel_tol) {
        if (!(*o.whiten_rel_tol > 0.0 && *o.whiten_rel_tol < 1.0))
            throw Error(ErrorKind::BadArgument, "--whiten-rel-tol must be in (0, 1)");
        m.whiten_rel_tol = *o.whiten_rel_tol;
    }
    if (o.n_fit) m.n_fit = *o.n_fit;
    if (o.seed) m.seed = *o.seed;
    if (o.output_dir) m.output_dir = *o.output_dir;
    if (o.scorers) {
        m.scorers.clear();
        for (const auto& name : *o.scorers)
            m.scorers.push_back(scoring::parse_scorer_id(name));
        const bool needs_logits = std::any_of(
            m.scorers.begin(), m.scorers.end(), [](scoring::ScorerId id) {
                return id == scoring::ScorerId::Msp || id == scoring::ScorerId::Energy ||
                       id == scoring::ScorerId::MaxLogit;
            });
        if (needs_logits) {
            const bool have = !m.id_test_logits.empty() &&
                              std::all_of(m.ood_sets.begin(), m.ood_sets.end(),
                                          [](const io::OodSetRef& s) {
                                              return !s.logits.empty();
                                          });
            if (!have)
                throw Error(ErrorKind::BadManifest,
                            m.path + ": logit scorers requested but the manifest has "
                                     "no logits for id_test and every OOD set");
        }
    }
    return m;
}

bool wants(const io::Manifest& m, scoring::ScorerId id) {
    return std::find(m.scorers.begin(), m.scorers.end(), id) != m.scorers.end();
}

bool wants_wlda(const io::Manifest& m) {
    return wants(m, scoring::ScorerId::WDiscOOD) || wants(m, scoring::ScorerId::Wd) ||
           wants(m, scoring::ScorerId::Wdr);
}

wlda::WldaConfig resolve_wlda_config(const io::Manifest& m, std::size_t d) {
    wlda::WldaConfig config = wlda::default_config(d);
    if (m.wlda_n_disc != 0) config.n_disc = m.wlda_n_disc;
    if (m.wlda_alpha >= 0.0) config.alpha = m.wlda_alpha;
    config.ridge_rel = m.ridge_rel;
    config.whiten_rel_tol = m.whiten_rel_tol;
    config.n_fit = m.n_fit;
    config.seed = m.seed;
    return config;
}

std::size_t resolve_n_pc(const io::Manifest& m, std::size_t d) {
    if (m.pca_n_pc != 0) return m.pca_n_pc;
    return std::clamp<std::size_t>(d / 8, 1, d - 1);
}

stats::LabeledFeatures load_train(const io::Manifest& m) {
    stats::LabeledFeatures train;
    train.features = with_context("id_train.features", m.id_train_features,
                                  [&] { return io::read_features(m.id_train_features); });
    train.labels = with_context("id_train.labels", m.id_train_labels,
                                [&] { return io::read_labels(m.id_train_labels); });
    if (train.labels.size() != train.features.rows())
        throw Error(ErrorKind::DimMismatch,
                    "id_train (" + m.id_train_labels + "): " +
                        std::to_string(train.labels.size()) + " labels for " +
                        std::to_string(train.features.rows()) + " feature rows");
    return train;
}

std::string model_path(const io::Manifest& m, const char* name) {
    return (fs::path(m.output_dir) / "models" / name).string();
}

std::string score_path(const io::Manifest& m, scoring::ScorerId id,
                       const std::string& dataset, const char* ext) {
    return (fs::path(m.output_dir) / "scores" /
            (std::string(scoring::to_string(id)) + "_" + dataset + ext))
        .string();
}

int cmd_fit(const std::string& manifest_path, const Overrides& o) {
    const io::Manifest m = load_manifest(manifest_path, o);
    const stats::LabeledFeatures train = load_train(m);
    const std::size_t d = train.features.cols();
    fs::create_directories(fs::path(m.output_dir) / "models");

    // Every feature-space scorer fits on the same class-balanced subsample.
    const stats::LabeledFeatures sub = with_context(
        "id_train", m.id_train_features,
        [&] { return stats::balanced_subsample(train, std::max(m.n_fit, stats::validate_labels(train)), m.seed); });

    if (wants_wlda(m)) {
        const wlda::WldaConfig config = resolve_wlda_config(m, d);
        info("fitting wlda: n_disc=" + std::to_string(config.n_disc) +
             " alpha=" + std::to_string(config.alpha));
        const wlda::WldaModel model = with_context(
            "id_train", m.id_train_features, [&] { return wlda::fit(train, config); });
        const std::string path = model_path(m, "wlda.model");
        io::write_wlda_model(path, model);
        emitted(path);
    }
    if (wants(m, scoring::ScorerId::Maha)) {
        const scoring::MahaModel model = with_context(
            "id_train", m.id_train_features, [&] { return scoring::fit_maha(sub); });
        const std::string path = model_path(m, "maha.model");
        io::write_maha_model(path, model);
        emitted(path);
    }
    if (wants(m, scoring::ScorerId::Knn)) {
        const scoring::KnnIndex index =
            with_context("id_train", m.id_train_features,
                         [&] { return scoring::fit_knn(sub.features, m.knn_k); });
        const std::string path = model_path(m, "knn.model");
        io::write_knn_index(path, index);
        emitted(path);
    }
    if (wants(m, scoring::ScorerId::Pr)) {
        const scoring::PcaModel model = with_context(
            "id_train", m.id_train_features,
            [&] { return scoring::fit_pca(sub.features, resolve_n_pc(m, d)); });
        const std::string path = model_path(m, "pca.model");
        io::write_pca_model(path, model);
        emitted(path);
    }
    return 0;
}

struct NamedFeatures {
    std::string entry;   // manifest entry for error context
    std::string dataset; // file-name-safe dataset id
    std::string path;
    Matrix features;
};

std::vector<NamedFeatures> load_eval_features(const io::Manifest& m) {
    std::vector<NamedFeatures> sets;
    sets.push_back({"id_test.features", "id_test", m.id_test_features,
                    with_context("id_test.features", m.id_test_features,
                                 [&] { return io::read_features(m.id_test_features); })});
    for (std::size_t i = 0; i < m.ood_sets.size(); ++i) {
        const auto& ref = m.ood_sets[i];
        const std::string entry = "ood_sets[" + std::to_string(i) + "].features";
        sets.push_back({entry, ref.name, ref.features,
                        with_context(entry, ref.features,
                                     [&] { return io::read_features(ref.features); })});
    }
    return sets;
}

std::vector<NamedFeatures> load_eval_logits(const io::Manifest& m) {
    std::vector<NamedFeatures> sets;
    sets.push_back({"id_test.logits", "id_test", m.id_test_logits,
                    with_context("id_test.logits", m.id_test_logits,
                                 [&] { return io::read_features(m.id_test_logits); })});
    for (std::size_t i = 0; i < m.ood_sets.size(); ++i) {
        const auto& ref = m.ood_sets[i];
        const std::string entry = "ood_sets[" + std::to_string(i) + "].logits";
        sets.push_back({entry, ref.name, ref.logits,
                        with_context(entry, ref.logits,
                                     [&] { return io::read_features(ref.logits); })});
    }
    return sets;
}

void write_score_pair(const io::Manifest& m, scoring::ScorerId id,
                      const std::string& dataset, const scoring::ScoreVector& scores) {
    const std::string fmat = score_path(m, id, dataset, ".fmat");
    io::write_scores(fmat, scores.values);
    io::write_scores_csv(score_path(m, id, dataset, ".csv"),
                         scoring::to_string(id), scores.values);
    emitted(fmat);
}

int cmd_score(const std::string& manifest_path, const Overrides& o) {
    const io::Manifest m = load_manifest(manifest_path, o);
    fs::create_directories(fs::path(m.output_dir) / "scores");

    const bool any_logits =
        wants(m, scoring::ScorerId::Msp) || wants(m, scoring::ScorerId::Energy) ||
        wants(m, scoring::ScorerId::MaxLogit);
    const bool any_features =
        wants_wlda(m) || wants(m, scoring::ScorerId::Maha) ||
        wants(m, scoring::ScorerId::Knn) || wants(m, scoring::ScorerId::Pr);

    std::vector<NamedFeatures> feature_sets;
    if (any_features) feature_sets = load_eval_features(m);
    std::vector<NamedFeatures> logit_sets;
    if (any_logits) logit_sets = load_eval_logits(m);

    std::optional<wlda::WldaModel> wlda_model;
    if (wants_wlda(m)) {
        const std::string path = model_path(m, "wlda.model");
        wlda_model = with_context("models/wlda.model", path,
                                  [&] { return io::read_wlda_model(path); });
        if (m.wlda_alpha >= 0.0) wlda_model->config.alpha = m.wlda_alpha;
    }

    for (scoring::ScorerId id : m.scorers) {
        info(std::string("scoring with ") + std::string(scoring::to_string(id)));
        switch (id) {
            case scoring::ScorerId::WDiscOOD:
            case scoring::ScorerId::Wd:
            case scoring::ScorerId::Wdr:
                for (const auto& set : feature_sets) {
                    const auto scores = with_context(set.entry, set.path, [&] {
                        if (id == scoring::ScorerId::WDiscOOD)
                            return scoring::score_wdiscood(*wlda_model, set.features);
                        if (id == scoring::ScorerId::Wd)
                            return scoring::score_wd(*wlda_model, set.features);
                        return scoring::score_wdr(*wlda_model, set.features);
                    });
                    write_score_pair(m, id, set.dataset, scores);
                }
                break;
            case scoring::ScorerId::Maha: {
                const std::string path = model_path(m, "maha.model");
                const scoring::MahaModel model = with_context(
                    "models/maha.model", path, [&] { return io::read_maha_model(path); });
                for (const auto& set : feature_sets)
                    write_score_pair(m, id, set.dataset,
                                     with_context(set.entry, set.path, [&] {
                                         return scoring::score_maha(model, set.features);
                                     }));
                break;
            }
            case scoring::ScorerId::Knn: {
                const std::string path = model_path(m, "knn.model");
                const scoring::KnnIndex index = with_context(
                    "models/knn.model", path, [&] { return io::read_knn_index(path); });
                for (const auto& set : feature_sets)
                    write_score_pair(m, id, set.dataset,
                                     with_context(set.entry, set.path, [&] {
                                         return scoring::score_knn(index, set.features);
                                     }));
                break;
            }
            case scoring::ScorerId::Pr: {
                const std::string path = model_path(m, "pca.model");
                const scoring::PcaModel model = with_context(
                    "models/pca.model", path, [&] { return io::read_pca_model(path); });
                for (const auto& set : feature_sets)
                    write_score_pair(m, id, set.dataset,
                                     with_context(set.entry, set.path, [&] {
                                         return scoring::score_pr(model, set.features);
                                     }));
                break;
            }
            case scoring::ScorerId::Msp:
            case scoring::ScorerId::Energy:
            case scoring::ScorerId::MaxLogit:
                for (const auto& set : logit_sets) {
                    const auto scores = with_context(set.entry, set.path, [&] {
                        if (id == scoring::ScorerId::Msp)
                            return scoring::score_msp(set.features);
                        if (id == scoring::ScorerId::Energy)
                            return scoring::score_energy(set.features,
                                                         m.energy_temperature);
                        return scoring::score_maxlogit(set.features);
                    });
                    write_score_pair(m, id, set.dataset, scores);
                }
                break;
        }
    }
    return 0;
}

int cmd_eval(const std::string& manifest_path, const Overrides& o) {
    const io::Manifest m = load_manifest(manifest_path, o);

    std::vector<metrics::ScorerResults> results;
    for (scoring::ScorerId id : m.scorers) {
        metrics::ScorerResults r;
        r.scorer_id = std::string(scoring::to_string(id));
        const std::string id_path = score_path(m, id, "id_test", ".fmat");
        r.id_scores = with_context("scores", id_path,
                                   [&] { return io::read_scores(id_path); });
        for (const auto& set : m.ood_sets) {
            const std::string ood_path = score_path(m, id, set.name, ".fmat");
            r.ood.push_back({set.name, with_context("scores", ood_path, [&] {
                                 return io::read_scores(ood_path);
                             })});
        }
        results.push_back(std::move(r));
    }

    const metrics::EvalReport report = metrics::evaluate(results);
    const std::string json_path = (fs::path(m.output_dir) / "report.json").string();
    const std::string md_path = (fs::path(m.output_dir) / "report.md").string();
    io::write_text_atomic(json_path, metrics::report_to_json(report));
    io::write_text_atomic(md_path, metrics::report_to_markdown(report));
    emitted(json_path);
    emitted(md_path);
    for (const auto& a : report.averages) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-10s avg AUROC %.4f  avg FPR95 %.4f",
                      a.scorer_id.c_str(), a.auroc, a.fpr95);
        std::cout << line << '\n';
    }
    return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir) {
    const synth::SynthSpec spec = synth::read_spec(spec_path);
    const synth::SynthData data = synth::generate(spec);

    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    std::string ood_name;
    switch (spec.ood_kind) {
        case synth::OodKind::MeanShift:
            ood_name = "shift_" + std::string(synth::to_string(spec.shift_subspace));
            break;
        case synth::OodKind::CovarianceScale: ood_name = "cov_scale"; break;
        case synth::OodKind::UniformBox: ood_name = "uniform_box"; break;
    }

    io::write_features((out / "train.fmat").string(), data.id_train.features);
    io::write_labels((out / "train.lvec").string(), data.id_train.labels);
    io::write_features((out / "id_test.fmat").string(), data.id_test);
    io::write_features((out / ("ood_" + ood_name + ".fmat")).string(), data.ood);
    io::write_text_atomic((out / "spec.json").string(), synth::spec_to_json(spec));

    nlohmann::ordered_json manifest;
    manifest["schema"] = 1;
    manifest["seed"] = spec.seed;
    manifest["id_train"] = {{"features", "train.fmat"}, {"labels", "train.lvec"}};
    manifest["id_test"] = {{"features", "id_test.fmat"}};
    manifest["ood_sets"] = nlohmann::ordered_json::array();
    manifest["ood_sets"].push_back(
        {{"name", ood_name}, {"features", "ood_" + ood_name + ".fmat"}});
    // Pin the discriminant count to the generator's reference model (C-1
    // informative discriminants) so subspace-targeted OOD sets hit the
    // subspace they were aimed at; the dimension-based default would fold
    // most of the residual subspace into the discriminative one.
    manifest["wlda"] = {{"n_disc", spec.c - 1}};
    manifest["output_dir"] = "out";
    io::write_text_atomic((out / "manifest.json").string(), manifest.dump(2) + "\n");

    for (const char* name : {"train.fmat", "train.lvec", "id_test.fmat"})
        emitted((out / name).string());
    emitted((out / ("ood_" + ood_name + ".fmat")).string());
    emitted((out / "manifest.json").string());
    return 0;
}

struct Sweep {
    std::string param;  // "alpha", "n_disc", or "n_fit"
    std::vector<double> values;
};

Sweep parse_sweep(const std::string& text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
        throw Error(ErrorKind::BadArgument,
                    "--sweep expects param=v1,v2,... (param: alpha, n_disc, n_fit)");
    Sweep sweep;
    sweep.param = text.substr(0, eq);
    std::replace(sweep.param.begin(), sweep.param.end(), '-', '_');
    if (sweep.param != "alpha" && sweep.param != "n_disc" && sweep.param != "n_fit")
        throw Error(ErrorKind::BadArgument,
                    "unknown sweep parameter '" + sweep.param +
                        "' (expected alpha, n_disc, or n_fit)");
    std::size_t start = eq + 1;
    const std::string list = text;
    while (start <= list.size()) {
        std::size_t end = list.find(',', start);
        if (end == std::string::npos) end = list.size();
        double v = 0.0;
        const auto res = std::from_chars(list.data() + start, list.data() + end, v);
        if (res.ec != std::errc() || res.ptr != list.data() + end || !(v >= 0.0))
            throw Error(ErrorKind::BadArgument,
                        "cannot parse sweep value '" + list.substr(start, end - start) +
                            "'");
        if (sweep.param != "alpha" &&
            (v < 1.0 || v != static_cast<double>(static_cast<std::size_t>(v))))
            throw Error(ErrorKind::BadArgument,
                        sweep.param + " sweep values must be positive integers");
        sweep.values.push_back(v);
        start = end + 1;
    }
    if (sweep.values.empty())
        throw Error(ErrorKind::BadArgument, "--sweep needs at least one value");
    return sweep;
}

std::string format_sweep_value(const std::string& param, double v) {
    char buf[32];
    if (param == "alpha")
        std::snprintf(buf, sizeof(buf), "%g", v);
    else
        std::snprintf(buf, sizeof(buf), "%zu", static_cast<std::size_t>(v));
    return buf;
}

int cmd_ablate(const std::string& manifest_path, const Overrides& o,
               const std::string& sweep_text) {
    const Sweep sweep = parse_sweep(sweep_text);
    const io::Manifest m = load_manifest(manifest_path, o);
    const stats::LabeledFeatures train = load_train(m);
    const std::size_t d = train.features.cols();
    const wlda::WldaConfig base_config = resolve_wlda_config(m, d);
    const std::vector<NamedFeatures> sets = load_eval_features(m);
    // sets[0] is id_test; the rest are the OOD sets.

    std::ostringstream csv;
    csv << "param,value,ood_set,auroc,fpr95\n";
    auto emit_rows = [&](double value, const std::vector<std::vector<double>>& scores) {
        for (std::size_t s = 1; s < sets.size(); ++s) {
            const double a = metrics::auroc(scores[0], scores[s]);
            const double f = metrics::fpr_at_tpr(scores[0], scores[s]);
            char row[160];
            std::snprintf(row, sizeof(row), "%s,%s,%s,%.6f,%.6f\n", sweep.param.c_str(),
                          format_sweep_value(sweep.param, value).c_str(),
                          sets[s].dataset.c_str(), a, f);
            csv << row;
        }
    };

    auto fused_scores = [&](const wlda::WldaModel& model) {
        std::vector<std::vector<double>> out;
        for (const auto& set : sets)
            out.push_back(with_context(set.entry, set.path, [&] {
                return scoring::score_wdiscood(model, set.features).values;
            }));
        return out;
    };

    if (sweep.param == "alpha") {
        // One fit serves every alpha: fuse the per-subspace scores directly.
        const wlda::WldaModel model = with_context(
            "id_train", m.id_train_features, [&] { return wlda::fit(train, base_config); });
        std::vector<std::vector<double>> s_g, s_h;
        for (const auto& set : sets) {
            s_g.push_back(with_context(set.entry, set.path, [&] {
                return scoring::score_wd(model, set.features).values;
            }));
            s_h.push_back(scoring::score_wdr(model, set.features).values);
        }
        for (double alpha : sweep.values) {
            std::vector<std::vector<double>> fused(sets.size());
            for (std::size_t s = 0; s < sets.size(); ++s) {
                fused[s] = s_g[s];
                for (std::size_t i = 0; i < fused[s].size(); ++i)
                    fused[s][i] += alpha * s_h[s][i];
            }
            emit_rows(alpha, fused);
        }
    } else if (sweep.param == "n_disc") {
        for (double v : sweep.values)
            if (static_cast<std::size_t>(v) > d)
                throw Error(ErrorKind::BadArgument,
                            "n_disc sweep value " + format_sweep_value("n_disc", v) +
                                " exceeds the feature dimension " + std::to_string(d));
        // One eigendecomposition serves every n_disc: each value is a slice.
        wlda::WldaConfig config = base_config;
        const wlda::WldaFitState state = with_context(
            "id_train", m.id_train_features,
            [&] { return wlda::fit_state(train, config); });
        for (double v : sweep.values) {
            const wlda::WldaModel model =
                wlda::reslice(state, static_cast<std::size_t>(v), base_config.alpha);
            emit_rows(v, fused_scores(model));
        }
    } else {  // n_fit
        for (double v : sweep.values) {
            wlda::WldaConfig config = base_config;
            config.n_fit = static_cast<std::size_t>(v);
            const wlda::WldaModel model = with_context(
                "id_train", m.id_train_features, [&] { return wlda::fit(train, config); });
            emit_rows(v, fused_scores(model));
        }
    }

    fs::create_directories(m.output_dir);
    const std::string csv_path =
        (fs::path(m.output_dir) / ("ablate_" + sweep.param + ".csv")).string();
    io::write_text_atomic(csv_path, csv.str());
    emitted(csv_path);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Feature-space OOD detection: whitened discriminant scoring, "
                 "baselines, metrics, and synthetic benchmarks"};
    app.require_subcommand(1);

    std::string manifest_path;
    std::string spec_path;
    std::string synth_out;
    std::string sweep_text;
    Overrides o;

    CLI::App* fit = app.add_subcommand("fit", "Fit models listed in a manifest");
    fit->add_option("manifest", manifest_path, "Experiment manifest (JSON)")->required();
    add_override_flags(fit, o);

    CLI::App* score = app.add_subcommand("score", "Score id_test and OOD sets");
    score->add_option("manifest", manifest_path, "Experiment manifest (JSON)")->required();
    add_override_flags(score, o);

    CLI::App* eval = app.add_subcommand("eval", "Evaluate score files into a report");
    eval->add_option("manifest", manifest_path, "Experiment manifest (JSON)")->required();
    add_override_flags(eval, o);

    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate a synthetic benchmark from a spec");
    synth_cmd->add_option("spec", spec_path, "Synthetic benchmark spec (JSON)")
        ->required();
    synth_cmd->add_option("out_dir", synth_out, "Directory for the generated files")
        ->required();

    CLI::App* ablate = app.add_subcommand(
        "ablate", "Sweep alpha, n_disc, or n_fit and emit AUROC curves");
    ablate->add_option("manifest", manifest_path, "Experiment manifest (JSON)")
        ->required();
    ablate->add_option("--sweep", sweep_text, "param=v1,v2,... sweep definition")
        ->required();
    add_override_flags(ablate, o);

    std::vector<const char*> argv;
    argv.push_back("wdiscood");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (fit->parsed()) return cmd_fit(manifest_path, o);
        if (score->parsed()) return cmd_score(manifest_path, o);
        if (eval->parsed()) return cmd_eval(manifest_path, o);
        if (synth_cmd->parsed()) return cmd_synth(spec_path, synth_out);
        return cmd_ablate(manifest_path, o, sweep_text);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (category(e.kind())) {
            case ErrorCategory::Usage: return 1;
            case ErrorCategory::Data: return 2;
            case ErrorCategory::Numerical: return 3;
        }
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace wdisc::cli
