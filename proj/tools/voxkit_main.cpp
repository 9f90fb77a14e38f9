// voxkit: vocal-biomarker analysis toolkit.
//
// Subcommands: synth, extract, stats, cv, sweep, transfer, utt, roc,
// train, predict.  Exit codes: 0 success, 1 input/IO error, 2 degenerate
// analysis.  Every run is deterministic given (config, seed): reports are
// byte-identical across reruns and across --jobs settings.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "vox/config.hpp"
#include "vox/errors.hpp"
#include "vox/eval.hpp"
#include "vox/io_util.hpp"
#include "vox/pipeline.hpp"
#include "vox/report.hpp"
#include "vox/rng.hpp"
#include "vox/stats.hpp"

namespace fs = std::filesystem;
using namespace vox;

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::string> manifest;
    std::optional<std::string> features;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<bool> paper_fidelity;
    std::optional<std::string> fold_mode;
    std::optional<std::string> classifier;
    std::optional<int> cv_k;
    std::optional<bool> shuffle_labels;
    std::optional<bool> split_by_gender;
    std::vector<std::string> sets;  // raw key=value overrides
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "flat key = value config file");
    cmd->add_option("--manifest", args.manifest, "corpus manifest CSV");
    cmd->add_option("--features", args.features, "precomputed feature CSV");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "master RNG seed");
    cmd->add_option("--jobs", args.jobs, "worker threads (0 = all cores)");
    cmd->add_flag("--paper-fidelity", [&args](std::int64_t) { args.paper_fidelity = true; },
                  "whole-data normalization/ranking and per-recording folds");
    cmd->add_option("--fold-mode", args.fold_mode, "speaker|recording");
    cmd->add_option("--classifier", args.classifier, "tree|knn|logistic|gp|gboost|mlp|all");
    cmd->add_option("--k", args.cv_k, "number of CV folds");
    cmd->add_flag("--shuffle-labels", [&args](std::int64_t) { args.shuffle_labels = true; },
                  "permute labels (null-model runs)");
    cmd->add_option("--set", args.sets, "override any config key, e.g. --set dsp.vad_offset_db=8")
        ->take_all();
}

RunConfig resolve_config(const CommonArgs& args) {
    RunConfig config = load_config(args.config_path);
    for (const std::string& kv : args.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            raise(ErrorCode::InvalidArgument, "--set expects key=value, got '" + kv + "'");
        }
        apply_config_line(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (args.manifest) config.manifest = *args.manifest;
    if (args.features) config.features = *args.features;
    if (args.out_dir) config.out_dir = *args.out_dir;
    if (args.seed) config.seed = *args.seed;
    if (args.jobs) config.jobs = *args.jobs;
    if (args.paper_fidelity) {
        config.paper_fidelity = *args.paper_fidelity;
        if (config.paper_fidelity) config.fold_mode = "recording";
    }
    if (args.fold_mode) config.fold_mode = *args.fold_mode;
    if (args.classifier) config.classifier = *args.classifier;
    if (args.cv_k) config.cv_k = *args.cv_k;
    if (args.shuffle_labels) config.shuffle_labels = *args.shuffle_labels;
    return config;
}

// Feature matrix from --features (CSV) or --manifest (extraction).
FeatureMatrix load_matrix(const RunConfig& config, bool* had_rejections = nullptr) {
    if (!config.features.empty()) {
        return matrix_from_csv(read_file(config.features));
    }
    if (config.manifest.empty()) {
        raise(ErrorCode::InvalidArgument, "either --features or --manifest is required");
    }
    const Corpus corpus = parse_manifest(config.manifest);
    ExtractionResult extraction = extract_corpus(corpus, config.dsp, config.jobs);
    for (const auto& r : extraction.rejections) {
        std::cerr << "warning: " << r.recording_id << " rejected: " << r.reason << "\n";
    }
    if (had_rejections) *had_rejections = !extraction.rejections.empty();
    if (extraction.matrix.rows.empty()) {
        raise(ErrorCode::NoSpeechDetected, "every utterance was rejected");
    }
    return extraction.matrix;
}

void maybe_shuffle(std::vector<int>& labels, const RunConfig& config) {
    if (!config.shuffle_labels) return;
    Rng rng = Rng(config.seed).fork(0xbadc0ffeull);
    rng.shuffle(labels);
}

CvOptions cv_options(const RunConfig& config) {
    CvOptions options;
    options.outlier_k = config.outlier_k;
    options.paper_fidelity = config.paper_fidelity;
    options.seed = config.seed;
    options.jobs = config.jobs;
    return options;
}

void write_out(const RunConfig& config, const std::string& name, const std::string& bytes) {
    write_file_atomic((fs::path(config.out_dir) / name).string(), bytes);
}

// ---- commands --------------------------------------------------------------

int cmd_synth(const RunConfig& config) {
    const GeneratedCorpus corpus = generate_corpus(config.synth, config.seed, config.jobs);
    write_corpus(corpus, config.out_dir);
    std::cout << "wrote " << corpus.rows.size() << " WAV files and manifest.csv under "
              << config.out_dir << "\n";
    return 0;
}

int cmd_extract(const RunConfig& config) {
    if (config.manifest.empty()) raise(ErrorCode::InvalidArgument, "--manifest is required");
    const Corpus corpus = parse_manifest(config.manifest);
    ExtractionResult extraction = extract_corpus(corpus, config.dsp, config.jobs);
    for (const auto& r : extraction.rejections) {
        std::cerr << "warning: " << r.recording_id << " rejected: " << r.reason << "\n";
    }
    if (extraction.matrix.rows.empty()) {
        std::cerr << "error: every utterance was rejected\n";
        return 2;
    }
    write_out(config, "features.csv", matrix_to_csv(extraction.matrix));
    if (!extraction.rejections.empty()) {
        write_out(config, "rejections.txt", extraction_warnings_text(extraction));
    }
    std::cout << "wrote " << extraction.matrix.rows.size() << " rows ("
              << extraction.rejections.size() << " rejected) to "
              << (fs::path(config.out_dir) / "features.csv").string() << "\n";
    return 0;
}

// The hypothesis-battery features: ANOVA set (mean F0 split by gender when
// not splitting everything) and the paired refusal/consent set.
const std::size_t kAnovaFeatures[] = {kMeanF0,  kStdF0,   kIntensityMean,   kIntensityStd,
                                      kJitter,  kShimmer, kRelativeSilence, kPromptToStart};
const std::size_t kPairedFeatures[] = {kStdF0, kIntensityMean, kIntensityStd, kJitter, kShimmer};

int cmd_stats(const RunConfig& config) {
    FeatureMatrix matrix = load_matrix(config);
    OutlierReport outlier_report;
    matrix = apply_outlier_policy(matrix, config.outlier_k, config.outlier_mode_enum(),
                                  &outlier_report);

    std::vector<StatsRecord> records;

    // one-way ANOVAs, LSA vs HSA
    auto anova_record = [&](std::size_t feature, std::optional<Gender> gender) {
        std::vector<double> lsa, hsa;
        for (const auto& row : matrix.rows) {
            if (row.missing[feature]) continue;
            if (gender && row.meta.gender != *gender) continue;
            if (row.sa_group == SAGroup::LSA) lsa.push_back(row.values[feature]);
            else if (row.sa_group == SAGroup::HSA) hsa.push_back(row.values[feature]);
        }
        if (lsa.size() < 2 || hsa.size() < 2) {
            raise(ErrorCode::TooFewSamples,
                  std::string("empty SA group for feature ") + kFeatureNames[feature]);
        }
        const AnovaResult res = anova_oneway({lsa, hsa});
        StatsRecord rec;
        rec.feature = kFeatureNames[feature];
        rec.comparison = gender ? (std::string("LSA_vs_HSA_") + to_string(*gender)) : "LSA_vs_HSA";
        rec.kind = "anova";
        rec.statistic = res.f_value;
        rec.effect_size = res.eta_squared;
        rec.p_value = res.p_value;
        rec.df1 = res.df_between;
        rec.df2 = res.df_within;
        records.push_back(std::move(rec));
    };
    for (std::size_t feature : kAnovaFeatures) {
        const bool split = config.stats_split_by_gender || feature == kMeanF0;
        if (split) {
            anova_record(feature, Gender::Female);
            anova_record(feature, Gender::Male);
        } else {
            anova_record(feature, std::nullopt);
        }
    }

    // paired t-tests on speaker means, refusal vs consent
    struct Pair {
        std::vector<double> refusal, consent;
    };
    for (std::size_t feature : kPairedFeatures) {
        std::map<std::string, Pair> by_speaker;
        for (const auto& row : matrix.rows) {
            if (row.missing[feature]) continue;
            if (row.meta.utterance_type == UtteranceType::Refusal) {
                by_speaker[row.meta.speaker_id].refusal.push_back(row.values[feature]);
            } else if (row.meta.utterance_type == UtteranceType::Consent) {
                by_speaker[row.meta.speaker_id].consent.push_back(row.values[feature]);
            }
        }
        std::vector<double> refusal_means, consent_means;
        for (const auto& [speaker, pair] : by_speaker) {
            if (pair.refusal.empty() || pair.consent.empty()) continue;
            double r = 0.0, c = 0.0;
            for (double v : pair.refusal) r += v;
            for (double v : pair.consent) c += v;
            refusal_means.push_back(r / pair.refusal.size());
            consent_means.push_back(c / pair.consent.size());
        }
        if (refusal_means.size() < 2) {
            raise(ErrorCode::TooFewSamples,
                  std::string("fewer than two speakers with both utterance types for ") +
                      kFeatureNames[feature]);
        }
        const PairedTResult res = paired_t(refusal_means, consent_means);
        StatsRecord rec;
        rec.feature = kFeatureNames[feature];
        rec.comparison = "refusal_vs_consent";
        rec.kind = "paired_t";
        rec.statistic = res.t_value;
        rec.effect_size = res.cohens_d;
        rec.p_value = res.p_value;
        rec.df1 = res.df;
        records.push_back(std::move(rec));
    }

    write_out(config, "stats.json", stats_report_json(config, records));
    std::cout << "wrote " << records.size() << " comparisons to "
              << (fs::path(config.out_dir) / "stats.json").string() << "\n";
    return 0;
}

int cmd_cv(const RunConfig& config, bool roc_only) {
    FeatureMatrix matrix = load_matrix(config);
    std::vector<int> labels = sa_labels(matrix);
    drop_unlabeled(matrix, labels);
    maybe_shuffle(labels, config);

    const FoldPlan plan = make_folds(matrix, labels, config.cv_k, config.fold_mode_enum(),
                                     config.stratified, config.seed);
    const CvOptions options = cv_options(config);

    std::vector<NamedCvResult> results;
    for (ModelKind kind : config.classifiers()) {
        CvResult res = cross_validate(matrix, labels, kind, config.learn, plan, options);
        results.push_back({to_string(kind), std::move(res)});
    }

    if (roc_only) {
        write_out(config, "roc.csv", roc_csv(results.front().result.pooled_roc));
        std::cout << "auc " << results.front().result.pooled_roc.auc << "\n";
        return 0;
    }
    write_out(config, "report.json", cv_report_json(config, "cv", plan, results));
    if (results.size() == 1) {
        write_out(config, "roc.csv", roc_csv(results.front().result.pooled_roc));
    } else {
        for (const auto& nm : results) {
            write_out(config, "roc_" + nm.name + ".csv", roc_csv(nm.result.pooled_roc));
        }
    }
    for (const auto& nm : results) {
        std::cout << nm.name << ": accuracy " << nm.result.aggregate.mean_accuracy << " +/- "
                  << nm.result.aggregate.std_accuracy << ", auc " << nm.result.pooled_roc.auc
                  << "\n";
    }
    return 0;
}

int cmd_sweep(const RunConfig& config) {
    FeatureMatrix matrix = load_matrix(config);
    std::vector<int> labels = sa_labels(matrix);
    drop_unlabeled(matrix, labels);
    maybe_shuffle(labels, config);

    const FoldPlan plan = make_folds(matrix, labels, config.cv_k, config.fold_mode_enum(),
                                     config.stratified, config.seed);
    const ModelKind kind = config.classifiers().front();
    const SweepResult sweep =
        sweep_feature_count(matrix, labels, kind, config.learn, plan, cv_options(config));
    write_out(config, "report.json", sweep_report_json(config, plan, to_string(kind), sweep));
    write_out(config, "sweep.csv", sweep_csv(sweep));
    std::cout << "sweep written; best k = ";
    std::size_t best = 0;
    for (std::size_t i = 1; i < sweep.mean_accuracy.size(); ++i) {
        if (sweep.mean_accuracy[i] > sweep.mean_accuracy[best]) best = i;
    }
    std::cout << best + 1 << " (accuracy " << sweep.mean_accuracy[best] << ")\n";
    return 0;
}

int cmd_transfer(const RunConfig& config) {
    FeatureMatrix matrix = load_matrix(config);
    std::vector<int> labels = sa_labels(matrix);
    drop_unlabeled(matrix, labels);
    maybe_shuffle(labels, config);

    const FoldPlan plan = make_folds(matrix, labels, config.cv_k, config.fold_mode_enum(),
                                     config.stratified, config.seed);
    const ModelKind kind = config.classifiers().front();
    const GenderConfigResult result =
        gender_configurations(matrix, labels, kind, config.learn, plan, cv_options(config));
    write_out(config, "report.json",
              transfer_report_json(config, plan, to_string(kind), result));
    write_out(config, "transfer.csv", transfer_csv(result.transfer));
    std::cout << "unified " << result.unified.aggregate.mean_accuracy << ", male "
              << result.male.aggregate.mean_accuracy << ", female "
              << result.female.aggregate.mean_accuracy << "\n";
    return 0;
}

int cmd_utt(const RunConfig& config) {
    FeatureMatrix matrix = load_matrix(config);
    if (config.shuffle_labels) {
        // permute the utterance-type column itself
        std::vector<UtteranceType> types;
        for (const auto& row : matrix.rows) types.push_back(row.meta.utterance_type);
        Rng rng = Rng(config.seed).fork(0xbadc0ffeull);
        rng.shuffle(types);
        for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
            matrix.rows[i].meta.utterance_type = types[i];
        }
    }
    const ModelKind kind = config.classifiers().front();
    FoldPlan plan;
    const CvResult result =
        utterance_type_classification(matrix, kind, config.learn, config.cv_k,
                                      config.fold_mode_enum(), config.stratified,
                                      cv_options(config), &plan);
    write_out(config, "report.json",
              cv_report_json(config, "utt", plan, {{to_string(kind), result}}));
    write_out(config, "roc.csv", roc_csv(result.pooled_roc));
    std::cout << "utterance-type accuracy " << result.aggregate.mean_accuracy << " +/- "
              << result.aggregate.std_accuracy << ", auc " << result.pooled_roc.auc << "\n";
    return 0;
}

int cmd_train(const RunConfig& config, const std::string& model_out) {
    FeatureMatrix matrix = load_matrix(config);
    std::vector<int> labels = sa_labels(matrix);
    drop_unlabeled(matrix, labels);

    std::vector<std::size_t> rows(matrix.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;

    ModelBundle bundle;
    bundle.gender = train_gender_classifier(matrix);
    FeatureMatrix work = apply_outlier_policy(matrix, config.outlier_k, OutlierMode::Clip);
    bundle.norm = fit_norm_stats(work, rows);
    work = normalize(work, bundle.norm);
    for (std::size_t c = 0; c < kFeatureCount; ++c) bundle.feature_subset.push_back(c);

    LabeledSet set;
    for (std::size_t r = 0; r < work.rows.size(); ++r) {
        set.x.emplace_back(work.rows[r].values.begin(), work.rows[r].values.end());
        set.y.push_back(labels[r]);
    }
    const ModelKind kind = config.classifiers().front();
    bundle.model = train_model(kind, set, config.learn, config.seed);
    write_file_atomic(model_out, bundle_to_json(bundle));
    std::cout << "wrote " << model_out << "\n";
    return 0;
}

int cmd_predict(const RunConfig& config, const std::string& model_path, bool infer_gender) {
    const ModelBundle bundle = bundle_from_json(read_file(model_path));
    FeatureMatrix matrix = load_matrix(config);

    std::string out = "recording_id,score,label\n";
    for (auto& row : matrix.rows) {
        Gender gender = row.meta.gender;
        if (infer_gender) gender = bundle.gender.classify(row.values);
        const int g = gender == Gender::Female ? 1 : 0;
        if (bundle.norm.per_gender[g].empty()) {
            raise(ErrorCode::UnknownGender, "model lacks stats for " +
                                                std::string(to_string(gender)));
        }
        std::vector<double> x;
        for (std::size_t c : bundle.feature_subset) {
            const auto& pf = bundle.norm.per_gender[g][c];
            x.push_back(pf.degenerate ? 0.0 : (row.values[c] - pf.mean) / pf.std);
        }
        const double score = bundle.model.predict_proba(x);
        out += row.meta.recording_id;
        out += ',';
        out += format_double(score, 6);
        out += ',';
        out += (score >= 0.5 ? "positive" : "negative");
        out += '\n';
    }
    write_out(config, "predictions.csv", out);
    std::cout << "wrote " << (fs::path(config.out_dir) / "predictions.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vocal-biomarker analysis toolkit"};
    app.require_subcommand(1);

    std::map<std::string, CommonArgs> args;
    std::string model_path = "model.json";
    bool infer_gender = false;

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic labeled corpus");
    add_common(synth, args["synth"]);
    CLI::App* extract = app.add_subcommand("extract", "extract the 18-feature matrix");
    add_common(extract, args["extract"]);
    CLI::App* stats = app.add_subcommand("stats", "ANOVA and paired-t comparisons");
    add_common(stats, args["stats"]);
    CLI::App* cv = app.add_subcommand("cv", "cross-validated SA classification");
    add_common(cv, args["cv"]);
    CLI::App* sweep = app.add_subcommand("sweep", "feature-count sweep");
    add_common(sweep, args["sweep"]);
    CLI::App* transfer = app.add_subcommand("transfer", "gender configurations and transfer");
    add_common(transfer, args["transfer"]);
    CLI::App* utt = app.add_subcommand("utt", "refusal-vs-consent classification");
    add_common(utt, args["utt"]);
    CLI::App* roc = app.add_subcommand("roc", "CV ROC curve only");
    add_common(roc, args["roc"]);
    CLI::App* train = app.add_subcommand("train", "fit one model on the full matrix");
    add_common(train, args["train"]);
    train->add_option("--model-out", model_path, "output model JSON path");
    CLI::App* predict = app.add_subcommand("predict", "apply a saved model to a feature matrix");
    add_common(predict, args["predict"]);
    predict->add_option("--model", model_path, "model JSON path");
    predict->add_flag("--infer-gender", infer_gender,
                      "use the bundled gender classifier instead of manifest labels");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(resolve_config(args["synth"]));
        if (extract->parsed()) return cmd_extract(resolve_config(args["extract"]));
        if (stats->parsed()) return cmd_stats(resolve_config(args["stats"]));
        if (cv->parsed()) return cmd_cv(resolve_config(args["cv"]), false);
        if (sweep->parsed()) return cmd_sweep(resolve_config(args["sweep"]));
        if (transfer->parsed()) return cmd_transfer(resolve_config(args["transfer"]));
        if (utt->parsed()) return cmd_utt(resolve_config(args["utt"]));
        if (roc->parsed()) return cmd_cv(resolve_config(args["roc"]), true);
        if (train->parsed()) return cmd_train(resolve_config(args["train"]), model_path);
        if (predict->parsed()) {
            return cmd_predict(resolve_config(args["predict"]), model_path, infer_gender);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_input_error() ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
