#include "vox/config.hpp"

#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "vox/errors.hpp"

namespace vox {

using nlohmann::ordered_json;

namespace {

enum class FieldKind { Double, Int, Uint64, Bool, String };

struct Field {
    const char* key;
    FieldKind kind;
    void* (*get)(RunConfig&);
    // jobs and out_dir are execution machinery: reports must stay
    // byte-identical across --jobs settings and output locations
    bool echoed = true;
};

#define VOX_FIELD(key, kind, member) \
    Field { key, FieldKind::kind, [](RunConfig& c) -> void* { return &c.member; }, true }
#define VOX_FIELD_NOECHO(key, kind, member) \
    Field { key, FieldKind::kind, [](RunConfig& c) -> void* { return &c.member; }, false }

// Single source of truth: parsing, validation and the JSON echo all walk
// this table, so the report always reflects every live knob.
const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        VOX_FIELD("manifest", String, manifest),
        VOX_FIELD("features", String, features),
        VOX_FIELD_NOECHO("out_dir", String, out_dir),
        VOX_FIELD("seed", Uint64, seed),
        VOX_FIELD_NOECHO("jobs", Int, jobs),
        VOX_FIELD("paper_fidelity", Bool, paper_fidelity),
        VOX_FIELD("classifier", String, classifier),
        VOX_FIELD("fold_mode", String, fold_mode),
        VOX_FIELD("cv_k", Int, cv_k),
        VOX_FIELD("stratified", Bool, stratified),
        VOX_FIELD("outlier_mode", String, outlier_mode),
        VOX_FIELD("outlier_k", Double, outlier_k),
        VOX_FIELD("stats_split_by_gender", Bool, stats_split_by_gender),
        VOX_FIELD("shuffle_labels", Bool, shuffle_labels),

        VOX_FIELD("dsp.pitch_window_s", Double, dsp.pitch_window_s),
        VOX_FIELD("dsp.pitch_hop_s", Double, dsp.pitch_hop_s),
        VOX_FIELD("dsp.pitch_floor_hz", Double, dsp.pitch_floor_hz),
        VOX_FIELD("dsp.pitch_ceil_hz", Double, dsp.pitch_ceil_hz),
        VOX_FIELD("dsp.voicing_threshold", Double, dsp.voicing_threshold),
        VOX_FIELD("dsp.octave_bias", Double, dsp.octave_bias),
        VOX_FIELD("dsp.intensity_window_s", Double, dsp.intensity_window_s),
        VOX_FIELD("dsp.intensity_hop_s", Double, dsp.intensity_hop_s),
        VOX_FIELD("dsp.vad_offset_db", Double, dsp.vad_offset_db),
        VOX_FIELD("dsp.vad_peak_margin_db", Double, dsp.vad_peak_margin_db),
        VOX_FIELD("dsp.vad_min_level_db", Double, dsp.vad_min_level_db),
        VOX_FIELD("dsp.vad_hangover_s", Double, dsp.vad_hangover_s),
        VOX_FIELD("dsp.noise_floor_window_s", Double, dsp.noise_floor_window_s),
        VOX_FIELD("dsp.voice_break_min_s", Double, dsp.voice_break_min_s),

        VOX_FIELD("learn.knn_k", Int, learn.knn_k),
        VOX_FIELD("learn.logistic_l2", Double, learn.logistic_l2),
        VOX_FIELD("learn.logistic_max_iters", Int, learn.logistic_max_iters),
        VOX_FIELD("learn.logistic_tol", Double, learn.logistic_tol),
        VOX_FIELD("learn.gp_length_scale", Double, learn.gp.length_scale),
        VOX_FIELD("learn.gp_variance", Double, learn.gp.variance),
        VOX_FIELD("learn.gp_jitter", Double, learn.gp.jitter),
        VOX_FIELD("learn.gp_max_newton", Int, learn.gp.max_newton),
        VOX_FIELD("learn.gp_tol", Double, learn.gp.tol),
        VOX_FIELD("learn.gp_max_n", Uint64, learn.gp.max_n),
        VOX_FIELD("learn.gboost_rounds", Int, learn.gboost_rounds),
        VOX_FIELD("learn.gboost_depth", Int, learn.gboost_depth),
        VOX_FIELD("learn.gboost_lr", Double, learn.gboost_lr),
        VOX_FIELD("learn.mlp_hidden", Int, learn.mlp_hidden),
        VOX_FIELD("learn.mlp_epochs", Int, learn.mlp_epochs),
        VOX_FIELD("learn.mlp_lr", Double, learn.mlp_lr),
        VOX_FIELD("learn.tree_max_depth", Int, learn.tree_max_depth),
        VOX_FIELD("learn.tree_min_leaf", Int, learn.tree_min_leaf),

        VOX_FIELD("synth.speakers", Int, synth.speakers),
        VOX_FIELD("synth.utterances_per_speaker", Int, synth.utterances_per_speaker),
        VOX_FIELD("synth.sample_rate_hz", Int, synth.sample_rate_hz),
        VOX_FIELD("synth.female_fraction", Double, synth.female_fraction),
        VOX_FIELD("synth.hsa_fraction", Double, synth.hsa_fraction),
        VOX_FIELD("synth.f0_male_hz", Double, synth.f0_male_hz),
        VOX_FIELD("synth.f0_female_hz", Double, synth.f0_female_hz),
        VOX_FIELD("synth.f0_speaker_sd_male", Double, synth.f0_speaker_sd_male),
        VOX_FIELD("synth.f0_speaker_sd_female", Double, synth.f0_speaker_sd_female),
        VOX_FIELD("synth.f0_utterance_sd", Double, synth.f0_utterance_sd),
        VOX_FIELD("synth.f0_delta_hsa_male", Double, synth.f0_delta_hsa_male),
        VOX_FIELD("synth.f0_delta_hsa_female", Double, synth.f0_delta_hsa_female),
        VOX_FIELD("synth.f0_drift_base", Double, synth.f0_drift_base),
        VOX_FIELD("synth.f0_drift_sd", Double, synth.f0_drift_sd),
        VOX_FIELD("synth.f0_drift_delta_consent", Double, synth.f0_drift_delta_consent),
        VOX_FIELD("synth.duty_base", Double, synth.duty_base),
        VOX_FIELD("synth.duty_sd", Double, synth.duty_sd),
        VOX_FIELD("synth.intensity_lsa_db", Double, synth.intensity_lsa_db),
        VOX_FIELD("synth.intensity_hsa_db", Double, synth.intensity_hsa_db),
        VOX_FIELD("synth.intensity_speaker_sd", Double, synth.intensity_speaker_sd),
        VOX_FIELD("synth.intensity_utterance_sd", Double, synth.intensity_utterance_sd),
        VOX_FIELD("synth.refusal_consent_gap_db", Double, synth.refusal_consent_gap_db),
        VOX_FIELD("synth.jitter_base", Double, synth.jitter_base),
        VOX_FIELD("synth.jitter_utterance_sd", Double, synth.jitter_utterance_sd),
        VOX_FIELD("synth.jitter_delta_consent", Double, synth.jitter_delta_consent),
        VOX_FIELD("synth.shimmer_base", Double, synth.shimmer_base),
        VOX_FIELD("synth.shimmer_utterance_sd", Double, synth.shimmer_utterance_sd),
        VOX_FIELD("synth.shimmer_delta_hsa", Double, synth.shimmer_delta_hsa),
        VOX_FIELD("synth.shimmer_delta_consent", Double, synth.shimmer_delta_consent),
        VOX_FIELD("synth.duration_mean_s", Double, synth.duration_mean_s),
        VOX_FIELD("synth.duration_sd_s", Double, synth.duration_sd_s),
        VOX_FIELD("synth.lead_mean_s", Double, synth.lead_mean_s),
        VOX_FIELD("synth.lead_sd_s", Double, synth.lead_sd_s),
        VOX_FIELD("synth.lead_delta_hsa", Double, synth.lead_delta_hsa),
        VOX_FIELD("synth.pause_prob", Double, synth.pause_prob),
        VOX_FIELD("synth.pause_len_min_s", Double, synth.pause_len_min_s),
        VOX_FIELD("synth.pause_len_max_s", Double, synth.pause_len_max_s),
        VOX_FIELD("synth.sa_shift_scope", String, synth.sa_shift_scope),
    };
    return table;
}

#undef VOX_FIELD
#undef VOX_FIELD_NOECHO

void* field_ptr(RunConfig& config, const Field& f) { return f.get(config); }

const void* field_ptr(const RunConfig& config, const Field& f) {
    return f.get(const_cast<RunConfig&>(config));
}

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void apply_config_line(RunConfig& config, const std::string& key, const std::string& value) {
    for (const Field& f : fields()) {
        if (key != f.key) continue;
        void* ptr = field_ptr(config, f);
        try {
            switch (f.kind) {
                case FieldKind::Double: *static_cast<double*>(ptr) = std::stod(value); break;
                case FieldKind::Int: *static_cast<int*>(ptr) = std::stoi(value); break;
                case FieldKind::Uint64: *static_cast<std::uint64_t*>(ptr) = std::stoull(value); break;
                case FieldKind::Bool: {
                    if (value == "true" || value == "1") *static_cast<bool*>(ptr) = true;
                    else if (value == "false" || value == "0") *static_cast<bool*>(ptr) = false;
                    else throw std::invalid_argument("not a bool");
                    break;
                }
                case FieldKind::String: *static_cast<std::string*>(ptr) = value; break;
            }
        } catch (const std::exception&) {
            raise(ErrorCode::InvalidArgument, "bad value for config key '" + key + "': " + value);
        }
        return;
    }
    raise(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
}

RunConfig load_config(const std::string& path) {
    RunConfig config;
    if (path.empty()) return config;
    std::ifstream in(path);
    if (!in) raise(ErrorCode::FileNotFound, path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            raise(ErrorCode::InvalidArgument,
                  path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        apply_config_line(config, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return config;
}

FoldMode RunConfig::fold_mode_enum() const {
    if (fold_mode == "speaker") return FoldMode::PerSpeaker;
    if (fold_mode == "recording") return FoldMode::PerRecording;
    raise(ErrorCode::InvalidArgument, "fold_mode must be 'speaker' or 'recording'");
}

OutlierMode RunConfig::outlier_mode_enum() const {
    if (outlier_mode == "clip") return OutlierMode::Clip;
    if (outlier_mode == "exclude_value") return OutlierMode::ExcludeValue;
    raise(ErrorCode::InvalidArgument, "outlier_mode must be 'clip' or 'exclude_value'");
}

std::vector<ModelKind> RunConfig::classifiers() const {
    if (classifier == "all") {
        return {ModelKind::Tree, ModelKind::Knn,    ModelKind::Logistic,
                ModelKind::Gp,   ModelKind::Gboost, ModelKind::Mlp};
    }
    return {model_kind_from_string(classifier)};
}

std::string config_to_json(const RunConfig& config) {
    ordered_json j;
    for (const Field& f : fields()) {
        if (!f.echoed) continue;
        const void* ptr = field_ptr(config, f);
        switch (f.kind) {
            case FieldKind::Double: j[f.key] = *static_cast<const double*>(ptr); break;
            case FieldKind::Int: j[f.key] = *static_cast<const int*>(ptr); break;
            case FieldKind::Uint64: j[f.key] = *static_cast<const std::uint64_t*>(ptr); break;
            case FieldKind::Bool: j[f.key] = *static_cast<const bool*>(ptr); break;
            case FieldKind::String: j[f.key] = *static_cast<const std::string*>(ptr); break;
        }
    }
    return j.dump(2);
}

}  // namespace vox
