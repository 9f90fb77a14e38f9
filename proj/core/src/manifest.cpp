#include "vox/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "vox/errors.hpp"
#include "vox/wav.hpp"

namespace vox {

namespace fs = std::filesystem;

const char* to_string(Gender g) { return g == Gender::Male ? "male" : "female"; }

const char* to_string(UtteranceType t) {
    switch (t) {
        case UtteranceType::Refusal: return "refusal";
        case UtteranceType::Consent: return "consent";
        default: return "unknown";
    }
}

const char* to_string(SAGroup g) {
    switch (g) {
        case SAGroup::LSA: return "LSA";
        case SAGroup::HSA: return "HSA";
        default: return "Excluded";
    }
}

SAGroup assign_group(int lsas_score) {
    if (lsas_score < 0 || lsas_score > 144) {
        raise(ErrorCode::OutOfRange, "LSAS score " + std::to_string(lsas_score));
    }
    if (lsas_score <= 30) return SAGroup::LSA;
    if (lsas_score >= 50) return SAGroup::HSA;
    return SAGroup::Excluded;
}

AudioClip CorpusEntry::audio() const { return load_wav(resolved_path_); }

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Gender parse_gender(const std::string& s, int line_no) {
    if (s == "male") return Gender::Male;
    if (s == "female") return Gender::Female;
    raise(ErrorCode::MalformedManifest,
          "line " + std::to_string(line_no) + ": bad gender token '" + s + "'");
}

UtteranceType parse_utterance(const std::string& s, int line_no) {
    if (s == "refusal") return UtteranceType::Refusal;
    if (s == "consent") return UtteranceType::Consent;
    if (s == "unknown") return UtteranceType::Unknown;
    raise(ErrorCode::MalformedManifest,
          "line " + std::to_string(line_no) + ": bad utterance_type token '" + s + "'");
}

constexpr const char* kHeader = "recording_id,speaker_id,gender,lsas_score,utterance_type,path";

}  // namespace

Corpus parse_manifest(const std::string& path, bool verify_audio) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::FileNotFound, path);
    const fs::path base = fs::path(path).parent_path();

    std::string line;
    if (!std::getline(in, line)) raise(ErrorCode::MalformedManifest, path + ": empty file");
    if (strip(line) != kHeader) {
        raise(ErrorCode::MalformedManifest,
              path + ": header must be exactly '" + std::string(kHeader) + "'");
    }

    Corpus corpus;
    std::unordered_set<std::string> seen_ids;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 6) {
            raise(ErrorCode::MalformedManifest, "line " + std::to_string(line_no) + ": expected 6 columns, got " +
                                                    std::to_string(fields.size()));
        }
        for (auto& f : fields) f = strip(f);

        RecordingMeta meta;
        meta.recording_id = fields[0];
        meta.speaker_id = fields[1];
        if (meta.recording_id.empty() || meta.speaker_id.empty()) {
            raise(ErrorCode::MalformedManifest, "line " + std::to_string(line_no) + ": empty id");
        }
        meta.gender = parse_gender(fields[2], line_no);
        try {
            std::size_t pos = 0;
            meta.lsas_score = std::stoi(fields[3], &pos);
            if (pos != fields[3].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            raise(ErrorCode::MalformedManifest,
                  "line " + std::to_string(line_no) + ": bad lsas_score '" + fields[3] + "'");
        }
        if (meta.lsas_score < 0 || meta.lsas_score > 144) {
            raise(ErrorCode::MalformedManifest, "line " + std::to_string(line_no) +
                                                    ": lsas_score out of [0,144]: " + fields[3]);
        }
        meta.utterance_type = parse_utterance(fields[4], line_no);
        meta.source_path = fields[5];

        if (!seen_ids.insert(meta.recording_id).second) {
            raise(ErrorCode::DuplicateId, "recording_id '" + meta.recording_id + "'");
        }

        std::string resolved = (base / meta.source_path).string();
        if (verify_audio) {
            WavInfo info = read_wav_info(resolved);
            if (corpus.sample_rate_hz == 0) {
                corpus.sample_rate_hz = info.sample_rate_hz;
            } else if (corpus.sample_rate_hz != info.sample_rate_hz) {
                raise(ErrorCode::MalformedManifest,
                      resolved + ": sample rate " + std::to_string(info.sample_rate_hz) +
                          " differs from corpus rate " + std::to_string(corpus.sample_rate_hz));
            }
        }
        corpus.entries.emplace_back(std::move(meta), std::move(resolved));
    }
    if (corpus.entries.empty()) raise(ErrorCode::MalformedManifest, path + ": no data rows");
    return corpus;
}

std::string manifest_to_csv(const std::vector<RecordingMeta>& rows) {
    std::string out = kHeader;
    out += '\n';
    for (const auto& m : rows) {
        out += m.recording_id;
        out += ',';
        out += m.speaker_id;
        out += ',';
        out += to_string(m.gender);
        out += ',';
        out += std::to_string(m.lsas_score);
        out += ',';
        out += to_string(m.utterance_type);
        out += ',';
        out += m.source_path;
        out += '\n';
    }
    return out;
}

}  // namespace vox
