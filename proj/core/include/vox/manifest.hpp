#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vox/audio.hpp"

namespace vox {

enum class Gender { Male, Female };
enum class UtteranceType { Refusal, Consent, Unknown };
enum class SAGroup { LSA, HSA, Excluded };

const char* to_string(Gender g);
const char* to_string(UtteranceType t);
const char* to_string(SAGroup g);

struct RecordingMeta {
    std::string recording_id;
    std::string speaker_id;
    Gender gender = Gender::Male;
    int lsas_score = 0;
    UtteranceType utterance_type = UtteranceType::Unknown;
    std::string source_path;
};

// LSAS 0-144 -> group.  LSA at or below 30, HSA at or above 50, the
// 31-49 band is excluded from analysis.  Out-of-range scores throw.
SAGroup assign_group(int lsas_score);

// One manifest row plus a lazily-loaded clip.  parse_manifest verifies the
// audio header eagerly (existence, format, uniform rate) but defers sample
// decoding until audio() is called, so large corpora stream.
class CorpusEntry {
  public:
    CorpusEntry(RecordingMeta meta, std::string resolved_path)
        : meta_(std::move(meta)), resolved_path_(std::move(resolved_path)) {}

    const RecordingMeta& meta() const { return meta_; }
    const std::string& resolved_path() const { return resolved_path_; }
    AudioClip audio() const;  // loads on every call; callers cache if needed

  private:
    RecordingMeta meta_;
    std::string resolved_path_;
};

struct Corpus {
    std::vector<CorpusEntry> entries;
    int sample_rate_hz = 0;  // uniform across entries, checked at load
};

// Parses the manifest CSV (header row required, columns exactly:
// recording_id, speaker_id, gender, lsas_score, utterance_type, path).
// Paths are resolved relative to the manifest's directory.  When
// verify_audio is set, each referenced file's WAV header is checked and
// a uniform sample rate enforced.
Corpus parse_manifest(const std::string& path, bool verify_audio = true);

// Serializes rows back to the manifest schema (used by the synth command).
std::string manifest_to_csv(const std::vector<RecordingMeta>& rows);

}  // namespace vox
