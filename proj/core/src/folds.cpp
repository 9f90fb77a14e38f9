#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "vox/errors.hpp"
#include "vox/eval.hpp"
#include "vox/rng.hpp"

namespace vox {

const char* to_string(FoldMode mode) {
    return mode == FoldMode::PerSpeaker ? "speaker" : "recording";
}

namespace {

// Deals the units of one class round-robin, continuing the fold cursor
// across classes so total fold sizes stay within one of each other.
void deal(const std::vector<std::size_t>& units, int k, int& cursor, std::vector<int>& unit_fold) {
    for (std::size_t u : units) {
        unit_fold[u] = cursor;
        cursor = (cursor + 1) % k;
    }
}

}  // namespace

FoldPlan make_folds(const FeatureMatrix& matrix, const std::vector<int>& labels, int k,
                    FoldMode mode, bool stratified, std::uint64_t seed) {
    const std::size_t n = matrix.rows.size();
    if (labels.size() != n) raise(ErrorCode::LengthMismatch, "labels vs rows");
    if (k < 2) raise(ErrorCode::TooFewGroups, "k must be >= 2");

    FoldPlan plan;
    plan.k = k;
    plan.mode = mode;
    plan.stratified = stratified;
    plan.seed = seed;
    plan.assignment.assign(n, -1);

    Rng rng(seed);

    if (mode == FoldMode::PerRecording) {
        if (n < static_cast<std::size_t>(k)) {
            raise(ErrorCode::TooFewGroups, "fewer rows than folds");
        }
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < n; ++i) (labels[i] ? pos : neg).push_back(i);
        std::vector<int> row_fold(n, -1);
        int cursor = 0;
        if (stratified) {
            rng.shuffle(pos);
            rng.shuffle(neg);
            deal(pos, k, cursor, row_fold);
            deal(neg, k, cursor, row_fold);
        } else {
            std::vector<std::size_t> all(n);
            for (std::size_t i = 0; i < n; ++i) all[i] = i;
            rng.shuffle(all);
            deal(all, k, cursor, row_fold);
        }
        plan.assignment = std::move(row_fold);
    } else {
        // group rows by speaker, in first-appearance order
        std::vector<std::string> speaker_of;
        std::map<std::string, std::size_t> speaker_index;
        std::vector<std::vector<std::size_t>> speaker_rows;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& s = matrix.rows[i].meta.speaker_id;
            auto [it, inserted] = speaker_index.try_emplace(s, speaker_rows.size());
            if (inserted) speaker_rows.emplace_back();
            speaker_rows[it->second].push_back(i);
        }
        const std::size_t n_speakers = speaker_rows.size();
        if (n_speakers < static_cast<std::size_t>(k)) {
            raise(ErrorCode::TooFewGroups, "fewer speakers than folds");
        }
        // majority label per speaker, ties counting positive
        std::vector<std::size_t> pos, neg;
        for (std::size_t s = 0; s < n_speakers; ++s) {
            std::size_t p = 0;
            for (std::size_t r : speaker_rows[s]) p += labels[r] ? 1 : 0;
            (2 * p >= speaker_rows[s].size() ? pos : neg).push_back(s);
        }
        std::vector<int> speaker_fold(n_speakers, -1);
        int cursor = 0;
        if (stratified) {
            rng.shuffle(pos);
            rng.shuffle(neg);
            deal(pos, k, cursor, speaker_fold);
            deal(neg, k, cursor, speaker_fold);
        } else {
            std::vector<std::size_t> all(n_speakers);
            for (std::size_t s = 0; s < n_speakers; ++s) all[s] = s;
            rng.shuffle(all);
            deal(all, k, cursor, speaker_fold);
        }
        for (std::size_t s = 0; s < n_speakers; ++s) {
            for (std::size_t r : speaker_rows[s]) plan.assignment[r] = speaker_fold[s];
        }
    }

    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int fold : plan.assignment) {
        if (fold < 0) raise(ErrorCode::TooFewGroups, "unassigned row");
        ++sizes[static_cast<std::size_t>(fold)];
    }
    for (std::size_t f = 0; f < sizes.size(); ++f) {
        if (sizes[f] == 0) raise(ErrorCode::TooFewGroups, "empty fold " + std::to_string(f));
    }
    return plan;
}

}  // namespace vox
