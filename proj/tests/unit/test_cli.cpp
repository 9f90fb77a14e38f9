#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "vox/io_util.hpp"
#include "vox/wav.hpp"

// VOXKIT_BINARY is injected by CMake.

namespace fs = std::filesystem;
using vox::read_file;
using vox::write_file_atomic;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("voxkit_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str(const std::string& rel = "") const { return (path / rel).string(); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(VOXKIT_BINARY) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n' ? 1 : 0;
    return n;
}

// small deterministic corpus shared by the pipeline tests
std::string synth_args(const TempDir& dir, int speakers = 8, int utterances = 6) {
    return "synth --out " + dir.str("corpus") + " --seed 11 --set synth.speakers=" +
           std::to_string(speakers) +
           " --set synth.utterances_per_speaker=" + std::to_string(utterances) +
           " --set synth.lead_sd_s=0.1";
}

}  // namespace

TEST_CASE("synth writes N wavs plus a manifest, reproducibly") {
    TempDir dir;
    REQUIRE(run(synth_args(dir, 4, 2)) == 0);
    std::size_t wavs = 0;
    for (const auto& e : fs::directory_iterator(dir.str("corpus"))) {
        if (e.path().extension() == ".wav") ++wavs;
    }
    CHECK(wavs == 8);
    CHECK(fs::exists(dir.str("corpus/manifest.csv")));

    // same seed regenerates bit-identical audio
    const std::string first = read_file(dir.str("corpus/s001_u01.wav"));
    TempDir dir2;
    REQUIRE(run(synth_args(dir2, 4, 2)) == 0);
    CHECK(read_file(dir2.str("corpus/s001_u01.wav")) == first);
}

TEST_CASE("extract produces the 24-column schema and exit code 0") {
    TempDir dir;
    REQUIRE(run(synth_args(dir, 4, 2)) == 0);
    REQUIRE(run("extract --manifest " + dir.str("corpus/manifest.csv") + " --out " + dir.str() +
                " --jobs 2") == 0);
    const std::string csv = read_file(dir.str("features.csv"));
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(std::count(header.begin(), header.end(), ',') == 23);  // 24 columns
    CHECK(count_lines(csv) == 9);                                // header + 8 rows
}

TEST_CASE("extract with a missing audio file exits 1 and writes no partial CSV") {
    TempDir dir;
    write_file_atomic(dir.str("manifest.csv"),
                      "recording_id,speaker_id,gender,lsas_score,utterance_type,path\n"
                      "r1,s1,male,20,refusal,missing.wav\n");
    CHECK(run("extract --manifest " + dir.str("manifest.csv") + " --out " + dir.str()) == 1);
    CHECK_FALSE(fs::exists(dir.str("features.csv")));
}

TEST_CASE("extract keeps good rows when one clip is silent, exit 0 with warnings") {
    TempDir dir;
    REQUIRE(run(synth_args(dir, 4, 2)) == 0);
    // overwrite one wav with digital silence
    vox::AudioClip silent;
    silent.sample_rate_hz = 16000;
    silent.samples.assign(16000, 0.0);
    vox::write_wav(dir.str("corpus/s001_u01.wav"), silent);
    REQUIRE(run("extract --manifest " + dir.str("corpus/manifest.csv") + " --out " + dir.str()) ==
            0);
    CHECK(count_lines(read_file(dir.str("features.csv"))) == 8);  // header + 7 rows
    CHECK(fs::exists(dir.str("rejections.txt")));
}

TEST_CASE("all-silent corpus exits 2") {
    TempDir dir;
    vox::AudioClip silent;
    silent.sample_rate_hz = 16000;
    silent.samples.assign(16000, 0.0);
    vox::write_wav(dir.str("a.wav"), silent);
    write_file_atomic(dir.str("manifest.csv"),
                      "recording_id,speaker_id,gender,lsas_score,utterance_type,path\n"
                      "r1,s1,male,20,refusal,a.wav\n");
    CHECK(run("extract --manifest " + dir.str("manifest.csv") + " --out " + dir.str()) == 2);
}

TEST_CASE("cv on a synthetic corpus: deterministic byte-identical reports") {
    TempDir dir;
    REQUIRE(run(synth_args(dir)) == 0);
    REQUIRE(run("extract --manifest " + dir.str("corpus/manifest.csv") + " --out " + dir.str()) ==
            0);

    const std::string cv_args = "cv --features " + dir.str("features.csv") +
                                " --classifier logistic --k 4 --seed 9 --out ";
    REQUIRE(run(cv_args + dir.str("run1")) == 0);
    REQUIRE(run(cv_args + dir.str("run2") + " --jobs 2") == 0);
    CHECK(read_file(dir.str("run1/report.json")) == read_file(dir.str("run2/report.json")));
    CHECK(read_file(dir.str("run1/roc.csv")) == read_file(dir.str("run2/roc.csv")));

    const std::string report = read_file(dir.str("run1/report.json"));
    CHECK(report.find("\"schema\": 1") != std::string::npos);
    CHECK(report.find("\"config\"") != std::string::npos);
    CHECK(report.find("\"logistic\"") != std::string::npos);
}

TEST_CASE("sweep.csv carries exactly 18 data rows") {
    TempDir dir;
    REQUIRE(run(synth_args(dir)) == 0);
    REQUIRE(run("extract --manifest " + dir.str("corpus/manifest.csv") + " --out " + dir.str()) ==
            0);
    REQUIRE(run("sweep --features " + dir.str("features.csv") +
                " --classifier knn --k 4 --seed 5 --out " + dir.str("sweep")) == 0);
    const std::string csv = read_file(dir.str("sweep/sweep.csv"));
    CHECK(count_lines(csv) == 19);  // header + 18
}

TEST_CASE("stats emits the comparison records") {
    TempDir dir;
    REQUIRE(run(synth_args(dir)) == 0);
    REQUIRE(run("extract --manifest " + dir.str("corpus/manifest.csv") + " --out " + dir.str()) ==
            0);
    REQUIRE(run("stats --features " + dir.str("features.csv") + " --out " + dir.str("stats")) ==
            0);
    const std::string report = read_file(dir.str("stats/stats.json"));
    CHECK(report.find("\"records\"") != std::string::npos);
    CHECK(report.find("LSA_vs_HSA") != std::string::npos);
    CHECK(report.find("refusal_vs_consent") != std::string::npos);
    CHECK(report.find("intensity_mean") != std::string::npos);
}

TEST_CASE("transfer and utt commands produce their artifacts") {
    TempDir dir;
    REQUIRE(run(synth_args(dir, 12, 6)) == 0);
    REQUIRE(run("extract --manifest " + dir.str("corpus/manifest.csv") + " --out " + dir.str()) ==
            0);
    REQUIRE(run("transfer --features " + dir.str("features.csv") +
                " --classifier tree --k 3 --seed 2 --out " + dir.str("tr")) == 0);
    CHECK(count_lines(read_file(dir.str("tr/transfer.csv"))) == 5);  // header + 4 cells

    REQUIRE(run("utt --features " + dir.str("features.csv") +
                " --classifier tree --k 3 --seed 2 --out " + dir.str("utt")) == 0);
    CHECK(fs::exists(dir.str("utt/report.json")));
    CHECK(fs::exists(dir.str("utt/roc.csv")));
}

TEST_CASE("roc subcommand emits only the curve") {
    TempDir dir;
    REQUIRE(run(synth_args(dir)) == 0);
    REQUIRE(run("extract --manifest " + dir.str("corpus/manifest.csv") + " --out " + dir.str()) ==
            0);
    REQUIRE(run("roc --features " + dir.str("features.csv") +
                " --classifier knn --k 4 --seed 3 --out " + dir.str("roc")) == 0);
    const std::string csv = read_file(dir.str("roc/roc.csv"));
    CHECK(csv.rfind("fpr,tpr\n", 0) == 0);
    CHECK(count_lines(csv) >= 3);
}

TEST_CASE("train then predict round-trips through the model JSON") {
    TempDir dir;
    REQUIRE(run(synth_args(dir)) == 0);
    REQUIRE(run("extract --manifest " + dir.str("corpus/manifest.csv") + " --out " + dir.str()) ==
            0);
    REQUIRE(run("train --features " + dir.str("features.csv") +
                " --classifier logistic --seed 4 --model-out " + dir.str("model.json")) == 0);
    CHECK(fs::exists(dir.str("model.json")));
    REQUIRE(run("predict --features " + dir.str("features.csv") + " --model " +
                dir.str("model.json") + " --out " + dir.str("pred")) == 0);
    const std::string pred = read_file(dir.str("pred/predictions.csv"));
    CHECK(count_lines(pred) == 49);  // header + 48 rows
    CHECK(pred.rfind("recording_id,score,label\n", 0) == 0);
}

TEST_CASE("config file values load and CLI flags override them") {
    TempDir dir;
    write_file_atomic(dir.str("run.conf"),
                      "# comment line\n"
                      "seed = 123\n"
                      "cv_k = 3\n"
                      "synth.speakers = 4\n"
                      "synth.utterances_per_speaker = 2\n");
    REQUIRE(run("synth --config " + dir.str("run.conf") + " --out " + dir.str("c")) == 0);
    std::size_t wavs = 0;
    for (const auto& e : fs::directory_iterator(dir.str("c"))) {
        if (e.path().extension() == ".wav") ++wavs;
    }
    CHECK(wavs == 8);

    // unknown keys are rejected
    write_file_atomic(dir.str("bad.conf"), "nonsense_key = 1\n");
    CHECK(run("synth --config " + dir.str("bad.conf") + " --out " + dir.str("d")) != 0);
}

TEST_CASE("bad inputs exit 1") {
    TempDir dir;
    CHECK(run("extract --manifest " + dir.str("nope.csv") + " --out " + dir.str()) == 1);
    CHECK(run("cv --features " + dir.str("nope.csv") + " --out " + dir.str()) == 1);
}
