#include "vox/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "vox/errors.hpp"
#include "vox/io_util.hpp"

namespace vox {

namespace {

struct ChunkHeader {
    char id[4];
    std::uint32_t size;
};

std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t read_u16(std::istream& in) {
    unsigned char b[2];
    in.read(reinterpret_cast<char*>(b), 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

bool read_chunk_header(std::istream& in, ChunkHeader& ch) {
    in.read(ch.id, 4);
    if (!in) return false;
    ch.size = read_u32(in);
    return static_cast<bool>(in);
}

struct FmtChunk {
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
};

void check_format(const FmtChunk& fmt, const std::string& path) {
    if (fmt.format != 1) {
        raise(ErrorCode::UnsupportedFormat,
              path + ": non-PCM codec (format tag " + std::to_string(fmt.format) + ")");
    }
    if (fmt.channels != 1) {
        raise(ErrorCode::UnsupportedFormat,
              path + ": " + std::to_string(fmt.channels) + " channels, expected mono");
    }
    if (fmt.bits != 16) {
        raise(ErrorCode::UnsupportedFormat,
              path + ": " + std::to_string(fmt.bits) + "-bit samples, expected 16");
    }
}

// Walks the RIFF chunks up to (and optionally including) the data payload.
void parse_wav(const std::string& path, FmtChunk& fmt, std::vector<std::int16_t>* data,
               std::size_t* frame_count) {
    if (!std::filesystem::exists(path)) {
        raise(ErrorCode::FileNotFound, path);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot open " + path);

    char riff[4];
    in.read(riff, 4);
    if (!in || std::memcmp(riff, "RIFF", 4) != 0) {
        raise(ErrorCode::MalformedWav, path + ": missing RIFF tag");
    }
    read_u32(in);  // overall size; unreliable in the wild, ignored
    char wave[4];
    in.read(wave, 4);
    if (!in || std::memcmp(wave, "WAVE", 4) != 0) {
        raise(ErrorCode::MalformedWav, path + ": missing WAVE tag");
    }

    bool have_fmt = false;
    bool have_data = false;
    ChunkHeader ch;
    while (read_chunk_header(in, ch)) {
        if (std::memcmp(ch.id, "fmt ", 4) == 0) {
            if (ch.size < 16) raise(ErrorCode::MalformedWav, path + ": short fmt chunk");
            fmt.format = read_u16(in);
            fmt.channels = read_u16(in);
            fmt.sample_rate = read_u32(in);
            read_u32(in);  // byte rate
            read_u16(in);  // block align
            fmt.bits = read_u16(in);
            in.seekg(ch.size - 16, std::ios::cur);
            have_fmt = true;
        } else if (std::memcmp(ch.id, "data", 4) == 0) {
            if (!have_fmt) raise(ErrorCode::MalformedWav, path + ": data before fmt");
            check_format(fmt, path);
            const std::size_t n = ch.size / 2;
            if (frame_count) *frame_count = n;
            if (data) {
                data->resize(n);
                in.read(reinterpret_cast<char*>(data->data()), static_cast<std::streamsize>(n * 2));
                if (static_cast<std::size_t>(in.gcount()) != n * 2) {
                    raise(ErrorCode::MalformedWav, path + ": truncated data chunk");
                }
            } else {
                in.seekg(ch.size, std::ios::cur);
            }
            have_data = true;
            break;
        } else {
            // skip unknown chunk (LIST, fact, ...), honoring word alignment
            in.seekg(ch.size + (ch.size & 1), std::ios::cur);
        }
        if (!in) raise(ErrorCode::MalformedWav, path + ": truncated chunk list");
    }
    if (!have_fmt || !have_data) {
        raise(ErrorCode::MalformedWav, path + ": missing fmt or data chunk");
    }
}

}  // namespace

WavInfo read_wav_info(const std::string& path) {
    FmtChunk fmt;
    std::size_t frames = 0;
    parse_wav(path, fmt, nullptr, &frames);
    return WavInfo{static_cast<int>(fmt.sample_rate), fmt.channels, fmt.bits, frames};
}

AudioClip load_wav(const std::string& path) {
    FmtChunk fmt;
    std::vector<std::int16_t> pcm;
    parse_wav(path, fmt, &pcm, nullptr);
    if (pcm.empty()) raise(ErrorCode::MalformedWav, path + ": empty data chunk");

    AudioClip clip;
    clip.sample_rate_hz = static_cast<int>(fmt.sample_rate);
    clip.samples.resize(pcm.size());
    for (std::size_t i = 0; i < pcm.size(); ++i) {
        clip.samples[i] = static_cast<double>(pcm[i]) / 32768.0;
    }
    return clip;
}

void write_wav(const std::string& path, const AudioClip& clip) {
    validate_clip(clip);
    std::string bytes;
    const std::uint32_t n = static_cast<std::uint32_t>(clip.samples.size());
    const std::uint32_t data_size = n * 2;
    const std::uint32_t rate = static_cast<std::uint32_t>(clip.sample_rate_hz);

    auto put_u32 = [&bytes](std::uint32_t v) {
        bytes.push_back(static_cast<char>(v & 0xff));
        bytes.push_back(static_cast<char>((v >> 8) & 0xff));
        bytes.push_back(static_cast<char>((v >> 16) & 0xff));
        bytes.push_back(static_cast<char>((v >> 24) & 0xff));
    };
    auto put_u16 = [&bytes](std::uint16_t v) {
        bytes.push_back(static_cast<char>(v & 0xff));
        bytes.push_back(static_cast<char>((v >> 8) & 0xff));
    };

    bytes.reserve(44 + data_size);
    bytes.append("RIFF");
    put_u32(36 + data_size);
    bytes.append("WAVE");
    bytes.append("fmt ");
    put_u32(16);
    put_u16(1);  // PCM
    put_u16(1);  // mono
    put_u32(rate);
    put_u32(rate * 2);
    put_u16(2);
    put_u16(16);
    bytes.append("data");
    put_u32(data_size);
    for (double x : clip.samples) {
        long v = std::lrint(x * 32768.0);
        if (v > 32767) v = 32767;
        if (v < -32768) v = -32768;
        put_u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    }
    write_file_atomic(path, bytes);
}

}  // namespace vox
