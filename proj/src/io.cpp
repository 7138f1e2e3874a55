#include "io.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

namespace spiral {
namespace {

static_assert(std::endian::native == std::endian::little, "little-endian host assumed");

template <typename T>
T get_le(const std::vector<unsigned char>& b, std::size_t off) {
    if (off + sizeof(T) > b.size()) throw WavError(WavErrorKind::Malformed, "truncated WAV header");
    T v;
    std::memcpy(&v, b.data() + off, sizeof(T));
    return v;
}

template <typename T>
void put_le(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("failed writing '" + path + "'");
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::pair<std::size_t, std::size_t> as_matrix(const Tensor& t) {
    if (t.dims.empty()) return {1, t.values.size()};
    const std::size_t rows = t.dims[0];
    std::size_t cols = 1;
    for (std::size_t k = 1; k < t.dims.size(); ++k) cols *= t.dims[k];
    if (rows * cols != t.values.size()) throw ParameterError("tensor dims do not match its data");
    return {rows, cols};
}

} // namespace

WavData read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw WavError(WavErrorKind::Unreadable, "cannot open '" + path + "'");
    std::vector<unsigned char> b((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (b.size() < 12 || std::memcmp(b.data(), "RIFF", 4) != 0 || std::memcmp(b.data() + 8, "WAVE", 4) != 0)
        throw WavError(WavErrorKind::Malformed, "not a RIFF/WAVE file: '" + path + "'");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    bool have_fmt = false;
    std::size_t data_off = 0, data_len = 0;
    bool have_data = false;
    std::size_t off = 12;
    while (off + 8 <= b.size()) {
        const std::string id(reinterpret_cast<const char*>(b.data() + off), 4);
        const auto len = get_le<std::uint32_t>(b, off + 4);
        const std::size_t body = off + 8;
        if (id == "fmt ") {
            if (len < 16) throw WavError(WavErrorKind::Malformed, "fmt chunk too short");
            format = get_le<std::uint16_t>(b, body);
            channels = get_le<std::uint16_t>(b, body + 2);
            rate = get_le<std::uint32_t>(b, body + 4);
            bits = get_le<std::uint16_t>(b, body + 14);
            if (format == 0xFFFE) {
                if (len < 40) throw WavError(WavErrorKind::Malformed, "extensible fmt chunk too short");
                format = get_le<std::uint16_t>(b, body + 24);
            }
            have_fmt = true;
        } else if (id == "data") {
            data_off = body;
            data_len = std::min<std::size_t>(len, b.size() - body);
            have_data = true;
        }
        off = body + len + (len & 1);
    }
    if (!have_fmt || !have_data) throw WavError(WavErrorKind::Malformed, "missing fmt or data chunk");
    if (channels == 0 || rate == 0) throw WavError(WavErrorKind::Malformed, "zero channels or sample rate");
    const bool pcm16 = format == 1 && bits == 16;
    const bool f32 = format == 3 && bits == 32;
    if (!pcm16 && !f32)
        throw WavError(WavErrorKind::Unsupported,
                       "unsupported WAV encoding (format " + std::to_string(format) + ", " +
                           std::to_string(bits) + " bits); need PCM16 or float32");

    WavData w;
    w.sample_rate = rate;
    const std::size_t width = bits / 8;
    const std::size_t frames = data_len / (width * channels);
    w.samples.assign(frames, 0.0);
    for (std::size_t n = 0; n < frames; ++n) {
        double acc = 0;
        for (std::size_t c = 0; c < channels; ++c) {
            const std::size_t p = data_off + (n * channels + c) * width;
            acc += pcm16 ? get_le<std::int16_t>(b, p) / 32768.0 : static_cast<double>(get_le<float>(b, p));
        }
        w.samples[n] = acc / channels;
    }
    if (channels > 1)
        w.warnings.push_back(std::to_string(channels) + " channels averaged to mono");
    return w;
}

void write_wav(const std::string& path, const std::vector<double>& samples, double sample_rate,
               WavEncoding enc) {
    if (!(sample_rate > 0) || sample_rate > 4294967295.0 || sample_rate != std::floor(sample_rate))
        throw ParameterError("WAV sample rate must be a positive integer");
    const std::uint16_t bits = enc == WavEncoding::Pcm16 ? 16 : 32;
    const std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * (bits / 8));
    std::string out;
    out += "RIFF";
    put_le<std::uint32_t>(out, 36 + data_len);
    out += "WAVEfmt ";
    put_le<std::uint32_t>(out, 16);
    put_le<std::uint16_t>(out, enc == WavEncoding::Pcm16 ? 1 : 3);
    put_le<std::uint16_t>(out, 1);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sample_rate));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sample_rate) * (bits / 8));
    put_le<std::uint16_t>(out, bits / 8);
    put_le<std::uint16_t>(out, bits);
    out += "data";
    put_le<std::uint32_t>(out, data_len);
    for (double x : samples) {
        if (enc == WavEncoding::Pcm16) {
            const double q = std::clamp(std::nearbyint(x * 32768.0), -32768.0, 32767.0);
            put_le<std::int16_t>(out, static_cast<std::int16_t>(q));
        } else {
            put_le<float>(out, static_cast<float>(x));
        }
    }
    write_file(path, out);
}

MatrixFormat matrix_format_from_string(const std::string& s) {
    if (s == "csv") return MatrixFormat::Csv;
    if (s == "bin") return MatrixFormat::Bin;
    if (s == "pgm") return MatrixFormat::Pgm;
    if (s == "json") return MatrixFormat::Json;
    throw ParameterError("unknown output format '" + s + "' (csv, bin, pgm, json)");
}

const char* to_string(MatrixFormat f) {
    switch (f) {
    case MatrixFormat::Csv: return "csv";
    case MatrixFormat::Bin: return "bin";
    case MatrixFormat::Pgm: return "pgm";
    case MatrixFormat::Json: return "json";
    }
    return "csv";
}

std::string matrix_csv(const Tensor& t) {
    const auto [rows, cols] = as_matrix(t);
    std::string out;
    for (std::size_t c = 0; c < cols; ++c) {
        if (c) out += ',';
        out += c < t.column_labels.size() ? t.column_labels[c] : "c" + std::to_string(c);
    }
    out += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c) out += ',';
            out += format_double(t.values[r * cols + c]);
        }
        out += '\n';
    }
    return out;
}

void write_matrix(const Tensor& t, MatrixFormat fmt, const std::string& path, bool inverted) {
    const auto [rows, cols] = as_matrix(t);
    switch (fmt) {
    case MatrixFormat::Csv: write_file(path, matrix_csv(t)); return;
    case MatrixFormat::Bin: {
        std::string out = "SPSC";
        put_le<std::uint32_t>(out, 1);
        put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.dims.size()));
        for (auto d : t.dims) put_le<std::uint64_t>(out, d);
        for (double v : t.values) put_le<double>(out, v);
        write_file(path, out);
        return;
    }
    case MatrixFormat::Pgm: {
        double vmax = 0;
        for (double v : t.values) vmax = std::max(vmax, v);
        std::string out = "P5\n# max " + format_double(vmax) + (inverted ? " inverted" : "") + "\n" +
                          std::to_string(cols) + " " + std::to_string(rows) + "\n65535\n";
        for (double v : t.values) {
            double g = vmax > 0 ? std::clamp(v, 0.0, vmax) / vmax : 0.0;
            if (inverted) g = 1.0 - g;
            const auto q = static_cast<std::uint16_t>(std::lround(g * 65535.0));
            out += static_cast<char>(q >> 8);  // PGM samples are big-endian
            out += static_cast<char>(q & 0xFF);
        }
        write_file(path, out);
        return;
    }
    case MatrixFormat::Json: {
        nlohmann::json j;
        j["dims"] = t.dims;
        j["labels"] = t.column_labels;
        j["values"] = t.values;
        write_file(path, j.dump() + "\n");
        return;
    }
    }
}

Tensor read_matrix_bin(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::vector<unsigned char> b((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    auto need = [&](std::size_t n) {
        if (n > b.size()) throw IoError("truncated SPSC file '" + path + "'");
    };
    need(12);
    if (std::memcmp(b.data(), "SPSC", 4) != 0) throw IoError("bad SPSC magic in '" + path + "'");
    std::uint32_t version, ndim;
    std::memcpy(&version, b.data() + 4, 4);
    std::memcpy(&ndim, b.data() + 8, 4);
    if (version != 1) throw IoError("unsupported SPSC version " + std::to_string(version));
    need(12 + 8ull * ndim);
    Tensor t;
    std::size_t count = 1;
    for (std::uint32_t k = 0; k < ndim; ++k) {
        std::uint64_t d;
        std::memcpy(&d, b.data() + 12 + 8 * k, 8);
        t.dims.push_back(static_cast<std::size_t>(d));
        count *= static_cast<std::size_t>(d);
    }
    const std::size_t off = 12 + 8ull * ndim;
    need(off + 8 * count);
    t.values.resize(count);
    std::memcpy(t.values.data(), b.data() + off, 8 * count);
    return t;
}

} // namespace spiral
