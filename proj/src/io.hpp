#pragma once

#include "errors.hpp"

#include <string>
#include <vector>

namespace spiral {

enum class WavErrorKind { Unreadable, Malformed, Unsupported };

struct WavError : IoError {
    WavErrorKind kind;
    WavError(WavErrorKind k, const std::string& what) : IoError(what), kind(k) {}
};

enum class WavEncoding { Pcm16, Float32 };

struct WavData {
    std::vector<double> samples;  // mono, in [-1, 1]
    double sample_rate = 0;
    std::vector<std::string> warnings;
};

WavData read_wav(const std::string& path);
void write_wav(const std::string& path, const std::vector<double>& samples, double sample_rate,
               WavEncoding enc = WavEncoding::Pcm16);

enum class MatrixFormat { Csv, Bin, Pgm, Json };
MatrixFormat matrix_format_from_string(const std::string& s);
const char* to_string(MatrixFormat f);

// Row-major tensor. Text and image outputs view it as dims[0] x (product of the rest).
struct Tensor {
    std::vector<std::size_t> dims;
    std::vector<double> values;
    std::vector<std::string> column_labels;  // optional, used by csv and json
};

void write_matrix(const Tensor& t, MatrixFormat fmt, const std::string& path, bool inverted = false);
std::string matrix_csv(const Tensor& t);
Tensor read_matrix_bin(const std::string& path);

} // namespace spiral
