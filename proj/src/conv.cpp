#include "conv.hpp"

#include "errors.hpp"

namespace spiral {

std::size_t reflect_index(long long i, std::size_t len) {
    if (len <= 1) return 0;
    const long long period = 2 * (static_cast<long long>(len) - 1);
    long long m = i % period;
    if (m < 0) m += period;
    if (m >= static_cast<long long>(len)) m = period - m;
    return static_cast<std::size_t>(m);
}

std::size_t time_grid_size(std::size_t len) {
    return next_power_of_two(len < 1 ? 1 : len) * 2;
}

void convolve_lines_reflect(std::vector<cplx>& data, const LineSet& lines,
                            const std::vector<cplx>& resp) {
    const std::size_t n = resp.size();
    const std::size_t len = lines.length;
    require(n >= len, "convolution grid shorter than the axis");
    const std::size_t left = (n - len) / 2;
    std::vector<cplx> buf(n);
    for (std::size_t s : lines.starts) {
        for (std::size_t k = 0; k < n; ++k) {
            const long long src = static_cast<long long>(k) - static_cast<long long>(left);
            buf[k] = data[s + reflect_index(src, len) * lines.stride];
        }
        fft_forward(buf);
        for (std::size_t k = 0; k < n; ++k) buf[k] *= resp[k];
        fft_inverse(buf);
        for (std::size_t k = 0; k < len; ++k) data[s + k * lines.stride] = buf[left + k];
    }
}

void convolve_lines_zero(std::vector<cplx>& data, const LineSet& lines,
                         const std::vector<cplx>& resp) {
    const std::size_t n = resp.size();
    const std::size_t len = lines.length;
    require(n >= len, "convolution grid shorter than the axis");
    std::vector<cplx> buf(n);
    for (std::size_t s : lines.starts) {
        for (std::size_t k = 0; k < n; ++k) buf[k] = k < len ? data[s + k * lines.stride] : cplx(0);
        fft_forward(buf);
        for (std::size_t k = 0; k < n; ++k) buf[k] *= resp[k];
        fft_inverse(buf);
        for (std::size_t k = 0; k < len; ++k) data[s + k * lines.stride] = buf[k];
    }
}

LineSet column_lines(std::size_t rows, std::size_t cols) {
    LineSet l;
    l.length = rows;
    l.stride = cols;
    for (std::size_t c = 0; c < cols; ++c) l.starts.push_back(c);
    return l;
}

LineSet row_lines(std::size_t rows, std::size_t cols) {
    LineSet l;
    l.length = cols;
    l.stride = 1;
    for (std::size_t r = 0; r < rows; ++r) l.starts.push_back(r * cols);
    return l;
}

} // namespace spiral
