#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace spiral {
namespace {

// Planning is not thread-safe in FFTW, execution with new-array is.
// FFTW_ESTIMATE keeps plans (and therefore results) deterministic.
std::mutex plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan> plans;

fftw_plan plan_for(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    auto* buf = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans.emplace(key, p);
    return p;
}

void run(cplx* data, std::size_t n, int sign) {
    if (n == 0) return;
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan_for(n, sign), p, p);
}

} // namespace

void fft_forward(cplx* data, std::size_t n) { run(data, n, FFTW_FORWARD); }

void fft_inverse(cplx* data, std::size_t n) {
    run(data, n, FFTW_BACKWARD);
    const double s = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) data[i] *= s;
}

void fft_forward(std::vector<cplx>& data) { fft_forward(data.data(), data.size()); }
void fft_inverse(std::vector<cplx>& data) { fft_inverse(data.data(), data.size()); }

std::vector<double> fft_frequencies(std::size_t n, double rate) {
    std::vector<double> f(n);
    const double df = rate / static_cast<double>(n);
    const auto half = static_cast<long long>((n + 1) / 2);
    for (std::size_t k = 0; k < n; ++k) {
        auto kk = static_cast<long long>(k);
        if (kk >= half) kk -= static_cast<long long>(n);
        f[k] = static_cast<double>(kk) * df;
    }
    return f;
}

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace spiral
