#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace rosctl::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

fftw_plan plan_for(std::size_t n) {
    static std::map<std::size_t, fftw_plan> plans;
    std::lock_guard lock(planner_mutex());
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    plans.emplace(n, p);
    return p;
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n == 0) return;
    fftw_plan p = plan_for(n);
    // Aligned scratch buffers keep the new-array execute interface valid for any caller.
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    std::memcpy(in, data.data(), n * sizeof(fftw_complex));
    fftw_execute_dft(p, in, out);
    std::memcpy(data.data(), out, n * sizeof(fftw_complex));
    fftw_free(in);
    fftw_free(out);
}

}  // namespace rosctl::detail
