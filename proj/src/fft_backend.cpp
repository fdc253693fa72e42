#include "fft_backend.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace tfld::fft {

namespace {

// Plans are cached per (kind, dims) and reused through the new-array execute
// interface; creation goes through FFTW's (non-thread-safe) planner once,
// execution is thread-safe. FFTW_UNALIGNED lifts the alignment constraint on
// the arrays passed later.
enum class PlanKind { Forward, Backward, R2c, C2r };

struct PlanCache {
    std::mutex mutex;
    std::map<std::pair<PlanKind, std::vector<int>>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }

    fftw_plan get(PlanKind kind, const std::vector<int>& dims) {
        std::lock_guard<std::mutex> lock(mutex);
        const auto key = std::make_pair(kind, dims);
        if (const auto it = plans.find(key); it != plans.end()) return it->second;

        fftw_plan plan = nullptr;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        if (kind == PlanKind::Forward || kind == PlanKind::Backward) {
            std::size_t total = 1;
            for (int d : dims) total *= static_cast<std::size_t>(d);
            std::vector<std::complex<double>> scratch(total);
            auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
            plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), ptr, ptr,
                                 kind == PlanKind::Forward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        } else {
            const int m1 = dims[0], m2 = dims[1];
            std::vector<double> real(static_cast<std::size_t>(m1) * m2);
            std::vector<std::complex<double>> half(static_cast<std::size_t>(m1) * (m2 / 2 + 1));
            auto* hptr = reinterpret_cast<fftw_complex*>(half.data());
            plan = kind == PlanKind::R2c ? fftw_plan_dft_r2c_2d(m1, m2, real.data(), hptr, flags)
                                         : fftw_plan_dft_c2r_2d(m1, m2, hptr, real.data(), flags);
        }
        if (!plan) throw std::runtime_error("fft: plan creation failed");
        plans.emplace(key, plan);
        return plan;
    }
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

}  // namespace

void transform(std::vector<std::complex<double>>& data, const std::vector<int>& dims, int sign) {
    std::size_t total = 1;
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("fft: dimensions must be >= 1");
        total *= static_cast<std::size_t>(d);
    }
    if (data.size() != total) throw std::invalid_argument("fft: data size does not match dims");
    const fftw_plan plan = cache().get(sign < 0 ? PlanKind::Forward : PlanKind::Backward, dims);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

std::vector<std::complex<double>> forward_r2c(const std::vector<double>& data, int m1, int m2) {
    if (data.size() != static_cast<std::size_t>(m1) * m2)
        throw std::invalid_argument("fft: data size does not match dims");
    const fftw_plan plan = cache().get(PlanKind::R2c, {m1, m2});
    std::vector<double> in(data);  // keep the caller's buffer pristine
    std::vector<std::complex<double>> out(static_cast<std::size_t>(m1) * (m2 / 2 + 1));
    fftw_execute_dft_r2c(plan, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> backward_c2r(std::vector<std::complex<double>>& half, int m1, int m2) {
    if (half.size() != static_cast<std::size_t>(m1) * (m2 / 2 + 1))
        throw std::invalid_argument("fft: half-spectrum size does not match dims");
    const fftw_plan plan = cache().get(PlanKind::C2r, {m1, m2});
    std::vector<double> out(static_cast<std::size_t>(m1) * m2);
    // The c2r transform consumes its input; callers treat it as scratch.
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(half.data()), out.data());
    return out;
}

int next_fast_size(int n) {
    for (int m = std::max(n, 1);; ++m) {
        int r = m;
        while (r % 2 == 0) r /= 2;
        while (r % 3 == 0) r /= 3;
        while (r % 5 == 0) r /= 5;
        if (r == 1) return m;
    }
}

}  // namespace tfld::fft
