#pragma once

// Thin RAII layer over FFTW. Plans are created once per shape under a mutex
// and executed through the new-array interface, which is thread-safe.
// FFTW_UNALIGNED keeps the codelet choice independent of buffer alignment,
// so the same input always produces bit-identical output.

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace kawahara::fft {

enum class Direction : int { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

    fftw_plan get(std::size_t rows, std::size_t cols, Direction dir) {
        const Key key{rows, cols, static_cast<int>(dir)};
        std::scoped_lock lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        std::vector<std::complex<double>> scratch(rows * cols);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = rows == 1
            ? fftw_plan_dft_1d(static_cast<int>(cols), buf, buf, static_cast<int>(dir), flags)
            : fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf,
                               static_cast<int>(dir), flags);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    using Key = std::tuple<std::size_t, std::size_t, int>;

    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

}  // namespace detail

/// Unnormalized in-place 1-D DFT: X_k = sum_j x_j exp(∓2πi jk/n).
inline void transform(std::span<std::complex<double>> data, Direction dir) {
    if (data.empty()) return;
    fftw_plan plan = detail::PlanCache::instance().get(1, data.size(), dir);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

/// Unnormalized in-place 2-D DFT of a row-major rows × cols array.
inline void transform_2d(std::span<std::complex<double>> data, std::size_t rows,
                         std::size_t cols, Direction dir) {
    if (data.empty()) return;
    fftw_plan plan = detail::PlanCache::instance().get(rows, cols, dir);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace kawahara::fft
