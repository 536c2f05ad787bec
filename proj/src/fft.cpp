#include "dfrc/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace dfrc {
namespace {

// Plans are cached per (size, sign). Planning is serialized (FFTW's planner
// is not thread-safe); execution through fftw_execute_dft on caller buffers
// is. FFTW_UNALIGNED keeps the plans valid for arbitrary vector storage.
class PlanCache {
public:
    static fftw_plan get(int n, int sign) {
        static PlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mutex_);
        const auto key = std::make_pair(n, sign);
        auto it = cache.plans_.find(key);
        if (it != cache.plans_.end()) return it->second;

        std::vector<cplx> in(static_cast<size_t>(n)), out(static_cast<size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(
            n, reinterpret_cast<fftw_complex*>(in.data()),
            reinterpret_cast<fftw_complex*>(out.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        cache.plans_.emplace(key, plan);
        return plan;
    }

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

std::vector<cplx> run(std::span<const cplx> in, int sign) {
    const int n = static_cast<int>(in.size());
    std::vector<cplx> src(in.begin(), in.end());
    std::vector<cplx> out(in.size());
    fftw_execute_dft(PlanCache::get(n, sign),
                     reinterpret_cast<fftw_complex*>(src.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

std::vector<cplx> dft(std::span<const cplx> in) { return run(in, FFTW_FORWARD); }

std::vector<cplx> idft(std::span<const cplx> in) { return run(in, FFTW_BACKWARD); }

}  // namespace dfrc
