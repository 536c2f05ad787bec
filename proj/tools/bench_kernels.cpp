// Times the delay-objective scan kernel: serial reference vs the OpenMP
// version used in production, and checks they agree to the last bit.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dfrc/radar_rx.hpp"
#include "dfrc/rng.hpp"

using namespace dfrc;
using clock_type = std::chrono::steady_clock;

namespace {

double run_timed(void (*scan)(std::span<const cplx>, int, double, double,
                              std::span<const double>, std::span<cplx>),
                 std::span<const cplx> u, const WaveformConfig& cfg,
                 std::span<const double> taus, std::span<cplx> out, int reps) {
    double best_ms = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        scan(u, cfg.l_d, cfg.f_c, cfg.t_chirp(), taus, out);
        const auto t1 = clock_type::now();
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (ms < best_ms) best_ms = ms;
    }
    return best_ms;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delay-scan kernel benchmark: serial reference vs OpenMP"};
    std::string preset = "full";
    int points = 4096;
    int reps = 5;
    uint64_t seed = 7;
    app.add_option("--preset", preset, "waveform preset: full|desk");
    app.add_option("--points", points, "delay grid points to scan");
    app.add_option("--reps", reps, "repetitions (best time reported)");
    app.add_option("--seed", seed, "rng seed for the synthetic spectrum");
    CLI11_PARSE(app, argc, argv);

    const WaveformConfig cfg = preset == "desk" ? WaveformConfig::desk_scale()
                                                : WaveformConfig::ieee80211ay();
    Rng rng(seed);
    std::vector<cplx> u(static_cast<size_t>(cfg.m));
    for (cplx& v : u) v = rng.cgauss();
    std::vector<double> taus(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i)
        taus[static_cast<size_t>(i)] = cfg.t_cp() * i / points;
    std::vector<cplx> out_serial(taus.size()), out_omp(taus.size());

    const double ms_serial = run_timed(kernels::objective_scan_serial, u, cfg,
                                       taus, out_serial, reps);
    const double ms_omp =
        run_timed(kernels::objective_scan_omp, u, cfg, taus, out_omp, reps);

    double max_diff = 0;
    for (size_t i = 0; i < taus.size(); ++i)
        max_diff = std::max(max_diff, std::abs(out_serial[i] - out_omp[i]));

    std::printf("bins=%d points=%d reps=%d\n", cfg.m, points, reps);
    std::printf("serial: %9.3f ms\n", ms_serial);
    std::printf("openmp: %9.3f ms  (speedup %.2fx)\n", ms_omp,
                ms_serial / ms_omp);
    std::printf("max |serial - openmp| = %g\n", max_diff);
    return max_diff == 0.0 ? 0 : 1;
}
