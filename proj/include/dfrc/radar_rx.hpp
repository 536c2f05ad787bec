#pragma once

#include <span>
#include <vector>

#include "dfrc/channel.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

enum class Estimator { mf, lmmse };

const char* to_string(Estimator e);
Estimator estimator_from_string(const std::string& s);

/**
 * Delay-search layout: a coarse lattice over [t_min, t_max], then
 * refine_stages local lattices each refine_factor finer, all anchored at
 * t_min so every stage contains the previous best point. A final signed
 * search (see estimate_single) runs below 1/(20 f_c) steps.
 */
struct DelayGrid {
    double t_min = 0;
    double t_max = 0;
    double coarse_step = 0;
    int refine_stages = 0;
    int refine_factor = 10;

    void validate(const WaveformConfig& config) const;

    /// Half-sample coarse step over [0, T_CP]; enough stages that the last
    /// envelope lattice is already finer than the carrier-phase step cap.
    static DelayGrid for_config(const WaveformConfig& config);
};

struct TargetEstimate {
    double tau_hat = 0;    // seconds
    double a_hat = 0;      // real reflection coefficient
    double range_hat = 0;  // tau_hat * c / 2, meters
    bool at_boundary = false;
};

/// Best objective value per search stage, for inspecting refinement.
struct StageTrace {
    std::vector<double> envelope_best;
    std::vector<double> signed_best;
};

/// t_tau[k] = e^{-j2pi f_c tau} e^{-j2pi k tau / T_chirp}, k = l_d..l_u.
std::vector<cplx> delay_vector(double tau, const WaveformConfig& config);

/// Correlation statistic z(tau) = t_tau^H (W^H b): returns (|z|, Re z).
/// The envelope drives coarse search; the signed part carries a's sign.
std::pair<double, double> mf_objective(double tau, const FrequencyFrame& w,
                                       const FrequencyFrame& b,
                                       const WaveformConfig& config);

/// Per-bin LMMSE channel estimate w_k^* b_k / (|w_k|^2 + sigma2).
struct LmmseEstimate {
    Cfr response;
    int zeroed_bins = 0;  // bins returned as 0 because sigma2 = 0 and w_k = 0
};
LmmseEstimate lmmse_channel(const FrequencyFrame& b, const FrequencyFrame& w,
                            double sigma2);

/// Single-target delay/coefficient estimate: coarse + refined envelope
/// search, then a signed search at carrier-phase resolution.
TargetEstimate estimate_single(const FrequencyFrame& b, const FrequencyFrame& w,
                               const DelayGrid& grid, const WaveformConfig& config,
                               double sigma2, Estimator kind,
                               StageTrace* trace = nullptr);

/// Iterative estimation of r_known targets, cancelling each detection from
/// the residual: b <- b - a_hat * diag(w) t_{tau_hat}.
std::vector<TargetEstimate> estimate_multi(const FrequencyFrame& b,
                                           const FrequencyFrame& w,
                                           int r_known, const DelayGrid& grid,
                                           const WaveformConfig& config, double sigma2,
                                           Estimator kind);

/// RMS range error over trials; within a trial, detections pair with truth
/// by descending coefficient magnitude.
double range_rmse(const std::vector<std::vector<TargetEstimate>>& estimates,
                  const std::vector<RadarScene>& truths);

namespace kernels {

/// z(tau_i) = sum_k conj(t_{tau_i}[k]) u_k for each point, u on bins
/// l_d..l_u. The omp variant splits grid points across threads; per-point
/// arithmetic is identical, so results match the serial kernel bit for bit.
void objective_scan_serial(std::span<const cplx> u, int l_d, double f_c,
                           double t_chirp, std::span<const double> taus,
                           std::span<cplx> out);
void objective_scan_omp(std::span<const cplx> u, int l_d, double f_c,
                        double t_chirp, std::span<const double> taus,
                        std::span<cplx> out);

}  // namespace kernels

}  // namespace dfrc
