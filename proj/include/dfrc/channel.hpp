#pragma once

#include <span>
#include <vector>

#include "dfrc/rng.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

struct Target {
    double distance_m = 0;
    double reflection = 0;  // real coefficient a_i; sign carries the phase
};

/// Static multi-target geometry. Round-trip delays tau_i = 2 d_i / c must
/// stay inside the CP, which is what bounds the unambiguous range.
struct RadarScene {
    std::vector<Target> targets;

    /// Throws std::invalid_argument unless distances are strictly increasing
    /// and every tau_i = 2 d_i / c fits within T_CP.
    void validate(const WaveformConfig& config) const;
};

/// Channel frequency response sampled on the occupied bins.
using Cfr = FrequencyFrame;

/// H_k = sum_i a_i e^{-j2pi f_c tau_i} e^{-j2pi k tau_i / T_chirp} on bins
/// l_d..l_u, with tau_i = 2 d_i / c.
Cfr radar_cfr(const RadarScene& scene, const WaveformConfig& config);

/// Bin-wise product y_k = w_k h_k.
FrequencyFrame apply_cfr(const FrequencyFrame& w, const Cfr& h);

/// b_k = w_k h_k + eta_k with eta_k iid CN(0, sigma2). sigma2 == 0 adds
/// nothing and consumes no randomness.
FrequencyFrame apply_radar_channel(const FrequencyFrame& w, const Cfr& h, double sigma2,
                                   Rng& rng);

struct FadingTap {
    double delay_s = 0;
    double power_db = 0;
    double rician_k = 0;  // linear K factor; 0 = Rayleigh
};

/// Tapped-delay-line fading profile. Tap powers are normalized to unit total
/// mean gain when realized.
struct FadingProfile {
    std::vector<FadingTap> taps;

    void validate(const WaveformConfig& config) const;

    /// Three-path profile: 0/-10/-20 dB at 0/10/20 ns, Rician K = 10/0/0.
    static FadingProfile three_path();
};

/// One complex gain per tap: g_i = sqrt(P_i)(sqrt(K/(K+1)) +
/// sqrt(1/(K+1)) CN(0,1)), with the P_i normalized to sum to one.
std::vector<cplx> realize_fading(const FadingProfile& profile, Rng& rng);

/// CFR of realized taps on the occupied bins; fractional-sample delays enter
/// exactly as e^{-j2pi k tau / T_chirp}.
Cfr fading_cfr(const FadingProfile& profile, std::span<const cplx> gains,
               const WaveformConfig& config);

/// Adds iid CN(0, sigma2) to every sample in place.
void add_awgn(std::span<cplx> samples, double sigma2, Rng& rng);

/// Per-bin noise variance for a target SNR: mean occupied-bin symbol energy
/// over 10^(snr_db/10).
double snr_to_sigma2(double snr_db, const FrequencyFrame& w);

}  // namespace dfrc
