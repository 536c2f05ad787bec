#include "dfrc/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dfrc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx unit_phasor(double turns) {
    // e^{-j 2 pi turns}
    return {std::cos(kTwoPi * turns), -std::sin(kTwoPi * turns)};
}

void check_aligned(const FrequencyFrame& a, const FrequencyFrame& b) {
    if (a.l_d != b.l_d || a.bins.size() != b.bins.size())
        throw std::invalid_argument("channel: frames cover different bins");
}

}  // namespace

void RadarScene::validate(const WaveformConfig& config) const {
    if (targets.empty()) throw std::invalid_argument("radar scene: no targets");
    double prev = -1.0;
    for (const Target& t : targets) {
        if (!(t.distance_m >= 0)) throw std::invalid_argument("radar scene: negative range");
        if (!(t.distance_m > prev))
            throw std::invalid_argument("radar scene: distances must be strictly increasing");
        const double tau = 2.0 * t.distance_m / kSpeedOfLight;
        if (tau > config.t_cp())
            throw std::invalid_argument(
                "radar scene: round-trip delay exceeds the CP (max range " +
                std::to_string(config.max_range_m()) + " m)");
        prev = t.distance_m;
    }
}

Cfr radar_cfr(const RadarScene& scene, const WaveformConfig& config) {
    scene.validate(config);
    Cfr h;
    h.l_d = config.l_d;
    h.bins.assign(static_cast<size_t>(config.m), cplx(0.0, 0.0));
    for (const Target& t : scene.targets) {
        const double tau = 2.0 * t.distance_m / kSpeedOfLight;
        const cplx carrier = t.reflection * unit_phasor(config.f_c * tau);
        const double turns_per_bin = tau / config.t_chirp();
        for (int k = config.l_d; k <= config.l_u; ++k)
            h.at(k) += carrier * unit_phasor(k * turns_per_bin);
    }
    return h;
}

FrequencyFrame apply_cfr(const FrequencyFrame& w, const Cfr& h) {
    check_aligned(w, h);
    FrequencyFrame out = w;
    for (size_t i = 0; i < out.bins.size(); ++i) out.bins[i] *= h.bins[i];
    return out;
}

FrequencyFrame apply_radar_channel(const FrequencyFrame& w, const Cfr& h, double sigma2,
                                   Rng& rng) {
    if (sigma2 < 0) throw std::invalid_argument("apply_radar_channel: negative sigma2");
    FrequencyFrame out = apply_cfr(w, h);
    if (sigma2 > 0) add_awgn(out.bins, sigma2, rng);
    return out;
}

void FadingProfile::validate(const WaveformConfig& config) const {
    if (taps.empty()) throw std::invalid_argument("fading profile: no taps");
    for (const FadingTap& tap : taps) {
        if (!(tap.delay_s >= 0) || tap.delay_s >= config.t_cp())
            throw std::invalid_argument("fading profile: tap delay outside [0, T_CP)");
        if (tap.rician_k < 0)
            throw std::invalid_argument("fading profile: negative Rician factor");
    }
}

FadingProfile FadingProfile::three_path() {
    FadingProfile p;
    p.taps = {{0.0, 0.0, 10.0}, {10e-9, -10.0, 0.0}, {20e-9, -20.0, 0.0}};
    return p;
}

std::vector<cplx> realize_fading(const FadingProfile& profile, Rng& rng) {
    if (profile.taps.empty()) throw std::invalid_argument("realize_fading: no taps");
    double total = 0.0;
    for (const FadingTap& tap : profile.taps) total += std::pow(10.0, tap.power_db / 10.0);

    std::vector<cplx> gains;
    gains.reserve(profile.taps.size());
    for (const FadingTap& tap : profile.taps) {
        const double power = std::pow(10.0, tap.power_db / 10.0) / total;
        const double k = tap.rician_k;
        const cplx line_of_sight = std::sqrt(k / (k + 1.0));
        const cplx scatter = std::sqrt(1.0 / (k + 1.0)) * rng.cgauss();
        gains.push_back(std::sqrt(power) * (line_of_sight + scatter));
    }
    return gains;
}

Cfr fading_cfr(const FadingProfile& profile, std::span<const cplx> gains,
               const WaveformConfig& config) {
    if (gains.size() != profile.taps.size())
        throw std::invalid_argument("fading_cfr: one gain per tap required");
    Cfr h;
    h.l_d = config.l_d;
    h.bins.assign(static_cast<size_t>(config.m), cplx(0.0, 0.0));
    for (size_t i = 0; i < gains.size(); ++i) {
        const double turns_per_bin = profile.taps[i].delay_s / config.t_chirp();
        for (int k = config.l_d; k <= config.l_u; ++k)
            h.at(k) += gains[i] * unit_phasor(k * turns_per_bin);
    }
    return h;
}

void add_awgn(std::span<cplx> samples, double sigma2, Rng& rng) {
    if (sigma2 < 0) throw std::invalid_argument("add_awgn: negative sigma2");
    if (sigma2 == 0) return;
    const double scale = std::sqrt(sigma2);
    for (cplx& s : samples) s += scale * rng.cgauss();
}

double snr_to_sigma2(double snr_db, const FrequencyFrame& w) {
    if (!std::isfinite(snr_db)) throw std::invalid_argument("snr_to_sigma2: non-finite SNR");
    if (w.bins.empty()) throw std::invalid_argument("snr_to_sigma2: empty frame");
    double mean = 0.0;
    for (const cplx& v : w.bins) mean += std::norm(v);
    mean /= static_cast<double>(w.bins.size());
    return mean / std::pow(10.0, snr_db / 10.0);
}

}  // namespace dfrc
