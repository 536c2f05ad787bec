#include "dfrc/waveform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dfrc/fft.hpp"

namespace dfrc {

namespace {

constexpr double kPi = std::numbers::pi;

int wrap_index(int k, int n) { return ((k % n) + n) % n; }

void check_message(const IndexMessage& msg, const WaveformConfig& config) {
    if (msg.indices.empty() || msg.psk.size() != msg.indices.size())
        throw std::invalid_argument("waveform: message has no indices or mismatched psk");
    for (size_t i = 0; i < msg.indices.size(); ++i) {
        if (msg.indices[i] < 0 || msg.indices[i] >= config.m)
            throw std::invalid_argument("waveform: chirp index out of range");
        if (i > 0 && msg.indices[i] <= msg.indices[i - 1])
            throw std::invalid_argument("waveform: chirp indices must be strictly increasing");
    }
}

// Occupied spectrum zero-padded to size bins, then an unnormalized inverse
// transform; bins must be >= the symbol size so every w_k keeps its slot.
std::vector<cplx> upsampled_payload(const FrequencyFrame& w, int bins) {
    std::vector<cplx> spectrum(static_cast<size_t>(bins));
    for (int k = w.l_d; k <= w.l_u(); ++k)
        spectrum[static_cast<size_t>(wrap_index(k, bins))] = w.at(k);
    return idft(spectrum);
}

}  // namespace

double chirp_phase(ChirpProfile profile, double t, const WaveformConfig& config) {
    const double t_chirp = config.t_chirp();
    if (!(t >= 0.0) || t >= t_chirp)
        throw std::invalid_argument("chirp_phase: t outside [0, T_chirp)");
    const double d = config.deviation;
    switch (profile) {
        case ChirpProfile::linear:
            // Frequency sweeps -D/(2T) -> +D/(2T) across the symbol.
            return kPi * d * t * t / (t_chirp * t_chirp) - kPi * d * t / t_chirp;
        case ChirpProfile::sinusoidal:
            return -(d / 2.0) * std::cos(2.0 * kPi * t / t_chirp);
    }
    throw std::invalid_argument("chirp_phase: unknown profile");
}

FdssCoefficients compute_fdss(ChirpProfile profile, const WaveformConfig& config,
                              int oversample) {
    config.validate();
    if (oversample < 4) throw std::invalid_argument("compute_fdss: oversample must be >= 4");

    const int total = oversample * config.n;
    const double t_chirp = config.t_chirp();
    std::vector<cplx> chirp(static_cast<size_t>(total));
    for (int n = 0; n < total; ++n) {
        const double t = t_chirp * static_cast<double>(n) / static_cast<double>(total);
        const double theta = chirp_phase(profile, t, config);
        chirp[static_cast<size_t>(n)] = cplx(std::cos(theta), std::sin(theta));
    }
    const std::vector<cplx> spectrum = dft(chirp);

    FdssCoefficients out;
    out.coeff.l_d = config.l_d;
    out.coeff.bins.resize(static_cast<size_t>(config.m));
    double energy = 0.0;
    for (int k = config.l_d; k <= config.l_u; ++k) {
        const cplx c = spectrum[static_cast<size_t>(wrap_index(k, total))] /
                       static_cast<double>(total);
        out.coeff.at(k) = c;
        energy += std::norm(c);
    }
    out.captured_energy = energy;
    if (energy < 0.98)
        throw ConfigError("compute_fdss: occupied bins capture only " +
                          std::to_string(energy) +
                          " of the chirp energy (deviation too close to m)");
    return out;
}

FdssCoefficients compute_fdss(const WaveformConfig& config, int oversample) {
    return compute_fdss(config.profile, config, oversample);
}

FrequencyFrame reference_symbols(const IndexMessage& msg, const WaveformConfig& config,
                                 const FdssCoefficients& fdss) {
    check_message(msg, config);
    std::vector<cplx> d(static_cast<size_t>(config.m));
    for (size_t l = 0; l < msg.indices.size(); ++l)
        d[static_cast<size_t>(msg.indices[l])] = msg.psk[l];
    const std::vector<cplx> spread = dft(d);

    const double scale = 1.0 / std::sqrt(static_cast<double>(msg.indices.size()));
    FrequencyFrame w;
    w.l_d = config.l_d;
    w.bins.resize(static_cast<size_t>(config.m));
    for (int k = config.l_d; k <= config.l_u; ++k)
        w.at(k) = scale * fdss.coeff.at(k) * spread[static_cast<size_t>(wrap_index(k, config.m))];
    return w;
}

TimeFrame frame_from_symbols(const FrequencyFrame& w, const WaveformConfig& config) {
    if (w.l_d != config.l_d || w.l_u() != config.l_u)
        throw std::invalid_argument("frame_from_symbols: bin range does not match config");
    const std::vector<cplx> payload = upsampled_payload(w, config.n);

    TimeFrame frame;
    frame.sample_rate_hz = config.f_sample;
    frame.n_cp = config.n_cp;
    frame.samples.resize(static_cast<size_t>(config.n_cp + config.n));
    for (int n = 0; n < config.n_cp; ++n)
        frame.samples[static_cast<size_t>(n)] =
            payload[static_cast<size_t>(config.n - config.n_cp + n)];
    std::copy(payload.begin(), payload.end(),
              frame.samples.begin() + config.n_cp);
    return frame;
}

TimeFrame synthesize(const IndexMessage& msg, const WaveformConfig& config,
                     const FdssCoefficients& fdss) {
    return frame_from_symbols(reference_symbols(msg, config, fdss), config);
}

TimeFrame synthesize(const IndexMessage& msg, const WaveformConfig& config) {
    return synthesize(msg, config, compute_fdss(config));
}

std::vector<cplx> synthesize_direct(const IndexMessage& msg, const WaveformConfig& config,
                                    int oversample) {
    check_message(msg, config);
    if (oversample < 1)
        throw std::invalid_argument("synthesize_direct: oversample must be >= 1");
    const int total = oversample * config.n;
    const double t_chirp = config.t_chirp();
    const double scale = 1.0 / std::sqrt(static_cast<double>(msg.indices.size()));

    std::vector<cplx> out(static_cast<size_t>(total));
    for (int n = 0; n < total; ++n) {
        const double t = t_chirp * static_cast<double>(n) / static_cast<double>(total);
        cplx acc = 0.0;
        for (size_t l = 0; l < msg.indices.size(); ++l) {
            const double shift =
                t_chirp * static_cast<double>(msg.indices[l]) / static_cast<double>(config.m);
            double u = std::fmod(t - shift, t_chirp);
            if (u < 0.0) u += t_chirp;
            if (u >= t_chirp) u = 0.0;  // guard fmod rounding at the seam
            const double theta = chirp_phase(config.profile, u, config);
            acc += msg.psk[l] * cplx(std::cos(theta), std::sin(theta));
        }
        out[static_cast<size_t>(n)] = scale * acc;
    }
    return out;
}

double pmepr_db(const IndexMessage& msg, const WaveformConfig& config,
                const FdssCoefficients& fdss, int oversample) {
    if (oversample < 1) throw std::invalid_argument("pmepr_db: oversample must be >= 1");
    const FrequencyFrame w = reference_symbols(msg, config, fdss);
    const std::vector<cplx> x = upsampled_payload(w, oversample * config.n);

    double peak = 0.0;
    for (const cplx& v : x) peak = std::max(peak, std::norm(v));
    // Denominator is the scheme's nominal mean power -- the chirp power kept
    // by the shaping -- not the per-message mean. Overlapping chirps can
    // anti-correlate and dip the realized mean by their cross-correlation,
    // which would inflate the ratio past the 10log10(L) envelope cap.
    const double nominal = fdss.captured_energy;
    if (nominal <= 0.0) throw std::invalid_argument("pmepr_db: zero-power frame");
    return 10.0 * std::log10(peak / nominal);
}

double pmepr_db(const IndexMessage& msg, const WaveformConfig& config, int oversample) {
    return pmepr_db(msg, config, compute_fdss(config), oversample);
}

}  // namespace dfrc
