#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfrc {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact

/// Raised for malformed configuration input (files, CLI, scheme parameters).
/// The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ChirpProfile { linear, sinusoidal };

const char* to_string(ChirpProfile p);
ChirpProfile chirp_profile_from_string(const std::string& s);

/**
 * Static waveform and system parameters.
 *
 * The spreading alphabet has m circular shifts of one band-limited chirp
 * whose two-sided frequency deviation spans `deviation` subcarrier spacings.
 * Occupied bins run k = l_d .. l_u with m = l_u - l_d + 1, inside an n-point
 * symbol; a CP of n_cp samples is prepended.
 */
struct WaveformConfig {
    int n = 0;             // samples per symbol (IDFT size)
    int n_cp = 0;          // cyclic prefix samples
    int m = 0;             // spreading DFT size (number of circular shifts)
    int l_d = 0;           // lowest occupied bin (negative)
    int l_u = 0;           // highest occupied bin (positive)
    double deviation = 0;  // maximum two-sided frequency-deviation index D (< m)
    double f_sample = 0;   // Hz
    double f_c = 0;        // carrier Hz
    ChirpProfile profile = ChirpProfile::sinusoidal;

    double t_sample() const { return 1.0 / f_sample; }
    double t_chirp() const { return n * t_sample(); }
    double t_cp() const { return n_cp * t_sample(); }
    double max_range_m() const { return kSpeedOfLight * t_cp() / 2.0; }

    /// Throws ConfigError if the bin layout or deviation constraints are violated.
    void validate() const;

    /// IEEE 802.11ay OFDM-mode preset (4 bonded channels).
    static WaveformConfig ieee80211ay();
    /// Shrunk preset for fast runs; same T_chirp and T_CP as the full preset.
    static WaveformConfig desk_scale();
};

/// Complex values on the occupied bins k = l_d .. l_u.
struct FrequencyFrame {
    std::vector<cplx> bins;  // bins[k - l_d]
    int l_d = 0;

    int l_u() const { return l_d + static_cast<int>(bins.size()) - 1; }
    cplx& at(int k) { return bins[static_cast<size_t>(k - l_d)]; }
    const cplx& at(int k) const { return bins[static_cast<size_t>(k - l_d)]; }
};

/// One synthesized symbol: CP followed by the n-sample payload.
struct TimeFrame {
    std::vector<cplx> samples;  // size n_cp + n
    double sample_rate_hz = 0;
    int n_cp = 0;

    std::span<const cplx> payload() const {
        return std::span<const cplx>(samples).subspan(static_cast<size_t>(n_cp));
    }
    std::span<const cplx> cp() const {
        return std::span<const cplx>(samples).first(static_cast<size_t>(n_cp));
    }
};

}  // namespace dfrc
