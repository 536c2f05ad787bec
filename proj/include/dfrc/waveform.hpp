#pragma once

#include <vector>

#include "dfrc/im_codec.hpp"
#include "dfrc/types.hpp"

namespace dfrc {

/// Fourier coefficients of the base chirp on the occupied bins. Immutable
/// after construction and shareable across threads.
struct FdssCoefficients {
    FrequencyFrame coeff;        // c_k, k = l_d..l_u
    double captured_energy = 0;  // sum |c_k|^2 relative to the unit-power chirp
};

/// Phase (radians) of the base chirp at t in [0, T_chirp). Both laws keep the
/// instantaneous frequency within +-D/(2 T_chirp) of the carrier.
double chirp_phase(ChirpProfile profile, double t, const WaveformConfig& config);

/**
 * Projects the base chirp onto bins l_d..l_u by an oversampled DFT:
 * c_k = (1/(oversample*n)) sum_n e^{j theta(t_n)} e^{-j2pi k n/(oversample*n)}.
 * Throws ConfigError when the bins capture < 98% of the chirp energy.
 */
FdssCoefficients compute_fdss(ChirpProfile profile, const WaveformConfig& config,
                              int oversample = 8);
FdssCoefficients compute_fdss(const WaveformConfig& config, int oversample = 8);

/**
 * Frequency-domain transmit symbols w_k = (1/sqrt L) c_k D_k, where D is the
 * m-point DFT of the index-modulated vector evaluated at bin k mod m. These
 * are what every receiver correlates against.
 */
FrequencyFrame reference_symbols(const IndexMessage& msg, const WaveformConfig& config,
                                 const FdssCoefficients& fdss);

/// Maps occupied bins k mod n into an n-point spectrum, inverse-transforms,
/// and prepends the cyclic prefix.
TimeFrame frame_from_symbols(const FrequencyFrame& w, const WaveformConfig& config);

/// DFT-s-OFDM synthesis: spread, shape, then frame_from_symbols.
TimeFrame synthesize(const IndexMessage& msg, const WaveformConfig& config,
                     const FdssCoefficients& fdss);
TimeFrame synthesize(const IndexMessage& msg, const WaveformConfig& config);

/// Reference synthesis summing circularly-shifted chirps directly,
/// x(t) = (1/sqrt L) sum_l s_l e^{j theta((t - i_l T_chirp/m) mod T_chirp)},
/// sampled at oversample * f_sample over one symbol (no CP).
std::vector<cplx> synthesize_direct(const IndexMessage& msg, const WaveformConfig& config,
                                    int oversample);

/// Peak envelope power (dB) of the transmitted symbol relative to the
/// nominal mean power (the chirp energy kept by the shaping), measured on
/// the truncated-spectrum signal oversampled by zero-padding the IDFT.
/// Sinusoidal chirps obey pmepr <= 10log10(L) up to truncation ripple.
double pmepr_db(const IndexMessage& msg, const WaveformConfig& config,
                const FdssCoefficients& fdss, int oversample = 4);
double pmepr_db(const IndexMessage& msg, const WaveformConfig& config, int oversample = 4);

}  // namespace dfrc
