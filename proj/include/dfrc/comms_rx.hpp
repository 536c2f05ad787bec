#pragma once

#include <utility>
#include <vector>

#include "dfrc/channel.hpp"
#include "dfrc/im_codec.hpp"
#include "dfrc/types.hpp"
#include "dfrc/waveform.hpp"

namespace dfrc {

/// Modulation-domain symbols x_0..x_{m-1} after equalization and IDFT.
struct DespreadSymbols {
    std::vector<cplx> x;
};

struct DetectionResult {
    std::vector<int> indices;   // sorted ascending
    std::vector<cplx> psk;      // detected symbol per index
    std::vector<uint8_t> bits;  // recovered source bits
    double metric = 0;          // achieved detection objective
};

/// CP removal + N-point DFT (scaled 1/N), keeping bins l_d..l_u. Inverse of
/// frame_from_symbols for a clean channel.
FrequencyFrame demodulate(const TimeFrame& frame, const WaveformConfig& config);

/// x = IDFT_M of h_k^* c_k^* y_k with bins folded onto residues mod M.
DespreadSymbols equalize_despread(const FrequencyFrame& y, const Cfr& h,
                                  const FdssCoefficients& c);

/**
 * Exhaustive maximization of sum_i Re{x_i s_i^*} over the decodable index
 * sets and all PSK assignments; ties go to the lexicographically smallest
 * (indices, then phase labels). l = 1 reduces to a single-index argmax,
 * l = 2 honors the separation constraint, l = 4 picks indices greedily
 * (falling back to the first decodable set if the pick lands outside the
 * usable codebook).
 */
DetectionResult ml_detect(const DespreadSymbols& x, const SchemeParams& params);

/// Two-pass approximation for l = 2: strongest single index first, then the
/// best decodable partner. O(m h) instead of the pair sweep.
DetectionResult two_step_detect(const DespreadSymbols& x, const SchemeParams& params);

/// Bit error rate and p-bit block error rate between two equal-length streams.
std::pair<double, double> ber_bler(const std::vector<uint8_t>& detected,
                                   const std::vector<uint8_t>& truth, int p);

}  // namespace dfrc
