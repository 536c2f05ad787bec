#pragma once

#include <span>
#include <vector>

#include "dfrc/types.hpp"

namespace dfrc {

/// Unnormalized DFT, X_k = sum_n x_n e^{-j2πkn/N}. Any size (FFTW backend).
std::vector<cplx> dft(std::span<const cplx> in);

/// Unnormalized inverse transform, x_n = sum_k X_k e^{+j2πkn/N}.
std::vector<cplx> idft(std::span<const cplx> in);

}  // namespace dfrc
