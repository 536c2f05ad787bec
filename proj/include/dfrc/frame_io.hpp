#pragma once

#include <iosfwd>
#include <string>

#include "dfrc/types.hpp"

namespace dfrc {

/**
 * Binary frame dump: 16-byte little-endian header {u32 magic "DFRC",
 * u32 sample count, u64 sample rate in Hz} followed by interleaved
 * float64 (re, im) pairs. The CP length is not part of the format, so
 * read_frame() returns n_cp = 0; CP and payload samples are stored alike.
 */
inline constexpr uint32_t kFrameMagic = 0x44465243u;

void write_frame(std::ostream& out, const TimeFrame& frame);
void write_frame(const std::string& path, const TimeFrame& frame);

/// Throws std::runtime_error on bad magic, truncation, or non-finite rates.
TimeFrame read_frame(std::istream& in);
TimeFrame read_frame(const std::string& path);

}  // namespace dfrc
