#include "dfrc/frame_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "frame dump I/O assumes a little-endian host");

namespace dfrc {

namespace {

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T take(std::istream& in, const char* what) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof value);
    if (!in) throw std::runtime_error(std::string("frame read: truncated ") + what);
    return value;
}

}  // namespace

void write_frame(std::ostream& out, const TimeFrame& frame) {
    put(out, kFrameMagic);
    put(out, static_cast<uint32_t>(frame.samples.size()));
    put(out, static_cast<uint64_t>(frame.sample_rate_hz));
    for (const cplx& s : frame.samples) {
        put(out, s.real());
        put(out, s.imag());
    }
    if (!out) throw std::runtime_error("frame write failed");
}

void write_frame(const std::string& path, const TimeFrame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_frame(out, frame);
}

TimeFrame read_frame(std::istream& in) {
    const auto magic = take<uint32_t>(in, "header");
    if (magic != kFrameMagic)
        throw std::runtime_error("frame read: bad magic");
    const auto count = take<uint32_t>(in, "header");
    const auto rate = take<uint64_t>(in, "header");
    TimeFrame frame;
    frame.sample_rate_hz = static_cast<double>(rate);
    frame.n_cp = 0;  // not stored in the format
    frame.samples.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        const double re = take<double>(in, "samples");
        const double im = take<double>(in, "samples");
        frame.samples.emplace_back(re, im);
    }
    return frame;
}

TimeFrame read_frame(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return read_frame(in);
}

}  // namespace dfrc
