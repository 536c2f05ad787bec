#include "dfrc/im_codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace dfrc {

namespace {

using u128 = unsigned __int128;

constexpr u128 kU128Max = ~static_cast<u128>(0);

u128 checked_mul(u128 a, u128 b) {
    if (a != 0 && b > kU128Max / a)
        throw std::overflow_error("combination count exceeds 128 bits");
    return a * b;
}

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

void SchemeParams::validate() const {
    if (m < 2) throw ConfigError("scheme: m must be >= 2");
    if (l < 1 || l > m) throw ConfigError("scheme: need 1 <= l <= m");
    if (h < 2 || !is_pow2(h)) throw ConfigError("scheme: h must be a power of two >= 2");
    if (s < 1 || s > m / 2) throw ConfigError("scheme: need 1 <= s <= m/2");
    if (s > 1 && l != 2)
        throw ConfigError("scheme: index separation s > 1 is defined only for l = 2");
    const auto cap = bit_capacity(*this);
    if (cap.p <= 0) throw ConfigError("scheme: configuration carries no bits");
}

int SchemeParams::bits_per_symbol() const {
    return std::countr_zero(static_cast<unsigned>(h));
}

int CombCount::floor_log2() const {
    if (value == 0) throw std::domain_error("floor_log2 of zero count");
    int bits = -1;
    for (u128 v = value; v != 0; v >>= 1) ++bits;
    return bits;
}

uint64_t CombCount::as_u64() const {
    if (!fits_u64()) throw std::overflow_error("combination count exceeds 64 bits");
    return static_cast<uint64_t>(value);
}

double CombCount::as_double() const {
    return static_cast<double>(value);
}

std::string CombCount::str() const {
    if (value == 0) return "0";
    std::string out;
    for (u128 v = value; v != 0; v /= 10)
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    std::reverse(out.begin(), out.end());
    return out;
}

int circular_distance(int i, int j, int m) {
    if (m < 1 || i < 0 || i >= m || j < 0 || j >= m)
        throw std::invalid_argument("circular_distance: index out of range");
    const int d = std::abs(i - j);
    return std::min(d, m - d);
}

CombCount count_unconstrained(int m, int l) {
    if (l < 1 || l > m) throw std::invalid_argument("count_unconstrained: need 0 < l <= m");
    // Multiplicative form; division at step i is exact (product of i
    // consecutive integers is divisible by i!).
    const int k = std::min(l, m - l);
    u128 result = 1;
    for (int i = 1; i <= k; ++i) {
        result = checked_mul(result, static_cast<u128>(m - k + i));
        result /= static_cast<u128>(i);
    }
    return {result};
}

CombCount count_constrained(int m, int s) {
    if (m < 2) throw std::invalid_argument("count_constrained: need m >= 2");
    if (s < 1 || s > m / 2)
        throw std::invalid_argument("count_constrained: need 1 <= s <= m/2");
    const u128 pairs = count_unconstrained(m, 2).value;
    const u128 removed = static_cast<u128>(m) * static_cast<u128>(s - 1);
    return {pairs - removed};
}

int s_max(int m) {
    if (m < 2) throw std::invalid_argument("s_max: need m >= 2");
    const CombCount pairs = count_unconstrained(m, 2);
    const int target = pairs.floor_log2();

    auto keeps_capacity = [&](int s) {
        return count_constrained(m, s).floor_log2() == target;
    };

    // Closed form: floor(1 + (binom(m,2) - 2^floor(log2 binom(m,2))) / m).
    const u128 excess = pairs.value - (static_cast<u128>(1) << target);
    int s = 1 + static_cast<int>(excess / static_cast<u128>(m));
    s = std::clamp(s, 1, m / 2);

    // The closed form is an upper bound derived from C >= 2^floor(log2 binom);
    // settle on the exact maximizer of the defining property.
    while (s > 1 && !keeps_capacity(s)) --s;
    while (s + 1 <= m / 2 && keeps_capacity(s + 1)) ++s;
    return s;
}

BitCapacity bit_capacity(const SchemeParams& params) {
    const CombCount count = (params.s > 1) ? count_constrained(params.m, params.s)
                                           : count_unconstrained(params.m, params.l);
    BitCapacity cap;
    cap.p1 = count.floor_log2();
    cap.p2 = params.l * params.bits_per_symbol();
    cap.p = cap.p1 + cap.p2;
    return cap;
}

double spectral_efficiency(const SchemeParams& params) {
    const CombCount count = (params.s > 1) ? count_constrained(params.m, params.s)
                                           : count_unconstrained(params.m, params.l);
    // h is a power of two, so log2(count * h^l) = log2(count) + l*log2(h)
    // exactly; the floor distributes over the integer part.
    const int total_bits = count.floor_log2() + params.l * params.bits_per_symbol();
    return static_cast<double>(total_bits) / static_cast<double>(params.m);
}

PairCodebook::PairCodebook(int m, int s) : m_(m), s_(s) {
    if (m < 2) throw std::invalid_argument("PairCodebook: need m >= 2");
    if (s < 1 || s > m / 2) throw std::invalid_argument("PairCodebook: need 1 <= s <= m/2");
    prefix_.resize(static_cast<size_t>(m) + 1, 0);
    for (int i = 0; i < m; ++i) {
        // Valid partners j > i satisfy s <= j - i <= m - s.
        const int lo = i + s;
        const int hi = std::min(m - 1, i + m - s);
        const int count = std::max(0, hi - lo + 1);
        prefix_[static_cast<size_t>(i) + 1] = prefix_[static_cast<size_t>(i)] +
                                              static_cast<uint64_t>(count);
    }
}

bool PairCodebook::valid(int i, int j) const {
    return i >= 0 && j > i && j < m_ && circular_distance(i, j, m_) >= s_;
}

std::pair<int, int> PairCodebook::unrank(uint64_t r) const {
    if (r >= size()) throw std::invalid_argument("PairCodebook::unrank: rank out of range");
    const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), r);
    const int i = static_cast<int>(std::distance(prefix_.begin(), it)) - 1;
    const int j = i + s_ + static_cast<int>(r - prefix_[static_cast<size_t>(i)]);
    return {i, j};
}

uint64_t PairCodebook::rank(int i, int j) const {
    if (!valid(i, j)) throw std::invalid_argument("PairCodebook::rank: invalid pair");
    return prefix_[static_cast<size_t>(i)] + static_cast<uint64_t>(j - (i + s_));
}

int gray_encode(int q) { return q ^ (q >> 1); }

int gray_decode(int label) {
    int q = label;
    for (int v = label >> 1; v != 0; v >>= 1) q ^= v;
    return q;
}

cplx psk_point(int q, int h) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(q) / h;
    return {std::cos(phase), std::sin(phase)};
}

namespace {

// binom(n, k) as u64; 0 when the slot is empty, 1 when k == 0.
uint64_t binom64(int n, int k) {
    if (k == 0) return 1;
    if (k < 0 || n < k) return 0;
    return count_unconstrained(n, k).as_u64();
}

// Lexicographic unranking of an l-combination of [0, m): walk candidate
// values upward, skipping the binom(m-1-v, l-1-pos) combinations that
// start with each value passed over.
std::vector<int> unrank_combination(uint64_t rank, int m, int l) {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(l));
    int v = 0;
    for (int pos = 0; pos < l; ++pos) {
        const int remaining = l - pos - 1;
        for (;; ++v) {
            const uint64_t here = binom64(m - 1 - v, remaining);
            if (rank < here) break;
            rank -= here;
        }
        out.push_back(v);
        ++v;
    }
    return out;
}

uint64_t rank_combination(const std::vector<int>& indices, int m) {
    const int l = static_cast<int>(indices.size());
    uint64_t rank = 0;
    int prev = -1;
    for (int pos = 0; pos < l; ++pos) {
        const int remaining = l - pos - 1;
        for (int v = prev + 1; v < indices[static_cast<size_t>(pos)]; ++v)
            rank += binom64(m - 1 - v, remaining);
        prev = indices[static_cast<size_t>(pos)];
    }
    return rank;
}

uint64_t bits_to_uint(std::span<const uint8_t> bits) {
    uint64_t v = 0;
    for (uint8_t b : bits) v = (v << 1) | (b & 1u);
    return v;
}

void uint_to_bits(uint64_t v, std::span<uint8_t> bits) {
    for (size_t i = bits.size(); i-- > 0;) {
        bits[i] = static_cast<uint8_t>(v & 1u);
        v >>= 1;
    }
}

}  // namespace

IndexMessage encode(const std::vector<uint8_t>& bits, const SchemeParams& params) {
    params.validate();
    const auto cap = bit_capacity(params);
    if (static_cast<int>(bits.size()) != cap.p)
        throw std::invalid_argument("encode: expected exactly p = " + std::to_string(cap.p) +
                                    " bits, got " + std::to_string(bits.size()));
    if (cap.p1 > 63)
        throw ConfigError("encode: selector space beyond 2^63 is unsupported");

    const uint64_t rank = bits_to_uint(std::span(bits).first(static_cast<size_t>(cap.p1)));

    IndexMessage msg;
    msg.bits = bits;
    if (params.s > 1) {
        const PairCodebook book(params.m, params.s);
        const auto [i, j] = book.unrank(rank);
        msg.indices = {i, j};
    } else {
        msg.indices = unrank_combination(rank, params.m, params.l);
    }

    const int bps = params.bits_per_symbol();
    msg.psk.reserve(static_cast<size_t>(params.l));
    for (int sym = 0; sym < params.l; ++sym) {
        const auto label_bits =
            std::span(bits).subspan(static_cast<size_t>(cap.p1 + sym * bps),
                                    static_cast<size_t>(bps));
        const int q = gray_decode(static_cast<int>(bits_to_uint(label_bits)));
        msg.psk.push_back(psk_point(q, params.h));
    }
    return msg;
}

std::vector<uint8_t> decode(const IndexMessage& msg, const SchemeParams& params) {
    params.validate();
    const auto cap = bit_capacity(params);
    if (static_cast<int>(msg.indices.size()) != params.l ||
        msg.psk.size() != msg.indices.size())
        throw std::invalid_argument("decode: message shape does not match scheme");
    for (size_t i = 0; i < msg.indices.size(); ++i) {
        const int idx = msg.indices[i];
        if (idx < 0 || idx >= params.m)
            throw std::invalid_argument("decode: index out of range");
        if (i > 0 && idx <= msg.indices[i - 1])
            throw std::invalid_argument("decode: indices must be strictly increasing");
    }
    if (params.s > 1) {
        for (size_t a = 0; a < msg.indices.size(); ++a)
            for (size_t b = a + 1; b < msg.indices.size(); ++b)
                if (circular_distance(msg.indices[a], msg.indices[b], params.m) < params.s)
                    throw std::invalid_argument("decode: pair violates index separation");
    }

    uint64_t rank;
    if (params.s > 1) {
        const PairCodebook book(params.m, params.s);
        rank = book.rank(msg.indices[0], msg.indices[1]);
    } else {
        rank = rank_combination(msg.indices, params.m);
    }
    if (cap.p1 < 64 && rank >= (1ULL << cap.p1))
        throw UnusedCodewordError("decode: combination rank " + std::to_string(rank) +
                                  " is outside the 2^" + std::to_string(cap.p1) +
                                  " codeword space");

    std::vector<uint8_t> bits(static_cast<size_t>(cap.p));
    uint_to_bits(rank, std::span(bits).first(static_cast<size_t>(cap.p1)));

    const int bps = params.bits_per_symbol();
    for (size_t sym = 0; sym < msg.psk.size(); ++sym) {
        const cplx value = msg.psk[sym];
        if (std::abs(std::abs(value) - 1.0) > 1e-9)
            throw std::invalid_argument("decode: PSK symbol is not unit magnitude");
        double phase = std::arg(value) / (2.0 * std::numbers::pi) * params.h;
        long q = std::lround(phase);
        q = ((q % params.h) + params.h) % params.h;
        if (std::abs(psk_point(static_cast<int>(q), params.h) - value) > 1e-9)
            throw std::invalid_argument("decode: PSK symbol is off the constellation grid");
        uint_to_bits(static_cast<uint64_t>(gray_encode(static_cast<int>(q))),
                     std::span(bits).subspan(static_cast<size_t>(cap.p1 + static_cast<int>(sym) * bps),
                                             static_cast<size_t>(bps)));
    }
    return bits;
}

}  // namespace dfrc
