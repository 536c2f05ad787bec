#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfrc/types.hpp"

namespace dfrc {

/// Raised when decode() meets a combination whose rank falls outside the
/// 2^p1 codeword space (valid index set, but never emitted by encode()).
class UnusedCodewordError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Index-modulation scheme parameters: m circular shifts, l active chirps,
 * h-PSK payload per chirp, and minimum circular index separation s
 * (s = 1 means only distinctness is required).
 */
struct SchemeParams {
    int m = 0;
    int l = 0;
    int h = 0;
    int s = 1;

    /// Throws ConfigError on an unsupported combination (e.g. s > 1 with l != 2).
    void validate() const;
    int bits_per_symbol() const;  // log2(h)
};

/// Exact combination count. 128-bit so m up to a few thousand never wraps.
struct CombCount {
    unsigned __int128 value = 0;

    int floor_log2() const;  // value must be > 0
    bool fits_u64() const { return value <= ~0ULL; }
    uint64_t as_u64() const;  // throws std::overflow_error if too large
    double as_double() const;
    std::string str() const;

    bool operator==(const CombCount&) const = default;
};

/// Circular distance min(|i-j|, m-|i-j|) on Z_m.
int circular_distance(int i, int j, int m);

/// binom(m, l), exact; throws std::overflow_error beyond 128 bits.
CombCount count_unconstrained(int m, int l);

/// Number of pairs {i, j} with circular distance >= s: binom(m,2) - m(s-1).
CombCount count_constrained(int m, int s);

/// Largest s that keeps floor(log2 of the pair count) unchanged, verified
/// against that defining property rather than trusting the closed form alone.
int s_max(int m);

struct BitCapacity {
    int p1 = 0;  // selector bits
    int p2 = 0;  // PSK bits
    int p = 0;   // total
};

BitCapacity bit_capacity(const SchemeParams& params);

/// Bits per subcarrier: floor(log2(count * h^l)) / m.
double spectral_efficiency(const SchemeParams& params);

/**
 * Lexicographically ordered set of index pairs {i < j} with circular
 * distance >= s. Rank/unrank run off per-first-index prefix sums, so no
 * pair list is ever materialized.
 */
class PairCodebook {
public:
    PairCodebook(int m, int s);

    uint64_t size() const { return prefix_.back(); }
    /// Pair at lexicographic position r (r < size()).
    std::pair<int, int> unrank(uint64_t r) const;
    /// Lexicographic position of a valid pair i < j.
    uint64_t rank(int i, int j) const;
    bool valid(int i, int j) const;

    int min_separation() const { return s_; }

private:
    int m_;
    int s_;
    std::vector<uint64_t> prefix_;  // prefix_[i] = #pairs with first index < i
};

/// Transmitted information: selected chirp indices, their PSK symbols, and
/// the source bits they encode.
struct IndexMessage {
    std::vector<int> indices;  // strictly increasing, in [0, m)
    std::vector<cplx> psk;     // one unit-magnitude h-PSK symbol per index
    std::vector<uint8_t> bits;
};

/// Maps exactly p source bits to a message: the first p1 bits select the
/// index combination by lexicographic unranking, the rest Gray-label the
/// PSK phases in index order.
IndexMessage encode(const std::vector<uint8_t>& bits, const SchemeParams& params);

/// Exact inverse of encode(). Throws UnusedCodewordError for index sets
/// whose rank is >= 2^p1.
std::vector<uint8_t> decode(const IndexMessage& msg, const SchemeParams& params);

/// Gray label of PSK phase index q (and its inverse).
int gray_encode(int q);
int gray_decode(int label);

/// e^{j2π q/h}.
cplx psk_point(int q, int h);

}  // namespace dfrc
