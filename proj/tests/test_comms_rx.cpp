#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "dfrc/channel.hpp"
#include "dfrc/comms_rx.hpp"
#include "dfrc/im_codec.hpp"
#include "dfrc/rng.hpp"
#include "dfrc/waveform.hpp"

using namespace dfrc;

namespace {

// n/m integer and modest sizes: the workhorse for exhaustive sweeps.
WaveformConfig grid_aligned_config() {
    WaveformConfig c;
    c.n = 256;
    c.n_cp = 64;
    c.m = 64;
    c.l_d = -31;
    c.l_u = 32;
    c.deviation = 48;
    c.f_sample = 1.32e9;
    c.f_c = 64.8e9;
    c.profile = ChirpProfile::sinusoidal;
    return c;
}

const WaveformConfig& cfg_full() {
    static const WaveformConfig c = WaveformConfig::ieee80211ay();
    return c;
}

const WaveformConfig& cfg_desk() {
    static const WaveformConfig c = WaveformConfig::desk_scale();
    return c;
}

std::vector<uint8_t> to_bits(uint64_t v, int p) {
    std::vector<uint8_t> bits(static_cast<size_t>(p));
    for (int j = 0; j < p; ++j)
        bits[static_cast<size_t>(j)] = (v >> (p - 1 - j)) & 1u;
    return bits;
}

Cfr flat_channel(const WaveformConfig& c) {
    Cfr h;
    h.l_d = c.l_d;
    h.bins.assign(static_cast<size_t>(c.m), cplx{1, 0});
    return h;
}

DespreadSymbols run_chain(const IndexMessage& msg, const WaveformConfig& c,
                          const FdssCoefficients& fdss) {
    const TimeFrame frame = synthesize(msg, c, fdss);
    const FrequencyFrame y = demodulate(frame, c);
    return equalize_despread(y, flat_channel(c), fdss);
}

DespreadSymbols real_despread(std::vector<double> v) {
    DespreadSymbols d;
    for (const double r : v) d.x.push_back({r, 0});
    return d;
}

bool same_message(const DetectionResult& got, const IndexMessage& sent) {
    if (got.indices != sent.indices) return false;
    for (size_t j = 0; j < sent.psk.size(); ++j)
        if (std::abs(got.psk[j] - sent.psk[j]) > 1e-9) return false;
    return true;
}

}  // namespace

TEST_CASE("demodulate inverts synthesis exactly on a clean channel") {
    const WaveformConfig c = grid_aligned_config();
    const FdssCoefficients fdss = compute_fdss(c);
    const IndexMessage msg{{5, 21}, {cplx{1, 0}, cplx{-1, 0}}, {}};
    const FrequencyFrame w = reference_symbols(msg, c, fdss);
    const FrequencyFrame y = demodulate(frame_from_symbols(w, c), c);
    REQUIRE(y.bins.size() == w.bins.size());
    CHECK(y.l_d == w.l_d);
    for (int k = c.l_d; k <= c.l_u; ++k)
        CHECK(std::abs(y.at(k) - w.at(k)) < 1e-12);

    const WaveformConfig& f = cfg_full();
    const FdssCoefficients fd = compute_fdss(f);
    const IndexMessage big{{0, 362}, {cplx{1, 0}, cplx{1, 0}}, {}};
    const FrequencyFrame wf = reference_symbols(big, f, fd);
    const FrequencyFrame yf = demodulate(frame_from_symbols(wf, f), f);
    for (int k = f.l_d; k <= f.l_u; ++k)
        CHECK(std::abs(yf.at(k) - wf.at(k)) < 1e-10);
}

TEST_CASE("integer sample delay becomes a per-bin phase ramp") {
    const WaveformConfig c = grid_aligned_config();
    const FdssCoefficients fdss = compute_fdss(c);
    const IndexMessage msg{{3, 40}, {cplx{1, 0}, cplx{1, 0}}, {}};
    const TimeFrame frame = synthesize(msg, c, fdss);
    const FrequencyFrame y = demodulate(frame, c);

    const int g = 5;
    TimeFrame delayed = frame;
    const size_t total = frame.samples.size();
    for (size_t i = 0; i < total; ++i)
        delayed.samples[i] = frame.samples[(i + total - static_cast<size_t>(g)) % total];
    const FrequencyFrame yd = demodulate(delayed, c);
    for (int k = c.l_d; k <= c.l_u; ++k) {
        const cplx ramp =
            std::polar(1.0, -2.0 * std::numbers::pi * k * g / static_cast<double>(c.n));
        CHECK(std::abs(yd.at(k) - y.at(k) * ramp) < 1e-10);
    }
}

TEST_CASE("demodulate edge cases: zero frame, shape mismatch") {
    const WaveformConfig c = grid_aligned_config();
    TimeFrame zero;
    zero.samples.assign(static_cast<size_t>(c.n + c.n_cp), cplx{0, 0});
    zero.n_cp = c.n_cp;
    zero.sample_rate_hz = c.f_sample;
    for (const cplx& v : demodulate(zero, c).bins) CHECK(std::abs(v) == 0.0);

    TimeFrame bad = zero;
    bad.samples.pop_back();
    CHECK_THROWS_AS(demodulate(bad, c), std::invalid_argument);
    TimeFrame wrong_cp = zero;
    wrong_cp.n_cp = c.n_cp / 2;
    CHECK_THROWS_AS(demodulate(wrong_cp, c), std::invalid_argument);
}

TEST_CASE("equalize+despread: linearity, phase covariance, matched peak") {
    const WaveformConfig c = grid_aligned_config();
    const FdssCoefficients fdss = compute_fdss(c);
    const Cfr ones = flat_channel(c);
    Rng rng(404);

    FrequencyFrame y1 = reference_symbols({{7}, {cplx{1, 0}}, {}}, c, fdss);
    FrequencyFrame y2 = y1;
    for (cplx& v : y2.bins) v = rng.cgauss();

    const DespreadSymbols a = equalize_despread(y1, ones, fdss);
    const DespreadSymbols b = equalize_despread(y2, ones, fdss);
    FrequencyFrame mix = y1;
    for (size_t j = 0; j < mix.bins.size(); ++j)
        mix.bins[j] = 2.5 * y1.bins[j] + y2.bins[j];
    const DespreadSymbols m = equalize_despread(mix, ones, fdss);
    for (size_t j = 0; j < m.x.size(); ++j)
        CHECK(std::abs(m.x[j] - (2.5 * a.x[j] + b.x[j])) < 1e-9);

    FrequencyFrame spun = y1;
    for (cplx& v : spun.bins) v *= std::polar(1.0, 0.9);
    const DespreadSymbols s = equalize_despread(spun, ones, fdss);
    for (size_t j = 0; j < s.x.size(); ++j)
        CHECK(std::abs(s.x[j] - a.x[j] * std::polar(1.0, 0.9)) < 1e-9);

    // Single-chirp messages: the despread peak lands on the sent index.
    for (int idx = 0; idx < c.m; ++idx) {
        const DespreadSymbols d =
            run_chain({{idx}, {cplx{1, 0}}, {}}, c, fdss);
        int arg = 0;
        for (int j = 1; j < c.m; ++j)
            if (d.x[static_cast<size_t>(j)].real() >
                d.x[static_cast<size_t>(arg)].real())
                arg = j;
        CHECK(arg == idx);
    }

    Cfr off = ones;
    off.l_d += 1;
    CHECK_THROWS_AS(equalize_despread(y1, off, fdss), std::invalid_argument);
}

TEST_CASE("single-index detection: dominant entry, scale invariance, tie break") {
    const SchemeParams p{16, 1, 2, 1};
    std::vector<double> v(16, -0.2);
    v[13] = 2.0;
    const DetectionResult r = ml_detect(real_despread(v), p);
    CHECK(r.indices == std::vector<int>{13});
    CHECK(std::abs(r.psk[0] - cplx{1, 0}) < 1e-12);
    CHECK(r.metric == doctest::Approx(2.0));

    for (double& x : v) x *= 3.7;
    const DetectionResult scaled = ml_detect(real_despread(v), p);
    CHECK(scaled.indices == r.indices);
    CHECK(scaled.psk == r.psk);
    CHECK(scaled.metric == doctest::Approx(3.7 * 2.0));

    const DetectionResult tie = ml_detect(real_despread(std::vector<double>(16, 0.7)),
                                          SchemeParams{16, 2, 2, 4});
    CHECK(tie.indices == std::vector<int>{0, 4});
    CHECK(std::abs(tie.psk[0] - cplx{1, 0}) < 1e-12);
    CHECK(std::abs(tie.psk[1] - cplx{1, 0}) < 1e-12);
}

TEST_CASE("separation constraint binds even when the free maximum violates it") {
    const SchemeParams p{16, 2, 2, 4};
    std::vector<double> v(16, 0.3);
    v[0] = 1.0;
    v[2] = 1.0;  // distance 2 < s: not a legal pair
    const DetectionResult r = ml_detect(real_despread(v), p);
    CHECK(circular_distance(r.indices[0], r.indices[1], 16) >= 4);
    CHECK(r.indices == std::vector<int>{0, 4});
    CHECK(r.metric == doctest::Approx(1.3));
}

TEST_CASE("greedy two-step can lose to the exhaustive detector") {
    const SchemeParams p{16, 2, 2, 4};
    std::vector<double> v(16, -0.5);
    v[3] = 1.0;
    v[0] = 0.9;
    v[4] = 0.9;
    const DespreadSymbols x = real_despread(v);
    const DetectionResult ml = ml_detect(x, p);
    const DetectionResult greedy = two_step_detect(x, p);
    CHECK(ml.indices == std::vector<int>{0, 4});
    CHECK(ml.metric == doctest::Approx(1.8));
    CHECK(greedy.indices == std::vector<int>{3, 7});
    CHECK(greedy.metric == doctest::Approx(1.5));
    CHECK(std::abs(greedy.psk[1] - cplx{-1, 0}) < 1e-12);
    CHECK(ml.metric > greedy.metric);
    CHECK(circular_distance(greedy.indices[0], greedy.indices[1], 16) >= 4);
}

TEST_CASE("every codeword survives the noiseless loop (exhaustive small scale)") {
    const WaveformConfig c = grid_aligned_config();
    const FdssCoefficients fdss = compute_fdss(c);
    const SchemeParams p{64, 2, 2, 8};
    const BitCapacity cap = bit_capacity(p);
    REQUIRE(cap.p == 12);

    int two_step_disagrees = 0;
    for (uint64_t v = 0; v < (uint64_t{1} << cap.p); ++v) {
        const std::vector<uint8_t> bits = to_bits(v, cap.p);
        const IndexMessage sent = encode(bits, p);
        const DespreadSymbols x = run_chain(sent, c, fdss);
        const DetectionResult r = ml_detect(x, p);
        REQUIRE(r.bits == bits);
        REQUIRE(same_message(r, sent));
        const DetectionResult g = two_step_detect(x, p);
        if (g.bits != bits) ++two_step_disagrees;
    }
    CHECK(two_step_disagrees == 0);
}

TEST_CASE("noiseless full-scale and desk-scale recovery on random codewords") {
    struct Setup {
        const WaveformConfig* c;
        SchemeParams p;
        int ml_trials;
        int greedy_trials;
    };
    const Setup setups[] = {
        {&cfg_full(), {1448, 2, 2, 362}, 150, 2000},
        {&cfg_desk(), {181, 2, 2, 45}, 400, 2000},
    };
    for (const Setup& su : setups) {
        const FdssCoefficients fdss = compute_fdss(*su.c);
        const BitCapacity cap = bit_capacity(su.p);
        Rng rng(2024);
        for (int t = 0; t < su.greedy_trials; ++t) {
            std::vector<uint8_t> bits = rng.bits(cap.p);
            const IndexMessage sent = encode(bits, su.p);
            const DespreadSymbols x = run_chain(sent, *su.c, fdss);
            const DetectionResult g = two_step_detect(x, su.p);
            REQUIRE(g.bits == bits);
            if (t < su.ml_trials) {
                const DetectionResult r = ml_detect(x, su.p);
                REQUIRE(r.bits == bits);
                REQUIRE(same_message(r, sent));
            }
        }
    }
}

TEST_CASE("high-snr agreement between the detectors") {
    const WaveformConfig& c = cfg_desk();
    const FdssCoefficients fdss = compute_fdss(c);
    const SchemeParams p{181, 2, 2, 45};
    const BitCapacity cap = bit_capacity(p);
    const Cfr ones = flat_channel(c);

    int agree = 0;
    const int trials = 2000;
    Rng rng(555);
    for (int t = 0; t < trials; ++t) {
        const IndexMessage sent = encode(rng.bits(cap.p), p);
        FrequencyFrame y = reference_symbols(sent, c, fdss);
        const double sigma2 = snr_to_sigma2(10.0, y);
        for (cplx& v : y.bins) v += std::sqrt(sigma2) * rng.cgauss();
        const DespreadSymbols x = equalize_despread(y, ones, fdss);
        const DetectionResult a = ml_detect(x, p);
        const DetectionResult b = two_step_detect(x, p);
        agree += a.indices == b.indices && a.bits == b.bits;
    }
    CHECK(static_cast<double>(agree) / trials >= 0.99);
}

TEST_CASE("index separation does not hurt the bit error rate") {
    const WaveformConfig& c = cfg_desk();
    const FdssCoefficients fdss = compute_fdss(c);
    const SchemeParams with_is{181, 2, 2, 45};
    const SchemeParams no_is{181, 2, 2, 1};
    REQUIRE(bit_capacity(with_is).p == bit_capacity(no_is).p);
    const int p = bit_capacity(with_is).p;
    const Cfr ones = flat_channel(c);
    // Despreading integrates all m bins, so the waterfall sits well below
    // 0 dB at this scale; -9 dB gives a measurable error rate.
    const double snr_db = -9.0;
    const int trials = 3000;

    const auto run = [&](const SchemeParams& sp, uint64_t seed) {
        std::vector<uint8_t> sent_all, got_all;
        for (int t = 0; t < trials; ++t) {
            Rng rng(trial_seed(seed, static_cast<uint64_t>(t)));
            const std::vector<uint8_t> bits = rng.bits(p);
            const IndexMessage sent = encode(bits, sp);
            FrequencyFrame y = reference_symbols(sent, c, fdss);
            const double sigma2 = snr_to_sigma2(snr_db, y);
            for (cplx& v : y.bins) v += std::sqrt(sigma2) * rng.cgauss();
            const DetectionResult r =
                ml_detect(equalize_despread(y, ones, fdss), sp);
            sent_all.insert(sent_all.end(), bits.begin(), bits.end());
            got_all.insert(got_all.end(), r.bits.begin(), r.bits.end());
        }
        return ber_bler(got_all, sent_all, p);
    };

    const auto [ber_is, bler_is] = run(with_is, 10);
    const auto [ber_free, bler_free] = run(no_is, 10);
    CHECK(ber_is > 0);        // operating point has measurable errors
    CHECK(ber_free > 0);
    // Allow two binomial sigmas of slack on the non-degradation claim.
    const double sigma = std::sqrt(ber_free * (1 - ber_free) /
                                   static_cast<double>(trials * p));
    CHECK(ber_is <= ber_free + 2 * sigma);
}

TEST_CASE("error-rate bookkeeping") {
    const std::vector<uint8_t> zeros(210, 0);
    CHECK(ber_bler(zeros, zeros, 21) == std::pair<double, double>{0.0, 0.0});

    std::vector<uint8_t> one_flip = zeros;
    one_flip[50] = 1;
    const auto [ber, bler] = ber_bler(one_flip, zeros, 21);
    CHECK(ber == doctest::Approx(1.0 / 210));
    CHECK(bler == doctest::Approx(1.0 / 10));

    std::vector<uint8_t> all(210, 1);
    CHECK(ber_bler(all, zeros, 21) == std::pair<double, double>{1.0, 1.0});

    CHECK_THROWS_AS(ber_bler(zeros, one_flip, 20), std::invalid_argument);
    CHECK_THROWS_AS(ber_bler({1, 0}, {1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(ber_bler({}, {}, 1), std::invalid_argument);
}

TEST_CASE("four-chirp greedy detection") {
    // Full scale: chirp cross-correlations are ~2% of the peak, so the
    // greedy pick is clean on every noiseless codeword.
    const WaveformConfig& f = cfg_full();
    const FdssCoefficients fd = compute_fdss(f);
    const SchemeParams pf{1448, 4, 2, 1};
    const BitCapacity capf = bit_capacity(pf);
    REQUIRE(capf.p == 41);
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        const std::vector<uint8_t> bits = rng.bits(capf.p);
        const IndexMessage sent = encode(bits, pf);
        const DespreadSymbols x = run_chain(sent, f, fd);
        REQUIRE(ml_detect(x, pf).bits == bits);
    }

    // At m=64 with four chirps the leakage between shifts reaches ~0.3 of a
    // peak and flips a weak index on roughly a tenth of the codewords even
    // without noise; this pins the measured floor so regressions show up.
    const WaveformConfig c = grid_aligned_config();
    const FdssCoefficients fdss = compute_fdss(c);
    const SchemeParams p{64, 4, 2, 1};
    const BitCapacity cap = bit_capacity(p);
    int ok = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        const std::vector<uint8_t> bits = rng.bits(cap.p);
        const IndexMessage sent = encode(bits, p);
        const DespreadSymbols x = run_chain(sent, c, fdss);
        ok += ml_detect(x, p).bits == bits;
    }
    CHECK(static_cast<double>(ok) / trials >= 0.85);
}
