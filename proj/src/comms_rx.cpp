#include "dfrc/comms_rx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dfrc/fft.hpp"

namespace dfrc {

namespace {

int wrap_index(int k, int m) {
    const int r = k % m;
    return r < 0 ? r + m : r;
}

// Re{x_m conj(psk_point(q, h))} for every index and phase label.
std::vector<double> metric_table(const DespreadSymbols& x, int h) {
    std::vector<double> tab(x.x.size() * static_cast<size_t>(h));
    for (size_t m = 0; m < x.x.size(); ++m)
        for (int q = 0; q < h; ++q)
            tab[m * static_cast<size_t>(h) + static_cast<size_t>(q)] =
                (x.x[m] * std::conj(psk_point(q, h))).real();
    return tab;
}

DetectionResult finish(std::vector<int> indices, std::vector<int> phases,
                       double metric, const SchemeParams& params) {
    DetectionResult out;
    out.indices = std::move(indices);
    out.psk.reserve(phases.size());
    for (const int q : phases) out.psk.push_back(psk_point(q, params.h));
    out.metric = metric;
    out.bits = decode({out.indices, out.psk, {}}, params);
    return out;
}

void check_input(const DespreadSymbols& x, const SchemeParams& params) {
    params.validate();
    if (static_cast<int>(x.x.size()) != params.m)
        throw std::invalid_argument("despread vector length does not match m");
}

}  // namespace

FrequencyFrame demodulate(const TimeFrame& frame, const WaveformConfig& config) {
    config.validate();
    if (static_cast<int>(frame.samples.size()) != config.n_cp + config.n ||
        frame.n_cp != config.n_cp)
        throw std::invalid_argument("frame does not match the configured symbol");
    const std::vector<cplx> spectrum =
        dft({frame.samples.begin() + config.n_cp, frame.samples.end()});
    FrequencyFrame y;
    y.l_d = config.l_d;
    y.bins.resize(static_cast<size_t>(config.m));
    for (int k = config.l_d; k <= config.l_u; ++k)
        y.at(k) = spectrum[static_cast<size_t>(wrap_index(k, config.n))] /
                  static_cast<double>(config.n);
    return y;
}

DespreadSymbols equalize_despread(const FrequencyFrame& y, const Cfr& h,
                                  const FdssCoefficients& c) {
    const FrequencyFrame& f = c.coeff;
    if (y.l_d != f.l_d || y.bins.size() != f.bins.size() || h.l_d != f.l_d ||
        h.bins.size() != f.bins.size())
        throw std::invalid_argument("frames are not aligned on the same band");
    const int m = static_cast<int>(f.bins.size());
    DespreadSymbols out;
    out.x.assign(static_cast<size_t>(m), cplx{0, 0});
    for (int k = f.l_d; k <= f.l_u(); ++k)
        out.x[static_cast<size_t>(wrap_index(k, m))] +=
            std::conj(h.at(k)) * std::conj(f.at(k)) * y.at(k);
    out.x = idft(out.x);
    return out;
}

DetectionResult ml_detect(const DespreadSymbols& x, const SchemeParams& params) {
    check_input(x, params);
    const BitCapacity cap = bit_capacity(params);
    const uint64_t usable = uint64_t{1} << cap.p1;
    const int h = params.h;
    const std::vector<double> tab = metric_table(x, h);
    const auto re = [&](int m, int q) {
        return tab[static_cast<size_t>(m) * static_cast<size_t>(h) +
                   static_cast<size_t>(q)];
    };

    if (params.l == 1) {
        int bm = 0, bq = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (int m = 0; m < static_cast<int>(std::min<uint64_t>(
                                usable, static_cast<uint64_t>(params.m)));
             ++m)
            for (int q = 0; q < h; ++q)
                if (re(m, q) > best) {
                    best = re(m, q);
                    bm = m;
                    bq = q;
                }
        return finish({bm}, {bq}, best, params);
    }

    if (params.l == 2) {
        // Pairs stream out in codebook order, so stopping at the usable
        // count stays inside the decodable prefix.
        int bi = 0, bj = 0, bq1 = 0, bq2 = 0;
        double best = -std::numeric_limits<double>::infinity();
        uint64_t seen = 0;
        for (int i = 0; i < params.m && seen < usable; ++i) {
            const int hi = std::min(params.m - 1, i + params.m - params.s);
            for (int j = i + params.s; j <= hi && seen < usable; ++j, ++seen) {
                for (int q1 = 0; q1 < h; ++q1) {
                    const double left = re(i, q1);
                    for (int q2 = 0; q2 < h; ++q2) {
                        const double v = left + re(j, q2);
                        if (v > best) {
                            best = v;
                            bi = i;
                            bj = j;
                            bq1 = q1;
                            bq2 = q2;
                        }
                    }
                }
            }
        }
        return finish({bi, bj}, {bq1, bq2}, best, params);
    }

    // l = 4: greedy successive selection, strongest index first.
    std::vector<char> used(static_cast<size_t>(params.m), 0);
    std::vector<std::pair<int, int>> picks;  // (index, phase label)
    for (int pick = 0; pick < params.l; ++pick) {
        int bm = -1, bq = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (int m = 0; m < params.m; ++m) {
            if (used[static_cast<size_t>(m)]) continue;
            for (int q = 0; q < h; ++q)
                if (re(m, q) > best) {
                    best = re(m, q);
                    bm = m;
                    bq = q;
                }
        }
        used[static_cast<size_t>(bm)] = 1;
        picks.emplace_back(bm, bq);
    }
    std::sort(picks.begin(), picks.end());
    std::vector<int> indices, phases;
    double metric = 0;
    for (const auto& [m, q] : picks) {
        indices.push_back(m);
        phases.push_back(q);
        metric += re(m, q);
    }
    try {
        return finish(indices, phases, metric, params);
    } catch (const UnusedCodewordError&) {
        // Greedy landed past the decodable prefix; take the first decodable
        // index set with its per-index best phases.
        indices.clear();
        phases.clear();
        metric = 0;
        for (int m = 0; m < params.l; ++m) {
            int bq = 0;
            for (int q = 1; q < h; ++q)
                if (re(m, q) > re(m, bq)) bq = q;
            indices.push_back(m);
            phases.push_back(bq);
            metric += re(m, bq);
        }
        return finish(indices, phases, metric, params);
    }
}

DetectionResult two_step_detect(const DespreadSymbols& x,
                                const SchemeParams& params) {
    check_input(x, params);
    if (params.l != 2)
        throw std::invalid_argument("two-step detection is defined for l = 2");
    const BitCapacity cap = bit_capacity(params);
    const uint64_t usable = uint64_t{1} << cap.p1;
    const int h = params.h;
    const std::vector<double> tab = metric_table(x, h);
    const auto re = [&](int m, int q) {
        return tab[static_cast<size_t>(m) * static_cast<size_t>(h) +
                   static_cast<size_t>(q)];
    };

    int i = 0, q1 = 0;
    double best1 = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < params.m; ++m)
        for (int q = 0; q < h; ++q)
            if (re(m, q) > best1) {
                best1 = re(m, q);
                i = m;
                q1 = q;
            }

    const PairCodebook cb(params.m, params.s);
    int j = -1, q2 = 0;
    double best2 = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < params.m; ++n) {
        if (n == i) continue;
        const int a = std::min(i, n);
        const int b = std::max(i, n);
        if (!cb.valid(a, b) || cb.rank(a, b) >= usable) continue;
        for (int q = 0; q < h; ++q)
            if (re(n, q) > best2) {
                best2 = re(n, q);
                j = n;
                q2 = q;
            }
    }
    if (j < 0) return ml_detect(x, params);  // no decodable partner at all

    std::vector<int> indices = {std::min(i, j), std::max(i, j)};
    std::vector<int> phases = i < j ? std::vector<int>{q1, q2}
                                    : std::vector<int>{q2, q1};
    return finish(std::move(indices), std::move(phases), best1 + best2, params);
}

std::pair<double, double> ber_bler(const std::vector<uint8_t>& detected,
                                   const std::vector<uint8_t>& truth, int p) {
    if (p < 1) throw std::invalid_argument("block size must be >= 1");
    if (detected.size() != truth.size() || detected.empty() ||
        detected.size() % static_cast<size_t>(p) != 0)
        throw std::invalid_argument("bit streams must be equal non-empty multiples of p");
    size_t bit_errors = 0, block_errors = 0;
    const size_t blocks = detected.size() / static_cast<size_t>(p);
    for (size_t b = 0; b < blocks; ++b) {
        size_t e = 0;
        for (size_t j = 0; j < static_cast<size_t>(p); ++j)
            e += detected[b * static_cast<size_t>(p) + j] !=
                 truth[b * static_cast<size_t>(p) + j];
        bit_errors += e;
        block_errors += e > 0;
    }
    return {static_cast<double>(bit_errors) / static_cast<double>(detected.size()),
            static_cast<double>(block_errors) / static_cast<double>(blocks)};
}

}  // namespace dfrc
