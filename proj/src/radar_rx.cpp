#include "dfrc/radar_rx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace dfrc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Number of |Re z| stages appended after the envelope search; each one is
// refine_factor finer than the last, starting at the carrier-phase cap.
constexpr int kSignedStages = 3;

cplx scan_point(std::span<const cplx> u, int l_d, double f_c, double t_chirp,
                double tau) {
    const double turns = tau / t_chirp;
    double ph = f_c * tau + static_cast<double>(l_d) * turns;
    ph -= std::floor(ph);
    cplx p = std::polar(1.0, kTwoPi * ph);
    const cplx step = std::polar(1.0, kTwoPi * turns);
    cplx acc = 0;
    for (const cplx& uk : u) {
        acc += uk * p;
        p *= step;
    }
    return acc;
}

std::vector<cplx> search_weights(const FrequencyFrame& b, const FrequencyFrame& w,
                                 double sigma2, Estimator kind) {
    std::vector<cplx> u(w.bins.size());
    for (size_t j = 0; j < u.size(); ++j) {
        u[j] = std::conj(w.bins[j]) * b.bins[j];
        if (kind == Estimator::lmmse && sigma2 > 0)
            u[j] /= std::norm(w.bins[j]) + sigma2;
    }
    return u;
}

void check_frames(const FrequencyFrame& b, const FrequencyFrame& w,
                  const WaveformConfig& config) {
    if (b.l_d != w.l_d || b.bins.size() != w.bins.size())
        throw std::invalid_argument("observation and reference frames disagree");
    if (w.l_d != config.l_d || static_cast<int>(w.bins.size()) != config.m)
        throw std::invalid_argument("frame does not match the configured band");
}

double band_power(const FrequencyFrame& w) {
    double p = 0;
    for (const cplx& c : w.bins) p += std::norm(c);
    return p;
}

struct StagePick {
    long index = 0;
    double tau = 0;
    cplx z = 0;
};

// Scans lattice indices [i_lo, i_hi] of t_min + i*step and keeps the first
// point maximizing score(z). The reduction runs serially over the scan
// output, so the winner does not depend on thread count.
template <class Score>
StagePick scan_stage(std::span<const cplx> u, const WaveformConfig& config,
                     double t_min, double step, long i_lo, long i_hi,
                     Score score) {
    std::vector<double> taus(static_cast<size_t>(i_hi - i_lo + 1));
    for (size_t j = 0; j < taus.size(); ++j)
        taus[j] = t_min + static_cast<double>(i_lo + static_cast<long>(j)) * step;
    std::vector<cplx> z(taus.size());
    kernels::objective_scan_omp(u, config.l_d, config.f_c, config.t_chirp(), taus, z);
    size_t best = 0;
    for (size_t j = 1; j < z.size(); ++j)
        if (score(z[j]) > score(z[best])) best = j;
    return {i_lo + static_cast<long>(best), taus[best], z[best]};
}

long lattice_top(double t_min, double t_max, double step) {
    return static_cast<long>(std::floor((t_max - t_min) / step * (1.0 + 1e-12)));
}

}  // namespace

const char* to_string(Estimator e) {
    return e == Estimator::mf ? "mf" : "lmmse";
}

Estimator estimator_from_string(const std::string& s) {
    if (s == "mf") return Estimator::mf;
    if (s == "lmmse") return Estimator::lmmse;
    throw ConfigError("unknown estimator '" + s + "' (expected mf or lmmse)");
}

void DelayGrid::validate(const WaveformConfig& config) const {
    if (!(t_min >= 0) || !(t_min < t_max))
        throw ConfigError("delay grid needs 0 <= t_min < t_max");
    if (t_max > config.t_cp() * (1.0 + 1e-12))
        throw ConfigError("delay grid extends past the cyclic prefix");
    if (!(coarse_step > 0)) throw ConfigError("coarse_step must be positive");
    if (refine_stages < 0) throw ConfigError("refine_stages must be >= 0");
    if (refine_factor < 2) throw ConfigError("refine_factor must be >= 2");
}

DelayGrid DelayGrid::for_config(const WaveformConfig& config) {
    DelayGrid g;
    g.t_min = 0;
    g.t_max = config.t_cp();
    g.coarse_step = config.t_sample() / 2;
    g.refine_stages = 2;
    g.refine_factor = 10;
    return g;
}

std::vector<cplx> delay_vector(double tau, const WaveformConfig& config) {
    std::vector<cplx> t(static_cast<size_t>(config.m));
    const double turns = tau / config.t_chirp();
    for (int j = 0; j < config.m; ++j) {
        double ph = config.f_c * tau + static_cast<double>(config.l_d + j) * turns;
        ph -= std::floor(ph);
        t[static_cast<size_t>(j)] = std::polar(1.0, -kTwoPi * ph);
    }
    return t;
}

std::pair<double, double> mf_objective(double tau, const FrequencyFrame& w,
                                       const FrequencyFrame& b,
                                       const WaveformConfig& config) {
    check_frames(b, w, config);
    std::vector<cplx> u(w.bins.size());
    for (size_t j = 0; j < u.size(); ++j)
        u[j] = std::conj(w.bins[j]) * b.bins[j];
    const cplx z = scan_point(u, config.l_d, config.f_c, config.t_chirp(), tau);
    return {std::abs(z), z.real()};
}

LmmseEstimate lmmse_channel(const FrequencyFrame& b, const FrequencyFrame& w,
                            double sigma2) {
    if (b.l_d != w.l_d || b.bins.size() != w.bins.size())
        throw std::invalid_argument("observation and reference frames disagree");
    if (sigma2 < 0) throw std::invalid_argument("sigma2 must be >= 0");
    LmmseEstimate out;
    out.response.l_d = b.l_d;
    out.response.bins.resize(b.bins.size());
    for (size_t j = 0; j < b.bins.size(); ++j) {
        const double den = std::norm(w.bins[j]) + sigma2;
        if (den == 0) {
            out.response.bins[j] = 0;
            ++out.zeroed_bins;
        } else {
            out.response.bins[j] = std::conj(w.bins[j]) * b.bins[j] / den;
        }
    }
    return out;
}

TargetEstimate estimate_single(const FrequencyFrame& b, const FrequencyFrame& w,
                               const DelayGrid& grid, const WaveformConfig& config,
                               double sigma2, Estimator kind, StageTrace* trace) {
    check_frames(b, w, config);
    grid.validate(config);
    if (sigma2 < 0) throw std::invalid_argument("sigma2 must be >= 0");
    const double wpow = band_power(w);
    if (wpow == 0)
        throw std::invalid_argument("reference waveform carries no energy");

    const std::vector<cplx> u = search_weights(b, w, sigma2, kind);
    const auto envelope = [](const cplx& z) { return std::abs(z); };
    const auto rectified = [](const cplx& z) { return std::abs(z.real()); };

    // Envelope search: full coarse lattice, then nested local lattices.
    double step = grid.coarse_step;
    StagePick pick =
        scan_stage(u, config, grid.t_min, step, 0,
                   lattice_top(grid.t_min, grid.t_max, step), envelope);
    const bool boundary =
        pick.index == 0 || pick.index == lattice_top(grid.t_min, grid.t_max, step);
    if (trace) trace->envelope_best.push_back(std::abs(pick.z));
    for (int s = 0; s < grid.refine_stages; ++s) {
        step /= grid.refine_factor;
        const long center = std::lround((pick.tau - grid.t_min) / step);
        const long top = lattice_top(grid.t_min, grid.t_max, step);
        pick = scan_stage(u, config, grid.t_min, step,
                          std::max(0L, center - grid.refine_factor),
                          std::min(top, center + grid.refine_factor), envelope);
        if (trace) trace->envelope_best.push_back(std::abs(pick.z));
    }

    // Signed search at carrier-phase resolution: Re z oscillates with period
    // 1/f_c around the envelope peak, so scan a window wide enough to hold a
    // full swing, then tighten.
    double fine = std::min(step, 1.0 / (20.0 * config.f_c));
    long half = std::lround(std::ceil(std::max(step, 0.6 / config.f_c) / fine));
    for (int s = 0; s < kSignedStages; ++s) {
        const long center = std::lround((pick.tau - grid.t_min) / fine);
        const long top = lattice_top(grid.t_min, grid.t_max, fine);
        pick = scan_stage(u, config, grid.t_min, fine, std::max(0L, center - half),
                          std::min(top, center + half), rectified);
        if (trace) trace->signed_best.push_back(std::abs(pick.z.real()));
        fine /= grid.refine_factor;
        half = grid.refine_factor;
    }

    TargetEstimate est;
    est.tau_hat = pick.tau;
    est.at_boundary = boundary;
    std::vector<cplx> u_mf(w.bins.size());
    for (size_t j = 0; j < u_mf.size(); ++j)
        u_mf[j] = std::conj(w.bins[j]) * b.bins[j];
    const cplx z_mf =
        scan_point(u_mf, config.l_d, config.f_c, config.t_chirp(), est.tau_hat);
    const double den = kind == Estimator::lmmse ? wpow + sigma2 : wpow;
    est.a_hat = z_mf.real() / den;
    est.range_hat = est.tau_hat * kSpeedOfLight / 2;
    return est;
}

std::vector<TargetEstimate> estimate_multi(const FrequencyFrame& b,
                                           const FrequencyFrame& w, int r_known,
                                           const DelayGrid& grid,
                                           const WaveformConfig& config,
                                           double sigma2, Estimator kind) {
    if (r_known < 1) throw std::invalid_argument("r_known must be >= 1");
    FrequencyFrame residual = b;
    std::vector<TargetEstimate> found;
    found.reserve(static_cast<size_t>(r_known));
    for (int r = 0; r < r_known; ++r) {
        const TargetEstimate est =
            estimate_single(residual, w, grid, config, sigma2, kind);
        const std::vector<cplx> t = delay_vector(est.tau_hat, config);
        for (size_t j = 0; j < residual.bins.size(); ++j)
            residual.bins[j] -= est.a_hat * w.bins[j] * t[j];
        found.push_back(est);
    }
    return found;
}

double range_rmse(const std::vector<std::vector<TargetEstimate>>& estimates,
                  const std::vector<RadarScene>& truths) {
    if (estimates.empty() || estimates.size() != truths.size())
        throw std::invalid_argument("estimate and truth trial counts disagree");
    double sq = 0;
    size_t n = 0;
    for (size_t t = 0; t < estimates.size(); ++t) {
        const auto& est = estimates[t];
        const auto& truth = truths[t].targets;
        if (est.size() != truth.size())
            throw std::invalid_argument("estimate and truth target counts disagree");
        std::vector<size_t> ei(est.size()), ti(truth.size());
        std::iota(ei.begin(), ei.end(), 0u);
        std::iota(ti.begin(), ti.end(), 0u);
        std::stable_sort(ei.begin(), ei.end(), [&](size_t a, size_t b2) {
            return std::abs(est[a].a_hat) > std::abs(est[b2].a_hat);
        });
        std::stable_sort(ti.begin(), ti.end(), [&](size_t a, size_t b2) {
            return std::abs(truth[a].reflection) > std::abs(truth[b2].reflection);
        });
        for (size_t j = 0; j < est.size(); ++j) {
            const double d = est[ei[j]].range_hat - truth[ti[j]].distance_m;
            sq += d * d;
            ++n;
        }
    }
    return std::sqrt(sq / static_cast<double>(n));
}

namespace kernels {

void objective_scan_serial(std::span<const cplx> u, int l_d, double f_c,
                           double t_chirp, std::span<const double> taus,
                           std::span<cplx> out) {
    if (out.size() != taus.size())
        throw std::invalid_argument("output span size mismatch");
    for (size_t i = 0; i < taus.size(); ++i)
        out[i] = scan_point(u, l_d, f_c, t_chirp, taus[i]);
}

void objective_scan_omp(std::span<const cplx> u, int l_d, double f_c,
                        double t_chirp, std::span<const double> taus,
                        std::span<cplx> out) {
    if (out.size() != taus.size())
        throw std::invalid_argument("output span size mismatch");
    const long n = static_cast<long>(taus.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] =
            scan_point(u, l_d, f_c, t_chirp, taus[static_cast<size_t>(i)]);
}

}  // namespace kernels

}  // namespace dfrc
