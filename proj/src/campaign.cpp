#include "dfrc/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <numeric>
#include <span>

namespace dfrc {

namespace {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string normalize(std::string s) {
    std::replace(s.begin(), s.end(), '_', '-');
    return s;
}

/// Runs n independent trial bodies; the first exception (if any) is
/// rethrown after the region so OpenMP never sees one escape.
template <typename F>
void parallel_trials(int n, F&& body) {
    std::exception_ptr err;
#pragma omp parallel for schedule(static)
    for (int t = 0; t < n; ++t) {
        try {
            body(t);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

RadarScene draw_scene(Scenario sc, Rng& rng) {
    RadarScene scene;
    if (sc == Scenario::radar_1target) {
        scene.targets.push_back({rng.uniform(0.5, 6.5), -1.0});
    } else {
        scene.targets.push_back({rng.uniform(1.3, 3.3), -1.0});
        scene.targets.push_back({rng.uniform(3.6, 5.6), -0.5});
    }
    return scene;
}

int bit_diff(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Unbiased standard error of the mean; 0 for a single sample.
double se_of_mean(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / (static_cast<double>(v.size() - 1) * static_cast<double>(v.size())));
}

std::vector<std::string> campaign_comments(const Campaign& c) {
    const std::string key = campaign_key_string(c);
    char digest[24];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(key)));
    return {
        std::string("dfrc-sim ") + kToolVersion,
        std::string("scenario: ") + to_string(c.scenario),
        std::string("config-digest: ") + digest,
        "config: " + key,
    };
}

}  // namespace

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::radar_1target: return "radar-1target";
        case Scenario::radar_2target: return "radar-2target";
        case Scenario::comm_awgn: return "comm-awgn";
        case Scenario::comm_fading: return "comm-fading";
        case Scenario::pmepr: return "pmepr";
        case Scenario::smax_sweep: return "smax-sweep";
        case Scenario::synthesize: return "synthesize";
    }
    throw std::invalid_argument("to_string: unknown Scenario");
}

Scenario scenario_from_string(const std::string& s) {
    const std::string n = normalize(s);
    for (Scenario sc : {Scenario::radar_1target, Scenario::radar_2target,
                        Scenario::comm_awgn, Scenario::comm_fading, Scenario::pmepr,
                        Scenario::smax_sweep, Scenario::synthesize})
        if (n == to_string(sc)) return sc;
    throw ConfigError("unknown scenario '" + s + "'");
}

const char* to_string(Detector d) {
    return d == Detector::ml ? "ml" : "two-step";
}

Detector detector_from_string(const std::string& s) {
    const std::string n = normalize(s);
    if (n == "ml") return Detector::ml;
    if (n == "two-step") return Detector::two_step;
    throw ConfigError("unknown detector '" + s + "' (expected ml or two-step)");
}

void Campaign::validate() const {
    waveform.validate();
    scheme.validate();
    if (scheme.m != waveform.m)
        throw ConfigError("scheme m = " + std::to_string(scheme.m) +
                          " must equal the waveform's shift count m = " +
                          std::to_string(waveform.m));
    if (trials < 1) throw ConfigError("trials must be >= 1");
    const bool sweep = scenario == Scenario::radar_1target ||
                       scenario == Scenario::radar_2target ||
                       scenario == Scenario::comm_awgn ||
                       scenario == Scenario::comm_fading;
    if (sweep && snr_db.empty())
        throw ConfigError("snr_db must list at least one point for sweep scenarios");
    for (double s : snr_db)
        if (std::isnan(s)) throw ConfigError("snr_db entries must not be NaN");
    if (detector == Detector::two_step && scheme.l != 2)
        throw ConfigError("the two-step detector is defined for l = 2 only");
    if (scenario == Scenario::smax_sweep && (m_min < 3 || m_max < m_min))
        throw ConfigError("smax-sweep needs 3 <= m_min <= m_max");
    if (scenario == Scenario::synthesize && !synth_indices.empty()) {
        if (synth_indices.size() != synth_psk.size())
            throw ConfigError("indices and psk lists must have equal length");
        if (static_cast<int>(synth_indices.size()) != scheme.l)
            throw ConfigError("indices list must have exactly l entries");
        for (size_t i = 0; i < synth_indices.size(); ++i) {
            if (synth_indices[i] < 0 || synth_indices[i] >= scheme.m)
                throw ConfigError("chirp index out of range [0, m)");
            if (i && synth_indices[i] <= synth_indices[i - 1])
                throw ConfigError("chirp indices must be strictly increasing");
            if (synth_psk[i] < 0 || synth_psk[i] >= scheme.h)
                throw ConfigError("psk phase index out of range [0, h)");
        }
    }
}

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string campaign_key_string(const Campaign& c) {
    std::vector<std::string> snr, idx, psk;
    for (double s : c.snr_db) snr.push_back(fmt_g(s));
    for (int i : c.synth_indices) idx.push_back(std::to_string(i));
    for (int q : c.synth_psk) psk.push_back(std::to_string(q));
    std::string out;
    out += std::string("scenario=") + to_string(c.scenario) + ";";
    out += std::string("chirp=") + to_string(c.waveform.profile) + ";";
    out += "n=" + std::to_string(c.waveform.n) + ";";
    out += "n_cp=" + std::to_string(c.waveform.n_cp) + ";";
    out += "m=" + std::to_string(c.waveform.m) + ";";
    out += "l_d=" + std::to_string(c.waveform.l_d) + ";";
    out += "l_u=" + std::to_string(c.waveform.l_u) + ";";
    out += "deviation=" + fmt_g(c.waveform.deviation) + ";";
    out += "f_sample=" + fmt_g(c.waveform.f_sample) + ";";
    out += "f_c=" + fmt_g(c.waveform.f_c) + ";";
    out += "L=" + std::to_string(c.scheme.l) + ";";
    out += "H=" + std::to_string(c.scheme.h) + ";";
    out += "S=" + std::to_string(c.scheme.s) + ";";
    out += "snr_db=" + join(snr, ",") + ";";
    out += "trials=" + std::to_string(c.trials) + ";";
    out += "seed=" + std::to_string(c.seed) + ";";
    out += std::string("estimator=") + to_string(c.estimator) + ";";
    out += std::string("detector=") + to_string(c.detector) + ";";
    out += "m_min=" + std::to_string(c.m_min) + ";";
    out += "m_max=" + std::to_string(c.m_max) + ";";
    out += "indices=" + join(idx, ",") + ";";
    out += "psk=" + join(psk, ",");
    return out;
}

std::string CsvTable::to_string(bool with_timestamp) const {
    std::string out;
    for (const std::string& c : comments) out += "# " + c + "\n";
    if (with_timestamp) {
        char buf[40];
        const std::time_t now = std::time(nullptr);
        std::tm g{};
        gmtime_r(&now, &g);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &g);
        out += std::string("# generated: ") + buf + "\n";
    }
    out += join(header, ",") + "\n";
    for (const auto& row : rows) out += join(row, ",") + "\n";
    return out;
}

std::vector<RadarTrialRecord> run_radar_trials(const Campaign& c, double snr_db,
                                               int point_index) {
    const FdssCoefficients fdss = compute_fdss(c.waveform);
    const DelayGrid grid = DelayGrid::for_config(c.waveform);
    const BitCapacity cap = bit_capacity(c.scheme);
    const uint64_t base =
        static_cast<uint64_t>(point_index) * static_cast<uint64_t>(c.trials);
    std::vector<RadarTrialRecord> out(static_cast<size_t>(c.trials));
    parallel_trials(c.trials, [&](int t) {
        RadarTrialRecord& rec = out[static_cast<size_t>(t)];
        rec.seed = trial_seed(c.seed, base + static_cast<uint64_t>(t));
        rec.snr_db = snr_db;
        Rng rng(rec.seed);
        rec.scene = draw_scene(c.scenario, rng);
        const IndexMessage msg = encode(rng.bits(cap.p), c.scheme);
        const FrequencyFrame w = reference_symbols(msg, c.waveform, fdss);
        const double sigma2 = std::isinf(snr_db) ? 0.0 : snr_to_sigma2(snr_db, w);
        const Cfr h = radar_cfr(rec.scene, c.waveform);
        const FrequencyFrame b = apply_radar_channel(w, h, sigma2, rng);
        rec.estimates =
            estimate_multi(b, w, static_cast<int>(rec.scene.targets.size()), grid,
                           c.waveform, sigma2, c.estimator);
        const double rmse = range_rmse({rec.estimates}, {rec.scene});
        rec.sq_range_error_m2 = rmse * rmse;
    });
    return out;
}

std::vector<CommTrialRecord> run_comm_trials(const Campaign& c, double snr_db,
                                             int point_index) {
    const FdssCoefficients fdss = compute_fdss(c.waveform);
    const BitCapacity cap = bit_capacity(c.scheme);
    const bool fading = c.scenario == Scenario::comm_fading;
    const FadingProfile profile = FadingProfile::three_path();
    Cfr flat;
    flat.l_d = c.waveform.l_d;
    flat.bins.assign(static_cast<size_t>(c.waveform.m), cplx(1.0, 0.0));
    const uint64_t base =
        static_cast<uint64_t>(point_index) * static_cast<uint64_t>(c.trials);
    std::vector<CommTrialRecord> out(static_cast<size_t>(c.trials));
    parallel_trials(c.trials, [&](int t) {
        CommTrialRecord& rec = out[static_cast<size_t>(t)];
        rec.seed = trial_seed(c.seed, base + static_cast<uint64_t>(t));
        rec.snr_db = snr_db;
        Rng rng(rec.seed);
        rec.sent_bits = rng.bits(cap.p);
        const IndexMessage msg = encode(rec.sent_bits, c.scheme);
        const FrequencyFrame w = reference_symbols(msg, c.waveform, fdss);
        const double sigma2 = std::isinf(snr_db) ? 0.0 : snr_to_sigma2(snr_db, w);
        DespreadSymbols x;
        if (fading) {
            const std::vector<cplx> gains = realize_fading(profile, rng);
            const Cfr h = fading_cfr(profile, gains, c.waveform);
            FrequencyFrame y = apply_cfr(w, h);
            add_awgn(y.bins, sigma2, rng);
            x = equalize_despread(y, h, fdss);
        } else {
            // Full time-domain chain; N * sigma2 per time sample lands at
            // sigma2 per occupied bin after the demodulator's 1/N DFT.
            TimeFrame frame = frame_from_symbols(w, c.waveform);
            add_awgn(frame.samples, sigma2 * c.waveform.n, rng);
            const FrequencyFrame y = demodulate(frame, c.waveform);
            x = equalize_despread(y, flat, fdss);
        }
        const DetectionResult det =
            c.detector == Detector::ml ? ml_detect(x, c.scheme) : two_step_detect(x, c.scheme);
        rec.detected_bits = det.bits;
        rec.bit_errors = bit_diff(rec.sent_bits, rec.detected_bits);
        rec.block_error = rec.bit_errors > 0;
    });
    return out;
}

CsvTable run_radar_campaign(const Campaign& c) {
    c.validate();
    if (c.scenario != Scenario::radar_1target && c.scenario != Scenario::radar_2target)
        throw ConfigError("run_radar_campaign needs a radar scenario");
    CsvTable t;
    t.comments = campaign_comments(c);
    t.header = {"snr_db", "rmse_m",       "trials", "estimator", "is",
                "l",      "s",            "rmse_ci95_m", "seed"};
    for (size_t p = 0; p < c.snr_db.size(); ++p) {
        const auto recs = run_radar_trials(c, c.snr_db[p], static_cast<int>(p));
        std::vector<std::vector<TargetEstimate>> ests;
        std::vector<RadarScene> scenes;
        std::vector<double> sq;
        for (const RadarTrialRecord& r : recs) {
            ests.push_back(r.estimates);
            scenes.push_back(r.scene);
            sq.push_back(r.sq_range_error_m2);
        }
        const double rmse = range_rmse(ests, scenes);
        const double se = se_of_mean(sq, mean_of(sq));
        const double ci95 = rmse > 0 ? 1.96 * se / (2.0 * rmse) : 0.0;
        t.rows.push_back({fmt_g(c.snr_db[p]), fmt_g(rmse), std::to_string(c.trials),
                          to_string(c.estimator), c.is_enabled() ? "1" : "0",
                          std::to_string(c.scheme.l), std::to_string(c.scheme.s),
                          fmt_g(ci95), std::to_string(c.seed)});
    }
    return t;
}

CsvTable run_comm_campaign(const Campaign& c) {
    c.validate();
    if (c.scenario != Scenario::comm_awgn && c.scenario != Scenario::comm_fading)
        throw ConfigError("run_comm_campaign needs a comm scenario");
    const BitCapacity cap = bit_capacity(c.scheme);
    CsvTable t;
    t.comments = campaign_comments(c);
    t.header = {"snr_db", "ber", "bler", "trials", "detector",
                "is",     "l",   "s",    "ber_ci95", "seed"};
    for (size_t p = 0; p < c.snr_db.size(); ++p) {
        const auto recs = run_comm_trials(c, c.snr_db[p], static_cast<int>(p));
        long bit_errs = 0, blk_errs = 0;
        for (const CommTrialRecord& r : recs) {
            bit_errs += r.bit_errors;
            blk_errs += r.block_error ? 1 : 0;
        }
        const double nbits = static_cast<double>(c.trials) * cap.p;
        const double ber = static_cast<double>(bit_errs) / nbits;
        const double bler = static_cast<double>(blk_errs) / c.trials;
        const double ci95 = 1.96 * std::sqrt(ber * (1.0 - ber) / nbits);
        t.rows.push_back({fmt_g(c.snr_db[p]), fmt_g(ber), fmt_g(bler),
                          std::to_string(c.trials), to_string(c.detector),
                          c.is_enabled() ? "1" : "0", std::to_string(c.scheme.l),
                          std::to_string(c.scheme.s), fmt_g(ci95),
                          std::to_string(c.seed)});
    }
    return t;
}

CsvTable run_pmepr_campaign(const Campaign& c) {
    c.validate();
    CsvTable t;
    t.comments = campaign_comments(c);
    t.header = {"profile", "l", "max_pmepr_db", "mean_pmepr_db", "messages", "seed"};
    int row_idx = 0;
    for (ChirpProfile profile : {ChirpProfile::sinusoidal, ChirpProfile::linear}) {
        WaveformConfig wf = c.waveform;
        wf.profile = profile;
        const FdssCoefficients fdss = compute_fdss(wf);
        for (int l : {1, 2, 4}) {
            SchemeParams sch{.m = wf.m, .l = l, .h = 2, .s = 1};
            const BitCapacity cap = bit_capacity(sch);
            const uint64_t base =
                static_cast<uint64_t>(row_idx) * static_cast<uint64_t>(c.trials);
            std::vector<double> v(static_cast<size_t>(c.trials));
            parallel_trials(c.trials, [&](int t_i) {
                Rng rng(trial_seed(c.seed, base + static_cast<uint64_t>(t_i)));
                const IndexMessage msg = encode(rng.bits(cap.p), sch);
                v[static_cast<size_t>(t_i)] = pmepr_db(msg, wf, fdss);
            });
            const double vmax = *std::max_element(v.begin(), v.end());
            t.rows.push_back({to_string(profile), std::to_string(l), fmt_g(vmax),
                              fmt_g(mean_of(v)), std::to_string(c.trials),
                              std::to_string(c.seed)});
            ++row_idx;
        }
    }
    return t;
}

CsvTable run_smax_sweep(int m_min, int m_max) {
    if (m_min < 3 || m_max < m_min)
        throw ConfigError("smax-sweep needs 3 <= m_min <= m_max");
    CsvTable t;
    t.comments = {std::string("dfrc-sim ") + kToolVersion, "scenario: smax-sweep",
                  "m_min: " + std::to_string(m_min),
                  "m_max: " + std::to_string(m_max)};
    t.header = {"m", "s_max", "count_at_smax", "p1"};
    for (int m = m_min; m <= m_max; ++m) {
        const int s = s_max(m);
        const CombCount count = count_constrained(m, s);
        t.rows.push_back({std::to_string(m), std::to_string(s), count.str(),
                          std::to_string(count.floor_log2())});
    }
    return t;
}

CsvTable run_campaign(const Campaign& c) {
    c.validate();
    switch (c.scenario) {
        case Scenario::radar_1target:
        case Scenario::radar_2target:
            return run_radar_campaign(c);
        case Scenario::comm_awgn:
        case Scenario::comm_fading:
            return run_comm_campaign(c);
        case Scenario::pmepr:
            return run_pmepr_campaign(c);
        case Scenario::smax_sweep: {
            CsvTable t = run_smax_sweep(c.m_min, c.m_max);
            t.comments = campaign_comments(c);
            return t;
        }
        case Scenario::synthesize:
            break;
    }
    throw ConfigError("the synthesize scenario writes a frame, not a campaign CSV");
}

Campaign campaign_from_config(const ConfigMap& cfg) {
    static const std::vector<std::string> known = {
        "scenario", "preset",   "chirp",  "n",        "n_cp",     "m",
        "l_d",      "l_u",      "deviation", "f_sample", "f_c",   "L",
        "H",        "S",        "is",     "snr_db",   "trials",   "seed",
        "estimator", "detector", "m_min", "m_max",    "indices",  "psk"};
    auto where = [&cfg](int line) {
        std::string s = cfg.source();
        if (line > 0) s += ":" + std::to_string(line);
        return s;
    };
    auto fail_key = [&](const std::string& key, const std::string& why) -> void {
        int line = 0;
        for (const ConfigMap::Entry& e : cfg.entries())
            if (e.key == key) line = e.line;
        throw ConfigError(where(line) + ": key '" + key + "': " + why);
    };
    for (const ConfigMap::Entry& e : cfg.entries())
        if (std::find(known.begin(), known.end(), e.key) == known.end())
            throw ConfigError(where(e.line) + ": unknown key '" + e.key + "'");

    Campaign c;
    const std::string preset = cfg.get_or("preset", "full");
    if (preset == "full")
        c.waveform = WaveformConfig::ieee80211ay();
    else if (preset == "desk")
        c.waveform = WaveformConfig::desk_scale();
    else
        fail_key("preset", "expected full or desk, got '" + preset + "'");

    auto wrap = [&](const std::string& key, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            fail_key(key, e.what());
        } catch (const std::invalid_argument& e) {
            fail_key(key, e.what());
        }
    };
    if (cfg.has("chirp"))
        wrap("chirp", [&] { c.waveform.profile = chirp_profile_from_string(cfg.get("chirp")); });
    if (cfg.has("n")) c.waveform.n = static_cast<int>(cfg.get_int("n"));
    if (cfg.has("n_cp")) c.waveform.n_cp = static_cast<int>(cfg.get_int("n_cp"));
    if (cfg.has("m")) c.waveform.m = static_cast<int>(cfg.get_int("m"));
    if (cfg.has("l_d")) c.waveform.l_d = static_cast<int>(cfg.get_int("l_d"));
    if (cfg.has("l_u")) c.waveform.l_u = static_cast<int>(cfg.get_int("l_u"));
    if (cfg.has("deviation")) c.waveform.deviation = cfg.get_double("deviation");
    if (cfg.has("f_sample")) c.waveform.f_sample = cfg.get_double("f_sample");
    if (cfg.has("f_c")) c.waveform.f_c = cfg.get_double("f_c");
    try {
        c.waveform.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(cfg.source() + ": " + e.what());
    }

    c.scheme.m = c.waveform.m;
    if (cfg.has("L")) c.scheme.l = static_cast<int>(cfg.get_int("L"));
    if (cfg.has("H")) c.scheme.h = static_cast<int>(cfg.get_int("H"));

    bool is_on = c.scheme.l == 2;  // separation is the scheme's default pair mode
    if (cfg.has("is")) {
        const std::string v = cfg.get("is");
        if (v == "on" || v == "true" || v == "1")
            is_on = true;
        else if (v == "off" || v == "false" || v == "0")
            is_on = false;
        else
            fail_key("is", "expected on or off, got '" + v + "'");
        if (is_on && c.scheme.l != 2)
            fail_key("is", "index separation is defined for L = 2 only");
    }
    if (cfg.has("S")) {
        c.scheme.s = static_cast<int>(cfg.get_int("S"));
        if (cfg.has("is") && !is_on && c.scheme.s > 1)
            fail_key("S", "S > 1 conflicts with is = off");
    } else {
        c.scheme.s = (is_on && c.scheme.l == 2) ? s_max(c.scheme.m) : 1;
    }

    if (cfg.has("scenario"))
        wrap("scenario", [&] { c.scenario = scenario_from_string(cfg.get("scenario")); });
    if (cfg.has("snr_db")) {
        c.snr_db.clear();
        for (double s : cfg.get_double_list("snr_db")) c.snr_db.push_back(s);
    }
    if (cfg.has("trials")) c.trials = static_cast<int>(cfg.get_int("trials"));
    if (cfg.has("seed")) c.seed = cfg.get_uint64("seed");
    if (cfg.has("estimator"))
        wrap("estimator", [&] { c.estimator = estimator_from_string(cfg.get("estimator")); });
    if (cfg.has("detector"))
        wrap("detector", [&] { c.detector = detector_from_string(cfg.get("detector")); });
    if (cfg.has("m_min")) c.m_min = static_cast<int>(cfg.get_int("m_min"));
    if (cfg.has("m_max")) c.m_max = static_cast<int>(cfg.get_int("m_max"));
    if (cfg.has("indices")) {
        c.synth_indices.clear();
        for (double v : cfg.get_double_list("indices"))
            c.synth_indices.push_back(static_cast<int>(v));
    }
    if (cfg.has("psk")) {
        c.synth_psk.clear();
        for (double v : cfg.get_double_list("psk"))
            c.synth_psk.push_back(static_cast<int>(v));
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(cfg.source() + ": " + e.what());
    }
    return c;
}

}  // namespace dfrc
