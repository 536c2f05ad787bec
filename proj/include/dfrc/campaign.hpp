#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "dfrc/channel.hpp"
#include "dfrc/comms_rx.hpp"
#include "dfrc/config_file.hpp"
#include "dfrc/im_codec.hpp"
#include "dfrc/radar_rx.hpp"
#include "dfrc/types.hpp"
#include "dfrc/waveform.hpp"

namespace dfrc {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Scenario {
    radar_1target,
    radar_2target,
    comm_awgn,
    comm_fading,
    pmepr,
    smax_sweep,
    synthesize,
};

const char* to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

enum class Detector { ml, two_step };

const char* to_string(Detector d);
Detector detector_from_string(const std::string& s);

/**
 * One Monte Carlo campaign: a scenario, the waveform/scheme it runs with,
 * and the sweep axes. scheme.s holds the active separation constraint;
 * s > 1 means index separation is enforced (only defined for l = 2).
 * An SNR of +inf denotes the noiseless point (sigma^2 = 0).
 */
struct Campaign {
    Scenario scenario = Scenario::radar_1target;
    WaveformConfig waveform = WaveformConfig::ieee80211ay();
    SchemeParams scheme{.m = 1448, .l = 2, .h = 2, .s = 362};
    std::vector<double> snr_db = {std::numeric_limits<double>::infinity()};
    int trials = 1000;
    uint64_t seed = 1;
    Estimator estimator = Estimator::mf;
    Detector detector = Detector::ml;

    int m_min = 8;     // smax-sweep range
    int m_max = 2048;

    std::vector<int> synth_indices;  // synthesize payload; empty = encode zeros
    std::vector<int> synth_psk;      // PSK phase index per chirp

    bool is_enabled() const { return scheme.s > 1; }

    /// Throws ConfigError on inconsistent settings.
    void validate() const;
};

/**
 * Builds a campaign from parsed key=value text. Recognized keys:
 *   scenario, preset (full|desk), chirp, n, n_cp, m, l_d, l_u, deviation,
 *   f_sample, f_c, L, H, S, is (on|off), snr_db (comma list), trials, seed,
 *   estimator, detector, m_min, m_max, indices, psk.
 * Unknown keys raise ConfigError with file/line context. `is = on` without
 * an explicit S selects s_max(m); the default is IS on for l = 2.
 */
Campaign campaign_from_config(const ConfigMap& cfg);

/// FNV-1a 64-bit hash, used to fingerprint campaign settings in CSV headers.
uint64_t fnv1a64(std::string_view s);

/// Canonical "key=value;" rendering of every campaign setting; its hash is
/// the config digest recorded in output metadata.
std::string campaign_key_string(const Campaign& c);

/**
 * CSV payload plus '#'-prefixed metadata lines. The timestamp is the only
 * non-reproducible line and is emitted solely when requested, so
 * to_string(false) is byte-identical across reruns of the same campaign.
 */
struct CsvTable {
    std::vector<std::string> comments;  // metadata, without the "# " prefix
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string(bool with_timestamp) const;
};

/// Per-trial radar outcome; rerunning with the same seed reproduces it bit
/// for bit.
struct RadarTrialRecord {
    uint64_t seed = 0;
    double snr_db = 0;
    RadarScene scene;
    std::vector<TargetEstimate> estimates;
    double sq_range_error_m2 = 0;  // mean over the scene's targets
};

/// Per-trial communications outcome.
struct CommTrialRecord {
    uint64_t seed = 0;
    double snr_db = 0;
    std::vector<uint8_t> sent_bits;
    std::vector<uint8_t> detected_bits;
    int bit_errors = 0;
    bool block_error = false;
};

/// Runs campaign.trials independent trials at one SNR point. point_index
/// offsets the per-trial seeds so sweep points draw disjoint streams.
/// Results are invariant to the number of worker threads.
std::vector<RadarTrialRecord> run_radar_trials(const Campaign& c, double snr_db,
                                               int point_index);
std::vector<CommTrialRecord> run_comm_trials(const Campaign& c, double snr_db,
                                             int point_index);

/// Columns: snr_db, rmse_m, trials, estimator, is, l, s, rmse_ci95_m, seed.
CsvTable run_radar_campaign(const Campaign& c);

/// Columns: snr_db, ber, bler, trials, detector, is, l, s, ber_ci95, seed.
CsvTable run_comm_campaign(const Campaign& c);

/// Both chirp profiles at l = 1, 2, 4 (s = 1, h = 2), campaign.trials
/// messages per row. Columns: profile, l, max_pmepr_db, mean_pmepr_db,
/// messages, seed.
CsvTable run_pmepr_campaign(const Campaign& c);

/// Columns: m, s_max, count_at_smax, p1 for every m in [m_min, m_max].
CsvTable run_smax_sweep(int m_min, int m_max);

/// Dispatches on c.scenario. The synthesize scenario is frame output, not a
/// CSV campaign, and raises ConfigError here.
CsvTable run_campaign(const Campaign& c);

}  // namespace dfrc
