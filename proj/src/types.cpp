#include "dfrc/types.hpp"

namespace dfrc {

const char* to_string(ChirpProfile p) {
    switch (p) {
        case ChirpProfile::linear: return "linear";
        case ChirpProfile::sinusoidal: return "sinusoidal";
    }
    throw std::invalid_argument("to_string: unknown ChirpProfile");
}

ChirpProfile chirp_profile_from_string(const std::string& s) {
    if (s == "linear") return ChirpProfile::linear;
    if (s == "sinusoidal") return ChirpProfile::sinusoidal;
    throw ConfigError("unknown chirp profile '" + s + "' (expected linear or sinusoidal)");
}

void WaveformConfig::validate() const {
    if (n < 2) throw ConfigError("waveform: n must be >= 2");
    if (n_cp < 0 || n_cp > n) throw ConfigError("waveform: n_cp must lie in [0, n]");
    if (m < 2) throw ConfigError("waveform: m must be >= 2");
    if (l_u - l_d + 1 != m)
        throw ConfigError("waveform: bin range l_d..l_u must contain exactly m bins");
    if (l_d > 0 || l_u < 0) throw ConfigError("waveform: bin range must straddle DC");
    if (m >= n) throw ConfigError("waveform: need n > m");
    if (l_d <= -n / 2 || l_u >= (n + 1) / 2)
        throw ConfigError("waveform: occupied bins exceed the n-point symbol");
    if (!(deviation > 0) || deviation >= m)
        throw ConfigError("waveform: deviation must satisfy 0 < D < m");
    if (!(l_d < -deviation / 2.0) || !(deviation / 2.0 < l_u))
        throw ConfigError("waveform: bins must cover the sweep, l_d < -D/2 < D/2 < l_u");
    if (!(f_sample > 0)) throw ConfigError("waveform: f_sample must be positive");
    if (!(f_c > 0)) throw ConfigError("waveform: f_c must be positive");
}

WaveformConfig WaveformConfig::ieee80211ay() {
    WaveformConfig c;
    c.n = 2048;
    c.n_cp = 512;
    c.m = 1448;
    c.l_d = -723;
    c.l_u = 724;
    c.deviation = 1300;
    c.f_sample = 10.56e9;
    c.f_c = 64.8e9;
    c.profile = ChirpProfile::sinusoidal;
    c.validate();
    return c;
}

WaveformConfig WaveformConfig::desk_scale() {
    WaveformConfig c;
    c.n = 256;
    c.n_cp = 64;
    c.m = 181;
    c.l_d = -90;
    c.l_u = 90;
    c.deviation = 160;
    c.f_sample = 1.32e9;
    c.f_c = 64.8e9;
    c.profile = ChirpProfile::sinusoidal;
    c.validate();
    return c;
}

}  // namespace dfrc
