#include "dfrc/config_file.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dfrc {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& v, bool& ok) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    ok = end == v.c_str() + v.size() && !v.empty();
    return x;
}

}  // namespace

void ConfigMap::add(Entry entry) {
    if (find(entry.key))
        throw ConfigError(source_ + ":" + std::to_string(entry.line) +
                          ": duplicate key '" + entry.key + "'");
    entries_.push_back(std::move(entry));
}

const ConfigMap::Entry* ConfigMap::find(const std::string& key) const {
    for (const Entry& e : entries_)
        if (e.key == key) return &e;
    return nullptr;
}

void ConfigMap::fail(const std::string& key, const std::string& why) const {
    const Entry* e = find(key);
    std::string where = source_;
    if (e && e->line > 0) where += ":" + std::to_string(e->line);
    throw ConfigError(where + ": key '" + key + "': " + why);
}

bool ConfigMap::has(const std::string& key) const { return find(key) != nullptr; }

const std::string& ConfigMap::get(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) fail(key, "missing");
    return e->value;
}

std::string ConfigMap::get_or(const std::string& key,
                              const std::string& fallback) const {
    const Entry* e = find(key);
    return e ? e->value : fallback;
}

double ConfigMap::get_double(const std::string& key) const {
    bool ok = false;
    const double x = parse_double(get(key), ok);
    if (!ok) fail(key, "expected a number, got '" + get(key) + "'");
    return x;
}

long long ConfigMap::get_int(const std::string& key) const {
    const std::string& v = get(key);
    long long x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail(key, "expected an integer, got '" + v + "'");
    return x;
}

uint64_t ConfigMap::get_uint64(const std::string& key) const {
    const std::string& v = get(key);
    uint64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail(key, "expected an unsigned integer, got '" + v + "'");
    return x;
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) const {
    const std::string& v = get(key);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        bool ok = false;
        const double x = parse_double(trim(item), ok);
        if (!ok) fail(key, "expected comma-separated numbers, got '" + v + "'");
        out.push_back(x);
    }
    if (out.empty()) fail(key, "empty list");
    return out;
}

ConfigMap parse_config_text(const std::string& text, const std::string& name) {
    ConfigMap map;
    map.set_source(name);
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
        map.add({key, value, lineno});
    }
    return map;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace dfrc
