#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfrc/types.hpp"

namespace dfrc {

/**
 * Flat key=value configuration: one assignment per line, full-line '#'
 * comments, blank lines ignored. Unknown keys are the caller's concern;
 * parse errors and typed accessor failures carry file/line context.
 */
class ConfigMap {
public:
    struct Entry {
        std::string key;
        std::string value;
        int line = 0;
    };

    void add(Entry entry);  // rejects duplicate keys

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;

    double get_double(const std::string& key) const;
    long long get_int(const std::string& key) const;
    uint64_t get_uint64(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;  // comma-separated

    const std::vector<Entry>& entries() const { return entries_; }
    const std::string& source() const { return source_; }
    void set_source(std::string name) { source_ = std::move(name); }

private:
    const Entry* find(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& why) const;

    std::vector<Entry> entries_;
    std::string source_ = "<config>";
};

ConfigMap parse_config_text(const std::string& text, const std::string& name);
ConfigMap parse_config_file(const std::string& path);

}  // namespace dfrc
