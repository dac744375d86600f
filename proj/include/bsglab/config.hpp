#pragma once
// Flat key-value experiment configuration: `key = value` lines, `#` comments,
// optional `[section]` headers namespacing keys as "section.key". Typed
// accessors raise std::invalid_argument naming the offending key.
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace bsg {

class Config {
public:
    static Config parse(const std::string& text);
    static Config parse_file(const std::filesystem::path& path);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_real(const std::string& key) const;
    double get_real(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_real_list(const std::string& key,
                                      const std::string& fallback) const;
    std::vector<int> get_int_list(const std::string& key, const std::string& fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

private:
    std::map<std::string, std::string> kv_;
};

}  // namespace bsg
