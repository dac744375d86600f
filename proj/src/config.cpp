#include "bsglab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bsg {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_key(const std::string& key, const char* wanted, const std::string& value) {
    throw std::invalid_argument("config: key '" + key + "' is not " + wanted + ": '" + value +
                                "'");
}

double to_real(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + value.size() || value.empty()) bad_key(key, "a real number", value);
    return v;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) parts.push_back(trim(cur));
    return parts;
}

}  // namespace

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (std::size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);  // '#' starts a comment anywhere on the line
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                            ": unterminated section header '" + t + "'");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected 'key = value', got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        if (cfg.kv_.count(key))
            throw std::invalid_argument("config: key '" + key + "' given twice");
        cfg.kv_[key] = value;
    }
    return cfg;
}

Config Config::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string Config::get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw std::invalid_argument("config: missing required key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_real(const std::string& key) const { return to_real(key, get_string(key)); }

double Config::get_real(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : to_real(key, it->second);
}

int Config::get_int(const std::string& key) const {
    double v = get_real(key);
    int i = int(v);
    if (double(i) != v) bad_key(key, "an integer", get_string(key));
    return i;
}

int Config::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    const std::string& value = it->second;
    const char* begin = value.c_str();
    char* end = nullptr;
    unsigned long long v = std::strtoull(begin, &end, 10);
    if (end != begin + value.size() || value.empty())
        bad_key(key, "an unsigned integer", value);
    return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    bad_key(key, "a boolean (true/false)", it->second);
}

std::vector<double> Config::get_real_list(const std::string& key,
                                          const std::string& fallback) const {
    std::vector<double> out;
    for (const auto& part : split_commas(get_string(key, fallback)))
        out.push_back(to_real(key, part));
    if (out.empty()) bad_key(key, "a non-empty list", get_string(key, fallback));
    return out;
}

std::vector<int> Config::get_int_list(const std::string& key, const std::string& fallback) const {
    std::vector<int> out;
    for (double v : get_real_list(key, fallback)) {
        int i = int(v);
        if (double(i) != v) bad_key(key, "an integer list", get_string(key, fallback));
        out.push_back(i);
    }
    return out;
}

}  // namespace bsg
