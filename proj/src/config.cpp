#include "nsaudit/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "nsaudit/errors.hpp"

namespace nsaudit {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

Config Config::parse(std::istream& is, const std::string& source) {
    Config cfg;
    cfg.source_ = source;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + body + "'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        if (value.empty())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty value for '" +
                              key + "'");
        cfg.values_[key] = value;
    }
    return cfg;
}

Config Config::parse_string(const std::string& text, const std::string& source) {
    std::istringstream is(text);
    return parse(is, source);
}

Config Config::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file '" + path + "'");
    return parse(is, path);
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::get_string(const std::string& key, std::optional<std::string> def) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        if (def) return *def;
        throw ConfigError("missing config key '" + key + "' (" + source_ + ")");
    }
    consumed_[key] = true;
    return it->second;
}

double Config::get_double(const std::string& key, std::optional<double> def) const {
    if (!has(key)) {
        if (def) return *def;
        throw ConfigError("missing config key '" + key + "' (" + source_ + ")");
    }
    const std::string raw = get_string(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (trim(raw.substr(pos)).empty()) return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
    }
    throw ConfigError("config key '" + key + "' is not a number: '" + raw + "'");
}

int Config::get_int(const std::string& key, std::optional<int> def) const {
    if (!has(key)) {
        if (def) return *def;
        throw ConfigError("missing config key '" + key + "' (" + source_ + ")");
    }
    const std::string raw = get_string(key);
    try {
        std::size_t pos = 0;
        const long v = std::stol(raw, &pos);
        if (trim(raw.substr(pos)).empty() && v >= INT32_MIN && v <= INT32_MAX)
            return static_cast<int>(v);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
    }
    throw ConfigError("config key '" + key + "' is not an integer: '" + raw + "'");
}

bool Config::get_bool(const std::string& key, std::optional<bool> def) const {
    if (!has(key)) {
        if (def) return *def;
        throw ConfigError("missing config key '" + key + "' (" + source_ + ")");
    }
    const std::string raw = get_string(key);
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: '" + raw + "'");
}

Vec3 Config::get_vec3(const std::string& key, std::optional<Vec3> def) const {
    if (!has(key)) {
        if (def) return *def;
        throw ConfigError("missing config key '" + key + "' (" + source_ + ")");
    }
    const std::string raw = get_string(key);
    std::string scrubbed = raw;
    for (char& c : scrubbed)
        if (c == ',' || c == '(' || c == ')') c = ' ';
    std::istringstream is(scrubbed);
    Vec3 v{};
    std::string rest;
    if (is >> v.x >> v.y >> v.z && !(is >> rest)) return v;
    throw ConfigError("config key '" + key + "' is not a 3-vector: '" + raw + "'");
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::vector<std::string> Config::keys() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [key, value] : values_) out.push_back(key);
    return out;
}

std::vector<std::string> Config::unconsumed() const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_) {
        auto it = consumed_.find(key);
        if (it == consumed_.end() || !it->second) out.push_back(key);
    }
    return out;
}

void Config::require_all_consumed() const {
    const auto leftovers = unconsumed();
    if (leftovers.empty()) return;
    std::string msg = "unrecognized config keys:";
    for (const auto& key : leftovers) msg += " '" + key + "'";
    throw ConfigError(msg + " (" + source_ + ")");
}

std::string Config::canonical_text() const {
    std::string out;
    for (const auto& [key, value] : values_) {
        out += key;
        out += " = ";
        out += value;
        out += "\n";
    }
    return out;
}

std::uint64_t Config::hash() const {
    // FNV-1a over the canonical text: stable across platforms and key
    // insertion order, so identical settings always report the same id.
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace nsaudit
