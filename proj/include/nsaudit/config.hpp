#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsaudit/vec.hpp"

namespace nsaudit {

/// Plain-text configuration: one `key = value` per line, `#` comments,
/// blank lines ignored. Keys are dotted lowercase (solver.nu, audit.grid);
/// vectors are whitespace-separated components. Reads mark keys as
/// consumed so callers can reject unknown keys afterwards.
class Config {
  public:
    Config() = default;

    static Config parse(std::istream& is, const std::string& source = "<stream>");
    static Config parse_string(const std::string& text, const std::string& source = "<string>");
    static Config load(const std::string& path);

    bool has(const std::string& key) const;

    /// Typed getters; throw ConfigError when the key is missing and no
    /// default is supplied, or when the value does not parse.
    std::string get_string(const std::string& key,
                           std::optional<std::string> def = std::nullopt) const;
    double get_double(const std::string& key, std::optional<double> def = std::nullopt) const;
    int get_int(const std::string& key, std::optional<int> def = std::nullopt) const;
    bool get_bool(const std::string& key, std::optional<bool> def = std::nullopt) const;
    Vec3 get_vec3(const std::string& key, std::optional<Vec3> def = std::nullopt) const;

    void set(const std::string& key, const std::string& value);

    /// All keys, sorted.
    std::vector<std::string> keys() const;

    /// Keys present in the file but never read by any getter.
    std::vector<std::string> unconsumed() const;
    /// Throws ConfigError listing unconsumed keys, if any.
    void require_all_consumed() const;

    /// Sorted `key = value` lines; the canonical form hashed below.
    std::string canonical_text() const;
    /// FNV-1a 64-bit over canonical_text(), so a report states exactly
    /// which configuration produced it.
    std::uint64_t hash() const;

    bool empty() const { return values_.empty(); }

  private:
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> consumed_;
    std::string source_ = "<empty>";
};

} // namespace nsaudit
