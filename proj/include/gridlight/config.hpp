#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridlight::harness {

/// Nested key-value scenario configuration. Lines are `key = value`,
/// nesting is spelled with dots (`geometry.bins = 25`), `#` starts a
/// comment. `--set key=value` overrides map straight onto keys.
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    void apply_override(const std::string& assignment);  // "key=value"

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;  // throws if missing
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_seed() const;  // required; no wall-clock default
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key) const;  // comma separated

    const std::map<std::string, std::string>& values() const { return values_; }

    /// Canonical `key = value` text; parsing it reproduces the config.
    std::string canonical_text() const;

  private:
    std::map<std::string, std::string> values_;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gridlight::harness
