#ifndef PUREX_CONFIG_HPP
#define PUREX_CONFIG_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace purex {

/// Flat key=value configuration file.
///
/// Format: one `key = value` pair per line, `#` starts a comment,
/// blank lines ignored. Keys are dotted lowercase identifiers
/// (e.g. `plant.K_U`). Values are parsed on demand by the typed getters.
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const;

    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void set(const std::string& key, const std::string& value);

    /// Keys in lexicographic order, used when round-tripping to disk.
    std::vector<std::string> keys() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    const std::string& raw(const std::string& key) const;
    std::map<std::string, std::string> entries_;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace purex

#endif
