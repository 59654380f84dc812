#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dualcurve/approx.hpp"
#include "dualcurve/curve.hpp"
#include "dualcurve/errors.hpp"

namespace dualcurve {

// Flat key-table configuration:
//   key = 3.5 | "text" | [1, 2, 3] | { name = "parabola", a = 0.0, b = 1.0 }
// One assignment per line; '#' starts a comment; inline tables hold scalars.
// Parsing either succeeds completely or throws config_error with the line.
struct ConfigValue {
    using Table = std::map<std::string, ConfigValue>;
    std::variant<double, std::string, std::vector<double>, Table> v;
    int line = 0;

    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_array() const { return std::holds_alternative<std::vector<double>>(v); }
    bool is_table() const { return std::holds_alternative<Table>(v); }
};

class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const;

    double get_number(const std::string& key) const;
    double get_number(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_array(const std::string& key) const;
    std::vector<long long> get_int_array(const std::string& key) const;
    const ConfigValue::Table& get_table(const std::string& key) const;

    // Rejects keys outside `allowed` (typo safety); error mentions the line.
    void restrict_keys(const std::vector<std::string>& allowed) const;

    const std::map<std::string, ConfigValue>& entries() const { return entries_; }

private:
    const ConfigValue& at(const std::string& key) const;
    std::map<std::string, ConfigValue> entries_;
};

// Shared builders for the pieces every command needs.
PlanarCurve curve_from_config(const Config& cfg);
ApproxFunction psi_from_config(const Config& cfg, const std::string& base_dir);

} // namespace dualcurve
