#include "dualcurve/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dualcurve {

namespace {

struct Cursor {
    const std::string& text;
    size_t pos = 0;
    int line = 1;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char take() {
        char c = text[pos++];
        if (c == '\n') ++line;
        return c;
    }
    void skip_ws_inline() {
        while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos;
    }
    void skip_comment() {
        while (!done() && peek() != '\n') ++pos;
    }
};

std::string read_ident(Cursor& c) {
    std::string out;
    while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_'))
        out += c.take();
    return out;
}

double read_number(Cursor& c) {
    size_t start = c.pos;
    while (!c.done() &&
           (std::isdigit(static_cast<unsigned char>(c.peek())) || c.peek() == '+' ||
            c.peek() == '-' || c.peek() == '.' || c.peek() == 'e' || c.peek() == 'E'))
        ++c.pos;
    if (c.pos == start) throw config_error("expected a number", c.line);
    std::string tok = c.text.substr(start, c.pos - start);
    try {
        size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw config_error("malformed number '" + tok + "'", c.line);
    }
}

std::string read_string(Cursor& c) {
    if (c.take() != '"') throw config_error("expected opening quote", c.line);
    std::string out;
    while (!c.done() && c.peek() != '"') {
        if (c.peek() == '\n') throw config_error("unterminated string", c.line);
        out += c.take();
    }
    if (c.done()) throw config_error("unterminated string", c.line);
    c.take();
    return out;
}

ConfigValue read_value(Cursor& c, bool allow_compound);

ConfigValue read_array(Cursor& c) {
    ConfigValue v;
    v.line = c.line;
    std::vector<double> items;
    c.take(); // '['
    c.skip_ws_inline();
    while (!c.done() && c.peek() != ']') {
        items.push_back(read_number(c));
        c.skip_ws_inline();
        if (!c.done() && c.peek() == ',') {
            c.take();
            c.skip_ws_inline();
        }
    }
    if (c.done()) throw config_error("unterminated array", c.line);
    c.take(); // ']'
    v.v = std::move(items);
    return v;
}

ConfigValue read_table(Cursor& c) {
    ConfigValue v;
    v.line = c.line;
    ConfigValue::Table table;
    c.take(); // '{'
    c.skip_ws_inline();
    while (!c.done() && c.peek() != '}') {
        std::string key = read_ident(c);
        if (key.empty()) throw config_error("expected a key inside table", c.line);
        c.skip_ws_inline();
        if (c.done() || c.take() != '=') throw config_error("expected '=' inside table", c.line);
        c.skip_ws_inline();
        table[key] = read_value(c, false);
        c.skip_ws_inline();
        if (!c.done() && c.peek() == ',') {
            c.take();
            c.skip_ws_inline();
        }
    }
    if (c.done()) throw config_error("unterminated table", c.line);
    c.take(); // '}'
    v.v = std::move(table);
    return v;
}

ConfigValue read_value(Cursor& c, bool allow_compound) {
    if (c.done()) throw config_error("expected a value", c.line);
    char ch = c.peek();
    if (ch == '"') {
        ConfigValue v;
        v.line = c.line;
        v.v = read_string(c);
        return v;
    }
    if (ch == '[') {
        if (!allow_compound) throw config_error("arrays cannot nest inside tables", c.line);
        return read_array(c);
    }
    if (ch == '{') {
        if (!allow_compound) throw config_error("tables cannot nest inside tables", c.line);
        return read_table(c);
    }
    ConfigValue v;
    v.line = c.line;
    v.v = read_number(c);
    return v;
}

} // namespace

Config Config::parse_string(const std::string& text) {
    Config cfg;
    Cursor c{text};
    while (!c.done()) {
        c.skip_ws_inline();
        if (c.done()) break;
        char ch = c.peek();
        if (ch == '\n') {
            c.take();
            continue;
        }
        if (ch == '#') {
            c.skip_comment();
            continue;
        }
        int line = c.line;
        std::string key = read_ident(c);
        if (key.empty()) throw config_error("expected a key", line);
        c.skip_ws_inline();
        if (c.done() || c.take() != '=') throw config_error("expected '=' after '" + key + "'", line);
        c.skip_ws_inline();
        ConfigValue v = read_value(c, true);
        v.line = line;
        if (cfg.entries_.count(key)) throw config_error("duplicate key '" + key + "'", line);
        cfg.entries_[key] = std::move(v);
        c.skip_ws_inline();
        if (!c.done() && c.peek() == '#') c.skip_comment();
        if (!c.done() && c.peek() != '\n')
            throw config_error("trailing characters after value for '" + key + "'", c.line);
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

const ConfigValue& Config::at(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw config_error("missing required key '" + key + "'");
    return it->second;
}

double Config::get_number(const std::string& key) const {
    const ConfigValue& v = at(key);
    if (!v.is_number()) throw config_error("key '" + key + "' must be a number", v.line);
    return std::get<double>(v.v);
}

double Config::get_number(const std::string& key, double fallback) const {
    return has(key) ? get_number(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
    double d = get_number(key);
    long long n = static_cast<long long>(std::llround(d));
    if (std::abs(d - static_cast<double>(n)) > 1e-9)
        throw config_error("key '" + key + "' must be an integer", at(key).line);
    return n;
}

long long Config::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::string Config::get_string(const std::string& key) const {
    const ConfigValue& v = at(key);
    if (!v.is_string()) throw config_error("key '" + key + "' must be a string", v.line);
    return std::get<std::string>(v.v);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

std::vector<double> Config::get_array(const std::string& key) const {
    const ConfigValue& v = at(key);
    if (!v.is_array()) throw config_error("key '" + key + "' must be an array", v.line);
    return std::get<std::vector<double>>(v.v);
}

std::vector<long long> Config::get_int_array(const std::string& key) const {
    std::vector<double> d = get_array(key);
    std::vector<long long> out;
    out.reserve(d.size());
    for (double x : d) {
        long long n = static_cast<long long>(std::llround(x));
        if (std::abs(x - static_cast<double>(n)) > 1e-9)
            throw config_error("key '" + key + "' must hold integers", at(key).line);
        out.push_back(n);
    }
    return out;
}

const ConfigValue::Table& Config::get_table(const std::string& key) const {
    const ConfigValue& v = at(key);
    if (!v.is_table()) throw config_error("key '" + key + "' must be a table", v.line);
    return std::get<ConfigValue::Table>(v.v);
}

void Config::restrict_keys(const std::vector<std::string>& allowed) const {
    for (const auto& [key, value] : entries_) {
        bool ok = false;
        for (const std::string& a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) throw config_error("unknown key '" + key + "'", value.line);
    }
}

namespace {

double table_number(const ConfigValue::Table& t, const std::string& key, int line) {
    auto it = t.find(key);
    if (it == t.end()) throw config_error("table is missing key '" + key + "'", line);
    if (!it->second.is_number()) throw config_error("table key '" + key + "' must be a number", line);
    return std::get<double>(it->second.v);
}

std::string table_string(const ConfigValue::Table& t, const std::string& key, int line) {
    auto it = t.find(key);
    if (it == t.end()) throw config_error("table is missing key '" + key + "'", line);
    if (!it->second.is_string()) throw config_error("table key '" + key + "' must be a string", line);
    return std::get<std::string>(it->second.v);
}

} // namespace

PlanarCurve curve_from_config(const Config& cfg) {
    const ConfigValue::Table& t = cfg.get_table("curve");
    int line = cfg.entries().at("curve").line;
    std::string name = table_string(t, "name", line);
    double a = table_number(t, "a", line);
    double b = table_number(t, "b", line);
    try {
        return builtin_curve(name, Interval(a, b));
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what(), line);
    }
}

ApproxFunction psi_from_config(const Config& cfg, const std::string& base_dir) {
    const ConfigValue::Table& t = cfg.get_table("psi");
    int line = cfg.entries().at("psi").line;
    std::string kind = table_string(t, "kind", line);
    ApproxFunction psi = ApproxFunction::power(3.0);
    try {
        if (kind == "power") {
            psi = ApproxFunction::power(table_number(t, "nu", line));
        } else if (kind == "table") {
            std::string path = table_string(t, "path", line);
            if (!path.empty() && path[0] != '/' && !base_dir.empty())
                path = base_dir + "/" + path;
            psi = load_psi_table(path);
        } else {
            throw config_error("psi kind must be 'power' or 'table'", line);
        }
        if (cfg.has("truncate")) {
            const ConfigValue::Table& tr = cfg.get_table("truncate");
            int trline = cfg.entries().at("truncate").line;
            psi = ApproxFunction::truncated(psi, table_number(tr, "s", trline),
                                            table_number(tr, "eps0", trline));
        }
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what(), line);
    }
    return psi;
}

} // namespace dualcurve
