#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "perifrac/damage.hpp"
#include "perifrac/dynamics.hpp"
#include "perifrac/grid.hpp"

namespace perifrac {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Full description of one simulation run. Plain-text key-value file with
// [section] headers; unknown keys are rejected so typos surface early.
struct RunConfig {
    DomainConfig domain;
    MaterialConstants material;

    double r_break_factor = 3.0;
    std::string profile = "exponential";
    int damage_form = 2;
    double x_D = 0.0;                // form-1 degradation window
    double r_D_minus_r_plus = 0.0;   // form-2 degradation window

    LoadSpec load;

    double dt = 0.0;
    double t_end = 0.0;
    long snapshot_every = 0;  // steps between ledger rows; 0 = first and last only

    std::optional<Segment> notch;

    std::string out_dir = "out";
    bool write_ledger = true;
    bool write_snapshots = false;
    bool write_crack = true;

    void validate() const {
        if (!(domain.L > 0.0 && domain.H > 0.0 && domain.h > 0.0))
            throw ConfigError("domain: L, H, h must be positive");
        if (domain.eps < 2.0 * domain.h)
            throw ConfigError("domain.epsilon: horizon under-resolved (require epsilon >= 2h)");
        material.validate();
        if (profile != "exponential")
            throw ConfigError("model.profile: only 'exponential' is supported");
        if (damage_form != 1 && damage_form != 2)
            throw ConfigError("model.damage_form: must be 1 or 2");
        if (r_break_factor < 1.0) throw ConfigError("model.r_break_factor: must be >= 1");
        if (x_D < 0.0 || r_D_minus_r_plus < 0.0)
            throw ConfigError("model: degradation windows must be nonnegative");
        if (!(dt > 0.0)) throw ConfigError("time.dt: must be positive");
        if (!(t_end > 0.0)) throw ConfigError("time.t_end: must be positive");
        if (snapshot_every < 0) throw ConfigError("time.snapshot_every: must be nonnegative");
    }

    long step_count() const { return static_cast<long>(std::llround(t_end / dt)); }
};

namespace detail {

struct KvFile {
    // section -> key -> (value, consumed flag)
    std::map<std::string, std::map<std::string, std::pair<std::string, bool>>> data;

    static std::string trim(const std::string& s) {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return s.substr(a, b - a);
    }

    static KvFile parse(std::istream& in, const std::string& origin) {
        KvFile f;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty())
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
                f.data[section];
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": key '" + key +
                                  "' outside any [section]");
            if (!f.data[section].emplace(key, std::make_pair(value, false)).second)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                                  section + "." + key + "'");
        }
        return f;
    }

    std::optional<std::string> take(const std::string& section, const std::string& key) {
        auto s = data.find(section);
        if (s == data.end()) return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        k->second.second = true;
        return k->second.first;
    }

    bool has_section(const std::string& section) const { return data.count(section) > 0; }

    void reject_unconsumed() const {
        for (const auto& [section, kv] : data)
            for (const auto& [key, v] : kv)
                if (!v.second) throw ConfigError("unknown key '" + section + "." + key + "'");
    }
};

inline double to_double(const std::string& v, const std::string& path) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("key '" + path + "': not a number: '" + v + "'");
    }
}

inline long to_long(const std::string& v, const std::string& path) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("key '" + path + "': not an integer: '" + v + "'");
    }
}

inline bool to_bool(const std::string& v, const std::string& path) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + path + "': not a boolean: '" + v + "'");
}

}  // namespace detail

inline RunConfig parse_config_stream(std::istream& in, const std::string& origin) {
    detail::KvFile f = detail::KvFile::parse(in, origin);

    auto require = [&](const char* sec, const char* key) {
        auto v = f.take(sec, key);
        if (!v)
            throw ConfigError(origin + ": missing required key '" + std::string(sec) + "." + key +
                              "' (required: domain.{L,H,h,epsilon}, material.{E,nu,rho,Gc}, "
                              "load.b, time.{dt,t_end})");
        return *v;
    };
    auto path = [](const char* sec, const char* key) { return std::string(sec) + "." + key; };

    RunConfig c;
    c.domain.L = detail::to_double(require("domain", "L"), path("domain", "L"));
    c.domain.H = detail::to_double(require("domain", "H"), path("domain", "H"));
    c.domain.h = detail::to_double(require("domain", "h"), path("domain", "h"));
    c.domain.eps = detail::to_double(require("domain", "epsilon"), path("domain", "epsilon"));

    c.material.E = detail::to_double(require("material", "E"), path("material", "E"));
    c.material.nu = detail::to_double(require("material", "nu"), path("material", "nu"));
    c.material.rho = detail::to_double(require("material", "rho"), path("material", "rho"));
    c.material.Gc = detail::to_double(require("material", "Gc"), path("material", "Gc"));

    if (auto v = f.take("model", "r_break_factor"))
        c.r_break_factor = detail::to_double(*v, "model.r_break_factor");
    if (auto v = f.take("model", "profile")) c.profile = *v;
    if (auto v = f.take("model", "damage_form"))
        c.damage_form = static_cast<int>(detail::to_long(*v, "model.damage_form"));
    if (auto v = f.take("model", "x_D")) c.x_D = detail::to_double(*v, "model.x_D");
    if (auto v = f.take("model", "r_D_minus_r_plus"))
        c.r_D_minus_r_plus = detail::to_double(*v, "model.r_D_minus_r_plus");

    c.load.b = detail::to_double(require("load", "b"), path("load", "b"));
    if (auto v = f.take("load", "divide_by_epsilon"))
        c.load.divide_by_epsilon = detail::to_bool(*v, "load.divide_by_epsilon");

    c.dt = detail::to_double(require("time", "dt"), path("time", "dt"));
    c.t_end = detail::to_double(require("time", "t_end"), path("time", "t_end"));
    if (auto v = f.take("time", "snapshot_every"))
        c.snapshot_every = detail::to_long(*v, "time.snapshot_every");

    if (f.has_section("notch")) {
        Segment s;
        s.a.x = detail::to_double(require("notch", "x0"), path("notch", "x0"));
        s.a.y = detail::to_double(require("notch", "y0"), path("notch", "y0"));
        s.b.x = detail::to_double(require("notch", "x1"), path("notch", "x1"));
        s.b.y = detail::to_double(require("notch", "y1"), path("notch", "y1"));
        c.notch = s;
    }

    if (auto v = f.take("output", "directory")) c.out_dir = *v;
    if (auto v = f.take("output", "formats")) {
        c.write_ledger = c.write_snapshots = c.write_crack = false;
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::KvFile::trim(item);
            if (item == "ledger") c.write_ledger = true;
            else if (item == "snapshots") c.write_snapshots = true;
            else if (item == "crack") c.write_crack = true;
            else if (!item.empty())
                throw ConfigError("key 'output.formats': unknown format '" + item +
                                  "' (expected ledger, snapshots, crack)");
        }
    }

    f.reject_unconsumed();
    c.validate();
    return c;
}

inline RunConfig parse_config(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw ConfigError("cannot open config file: " + file_path);
    return parse_config_stream(in, file_path);
}

// Canonical serialization; parses back to an identical config and feeds the
// config hash stamped into every output file.
inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "[domain]\n"
       << "L = " << c.domain.L << "\n"
       << "H = " << c.domain.H << "\n"
       << "h = " << c.domain.h << "\n"
       << "epsilon = " << c.domain.eps << "\n\n"
       << "[material]\n"
       << "E = " << c.material.E << "\n"
       << "nu = " << c.material.nu << "\n"
       << "rho = " << c.material.rho << "\n"
       << "Gc = " << c.material.Gc << "\n\n"
       << "[model]\n"
       << "r_break_factor = " << c.r_break_factor << "\n"
       << "profile = " << c.profile << "\n"
       << "damage_form = " << c.damage_form << "\n"
       << "x_D = " << c.x_D << "\n"
       << "r_D_minus_r_plus = " << c.r_D_minus_r_plus << "\n\n"
       << "[load]\n"
       << "b = " << c.load.b << "\n"
       << "divide_by_epsilon = " << (c.load.divide_by_epsilon ? "true" : "false") << "\n\n"
       << "[time]\n"
       << "dt = " << c.dt << "\n"
       << "t_end = " << c.t_end << "\n"
       << "snapshot_every = " << c.snapshot_every << "\n";
    if (c.notch) {
        os << "\n[notch]\n"
           << "x0 = " << c.notch->a.x << "\n"
           << "y0 = " << c.notch->a.y << "\n"
           << "x1 = " << c.notch->b.x << "\n"
           << "y1 = " << c.notch->b.y << "\n";
    }
    os << "\n[output]\n"
       << "directory = " << c.out_dir << "\n"
       << "formats = ";
    bool first = true;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!first) os << ",";
        os << name;
        first = false;
    };
    add(c.write_ledger, "ledger");
    add(c.write_snapshots, "snapshots");
    add(c.write_crack, "crack");
    os << "\n";
    return os.str();
}

// FNV-1a over the canonical serialization.
inline std::uint64_t config_hash(const RunConfig& c) {
    const std::string s = serialize_config(c);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace perifrac
