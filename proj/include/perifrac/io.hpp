#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "perifrac/analysis.hpp"
#include "perifrac/config.hpp"
#include "perifrac/version.hpp"

namespace perifrac {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string format_hash(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Comment line stamped at the top of every emitted file.
inline std::string file_header(std::uint64_t cfg_hash) {
    return "# perifrac " + std::string(kVersion) + " config=" + format_hash(cfg_hash) + "\n";
}

inline std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);  // 17 significant digits
    return buf;
}

inline std::ofstream open_output(const std::filesystem::path& p) {
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + p.string());
    return out;
}

// Energies per unit thickness; header row t,K,E,D,F,W_ext,residual.
inline void write_ledger_csv(const std::filesystem::path& p, const EnergyLedger& ledger,
                             std::uint64_t cfg_hash) {
    std::ofstream out = open_output(p);
    out << file_header(cfg_hash);
    out << "t,K,E,D,F,W_ext,residual\n";
    for (const auto& r : ledger.rows) {
        out << sci(r.t) << ',' << sci(r.K) << ',' << sci(r.E) << ',' << sci(r.D) << ',' << sci(r.F)
            << ',' << sci(r.W_ext) << ',' << sci(r.residual) << '\n';
    }
    if (!out) throw IoError("write failed: " + p.string());
}

inline void write_snapshot_csv(const std::filesystem::path& p, const ParticleGrid& g,
                               const std::vector<Vec2>& u, const FieldSnapshot& s,
                               std::uint64_t cfg_hash) {
    std::ofstream out = open_output(p);
    out << file_header(cfg_hash);
    out << "x,y,ux,uy,phi,W,Z\n";
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        out << sci(g.pos[n].x) << ',' << sci(g.pos[n].y) << ',' << sci(u[n].x) << ',' << sci(u[n].y)
            << ',' << sci(s.phi[n]) << ',' << sci(s.W[n]) << ',' << sci(s.Z[n]) << '\n';
    }
    if (!out) throw IoError("write failed: " + p.string());
}

struct CrackRow {
    double t = 0.0;
    int component_count = 0;
    double tip_x = 0.0;
    double tip_y = 0.0;
};

inline void write_crack_csv(const std::filesystem::path& p, const std::vector<CrackRow>& rows,
                            std::uint64_t cfg_hash) {
    std::ofstream out = open_output(p);
    out << file_header(cfg_hash);
    out << "t,component_count,tip_x,tip_y\n";
    for (const auto& r : rows) {
        out << sci(r.t) << ',' << r.component_count << ',' << sci(r.tip_x) << ',' << sci(r.tip_y)
            << '\n';
    }
    if (!out) throw IoError("write failed: " + p.string());
}

}  // namespace perifrac
