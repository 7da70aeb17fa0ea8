#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "evolution.hpp"
#include "observables.hpp"

namespace grinprop {

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::ofstream open_csv(const std::string& path, const std::string& provenance) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file '" + path + "'");
    os << "# " << provenance << "\n";
    return os;
}

} // namespace detail

inline void write_scan_csv(const std::string& path, const std::string& provenance,
                           const std::vector<ObservableRecord>& recs) {
    auto os = detail::open_csv(path, provenance);
    os << "z_um,sigma_x2,sigma_p2,sigma_xp,r_c_um,nu,up_h,up_sr,purity,entropy\n";
    for (const auto& r : recs) {
        os << detail::fmt(r.z) << ',' << detail::fmt(r.sigma_x2) << ',' << detail::fmt(r.sigma_p2)
           << ',' << detail::fmt(r.sigma_xp) << ',' << detail::fmt(r.r_c) << ',' << detail::fmt(r.nu)
           << ',' << detail::fmt(r.up_h) << ',' << detail::fmt(r.up_sr) << ',' << detail::fmt(r.purity)
           << ',' << detail::fmt(r.entropy) << '\n';
    }
}

inline void write_profile_csv(const std::string& path, const std::string& provenance,
                              const IntensityProfile& prof, bool split = true) {
    auto os = detail::open_csv(path, provenance);
    if (split) {
        os << "x_um,I_total,I_diagonal,I_cross\n";
        for (int i = 0; i < prof.size(); ++i) {
            os << detail::fmt(prof.grid[i]) << ',' << detail::fmt(prof.total[i]) << ','
               << detail::fmt(prof.diagonal_part[i]) << ',' << detail::fmt(prof.cross_part[i]) << '\n';
        }
    } else {
        os << "x_um,I_total\n";
        for (int i = 0; i < prof.size(); ++i)
            os << detail::fmt(prof.grid[i]) << ',' << detail::fmt(prof.total[i]) << '\n';
    }
}

// Two profiles on a shared grid, e.g. the +x0/-x0 overlay.
inline void write_overlay_csv(const std::string& path, const std::string& provenance,
                              const IntensityProfile& a, const IntensityProfile& b,
                              const std::string& col_a, const std::string& col_b) {
    if (a.grid != b.grid) throw ConfigError("overlay: grid mismatch");
    auto os = detail::open_csv(path, provenance);
    os << "x_um," << col_a << ',' << col_b << '\n';
    for (int i = 0; i < a.size(); ++i)
        os << detail::fmt(a.grid[i]) << ',' << detail::fmt(a.total[i]) << ',' << detail::fmt(b.total[i]) << '\n';
}

struct PurityCurveRow {
    double ratio;
    double r0;
    double purity_closed;
    double purity_numeric;
    double entropy;
};

inline void write_purity_csv(const std::string& path, const std::string& provenance,
                             const std::vector<PurityCurveRow>& rows) {
    auto os = detail::open_csv(path, provenance);
    os << "ratio,r0_um,purity_closed,purity_numeric,entropy\n";
    for (const auto& r : rows) {
        os << detail::fmt(r.ratio) << ',' << detail::fmt(r.r0) << ',' << detail::fmt(r.purity_closed)
           << ',' << detail::fmt(r.purity_numeric) << ',' << detail::fmt(r.entropy) << '\n';
    }
}

} // namespace grinprop
