#pragma once

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "engine.hpp"
#include "errors.hpp"

namespace grinprop {

namespace detail {

inline std::string out_path(const RunConfig& cfg, const std::string& stem) {
    std::filesystem::create_directories(cfg.outputs.directory);
    return (std::filesystem::path(cfg.outputs.directory) / (cfg.outputs.prefix + "_" + stem)).string();
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

} // namespace detail

// Observable scan over [z_min, z_max]; regime "both" emits one file per regime.
inline void cmd_scan(const RunConfig& cfg, std::ostream& log = std::cout) {
    cfg.validate();
    Engine engine = Engine::build(cfg.source, cfg.waveguide, cfg.numerics);
    auto zs = detail::linspace(cfg.scan.z_min, cfg.scan.z_max, cfg.scan.n_z);
    std::vector<std::string> regimes;
    if (cfg.scan.regime == "both") regimes = {"exact", "paraxial"};
    else regimes = {cfg.scan.regime};
    for (const auto& name : regimes) {
        auto recs = engine.scan(zs, regime_from_string(name), cfg.scan.threads);
        std::string path = detail::out_path(cfg, "scan_" + name + ".csv");
        write_scan_csv(path, config_provenance(cfg), recs);
        log << "wrote " << path << " (" << recs.size() << " rows, M = " << engine.basis.M
            << ", P = " << engine.dec.P << ")\n";
    }
}

inline void cmd_profile(const RunConfig& cfg, double z, bool split, std::ostream& log = std::cout) {
    cfg.validate();
    if (!std::isfinite(z) || z < 0) throw ConfigError("profile: z must be finite and >= 0");
    Engine engine = Engine::build(cfg.source, cfg.waveguide, cfg.numerics);
    Regime regime = cfg.scan.regime == "both" ? Regime::exact : regime_from_string(cfg.scan.regime);
    IntensityProfile prof = engine.profile(z, regime);
    std::string path = detail::out_path(cfg, "profile.csv");
    write_profile_csv(path, config_provenance(cfg) + " z=" + detail::fmt(z), prof, split);
    log << "wrote " << path << " (z = " << detail::fmt(z) << ", M = " << engine.basis.M << ")\n";
}

// Cat profiles for +x0 and -x0 launches, their overlay, and the equal-weight
// incoherent sum; prints fringe visibilities in the central window.
inline void cmd_mixture(const RunConfig& cfg, double z, std::ostream& log = std::cout) {
    cfg.validate();
    if (!std::isfinite(z) || z < 0) throw ConfigError("mixture: z must be finite and >= 0");
    Regime regime = cfg.scan.regime == "both" ? Regime::exact : regime_from_string(cfg.scan.regime);

    RunConfig cfg_neg = cfg;
    cfg_neg.source.x0 = -cfg.source.x0;
    Engine eng_pos = Engine::build(cfg.source, cfg.waveguide, cfg.numerics);
    Engine eng_neg = Engine::build(cfg_neg.source, cfg.waveguide, cfg.numerics);
    auto grid = eng_pos.default_grid();
    IntensityProfile plus = eng_pos.profile(z, regime, grid);
    IntensityProfile minus = eng_neg.profile(z, regime, grid);
    IntensityProfile sum = mixture_profile({plus, minus}, {0.5, 0.5});

    std::string prov = config_provenance(cfg) + " z=" + detail::fmt(z);
    write_profile_csv(detail::out_path(cfg, "mixture_pos.csv"), prov, plus);
    write_profile_csv(detail::out_path(cfg, "mixture_neg.csv"), prov, minus);
    write_overlay_csv(detail::out_path(cfg, "mixture_overlay.csv"), prov, plus, minus, "I_pos", "I_neg");
    write_profile_csv(detail::out_path(cfg, "mixture_sum.csv"), prov, sum);

    double halfwin = std::abs(cfg.source.x0) > 0 ? std::abs(cfg.source.x0) / 2.0
                                                 : (grid.back() - grid.front()) / 8.0;
    auto vp = fringe_visibility(plus, -halfwin, halfwin);
    auto vm = fringe_visibility(minus, -halfwin, halfwin);
    auto vs = fringe_visibility(sum, -halfwin, halfwin);
    log << "visibility_pos=" << detail::fmt(vp.value) << " fringes=" << vp.fringes << "\n";
    log << "visibility_neg=" << detail::fmt(vm.value) << " fringes=" << vm.fringes << "\n";
    log << "visibility_sum=" << detail::fmt(vs.value) << " fringes=" << vs.fringes << "\n";
    log << "wrote " << detail::out_path(cfg, "mixture_{pos,neg,overlay,sum}.csv") << "\n";
}

inline Engine::FindCatResult cmd_find_cat(const RunConfig& cfg, std::ostream& log = std::cout) {
    cfg.validate();
    Engine engine = Engine::build(cfg.source, cfg.waveguide, cfg.numerics);
    Regime regime = cfg.scan.regime == "both" ? Regime::exact : regime_from_string(cfg.scan.regime);
    auto res = engine.find_cat(regime, cfg.scan.threads);
    CharacteristicLengths L = characteristic_lengths(cfg.waveguide);
    log << "found=" << (res.found ? 1 : 0) << "\n";
    if (res.found) {
        log << "z_cat_um=" << detail::fmt(res.z_cat) << "\n";
        log << "r_c_um=" << detail::fmt(res.r_c) << "\n";
        log << "nu_env=" << detail::fmt(res.nu_env) << "\n";
        log << "ratio_vs_estimate=" << detail::fmt(res.ratio) << "\n";
    }
    log << "z_rev_estimate_um=" << detail::fmt(L.z_rev_estimate) << "\n";
    log << "message=" << res.message << "\n";
    return res;
}

// Purity / entropy sweep in r0/a0 at fixed a0. Numeric purity runs the full
// Frobenius sum in the waveguide basis per point; closed form is the geometric
// spectrum value.
inline void cmd_purity_curve(const RunConfig& cfg, double ratio_min, double ratio_max, int count,
                             std::ostream& log = std::cout) {
    cfg.validate();
    if (!(ratio_min > 0) || !(ratio_max >= ratio_min)) throw ConfigError("purity-curve: need 0 < ratio_min <= ratio_max");
    if (count < 1) throw ConfigError("purity-curve: count must be >= 1");
    std::vector<PurityCurveRow> rows;
    rows.reserve(count);
    for (int i = 0; i < count; ++i) {
        double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        double ratio = ratio_min * std::pow(ratio_max / ratio_min, t);
        SourceSpec src = cfg.source;
        src.r0 = ratio * src.a0;
        Engine engine = Engine::build(src, cfg.waveguide, cfg.numerics);
        PurityCurveRow row;
        row.ratio = ratio;
        row.r0 = src.r0;
        row.purity_closed = purity_closed_form(engine.dec);
        row.purity_numeric = engine.purity0;
        row.entropy = engine.entropy0;
        rows.push_back(row);
    }
    std::string path = detail::out_path(cfg, "purity.csv");
    write_purity_csv(path, config_provenance(cfg), rows);
    log << "wrote " << path << " (" << rows.size() << " rows)\n";
}

} // namespace grinprop
