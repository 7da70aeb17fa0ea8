#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "grinprop/commands.hpp"
#include "grinprop/config.hpp"

namespace {

grinprop::RunConfig resolve_config(const std::string& path, const std::vector<std::string>& sets) {
    grinprop::RunConfig cfg;
    if (!path.empty()) cfg = grinprop::load_config(path);
    for (const auto& kv : sets) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw grinprop::ConfigError("--set expects key=value, got '" + kv + "'");
        grinprop::apply_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partially coherent beam propagation in a parabolic graded-index waveguide"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--set", sets, "override a config key, e.g. --set source.a0=12");

    // let --config / --set appear after the subcommand name too
    auto* scan = app.add_subcommand("scan", "observables vs distance, CSV per regime");
    scan->fallthrough();

    double z = 0.0;
    bool split = true;
    bool no_split = false;
    auto* profile = app.add_subcommand("profile", "intensity profile at one distance");
    profile->fallthrough();
    profile->add_option("--z", z, "propagation distance, um")->required();
    profile->add_flag("--no-split", no_split, "omit the diagonal/cross columns");

    double zmix = 0.0;
    auto* mixture = app.add_subcommand("mixture", "+x0/-x0 profiles, overlay and incoherent sum");
    mixture->fallthrough();
    mixture->add_option("--z", zmix, "propagation distance, um")->required();

    auto* findcat = app.add_subcommand("find-cat", "locate the recoherence (cat) distance");
    findcat->fallthrough();

    double ratio_min = 0.1, ratio_max = 10.0;
    int ratio_count = 25;
    auto* purity = app.add_subcommand("purity-curve", "purity and entropy vs r0/a0 at fixed a0");
    purity->fallthrough();
    purity->add_option("--ratio-min", ratio_min, "smallest r0/a0");
    purity->add_option("--ratio-max", ratio_max, "largest r0/a0");
    purity->add_option("--count", ratio_count, "number of ratio samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // bad usage is a config error
    }

    try {
        grinprop::RunConfig cfg = resolve_config(config_path, sets);
        if (scan->parsed()) grinprop::cmd_scan(cfg);
        else if (profile->parsed()) grinprop::cmd_profile(cfg, z, split && !no_split);
        else if (mixture->parsed()) grinprop::cmd_mixture(cfg, zmix);
        else if (findcat->parsed()) grinprop::cmd_find_cat(cfg);
        else if (purity->parsed()) grinprop::cmd_purity_curve(cfg, ratio_min, ratio_max, ratio_count);
    } catch (const grinprop::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const grinprop::NumericalGuardError& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
