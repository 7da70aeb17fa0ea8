#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hermite.hpp"

namespace grinprop {

enum class Regime { exact, paraxial };

inline Regime regime_from_string(const std::string& s) {
    if (s == "exact") return Regime::exact;
    if (s == "paraxial") return Regime::paraxial;
    throw ConfigError("unknown regime '" + s + "' (expected exact or paraxial)");
}

struct WaveguideSpec {
    double n0 = 1.5;          // on-axis index
    double omega = 7e-3;      // gradient parameter, um^-1
    double wavelength = 0.63; // vacuum wavelength, um

    double k() const { return 2.0 * M_PI / wavelength; }

    void validate() const {
        if (!(n0 > 1.0) || !std::isfinite(n0)) throw ConfigError("waveguide.n0 must be > 1 and finite");
        if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("waveguide.omega must be positive and finite");
        if (!(wavelength > 0.0) || !std::isfinite(wavelength)) throw ConfigError("waveguide.lambda must be positive and finite");
    }
};

// Largest m with 2 (omega/k)(m + 1/2) < n0^2; modes above are evanescent.
inline int m_guided(const WaveguideSpec& spec) {
    spec.validate();
    double cutoff = spec.k() * spec.n0 * spec.n0 / (2.0 * spec.omega) - 0.5;
    if (cutoff >= static_cast<double>(std::numeric_limits<int>::max()))
        return std::numeric_limits<int>::max();  // no cutoff within any requested M
    return static_cast<int>(std::floor(cutoff));
}

inline double beta(const WaveguideSpec& spec, int m, Regime regime) {
    if (m < 0) throw ConfigError("beta: mode index must be >= 0");
    double k = spec.k();
    if (regime == Regime::paraxial)
        return k * spec.n0 - (spec.omega / spec.n0) * (m + 0.5);
    double u = 2.0 * spec.omega * (m + 0.5) / (k * spec.n0 * spec.n0);
    if (u >= 1.0)
        throw ConfigError("beta: mode " + std::to_string(m) + " is beyond the guided-mode cutoff");
    return k * spec.n0 * std::sqrt(1.0 - u);
}

// beta_m - beta_r without cancellation: the exact branch rewrites the
// sqrt difference as a quotient, which keeps full relative accuracy even
// when the two values agree to 7+ digits.
inline double beta_diff(const WaveguideSpec& spec, int m, int r, Regime regime) {
    if (m < 0 || r < 0) throw ConfigError("beta_diff: mode index must be >= 0");
    double k = spec.k();
    if (regime == Regime::paraxial)
        return (spec.omega / spec.n0) * static_cast<double>(r - m);
    double kn2 = k * spec.n0 * spec.n0;
    double um = 2.0 * spec.omega * (m + 0.5) / kn2;
    double ur = 2.0 * spec.omega * (r + 0.5) / kn2;
    if (um >= 1.0 || ur >= 1.0)
        throw ConfigError("beta_diff: mode beyond the guided-mode cutoff");
    return k * spec.n0 * (ur - um) / (std::sqrt(1.0 - um) + std::sqrt(1.0 - ur));
}

struct CharacteristicLengths {
    double L_osc;            // pi n0 / omega, um
    double z_rev_estimate;   // pi n0 / eta with eta = omega^2/(k n0^2); estimate only
    double z_cat_estimate;   // z_rev_estimate / 2; estimate only
    double w0;               // fundamental-mode waist sqrt(2/(k omega)), um
};

// The two z estimates come from the quadratic expansion of beta_m and are
// rough; the numerical cat finder is authoritative for the actual distance.
inline CharacteristicLengths characteristic_lengths(const WaveguideSpec& spec) {
    spec.validate();
    double k = spec.k();
    double eta = spec.omega * spec.omega / (k * spec.n0 * spec.n0);
    CharacteristicLengths L;
    L.L_osc = M_PI * spec.n0 / spec.omega;
    L.z_rev_estimate = M_PI * spec.n0 / eta;
    L.z_cat_estimate = 0.5 * L.z_rev_estimate;
    L.w0 = std::sqrt(2.0 / (k * spec.omega));
    return L;
}

struct ModeBasis {
    WaveguideSpec spec;
    int M = 0;            // retained modes 0..M-1
    double scale = 0.0;   // sqrt(k omega), um^-1
    std::vector<double> betas_exact;
    std::vector<double> betas_paraxial;

    double mode(int m, double x) const {
        if (m < 0 || m >= M) throw ConfigError("waveguide_mode: m out of range 0.." + std::to_string(M - 1));
        return hg_eval(m, scale, 0.0, x);
    }
    // out[m] = psi_m(x) for m = 0..M-1
    void mode_row(double x, double* out) const {
        hg_eval_row(M - 1, scale, 0.0, x, out);
    }
    const std::vector<double>& betas(Regime r) const {
        return r == Regime::exact ? betas_exact : betas_paraxial;
    }
};

inline ModeBasis make_basis(const WaveguideSpec& spec, int M) {
    spec.validate();
    if (M < 1) throw ConfigError("mode basis: need at least one mode");
    int mg = m_guided(spec);
    if (M - 1 > mg)
        throw ConfigError("mode basis: M = " + std::to_string(M) + " exceeds guided-mode cutoff "
                          + std::to_string(mg));
    ModeBasis basis;
    basis.spec = spec;
    basis.M = M;
    basis.scale = std::sqrt(spec.k() * spec.omega);
    basis.betas_exact.resize(M);
    basis.betas_paraxial.resize(M);
    for (int m = 0; m < M; ++m) {
        basis.betas_exact[m] = beta(spec, m, Regime::exact);
        basis.betas_paraxial[m] = beta(spec, m, Regime::paraxial);
    }
    return basis;
}

inline double waveguide_mode(const ModeBasis& basis, int m, double x) { return basis.mode(m, x); }

// Retained-mode heuristic from phase-space containment: the basis spans a
// disk of radius sqrt(2M) in the normalized plane (s x, q/s), s = sqrt(k omega),
// while the source ensemble occupies an ellipse of semi-axes u/s_src in
// position and u s_src in local wavenumber around x0, u = sqrt(2P+1) plus a
// tail pad. The coupling completeness check is the actual safety net;
// callers grow M and retry when it trips.
inline int default_mode_count(const WaveguideSpec& spec, double c, int P, double x0) {
    spec.validate();
    double s_wg = std::sqrt(spec.k() * spec.omega);
    double s_src = std::sqrt(2.0 * c);
    double u = std::sqrt(2.0 * P + 1.0) + 4.0;
    double xr = s_wg * (std::abs(x0) + u / s_src);
    double qr = u * s_src / s_wg;
    int M = static_cast<int>(std::ceil(0.5 * (xr * xr + qr * qr))) + 30;
    M = std::max(M, 16);
    int mg = m_guided(spec);
    if (mg < std::numeric_limits<int>::max() - 1) M = std::min(M, mg + 1);
    return M;
}

} // namespace grinprop
