#pragma once

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace grinprop {

namespace detail {

inline constexpr double kLog2E = 1.4426950408889634073599246810018921;

// phi_0(u) = pi^{-1/4} exp(-u^2/2) as mantissa * 2^e2. For |u| beyond ~38 the
// plain double value underflows even though phi_n(u) at the same u is O(1)
// once n exceeds u^2/2, so the whole recurrence runs in this split form.
inline void phi0_scaled(double u, double& f, long& e2) {
    const double log2_prefac = -0.25 * std::log2(M_PI);
    double l2 = log2_prefac - 0.5 * u * u * kLog2E;
    double fl = std::floor(l2);
    e2 = static_cast<long>(fl);
    f = std::exp2(l2 - fl);
}

inline void renorm_pair(double& a, double& b, long& e2) {
    double m = std::max(std::abs(a), std::abs(b));
    if (m > 0x1p512) {
        a *= 0x1p-512;
        b *= 0x1p-512;
        e2 += 512;
    } else if (m > 0.0 && m < 0x1p-512) {
        a *= 0x1p512;
        b *= 0x1p512;
        e2 -= 512;
    }
}

inline double ldexp_clamped(double f, long e2) {
    if (e2 < -2200) return 0.0;
    return std::ldexp(f, static_cast<int>(e2));
}

} // namespace detail

// Normalized Hermite function phi_n(u) = pi^{-1/4} (2^n n!)^{-1/2} e^{-u^2/2} H_n(u).
// Three-term recurrence on phi_n itself; no factorials, no raw H_n.
inline double hermite_phi(int n, double u) {
    if (n < 0) throw ConfigError("hermite_phi: order must be >= 0");
    if (!std::isfinite(u)) throw ConfigError("hermite_phi: non-finite argument");
    double f_prev, f_cur;
    long e2;
    detail::phi0_scaled(u, f_prev, e2);
    if (n == 0) return detail::ldexp_clamped(f_prev, e2);
    f_cur = std::sqrt(2.0) * u * f_prev;
    for (int j = 1; j < n; ++j) {
        double f_next = std::sqrt(2.0 / (j + 1)) * u * f_cur
                      - std::sqrt(static_cast<double>(j) / (j + 1)) * f_prev;
        f_prev = f_cur;
        f_cur = f_next;
        detail::renorm_pair(f_prev, f_cur, e2);
    }
    return detail::ldexp_clamped(f_cur, e2);
}

// Fills out[0..nmax] with phi_0(u) .. phi_nmax(u) in one recurrence sweep.
inline void hermite_phi_row(int nmax, double u, double* out) {
    if (nmax < 0) throw ConfigError("hermite_phi_row: order must be >= 0");
    if (!std::isfinite(u)) throw ConfigError("hermite_phi_row: non-finite argument");
    double f_prev, f_cur;
    long e2;
    detail::phi0_scaled(u, f_prev, e2);
    out[0] = detail::ldexp_clamped(f_prev, e2);
    if (nmax == 0) return;
    f_cur = std::sqrt(2.0) * u * f_prev;
    out[1] = detail::ldexp_clamped(f_cur, e2);
    for (int j = 1; j < nmax; ++j) {
        double f_next = std::sqrt(2.0 / (j + 1)) * u * f_cur
                      - std::sqrt(static_cast<double>(j) / (j + 1)) * f_prev;
        f_prev = f_cur;
        f_cur = f_next;
        detail::renorm_pair(f_prev, f_cur, e2);
        out[j + 1] = detail::ldexp_clamped(f_cur, e2);
    }
}

struct HermiteGaussEval {
    int n = 0;        // order
    double s = 1.0;   // inverse-length scale, um^-1
    double center = 0.0;
};

// sqrt(s) * phi_n(s (x - center)); L2-normalized in x for any s > 0.
// Source modes use s = sqrt(2c), waveguide modes s = sqrt(k omega).
inline double hg_eval(int n, double s, double center, double x) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("hg_eval: scale must be positive and finite");
    if (!std::isfinite(x)) throw ConfigError("hg_eval: non-finite evaluation point");
    return std::sqrt(s) * hermite_phi(n, s * (x - center));
}

inline double hg_eval(const HermiteGaussEval& e, double x) {
    return hg_eval(e.n, e.s, e.center, x);
}

// Row variant: out[m] = sqrt(s) * phi_m(s (x - center)) for m = 0..nmax.
inline void hg_eval_row(int nmax, double s, double center, double x, double* out) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("hg_eval_row: scale must be positive and finite");
    if (!std::isfinite(x)) throw ConfigError("hg_eval_row: non-finite evaluation point");
    hermite_phi_row(nmax, s * (x - center), out);
    double rs = std::sqrt(s);
    for (int m = 0; m <= nmax; ++m) out[m] *= rs;
}

} // namespace grinprop
