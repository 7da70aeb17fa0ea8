#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "hermite.hpp"

namespace grinprop {

struct SourceSpec {
    double a0 = 10.0;  // beam width, um
    double r0 = 10.0;  // coherence radius, um; infinity = fully coherent
    double x0 = 0.0;   // transverse displacement, um
    double I0 = 1.0;   // peak intensity, arbitrary units

    bool coherent() const { return std::isinf(r0); }

    void validate() const {
        if (!(a0 > 0.0) || !std::isfinite(a0)) throw ConfigError("source.a0 must be positive and finite");
        if (!(r0 > 0.0)) throw ConfigError("source.r0 must be positive (may be inf)");
        if (!std::isfinite(x0)) throw ConfigError("source.x0 must be finite");
        if (!(I0 > 0.0) || !std::isfinite(I0)) throw ConfigError("source.I0 must be positive and finite");
    }
};

// Two-point correlation of the launch field:
// Gamma(x, x', 0) = I0 exp{-(x^2 + x'^2)/a0^2 - (x - x')^2/r0^2},
// displaced arguments handled by the caller.
inline double gamma0(const SourceSpec& s, double x, double xp) {
    double cross = s.coherent() ? 0.0 : (x - xp) * (x - xp) / (s.r0 * s.r0);
    return s.I0 * std::exp(-(x * x + xp * xp) / (s.a0 * s.a0) - cross);
}

struct SourceDecomposition {
    double c = 0.0;                  // mode parameter, um^-2
    double xi = 0.0;                 // spectral ratio, lambda_bar[p] = (1-xi) xi^p
    std::vector<double> lambda_bar;  // normalized eigenvalues, p = 0..P
    int P = 0;                       // truncation order (inclusive)
    double truncated_tail = 0.0;     // xi^{P+1}
    double scale() const { return std::sqrt(2.0 * c); }
};

inline SourceDecomposition decompose(const SourceSpec& spec, double tail_tol = 1e-12) {
    spec.validate();
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw ConfigError("tail_tol must be in (0, 1)");
    SourceDecomposition dec;
    double a = 1.0 / (spec.a0 * spec.a0);
    if (spec.coherent()) {
        dec.c = a;
        dec.xi = 0.0;
        dec.P = 0;
        dec.lambda_bar = {1.0};
        dec.truncated_tail = 0.0;
        return dec;
    }
    double b = 1.0 / (spec.r0 * spec.r0);
    dec.c = std::sqrt(a * a + 2.0 * a * b);
    dec.xi = b / (a + b + dec.c);
    int P = 0;
    double tail = dec.xi;  // xi^{P+1}
    while (tail > tail_tol && P < 100000) {
        ++P;
        tail *= dec.xi;
    }
    dec.P = P;
    dec.truncated_tail = tail;
    dec.lambda_bar.resize(P + 1);
    double lam = 1.0 - dec.xi;
    for (int p = 0; p <= P; ++p) {
        dec.lambda_bar[p] = lam;
        lam *= dec.xi;
    }
    return dec;
}

// Phi_p(x - x0): eigenmode of the source correlation, scale sqrt(2c).
inline double source_mode(const SourceDecomposition& dec, int p, double x, double x0) {
    if (p < 0 || p > dec.P) throw ConfigError("source_mode: p out of range 0.." + std::to_string(dec.P));
    return hg_eval(p, dec.scale(), x0, x);
}

// Sum lambda_bar^2 / (sum lambda_bar)^2 for the untruncated geometric spectrum.
inline double purity_closed_form(const SourceDecomposition& dec) {
    return (1.0 - dec.xi) / (1.0 + dec.xi);
}

// S = -sum lambda_bar ln lambda_bar over the retained spectrum.
inline double entropy(const SourceDecomposition& dec) {
    double s = 0.0;
    for (double l : dec.lambda_bar)
        if (l > 0.0) s -= l * std::log(l);
    return s;
}

} // namespace grinprop
