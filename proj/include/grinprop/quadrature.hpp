#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"

namespace grinprop {

struct QuadratureRule {
    std::vector<double> nodes;    // um
    std::vector<double> weights;  // um
    double x_min = 0.0;
    double x_max = 0.0;
    int points() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre_unit(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    int mhalf = (n + 1) / 2;
    for (int i = 0; i < mhalf; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

} // namespace detail

// Composite 16-point Gauss-Legendre panels over [x_min, x_max]. The requested
// point count is rounded up to a whole number of panels.
inline QuadratureRule build_quadrature(double x_min, double x_max, int points) {
    if (!(x_min < x_max)) throw ConfigError("build_quadrature: x_min must be < x_max");
    if (points < 16) throw ConfigError("build_quadrature: need at least 16 points");
    constexpr int kPanel = 16;
    static const auto unit = [] {
        std::pair<std::vector<double>, std::vector<double>> uw;
        detail::gauss_legendre_unit(kPanel, uw.first, uw.second);
        return uw;
    }();
    int npanels = (points + kPanel - 1) / kPanel;
    QuadratureRule rule;
    rule.x_min = x_min;
    rule.x_max = x_max;
    rule.nodes.reserve(npanels * kPanel);
    rule.weights.reserve(npanels * kPanel);
    double h = (x_max - x_min) / npanels;
    for (int p = 0; p < npanels; ++p) {
        double a = x_min + p * h;
        double mid = a + 0.5 * h;
        for (int i = 0; i < kPanel; ++i) {
            rule.nodes.push_back(mid + 0.5 * h * unit.first[i]);
            rule.weights.push_back(0.5 * h * unit.second[i]);
        }
    }
    return rule;
}

// Point count for an integrand oscillating at up to q_max rad/um over
// [-half_width, half_width]. Caps the phase advance per 16-point panel at
// 8 rad; Gauss-Legendre of that order resolves such a panel to ~1e-17, so
// the composite rule stays at machine accuracy with a comfortable margin.
inline int points_for_oscillation(double half_width, double q_max) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw ConfigError("points_for_oscillation: half_width must be positive and finite");
    if (!(q_max >= 0.0) || !std::isfinite(q_max))
        throw ConfigError("points_for_oscillation: q_max must be >= 0 and finite");
    double phase = 2.0 * half_width * q_max;
    int npanels = std::max(8, static_cast<int>(std::ceil(phase / 8.0)) + 1);
    return 16 * npanels;
}

template <class F>
double integrate(const QuadratureRule& rule, F&& f) {
    double acc = 0.0;
    for (int i = 0; i < rule.points(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

// The rule silently truncates anything outside its window, so callers must
// assert coverage of their integrand support up front.
inline void require_window(const QuadratureRule& rule, double lo, double hi, const std::string& what) {
    if (rule.x_min > lo || rule.x_max < hi) {
        throw NumericalGuardError("quadrature window [" + std::to_string(rule.x_min) + ", "
                                  + std::to_string(rule.x_max) + "] um too narrow for " + what
                                  + " (needs [" + std::to_string(lo) + ", " + std::to_string(hi) + "])");
    }
}

} // namespace grinprop
