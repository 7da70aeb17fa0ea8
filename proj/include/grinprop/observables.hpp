#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>

#include "errors.hpp"
#include "evolution.hpp"
#include "source.hpp"
#include "waveguide.hpp"

namespace grinprop {

struct Moments {
    double mean_x = 0.0;    // um
    double mean_p = 0.0;    // rad
    double sigma_x2 = 0.0;  // um^2
    double sigma_p2 = 0.0;  // rad^2
    double sigma_xp = 0.0;  // um rad
};

namespace detail {

// Expectation values from the three central bands of G. Convention
// [x, p] = i/k: <m|x|m+1> = sqrt((m+1)/(2 k omega)),
// <m|p|m+1> = -i sqrt(omega (m+1)/(2k)); the fundamental mode then
// saturates sigma_x2 sigma_p2 = 1/4k^2 and has nu = 1.
inline Moments moments_banded(const Eigen::VectorXd& d0, const Eigen::VectorXcd& b1,
                              const Eigen::VectorXcd& b2, double k, double omega) {
    double tr = d0.sum();
    if (!(tr > 0.0)) throw NumericalGuardError("moments: non-positive trace");
    int M = static_cast<int>(d0.size());
    double kw = k * omega;
    double sx = 0.0, sp = 0.0, x2 = 0.0, p2 = 0.0, xp = 0.0, n2 = 0.0;
    for (int m = 0; m + 1 < M; ++m) {
        double x1 = std::sqrt((m + 1) / (2.0 * kw));
        double q1 = std::sqrt(omega * (m + 1) / (2.0 * k));
        sx += 2.0 * b1(m).real() * x1;
        sp += -2.0 * b1(m).imag() * q1;
    }
    for (int m = 0; m < M; ++m) n2 += d0(m) * (2.0 * m + 1.0);
    for (int m = 0; m + 2 < M; ++m) {
        double g2 = std::sqrt((m + 1.0) * (m + 2.0));
        x2 += 2.0 * b2(m).real() * g2;
        p2 -= 2.0 * b2(m).real() * g2;
        xp -= b2(m).imag() * g2 / k;
    }
    Moments mo;
    mo.mean_x = sx / tr;
    mo.mean_p = sp / tr;
    mo.sigma_x2 = (n2 + x2) / (2.0 * kw) / tr - mo.mean_x * mo.mean_x;
    mo.sigma_p2 = (n2 + p2) * omega / (2.0 * k) / tr - mo.mean_p * mo.mean_p;
    mo.sigma_xp = xp / tr - mo.mean_x * mo.mean_p;
    if (!(mo.sigma_x2 > 0.0) || !(mo.sigma_p2 > 0.0))
        throw NumericalGuardError("moments: non-positive variance");
    return mo;
}

} // namespace detail

inline Moments moments(const CoherenceMatrix& cm, const ModeBasis& basis) {
    if (cm.M() != basis.M) throw ConfigError("moments: matrix size does not match basis");
    int M = cm.M();
    Eigen::VectorXd d0 = cm.G.diagonal().real();
    Eigen::VectorXcd b1(std::max(M - 1, 0)), b2(std::max(M - 2, 0));
    for (int m = 0; m + 1 < M; ++m) b1(m) = cm.G(m, m + 1);
    for (int m = 0; m + 2 < M; ++m) b2(m) = cm.G(m, m + 2);
    return detail::moments_banded(d0, b1, b2, basis.spec.k(), basis.spec.omega);
}

// Eq-of-motion moments define the coherence radius through
// 1/r_c^2 = k^2 (sigma_x2 sigma_p2 - sigma_xp^2 - 1/4k^2) / (2 sigma_x2);
// a coherent state drives the numerator to zero, reported as infinity.
inline double coherence_radius(const Moments& mo, double k) {
    double quarter = 1.0 / (4.0 * k * k);
    // Saturation guard: basis truncation at the completeness tolerance leaks
    // ~1e-10 relative into the uncertainty product, so excesses below 1e-9
    // are numerical noise and the state counts as fully coherent.
    double num = mo.sigma_x2 * mo.sigma_p2 - mo.sigma_xp * mo.sigma_xp - quarter;
    double eps = 1e-9 * quarter;
    if (num <= eps) return std::numeric_limits<double>::infinity();
    double inv_rc2 = k * k * num / (2.0 * mo.sigma_x2);
    return 1.0 / std::sqrt(inv_rc2);
}

inline double squeezing(const Moments& mo, double omega) {
    return omega * std::sqrt(mo.sigma_x2 / mo.sigma_p2);
}

// mu^2 = sum |G_mn|^2 / (tr G)^2; phases drop out, so this is z-invariant.
inline double purity_numeric(const CoherenceMatrix& cm) {
    double tr = cm.trace_real();
    if (!(tr > 0.0)) throw NumericalGuardError("purity: non-positive trace");
    return cm.G.squaredNorm() / (tr * tr);
}

struct ObservableRecord {
    double z = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double sigma_x2 = 0.0;
    double sigma_p2 = 0.0;
    double sigma_xp = 0.0;
    double r_c = 0.0;      // um, may be inf
    double nu = 0.0;       // omega sigma_x / sigma_p
    double up_h = 0.0;     // sigma_x2 sigma_p2
    double up_sr = 0.0;    // sigma_x2 sigma_p2 - sigma_xp^2
    double purity = 0.0;
    double entropy = 0.0;
};

inline ObservableRecord make_record(double z, const Moments& mo, double k, double omega,
                                    double purity, double S) {
    ObservableRecord rec;
    rec.z = z;
    rec.mean_x = mo.mean_x;
    rec.mean_p = mo.mean_p;
    rec.sigma_x2 = mo.sigma_x2;
    rec.sigma_p2 = mo.sigma_p2;
    rec.sigma_xp = mo.sigma_xp;
    rec.up_h = mo.sigma_x2 * mo.sigma_p2;
    rec.up_sr = rec.up_h - mo.sigma_xp * mo.sigma_xp;
    rec.r_c = coherence_radius(mo, k);
    rec.nu = squeezing(mo, omega);
    rec.purity = purity;
    rec.entropy = S;
    return rec;
}

// Dense composition: evolve, take moments, attach the z-invariant scalars.
inline ObservableRecord record_at(double z, const CouplingMatrix& coupling,
                                  const SourceDecomposition& dec, const ModeBasis& basis,
                                  Regime regime) {
    CoherenceMatrix cm = gamma_at(coupling, dec, basis, z, regime);
    Moments mo = moments(cm, basis);
    return make_record(z, mo, basis.spec.k(), basis.spec.omega, purity_numeric(cm), entropy(dec));
}

} // namespace grinprop
