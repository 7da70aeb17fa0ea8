#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "coupling.hpp"
#include "errors.hpp"
#include "source.hpp"
#include "waveguide.hpp"

namespace grinprop {

struct CoherenceMatrix {
    Eigen::MatrixXcd G;  // M x M Hermitian, trace ~ 1 (lambda_bar weights)
    double z = 0.0;
    Regime regime = Regime::exact;
    int M() const { return static_cast<int>(G.rows()); }
    double trace_real() const { return G.trace().real(); }
};

// z = 0 coherence matrix in the waveguide basis: G0 = T^t diag(lambda_bar) T,
// real symmetric positive semidefinite.
inline Eigen::MatrixXd gamma0_matrix(const CouplingMatrix& coupling, const SourceDecomposition& dec) {
    if (static_cast<int>(dec.lambda_bar.size()) != coupling.P() + 1)
        throw ConfigError("gamma0_matrix: decomposition and coupling sizes differ");
    Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(dec.lambda_bar.data(), dec.lambda_bar.size());
    Eigen::MatrixXd G0 = coupling.T.transpose() * lam.asDiagonal() * coupling.T;
    return (G0 + G0.transpose()) / 2.0;  // enforce exact symmetry
}

// Mode phases relative to the most occupied mode. Eq-level the common phase
// cancels in G anyway; subtracting it first keeps beta*z products ~1e5 rad
// instead of ~3e7, which preserves the relative phases in double precision.
inline Eigen::VectorXcd mode_phases(const Eigen::MatrixXd& G0, const ModeBasis& basis,
                                    double z, Regime regime) {
    int M = basis.M;
    int ref = 0;
    G0.diagonal().maxCoeff(&ref);
    Eigen::VectorXcd d(M);
    for (int m = 0; m < M; ++m) {
        double ph = beta_diff(basis.spec, m, ref, regime) * z;
        d(m) = std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return d;
}

inline CoherenceMatrix evolve(const Eigen::MatrixXd& G0, const ModeBasis& basis, double z, Regime regime) {
    if (G0.rows() != basis.M || G0.cols() != basis.M)
        throw ConfigError("evolve: G0 size does not match basis");
    if (!std::isfinite(z)) throw ConfigError("evolve: non-finite z");
    Eigen::VectorXcd d = mode_phases(G0, basis, z, regime);
    CoherenceMatrix out;
    out.z = z;
    out.regime = regime;
    out.G = d.asDiagonal() * G0 * d.conjugate().asDiagonal();
    return out;
}

// G[m][n](z) = sum_p lambda_bar[p] T(p,m) T(p,n) exp(i (beta_m - beta_n) z)
inline CoherenceMatrix gamma_at(const CouplingMatrix& coupling, const SourceDecomposition& dec,
                                const ModeBasis& basis, double z, Regime regime) {
    return evolve(gamma0_matrix(coupling, dec), basis, z, regime);
}

// Hermiticity / positive semidefiniteness / trace conservation guards.
inline void validate(const CoherenceMatrix& cm, double trace0) {
    double tr = cm.trace_real();
    if (std::abs(tr - trace0) > 1e-12 * std::abs(trace0))
        throw NumericalGuardError("coherence matrix trace drifted: " + std::to_string(tr)
                                  + " vs " + std::to_string(trace0) + " at z = " + std::to_string(cm.z));
    double herm = (cm.G - cm.G.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12 * std::abs(trace0))
        throw NumericalGuardError("coherence matrix not Hermitian at z = " + std::to_string(cm.z));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cm.G, Eigen::EigenvaluesOnly);
    double lammin = es.eigenvalues().minCoeff();
    if (lammin < -1e-12 * std::abs(tr))
        throw NumericalGuardError("coherence matrix not PSD at z = " + std::to_string(cm.z)
                                  + " (min eigenvalue " + std::to_string(lammin) + ")");
}

struct IntensityProfile {
    std::vector<double> grid;           // x positions, um
    std::vector<double> total;
    std::vector<double> diagonal_part;  // m = n terms: classical mixture
    std::vector<double> cross_part;     // m != n terms: coherence / fringes
    int size() const { return static_cast<int>(grid.size()); }
    void scale(double f) {
        for (auto& v : total) v *= f;
        for (auto& v : diagonal_part) v *= f;
        for (auto& v : cross_part) v *= f;
    }
};

// I(x) = sum_{mn} Re G[m][n] psi_m(x) psi_n(x), split at the matrix level
// into m = n and m != n contributions. v' Im(G) v vanishes identically for
// Hermitian G, so only Re(G) enters.
inline IntensityProfile intensity_profile(const CoherenceMatrix& cm, const ModeBasis& basis,
                                          const std::vector<double>& grid) {
    int M = basis.M;
    if (cm.M() != M) throw ConfigError("intensity_profile: matrix size does not match basis");
    IntensityProfile prof;
    prof.grid = grid;
    prof.total.resize(grid.size());
    prof.diagonal_part.resize(grid.size());
    prof.cross_part.resize(grid.size());
    Eigen::MatrixXd ReG = cm.G.real();
    Eigen::VectorXd diag = ReG.diagonal();
    Eigen::VectorXd v(M);
    for (size_t i = 0; i < grid.size(); ++i) {
        basis.mode_row(grid[i], v.data());
        double tot = v.dot(ReG * v);
        double dia = diag.dot(v.cwiseProduct(v));
        prof.diagonal_part[i] = dia;
        prof.cross_part[i] = tot - dia;
        prof.total[i] = tot;
    }
    return prof;
}

// Pointwise weighted sum; grids must match exactly.
inline IntensityProfile mixture_profile(const std::vector<IntensityProfile>& profiles,
                                        const std::vector<double>& weights) {
    if (profiles.empty() || profiles.size() != weights.size())
        throw ConfigError("mixture_profile: need matching, non-empty profiles and weights");
    for (double w : weights)
        if (!(w >= 0.0)) throw ConfigError("mixture_profile: weights must be >= 0");
    const auto& g0 = profiles[0].grid;
    for (const auto& p : profiles)
        if (p.grid != g0) throw ConfigError("mixture_profile: grid mismatch");
    IntensityProfile out;
    out.grid = g0;
    out.total.assign(g0.size(), 0.0);
    out.diagonal_part.assign(g0.size(), 0.0);
    out.cross_part.assign(g0.size(), 0.0);
    for (size_t j = 0; j < profiles.size(); ++j) {
        for (size_t i = 0; i < g0.size(); ++i) {
            out.total[i] += weights[j] * profiles[j].total[i];
            out.diagonal_part[i] += weights[j] * profiles[j].diagonal_part[i];
            out.cross_part[i] += weights[j] * profiles[j].cross_part[i];
        }
    }
    return out;
}

struct Visibility {
    double value = 0.0;
    bool fringes = false;  // false: fewer than 3 extrema in the window
};

// (Imax - Imin)/(Imax + Imin) averaged over adjacent extrema of total inside
// [x_lo, x_hi]. Smooth single-lobe profiles report fringes = false.
inline Visibility fringe_visibility(const IntensityProfile& prof, double x_lo, double x_hi) {
    if (!(x_lo < x_hi)) throw ConfigError("fringe_visibility: empty window");
    std::vector<double> ext;
    for (int i = 1; i + 1 < prof.size(); ++i) {
        double x = prof.grid[i];
        if (x < x_lo || x > x_hi) continue;
        double a = prof.total[i - 1], b = prof.total[i], c = prof.total[i + 1];
        if ((b > a && b > c) || (b < a && b < c)) ext.push_back(b);
    }
    if (ext.size() < 3) return {0.0, false};
    double acc = 0.0;
    int cnt = 0;
    for (size_t i = 0; i + 1 < ext.size(); ++i) {
        double hi = std::max(ext[i], ext[i + 1]);
        double lo = std::min(ext[i], ext[i + 1]);
        if (hi + lo > 0.0) {
            acc += (hi - lo) / (hi + lo);
            ++cnt;
        }
    }
    if (cnt == 0) return {0.0, false};
    return {acc / cnt, true};
}

} // namespace grinprop
