#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "source.hpp"
#include "waveguide.hpp"

namespace grinprop {

struct CouplingMatrix {
    Eigen::MatrixXd T;                 // (P+1) x M, T(p, m) = <m|p>
    std::vector<double> completeness;  // sum_m T(p,m)^2 per p
    double comp_tol = 1e-10;
    int P() const { return static_cast<int>(T.rows()) - 1; }
    int M() const { return static_cast<int>(T.cols()); }
};

namespace detail {

// Support half-width of phi_n at scale s: classical turning point plus a tail
// margin after which the function is below ~1e-13 of its peak.
inline double mode_support(int n, double s) {
    return (std::sqrt(2.0 * n + 1.0) + 8.0) / s;
}

} // namespace detail

// T(p, m) = integral psi_m(x) Phi_p(x - x0) dx on the given rule. Nodes are
// processed in chunks so the mode tabulations never materialize in full.
inline CouplingMatrix overlap_matrix(const SourceDecomposition& dec, const ModeBasis& basis,
                                     double x0, const QuadratureRule& rule, double comp_tol = 1e-10) {
    if (!(comp_tol > 0.0)) throw ConfigError("comp_tol must be positive");
    double s_src = dec.scale();
    double ext_src = detail::mode_support(dec.P, s_src);
    double ext_wg = detail::mode_support(basis.M - 1, basis.scale);
    require_window(rule, x0 - ext_src, x0 + ext_src, "source modes at x0 = " + std::to_string(x0));
    require_window(rule, -ext_wg, ext_wg, "waveguide mode " + std::to_string(basis.M - 1));

    int P1 = dec.P + 1;
    int M = basis.M;
    int N = rule.points();
    CouplingMatrix cm;
    cm.comp_tol = comp_tol;
    cm.T = Eigen::MatrixXd::Zero(P1, M);

    constexpr int kChunk = 1024;
    Eigen::MatrixXd S(P1, kChunk), Psi(M, kChunk);
    for (int i0 = 0; i0 < N; i0 += kChunk) {
        int n = std::min(kChunk, N - i0);
        for (int i = 0; i < n; ++i) {
            double x = rule.nodes[i0 + i];
            double w = rule.weights[i0 + i];
            hg_eval_row(dec.P, s_src, x0, x, S.col(i).data());
            basis.mode_row(x, Psi.col(i).data());
            S.col(i) *= w;  // fold weights into the source factor
        }
        cm.T.noalias() += S.leftCols(n) * Psi.leftCols(n).transpose();
    }

    cm.completeness.resize(P1);
    for (int p = 0; p < P1; ++p) {
        double sum = cm.T.row(p).squaredNorm();
        cm.completeness[p] = sum;
        if (sum < 1.0 - comp_tol)
            throw NumericalGuardError("coupling completeness failure at p = " + std::to_string(p)
                                      + ": sum_m T^2 = " + std::to_string(sum)
                                      + " (M too small or window too narrow)");
    }
    return cm;
}

// sum_p lambda_bar[p] sum_m m T(p,m)^2
inline double mean_mode_number(const CouplingMatrix& coupling, const SourceDecomposition& dec) {
    if (static_cast<int>(dec.lambda_bar.size()) != coupling.P() + 1)
        throw ConfigError("mean_mode_number: decomposition and coupling sizes differ");
    double acc = 0.0;
    for (int p = 0; p <= coupling.P(); ++p) {
        double row = 0.0;
        for (int m = 0; m < coupling.M(); ++m) {
            double t = coupling.T(p, m);
            row += m * t * t;
        }
        acc += dec.lambda_bar[p] * row;
    }
    return acc;
}

// Debug dump: one row per source index p, columns m.
inline void dump_coupling_csv(const CouplingMatrix& coupling, std::ostream& os) {
    char buf[32];
    for (int p = 0; p <= coupling.P(); ++p) {
        for (int m = 0; m < coupling.M(); ++m) {
            std::snprintf(buf, sizeof buf, "%.12g", coupling.T(p, m));
            if (m) os << ',';
            os << buf;
        }
        os << '\n';
    }
}

} // namespace grinprop
