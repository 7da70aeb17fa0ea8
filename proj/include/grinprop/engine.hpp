#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "coupling.hpp"
#include "errors.hpp"
#include "evolution.hpp"
#include "observables.hpp"
#include "quadrature.hpp"
#include "source.hpp"
#include "waveguide.hpp"

namespace grinprop {

struct Numerics {
    double tail_tol = 1e-12;
    double comp_tol = 1e-10;
    int quad_points = 0;     // 0 = derive from scales
    double quad_window = 0;  // half-width, um; 0 = derive
    int grid_points = 2048;
    double grid_extent = 0;  // half-width, um; 0 = derive
    int mode_count = 0;      // 0 = heuristic + completeness retry

    void validate() const {
        if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw ConfigError("numerics.tail_tol must be in (0, 1)");
        if (!(comp_tol > 0.0 && comp_tol < 1.0)) throw ConfigError("numerics.comp_tol must be in (0, 1)");
        if (quad_points < 0) throw ConfigError("numerics.quad_points must be >= 0");
        if (quad_window < 0) throw ConfigError("numerics.quad_window must be >= 0");
        if (grid_points < 2) throw ConfigError("numerics.grid_points must be >= 2");
        if (grid_extent < 0) throw ConfigError("numerics.grid_extent must be >= 0");
        if (mode_count < 0) throw ConfigError("numerics.mode_count must be >= 0");
    }
};

// Builds the whole modal pipeline once (decomposition, basis, quadrature,
// overlaps, z = 0 coherence matrix) and serves z-dependent queries off it.
class Engine {
public:
    SourceSpec src;
    WaveguideSpec wg;
    Numerics num;

    SourceDecomposition dec;
    ModeBasis basis;
    QuadratureRule rule;
    CouplingMatrix coupling;
    Eigen::MatrixXd G0;
    double trace0 = 0.0;
    double purity0 = 0.0;   // Frobenius sum over G0; z-invariant by |phase| = 1
    double entropy0 = 0.0;
    double mean_mode = 0.0;
    double power = 0.0;     // integral of the launch intensity: I0 a0 sqrt(pi/2)

    static Engine build(const SourceSpec& src, const WaveguideSpec& wg, const Numerics& num) {
        src.validate();
        wg.validate();
        num.validate();
        Engine e;
        e.src = src;
        e.wg = wg;
        e.num = num;
        e.dec = decompose(src, num.tail_tol);

        int M = num.mode_count > 0 ? num.mode_count
                                   : default_mode_count(wg, e.dec.c, e.dec.P, src.x0);
        int attempts = num.mode_count > 0 ? 1 : 6;
        int mg = m_guided(wg);
        int m_cap = mg < std::numeric_limits<int>::max() ? mg + 1 : mg;
        for (int attempt = 0;; ++attempt) {
            e.basis = make_basis(wg, M);
            e.rule = e.make_rule(M);
            try {
                e.coupling = overlap_matrix(e.dec, e.basis, src.x0, e.rule, num.comp_tol);
                break;
            } catch (const NumericalGuardError&) {
                if (attempt + 1 >= attempts || M >= m_cap) throw;
                M = std::min(static_cast<int>(std::ceil(M * 1.3)) + 8, m_cap);
            }
        }

        e.G0 = gamma0_matrix(e.coupling, e.dec);
        e.trace0 = e.G0.trace();
        e.purity0 = e.G0.squaredNorm() / (e.trace0 * e.trace0);
        e.entropy0 = entropy(e.dec);
        e.mean_mode = mean_mode_number(e.coupling, e.dec);
        e.power = src.I0 * src.a0 * std::sqrt(M_PI / 2.0);
        e.prepare_bands();
        return e;
    }

    CoherenceMatrix gamma(double z, Regime regime) const { return evolve(G0, basis, z, regime); }

    // Honest dense record: full G(z), full Frobenius purity.
    ObservableRecord record(double z, Regime regime) const {
        CoherenceMatrix cm = gamma(z, regime);
        Moments mo = moments(cm, basis);
        return make_record(z, mo, wg.k(), wg.omega, purity_numeric(cm), entropy0);
    }

    // Banded record: moments need only the three central bands of G(z),
    // whose phases are beta differences of neighbors, so a z sample costs
    // O(M) instead of O(M^2). purity/entropy are the precomputed invariants.
    ObservableRecord record_fast(double z, Regime regime) const {
        int M = basis.M;
        Eigen::VectorXcd b1(std::max(M - 1, 0)), b2(std::max(M - 2, 0));
        const auto& dl1 = regime == Regime::exact ? delta1_exact_ : delta1_par_;
        const auto& dl2 = regime == Regime::exact ? delta2_exact_ : delta2_par_;
        for (int m = 0; m + 1 < M; ++m) {
            double ph = dl1[m] * z;
            b1(m) = band1_(m) * std::complex<double>(std::cos(ph), std::sin(ph));
        }
        for (int m = 0; m + 2 < M; ++m) {
            double ph = dl2[m] * z;
            b2(m) = band2_(m) * std::complex<double>(std::cos(ph), std::sin(ph));
        }
        Moments mo = detail::moments_banded(diag_, b1, b2, wg.k(), wg.omega);
        return make_record(z, mo, wg.k(), wg.omega, purity0, entropy0);
    }

    std::vector<ObservableRecord> scan(const std::vector<double>& zs, Regime regime,
                                       int threads = 0, bool dense = false) const {
        std::vector<ObservableRecord> out(zs.size());
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = std::max(1, std::min(hw, 8));
        threads = std::min<int>(threads, std::max<size_t>(zs.size(), 1));
        auto work = [&](int t) {
            for (size_t i = t; i < zs.size(); i += threads)
                out[i] = dense ? record(zs[i], regime) : record_fast(zs[i], regime);
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
            for (auto& th : pool) th.join();
        }
        return out;
    }

    std::vector<double> default_grid() const {
        double ext = num.grid_extent > 0 ? num.grid_extent : default_grid_extent();
        int n = num.grid_points;
        std::vector<double> g(n);
        for (int i = 0; i < n; ++i) g[i] = -ext + 2.0 * ext * i / (n - 1);
        return g;
    }

    double default_grid_extent() const {
        double w0 = std::sqrt(2.0 / (wg.k() * wg.omega));
        return std::abs(src.x0) + 6.0 * std::max(src.a0, w0 * std::sqrt(mean_mode + 1.0));
    }

    // Profile in physical units: total launch power distributed over the
    // lambda_bar-weighted modal profile.
    IntensityProfile profile(double z, Regime regime, const std::vector<double>& grid) const {
        IntensityProfile prof = intensity_profile(gamma(z, regime), basis, grid);
        prof.scale(power / trace0);
        return prof;
    }

    IntensityProfile profile(double z, Regime regime) const {
        return profile(z, regime, default_grid());
    }

    // Power integrals evaluated on the quadrature rule (a display grid is far
    // too coarse for the 1e-8 cross-power bound). Gram trick: integral of
    // total is sum Re G_mn O_mn with O the quadrature Gram matrix of psi.
    struct PowerSplit {
        double total = 0.0;
        double diagonal = 0.0;
        double cross = 0.0;
    };

    PowerSplit power_split(double z, Regime regime) const {
        CoherenceMatrix cm = gamma(z, regime);
        ensure_gram();
        double tot = (cm.G.real().cwiseProduct(gram_)).sum();
        double dia = cm.G.diagonal().real().dot(gram_.diagonal());
        PowerSplit ps;
        ps.total = tot * power / trace0;
        ps.diagonal = dia * power / trace0;
        ps.cross = ps.total - ps.diagonal;
        return ps;
    }

    struct FindCatResult {
        bool found = false;
        double z_cat = 0.0;
        double r_c = 0.0;       // at z_cat
        double nu_env = 0.0;    // max |nu| within +-L_osc/2 of z_cat
        double ratio = 0.0;     // z_cat / z_rev_estimate
        std::string message;
    };

    // Coarse r_c scan over [0.25, 1.25] z_rev_estimate, envelope = windowed
    // max over one oscillation period, then local refinement of the raw r_c
    // around the global envelope peak.
    FindCatResult find_cat(Regime regime, int threads = 0) const {
        CharacteristicLengths L = characteristic_lengths(wg);
        double z_lo = 0.25 * L.z_rev_estimate;
        double z_hi = 1.25 * L.z_rev_estimate;
        double step = L.L_osc / 20.0;
        int n = static_cast<int>(std::floor((z_hi - z_lo) / step)) + 1;
        std::vector<double> zs(n);
        for (int i = 0; i < n; ++i) zs[i] = z_lo + i * step;
        auto recs = scan(zs, regime, threads);

        std::vector<double> rc(n);
        int n_inf = 0;
        for (int i = 0; i < n; ++i) {
            rc[i] = recs[i].r_c;
            if (std::isinf(rc[i])) ++n_inf;
        }
        FindCatResult res;
        if (n_inf * 2 >= n) {
            res.message = "profile is stationary (coherence radius infinite over most of the window); no cat";
            return res;
        }

        const int w = 10;  // +-w samples ~ one L_osc
        std::vector<double> env(n);
        for (int i = 0; i < n; ++i) {
            double m = 0.0;
            for (int j = std::max(0, i - w); j <= std::min(n - 1, i + w); ++j)
                m = std::max(m, std::isinf(rc[j]) ? 0.0 : rc[j]);
            env[i] = m;
        }
        int imax = static_cast<int>(std::max_element(env.begin(), env.end()) - env.begin());
        if (imax < 2 * w || imax >= n - 2 * w) {
            res.message = "envelope peak sits at the scan boundary; widen the window around z_rev_estimate";
            return res;
        }
        std::vector<double> sorted(env);
        std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
        double median = sorted[n / 2];
        if (!(env[imax] > 1.5 * median)) {
            res.message = "no recoherence peak above the envelope noise floor";
            return res;
        }

        double fine_lo = std::max(z_lo, zs[imax] - 1.5 * L.L_osc);
        double fine_hi = std::min(z_hi, zs[imax] + 1.5 * L.L_osc);
        double fstep = L.L_osc / 2000.0;
        int fn = static_cast<int>(std::floor((fine_hi - fine_lo) / fstep)) + 1;
        std::vector<double> fz(fn);
        for (int i = 0; i < fn; ++i) fz[i] = fine_lo + i * fstep;
        auto frecs = scan(fz, regime, threads);
        int fi = 0;
        double best = -1.0;
        for (int i = 0; i < fn; ++i) {
            double v = std::isinf(frecs[i].r_c) ? -1.0 : frecs[i].r_c;
            if (v > best) {
                best = v;
                fi = i;
            }
        }
        res.found = true;
        res.z_cat = fz[fi];
        res.r_c = frecs[fi].r_c;
        for (int i = 0; i < fn; ++i)
            if (std::abs(fz[i] - res.z_cat) <= L.L_osc / 2.0)
                res.nu_env = std::max(res.nu_env, frecs[i].nu);
        res.ratio = res.z_cat / L.z_rev_estimate;
        res.message = "cat candidate at the coherence-radius recoherence peak";
        return res;
    }

private:
    Eigen::VectorXd diag_;
    Eigen::VectorXd band1_, band2_;  // G0 superdiagonals (real)
    std::vector<double> delta1_exact_, delta2_exact_, delta1_par_, delta2_par_;
    mutable Eigen::MatrixXd gram_;
    mutable bool gram_ready_ = false;

    void prepare_bands() {
        int M = basis.M;
        diag_ = G0.diagonal();
        band1_.resize(std::max(M - 1, 0));
        band2_.resize(std::max(M - 2, 0));
        for (int m = 0; m + 1 < M; ++m) band1_(m) = G0(m, m + 1);
        for (int m = 0; m + 2 < M; ++m) band2_(m) = G0(m, m + 2);
        delta1_exact_.resize(std::max(M - 1, 0));
        delta1_par_.resize(std::max(M - 1, 0));
        delta2_exact_.resize(std::max(M - 2, 0));
        delta2_par_.resize(std::max(M - 2, 0));
        for (int m = 0; m + 1 < M; ++m) {
            delta1_exact_[m] = beta_diff(wg, m, m + 1, Regime::exact);
            delta1_par_[m] = beta_diff(wg, m, m + 1, Regime::paraxial);
        }
        for (int m = 0; m + 2 < M; ++m) {
            delta2_exact_[m] = beta_diff(wg, m, m + 2, Regime::exact);
            delta2_par_[m] = beta_diff(wg, m, m + 2, Regime::paraxial);
        }
    }

    void ensure_gram() const {
        if (gram_ready_) return;
        int M = basis.M;
        int N = rule.points();
        gram_ = Eigen::MatrixXd::Zero(M, M);
        constexpr int kChunk = 1024;
        Eigen::MatrixXd Psi(M, kChunk), PsiW(M, kChunk);
        for (int i0 = 0; i0 < N; i0 += kChunk) {
            int nn = std::min(kChunk, N - i0);
            for (int i = 0; i < nn; ++i) {
                basis.mode_row(rule.nodes[i0 + i], Psi.col(i).data());
                PsiW.col(i) = Psi.col(i) * rule.weights[i0 + i];
            }
            gram_.noalias() += PsiW.leftCols(nn) * Psi.leftCols(nn).transpose();
        }
        gram_ = ((gram_ + gram_.transpose()) / 2.0).eval();
        gram_ready_ = true;
    }

    QuadratureRule make_rule(int M) const {
        double s_wg = std::sqrt(wg.k() * wg.omega);
        double s_src = dec.scale();
        double W;
        if (num.quad_window > 0) {
            W = num.quad_window;
        } else {
            double w0 = std::sqrt(2.0 / (wg.k() * wg.omega));
            W = 12.0 * std::max(src.a0, w0) + std::abs(src.x0) + 10.0;
            W = std::max(W, detail::mode_support(M - 1, s_wg));
            W = std::max(W, std::abs(src.x0) + detail::mode_support(dec.P, s_src));
        }
        int points = num.quad_points;
        if (points <= 0) {
            // integrands are products of two modes, so the fastest local
            // phase is the sum of the single-mode wavenumbers
            double q_wg = s_wg * std::sqrt(2.0 * M - 1.0);
            double q_src = s_src * std::sqrt(2.0 * dec.P + 1.0);
            points = points_for_oscillation(W, q_wg + q_src);
        }
        return build_quadrature(-W, W, points);
    }
};

} // namespace grinprop
