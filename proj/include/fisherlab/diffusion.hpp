#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fisherlab/ensemble.hpp"
#include "fisherlab/info_measures.hpp"
#include "fisherlab/wavefunction.hpp"

namespace fisherlab {

struct DiffusionConfig {
    double gamma = 1.0;      // position diffusion rate
    double sigma_rate = 1.0; // momentum diffusion rate
    std::vector<double> times; // geometric ladder; auto-chosen when empty

    void validate() const {
        if (gamma < 0.0 || sigma_rate < 0.0)
            throw error("DiffusionConfig: rates must be nonnegative");
        if (gamma == 0.0 && sigma_rate == 0.0)
            throw error("DiffusionConfig: at least one rate must be positive");
    }
};

namespace detail {

inline std::vector<double> heat_multiply(const std::vector<double>& p, const GridSpec& g,
                                         const Eigen::MatrixXd& gamma_t) {
    std::vector<cdouble> a(p.begin(), p.end());
    dft_forward(a, g);
    const int n = g.dims();
    for (std::size_t m = 0; m < a.size(); ++m) {
        double q = 0.0;
        for (int ax = 0; ax < n; ++ax) {
            const double ka = dft_wavenumber(g, ax, g.index_of(m, ax));
            for (int bx = 0; bx < n; ++bx) {
                const double kb = dft_wavenumber(g, bx, g.index_of(m, bx));
                q += ka * gamma_t(ax, bx) * kb;
            }
        }
        a[m] *= std::exp(-q);
    }
    dft_backward(a, g);
    std::vector<double> out(p.size());
    const double inv = 1.0 / static_cast<double>(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) out[j] = a[j].real() * inv;
    return out;
}

} // namespace detail

// Exact solution of dp/dt = div(Gamma grad p): Fourier multiplier
// exp(-k^T Gamma k t). Mass and mean are preserved; the covariance grows by
// 2 Gamma t.
inline Density diffuse_anisotropic(const Density& d, const Eigen::MatrixXd& gamma,
                                   double t) {
    const GridSpec& g = d.grid();
    const int n = g.dims();
    if (gamma.rows() != n || gamma.cols() != n)
        throw error("diffuse_anisotropic: Gamma dimension mismatch");
    if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + gamma.cwiseAbs().maxCoeff()))
        throw error("diffuse_anisotropic: Gamma must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
    if (es.eigenvalues().minCoeff() < -1e-14)
        throw error("diffuse_anisotropic: Gamma must be positive semidefinite");
    if (t < 0.0) throw error("diffuse_anisotropic: time must be nonnegative");
    if (t == 0.0) return d;

    Density out(g, detail::heat_multiply(d.values(), g, gamma * t), d.rep());
    if (out.boundary_mass(4) > 1e-8)
        throw truncation_error("diffuse_anisotropic: diffused mass reached the grid edge");
    return out;
}

// Isotropic heat flow: convolution with the variance-2*gamma*t heat kernel.
inline Density diffuse(const Density& d, double rate, double t) {
    const int n = d.grid().dims();
    return diffuse_anisotropic(d, rate * Eigen::MatrixXd::Identity(n, n), t);
}

// Position and momentum marginals evolve under independent classical
// diffusions; realize that decoupling directly at the density level.
inline std::pair<Density, Density> quantum_phase_space_diffuse(const WaveFunction& psi,
                                                               const DiffusionConfig& cfg,
                                                               double t) {
    cfg.validate();
    const WaveFunction pos = in_rep(psi, Rep::position);
    return {diffuse(density_of(pos), cfg.gamma, t),
            diffuse(density_of(to_momentum(pos)), cfg.sigma_rate, t)};
}

inline std::pair<Density, Density> quantum_phase_space_diffuse(const StateEnsemble& ens,
                                                               const DiffusionConfig& cfg,
                                                               double t) {
    cfg.validate();
    return {diffuse(ensemble_marginal(ens, Rep::position), cfg.gamma, t),
            diffuse(ensemble_marginal(ens, Rep::momentum), cfg.sigma_rate, t)};
}

struct EntropyTrajectory {
    std::vector<double> times;
    std::vector<double> entropies;
    double entropy0;       // S at t = 0
    double initial_rate;   // Richardson-extrapolated dS/dt at 0+
    double rate_error;     // difference of successive extrapolants
};

// Default geometric ladder starting at the smallest allowed time.
inline std::vector<double> default_time_ladder(double t0 = 1e-6, int count = 6,
                                               double ratio = 2.0) {
    std::vector<double> t(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = t0 * std::pow(ratio, i);
    return t;
}

// Entropies along the heat flow plus the extrapolated initial rate
// dS/dt(0) from the two smallest times (Richardson on [S(t)-S(0)]/t).
inline EntropyTrajectory entropy_trajectory(const Density& d, double rate,
                                            const std::vector<double>& times) {
    if (times.size() < 2) throw error("entropy_trajectory: need at least two times");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 1e-6)
            throw error("entropy_trajectory: smallest time is 1e-6");
        if (i > 0 && times[i] <= times[i - 1])
            throw error("entropy_trajectory: times must be increasing");
    }
    EntropyTrajectory out;
    out.times = times;
    out.entropy0 = entropy(d);
    out.entropies.reserve(times.size());
    double prev = out.entropy0;
    for (double t : times) {
        const double s = entropy(diffuse(d, rate, t));
        if (s <= prev)
            throw error("entropy_trajectory: entropies not strictly increasing");
        out.entropies.push_back(s);
        prev = s;
    }

    auto slope = [&](std::size_t i) { return (out.entropies[i] - out.entropy0) / times[i]; };
    auto richardson = [&](std::size_t i) {
        const double t1 = times[i], t2 = times[i + 1];
        return (t2 * slope(i) - t1 * slope(i + 1)) / (t2 - t1);
    };
    out.initial_rate = richardson(0);
    out.rate_error = times.size() >= 3 ? std::abs(richardson(0) - richardson(1))
                                       : std::abs(out.initial_rate - slope(0));
    return out;
}

struct DebruijnReport {
    double f_x = 0.0;
    double f_p = 0.0;
    double rate_x = 0.0;     // dS_X/dt(0) / gamma
    double rate_p = 0.0;     // dS_P/dt(0) / sigma
    double mismatch_x = 0.0; // |rate_x - f_x| / f_x
    double mismatch_p = 0.0;
    double j_r = 0.0;
    bool ok = false;         // both mismatches below 1e-2
    double rate_error_x = 0.0;
    double rate_error_p = 0.0;
};

// de Bruijn pair: the initial entropy rates of both marginals under phase
// space diffusion, compared against the Fisher informations. A mismatch
// produces a flagged report, not an exception.
inline DebruijnReport debruijn_report(const Density& pos, const Density& mom,
                                      const DiffusionConfig& cfg) {
    cfg.validate();
    if (!(cfg.gamma > 0.0) || !(cfg.sigma_rate > 0.0))
        throw error("debruijn_report: both rates must be positive");
    const std::vector<double> times =
        cfg.times.empty() ? default_time_ladder() : cfg.times;

    DebruijnReport r;
    r.f_x = fisher_information(pos);
    r.f_p = fisher_information(mom);
    const auto tx = entropy_trajectory(pos, cfg.gamma, times);
    const auto tp = entropy_trajectory(mom, cfg.sigma_rate, times);
    r.rate_x = tx.initial_rate / cfg.gamma;
    r.rate_p = tp.initial_rate / cfg.sigma_rate;
    r.rate_error_x = tx.rate_error / cfg.gamma;
    r.rate_error_p = tp.rate_error / cfg.sigma_rate;
    r.mismatch_x = std::abs(r.rate_x - r.f_x) / r.f_x;
    r.mismatch_p = std::abs(r.rate_p - r.f_p) / r.f_p;
    const double hbar = pos.grid().hbar();
    r.j_r = 1.0 / (0.5 * hbar * std::sqrt(r.f_x * r.f_p));
    r.ok = r.mismatch_x < 1e-2 && r.mismatch_p < 1e-2;
    return r;
}

inline DebruijnReport debruijn_report(const WaveFunction& psi, const DiffusionConfig& cfg) {
    const WaveFunction pos = in_rep(psi, Rep::position);
    return debruijn_report(density_of(pos), density_of(to_momentum(pos)), cfg);
}

inline DebruijnReport debruijn_report(const StateEnsemble& ens, const DiffusionConfig& cfg) {
    return debruijn_report(ensemble_marginal(ens, Rep::position),
                           ensemble_marginal(ens, Rep::momentum), cfg);
}

struct AnisotropicRateCheck {
    double initial_rate; // extrapolated dS/dt(0)
    double trace_gamma_f; // tr[Gamma F]
    double mismatch;      // relative
};

// n-D de Bruijn: dS/dt(0) = tr[Gamma F] under dp/dt = div(Gamma grad p).
inline AnisotropicRateCheck anisotropic_rate_check(const Density& d,
                                                   const Eigen::MatrixXd& gamma,
                                                   const std::vector<double>& times) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw error("anisotropic_rate_check: Gamma must be positive definite");

    const double s0 = entropy(d);
    std::vector<double> entropies;
    entropies.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 1e-6 || (i > 0 && times[i] <= times[i - 1]))
            throw error("anisotropic_rate_check: need an increasing ladder with t >= 1e-6");
        entropies.push_back(entropy(diffuse_anisotropic(d, gamma, times[i])));
    }
    auto slope = [&](std::size_t i) { return (entropies[i] - s0) / times[i]; };
    const double rate = (times[1] * slope(0) - times[0] * slope(1)) / (times[1] - times[0]);

    AnisotropicRateCheck out{};
    out.initial_rate = rate;
    out.trace_gamma_f = (gamma * fisher_matrix(d)).trace();
    out.mismatch = std::abs(out.initial_rate - out.trace_gamma_f) / out.trace_gamma_f;
    return out;
}

// J_r = delta X delta P / (hbar/2) in 1-D; the trace form in n-D. Always the
// exact reciprocal of the matching joint nonclassicality.
inline double joint_robustness(const Density& pos, const Density& mom) {
    const double hbar = pos.grid().hbar();
    const int n = pos.grid().dims();
    const Eigen::MatrixXd fx = fisher_matrix(pos);
    const Eigen::MatrixXd fp = fisher_matrix(mom);
    if (n == 1) {
        const double dx = 1.0 / std::sqrt(fx(0, 0));
        const double dp = 1.0 / std::sqrt(fp(0, 0));
        return dx * dp / (0.5 * hbar);
    }
    return 1.0 / (0.5 * hbar * std::sqrt(fx.trace() * fp.trace()));
}

inline double joint_robustness(const WaveFunction& psi) {
    const WaveFunction pos = in_rep(psi, Rep::position);
    return joint_robustness(density_of(pos), density_of(to_momentum(pos)));
}

inline double joint_robustness(const StateEnsemble& ens) {
    return joint_robustness(ensemble_marginal(ens, Rep::position),
                            ensemble_marginal(ens, Rep::momentum));
}

} // namespace fisherlab
