#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "fisherlab/calculus.hpp"
#include "fisherlab/nonclassical.hpp"
#include "fisherlab/wavefunction.hpp"

namespace fisherlab {

enum class Potential { free_particle, harmonic };

struct EvolutionConfig {
    Potential potential = Potential::free_particle;
    double mass = 1.0;
    double omega = 1.0; // harmonic only
    double dt = 1e-3;
    int steps = 1;

    void validate() const {
        if (!(dt > 0.0)) throw error("EvolutionConfig: dt must be positive");
        if (steps < 0) throw error("EvolutionConfig: negative step count");
        if (!(mass > 0.0)) throw error("EvolutionConfig: mass must be positive");
    }
};

namespace detail {

// Strang splitting: half-kick, drift, half-kick. The multipliers are
// unimodular, so the norm is preserved exactly; dt may be negative (time
// reversal).
inline WaveFunction split_step_evolve(const WaveFunction& psi0, const EvolutionConfig& cfg,
                                      double dt, int steps) {
    const WaveFunction pos = in_rep(psi0, Rep::position);
    if (steps == 0) return pos;
    const GridSpec& g = pos.grid();
    const double hbar = g.hbar();
    std::vector<cdouble> a = pos.amplitudes();

    std::vector<double> vphase(a.size(), 0.0); // V(x) dt/(2 hbar)
    if (cfg.potential == Potential::harmonic) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            double x2 = 0.0;
            for (int ax = 0; ax < g.dims(); ++ax) {
                const double x = g.coord(ax, g.index_of(j, ax));
                x2 += x * x;
            }
            vphase[j] = 0.5 * cfg.mass * cfg.omega * cfg.omega * x2 * dt / (2.0 * hbar);
        }
    }
    std::vector<double> kphase(a.size()); // p^2 dt/(2 m hbar), in DFT bin order
    for (std::size_t m = 0; m < a.size(); ++m) {
        double p2 = 0.0;
        for (int ax = 0; ax < g.dims(); ++ax) {
            const double p = hbar * dft_wavenumber(g, ax, g.index_of(m, ax));
            p2 += p * p;
        }
        kphase[m] = p2 * dt / (2.0 * cfg.mass * hbar);
    }

    auto kick = [&](double scale) {
        if (cfg.potential == Potential::free_particle) return;
        for (std::size_t j = 0; j < a.size(); ++j)
            a[j] *= std::polar(1.0, -scale * vphase[j]);
    };
    auto drift = [&] {
        dft_forward(a, g);
        for (std::size_t m = 0; m < a.size(); ++m) a[m] *= std::polar(1.0, -kphase[m]);
        dft_backward(a, g);
        const double inv = 1.0 / static_cast<double>(a.size());
        for (auto& v : a) v *= inv;
    };

    kick(1.0);
    for (int s = 0; s < steps; ++s) {
        drift();
        kick(s + 1 < steps ? 2.0 : 1.0);
    }

    WaveFunction out(g, std::move(a), Rep::position);
    if (std::abs(out.norm_squared() - 1.0) > 1e-8)
        throw instability_error("split_step_evolve: norm drifted");
    return out;
}

// Step-size heuristic: the kinetic phase of the occupied momentum band per
// step should stay below pi/4.
inline void check_step_size(const WaveFunction& psi, const EvolutionConfig& cfg) {
    const Density pp = density_of(to_momentum(in_rep(psi, Rep::position)));
    const Moments m = moments(pp);
    const double p_eff = std::abs(m.mean(0)) + 8.0 * std::sqrt(m.cov(0, 0));
    const double phase = p_eff * p_eff * std::abs(cfg.dt) / (2.0 * cfg.mass * psi.hbar());
    if (phase >= std::numbers::pi / 4.0)
        throw instability_error("evolve: dt too large for the occupied momentum band");
}

} // namespace detail

inline WaveFunction evolve(const WaveFunction& psi, const EvolutionConfig& cfg) {
    cfg.validate();
    if (cfg.steps == 0) return in_rep(psi, Rep::position);
    detail::check_step_size(psi, cfg);
    return detail::split_step_evolve(psi, cfg, cfg.dt, cfg.steps);
}

// Residual of the continuity equation dp/dt + d/dx [p P_cl / m] = 0 at the
// state's instant: central time difference over +-dt against the spectral
// divergence of the probability flux. Normalized by the larger term's L2
// norm; a stationary state (both terms at noise level) reports 0.
inline double continuity_residual(const WaveFunction& psi, const EvolutionConfig& cfg) {
    cfg.validate();
    const WaveFunction pos = in_rep(psi, Rep::position);
    detail::check_step_size(pos, cfg);
    const GridSpec& g = pos.grid();

    const Density p0 = density_of(pos);
    const Density pplus = density_of(detail::split_step_evolve(pos, cfg, cfg.dt, 1));
    const Density pminus = density_of(detail::split_step_evolve(pos, cfg, -cfg.dt, 1));

    const auto pcl = classical_momentum(pos);
    if (pcl.masked_mass > 1e-3)
        throw mask_error("continuity_residual: P_cl mask covers less than 99.9% of the mass");

    std::vector<double> dpdt(p0.values().size());
    for (std::size_t j = 0; j < dpdt.size(); ++j)
        dpdt[j] = (pplus.values()[j] - pminus.values()[j]) / (2.0 * cfg.dt);

    std::vector<double> div(p0.values().size(), 0.0);
    for (int ax = 0; ax < g.dims(); ++ax) {
        std::vector<double> flux(p0.values().size());
        for (std::size_t j = 0; j < flux.size(); ++j)
            flux[j] = p0.values()[j] * pcl.components[static_cast<std::size_t>(ax)][j] / cfg.mass;
        const auto dflux = spectral_derivative_real(flux, g, ax, 1);
        for (std::size_t j = 0; j < div.size(); ++j) div[j] += dflux[j];
    }

    auto l2 = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s * g.cell_volume());
    };
    double num = 0.0;
    for (std::size_t j = 0; j < dpdt.size(); ++j) {
        const double r = dpdt[j] + div[j];
        num += r * r;
    }
    num = std::sqrt(num * g.cell_volume());

    const double na = l2(dpdt), nb = l2(div);
    const double var_x = moments(p0).cov.trace();
    const double floor = 1e-7 * l2(p0.values()) * g.hbar() / (cfg.mass * var_x);
    if (na < floor && nb < floor) return 0.0;
    return num / std::max(na, nb);
}

} // namespace fisherlab
