#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fisherlab/calculus.hpp"
#include "fisherlab/wavefunction.hpp"

namespace fisherlab {

// psi(x) = (2 pi sigma^2)^(-1/4) exp(-(x-x0)^2/(4 sigma^2) + i p0 x / hbar);
// |psi|^2 has variance sigma^2.
inline WaveFunction gaussian(double x0, double p0, double sigma, const GridSpec& grid) {
    if (grid.dims() != 1) throw error("gaussian: 1-D constructor");
    if (!(sigma > 0.0)) throw error("gaussian: sigma must be positive");
    const Axis& a = grid.axis(0);
    if (a.lo > x0 - 8.0 * sigma || a.hi < x0 + 8.0 * sigma)
        throw truncation_error("gaussian: grid must span 8 sigma beyond the center");
    const double hbar = grid.hbar();
    const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    std::vector<cdouble> amps(grid.size());
    for (std::size_t j = 0; j < amps.size(); ++j) {
        const double x = grid.coord(0, static_cast<int>(j));
        const double u = (x - x0) / (2.0 * sigma);
        amps[j] = norm * std::exp(-u * u) * std::polar(1.0, p0 * x / hbar);
    }
    return WaveFunction::normalized(grid, std::move(amps));
}

// Harmonic-oscillator ground-state width for the given parameters.
inline double ho_width(double mass, double omega, double hbar) {
    return std::sqrt(hbar / (2.0 * mass * omega));
}

// Displaced ground state of the oscillator: a Gaussian of width
// sqrt(hbar/(2 m omega)) carrying mean position x0 and mean momentum p0.
inline WaveFunction coherent_state(double x0, double p0, double mass, double omega,
                                   const GridSpec& grid) {
    return gaussian(x0, p0, ho_width(mass, omega, grid.hbar()), grid);
}

// nth oscillator eigenstate via the normalized Hermite-function recurrence
// u_{k+1} = sqrt(2/(k+1)) xi u_k - sqrt(k/(k+1)) u_{k-1}; avoids factorial
// overflow, stable for n <= 50.
inline WaveFunction ho_eigenstate(int n, double mass, double omega, const GridSpec& grid) {
    if (grid.dims() != 1) throw error("ho_eigenstate: 1-D constructor");
    if (n < 0) throw error("ho_eigenstate: n must be nonnegative");
    const double hbar = grid.hbar();
    const double w = std::sqrt(hbar / (mass * omega));
    const double turning = std::sqrt(2.0 * n + 1.0) * w;
    const Axis& a = grid.axis(0);
    if (a.lo > -(turning + 8.0 * w) || a.hi < turning + 8.0 * w)
        throw truncation_error(
            "ho_eigenstate: grid must span the classical turning points plus 8 widths");

    std::vector<cdouble> amps(grid.size());
    const double prefac = std::pow(mass * omega / (std::numbers::pi * hbar), 0.25);
    for (std::size_t j = 0; j < amps.size(); ++j) {
        const double xi = grid.coord(0, static_cast<int>(j)) / w;
        double um1 = 0.0;
        double u = std::exp(-0.5 * xi * xi); // u_0 up to the pi^(-1/4) factor
        for (int k = 0; k < n; ++k) {
            const double up1 = std::sqrt(2.0 / (k + 1.0)) * xi * u -
                               std::sqrt(k / (k + 1.0)) * um1;
            um1 = u;
            u = up1;
        }
        amps[j] = prefac * u;
    }
    return WaveFunction::normalized(grid, std::move(amps));
}

// Normalized linear combination; states must share a grid and representation.
inline WaveFunction superposition(const std::vector<cdouble>& coeffs,
                                  const std::vector<WaveFunction>& states) {
    if (coeffs.size() != states.size() || states.empty())
        throw error("superposition: need matching, nonempty coefficient/state lists");
    for (const auto& s : states) {
        if (!s.grid().same_lattice(states.front().grid()))
            throw error("superposition: states must share one grid");
        if (s.rep() != states.front().rep())
            throw representation_error("superposition: states in mixed representations");
    }
    std::vector<cdouble> acc(states.front().amplitudes().size(), 0.0);
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& a = states[k].amplitudes();
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += coeffs[k] * a[j];
    }
    return WaveFunction::normalized(states.front().grid(), std::move(acc),
                                    states.front().rep());
}

struct ThermalDensities {
    Density position;
    Density momentum;
    double var_x;
    double var_p;
};

// Thermal oscillator state at temperature T (k_B = 1): Gaussian marginals
// with Var X = (hbar/2 m omega) coth(hbar omega / 2 T) and
// Var P = (hbar m omega / 2) coth(hbar omega / 2 T). T = 0 gives the ground
// state values.
inline ThermalDensities thermal_ho_densities(double temperature, double mass, double omega,
                                             const GridSpec& grid) {
    if (grid.dims() != 1) throw error("thermal_ho_densities: 1-D constructor");
    if (temperature < 0.0) throw error("thermal_ho_densities: negative temperature");
    const double hbar = grid.hbar();
    const double coth = temperature == 0.0
                            ? 1.0
                            : 1.0 / std::tanh(hbar * omega / (2.0 * temperature));
    const double var_x = hbar / (2.0 * mass * omega) * coth;
    const double var_p = hbar * mass * omega / 2.0 * coth;

    auto gauss_density = [](const GridSpec& g, double var) {
        std::vector<double> v(g.size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            const double x = g.coord(0, static_cast<int>(j));
            v[j] = std::exp(-x * x / (2.0 * var));
        }
        return v;
    };

    const Axis& a = grid.axis(0);
    if (a.lo > -8.0 * std::sqrt(var_x) || a.hi < 8.0 * std::sqrt(var_x))
        throw truncation_error("thermal_ho_densities: grid must span 8 position widths");
    const GridSpec pgrid = grid.conjugate();
    if (pgrid.axis(0).lo > -8.0 * std::sqrt(var_p) || pgrid.axis(0).hi < 8.0 * std::sqrt(var_p))
        throw truncation_error("thermal_ho_densities: conjugate grid too narrow in momentum");

    return ThermalDensities{
        Density::normalized(grid, gauss_density(grid, var_x), Rep::position),
        Density::normalized(pgrid, gauss_density(pgrid, var_p), Rep::momentum), var_x, var_p};
}

// Deterministic band-limited random state: complex white noise low-passed at
// the smoothness scale, tapered by a Gaussian envelope. The envelope width of
// span/24 keeps the boundary decay below 1e-8 of the maximum AND keeps the
// state's autocorrelation negligible at half the grid span, so the momentum
// density is free of wraparound artifacts under spectral differentiation.
inline WaveFunction random_state(std::uint64_t seed, double smoothness, const GridSpec& grid) {
    for (int ax = 0; ax < grid.dims(); ++ax)
        if (smoothness < 4.0 * grid.spacing(ax))
            throw error("random_state: smoothness scale must be at least 4 grid spacings");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cdouble> a(grid.size());
    for (auto& v : a) {
        const double re = normal(rng);
        const double im = normal(rng);
        v = cdouble(re, im);
    }

    // Low-pass: Gaussian filter exp(-(k l)^2 / 2) per axis.
    dft_forward(a, grid);
    for (std::size_t m = 0; m < a.size(); ++m) {
        double k2 = 0.0;
        for (int ax = 0; ax < grid.dims(); ++ax) {
            const double k = dft_wavenumber(grid, ax, grid.index_of(m, ax));
            k2 += k * k;
        }
        a[m] *= std::exp(-0.5 * k2 * smoothness * smoothness);
    }
    dft_backward(a, grid);

    for (std::size_t j = 0; j < a.size(); ++j) {
        double env = 0.0;
        for (int ax = 0; ax < grid.dims(); ++ax) {
            const Axis& ag = grid.axis(ax);
            const double span = ag.hi - ag.lo;
            const double xc = 0.5 * (ag.lo + ag.hi);
            const double u = (grid.coord(ax, grid.index_of(j, ax)) - xc) / (span / 24.0);
            env += 0.5 * u * u;
        }
        a[j] *= std::exp(-env);
    }
    return WaveFunction::normalized(grid, std::move(a));
}

} // namespace fisherlab
