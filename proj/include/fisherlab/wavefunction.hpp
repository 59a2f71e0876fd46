#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "fisherlab/density.hpp"
#include "fisherlab/fft.hpp"
#include "fisherlab/grid.hpp"

namespace fisherlab {

// Pure quantum state sampled on a grid. The stored GridSpec is always the
// position-space grid; momentum-representation amplitudes live on its
// conjugate. Immutable after construction.
class WaveFunction {
public:
    WaveFunction(GridSpec position_grid, std::vector<cdouble> amplitudes,
                 Rep rep = Rep::position)
        : grid_(std::move(position_grid)), amps_(std::move(amplitudes)), rep_(rep) {
        if (amps_.size() != grid_.size())
            throw error("WaveFunction: amplitude count does not match grid");
        const double n = norm_squared();
        if (std::abs(n - 1.0) > 1e-10)
            throw normalization_error("WaveFunction: |psi|^2 integrates to " +
                                      std::to_string(n) + ", expected 1");
    }

    static WaveFunction normalized(GridSpec position_grid, std::vector<cdouble> amplitudes,
                                   Rep rep = Rep::position) {
        GridSpec domain = rep == Rep::position ? position_grid : position_grid.conjugate();
        double n = 0.0;
        for (const auto& a : amplitudes) n += std::norm(a);
        n *= domain.cell_volume();
        if (!(n > 1e-300))
            throw degenerate_state_error("WaveFunction: cannot normalize zero-norm state");
        const double s = 1.0 / std::sqrt(n);
        for (auto& a : amplitudes) a *= s;
        return WaveFunction(std::move(position_grid), std::move(amplitudes), rep);
    }

    // Position-space grid, regardless of the current representation.
    const GridSpec& grid() const { return grid_; }

    // Grid the amplitudes are currently sampled on.
    GridSpec domain() const {
        return rep_ == Rep::position ? grid_ : grid_.conjugate();
    }

    const std::vector<cdouble>& amplitudes() const { return amps_; }
    Rep rep() const { return rep_; }
    double hbar() const { return grid_.hbar(); }

    double norm_squared() const {
        double n = 0.0;
        for (const auto& a : amps_) n += std::norm(a);
        return n * domain().cell_volume();
    }

private:
    GridSpec grid_;
    std::vector<cdouble> amps_;
    Rep rep_;
};

namespace detail {

// Discretization of phi(p) = (2*pi*hbar)^(-n/2) Int psi(x) exp(-i p.x/hbar) d^n x
// on the conjugate grid (and its exact inverse). Forward = position->momentum.
inline std::vector<cdouble> continuum_fourier(const std::vector<cdouble>& in,
                                              const GridSpec& xgrid, bool forward) {
    const GridSpec pgrid = xgrid.conjugate();
    const double hbar = xgrid.hbar();
    const int n = xgrid.dims();
    std::vector<cdouble> a = in;

    // Per-axis modulation exp(+2*pi*i*c*j/N) recenters the DFT bins so bin m
    // carries momentum (m - c)*hp; the x0 phase anchors the transform to the
    // true axis origin instead of sample 0.
    const std::size_t total = xgrid.size();
    if (forward) {
        for (std::size_t j = 0; j < total; ++j) {
            double phase = 0.0;
            for (int ax = 0; ax < n; ++ax) {
                const int c = xgrid.center_index(ax);
                const int jj = xgrid.index_of(j, ax);
                phase += 2.0 * std::numbers::pi * c * jj / xgrid.axis(ax).n;
            }
            a[j] *= std::polar(1.0, phase);
        }
        dft_forward(a, xgrid);
        double scale = 1.0;
        for (int ax = 0; ax < n; ++ax)
            scale *= xgrid.spacing(ax) / std::sqrt(2.0 * std::numbers::pi * hbar);
        for (std::size_t m = 0; m < total; ++m) {
            double phase = 0.0;
            for (int ax = 0; ax < n; ++ax) {
                const double p = pgrid.coord(ax, pgrid.index_of(m, ax));
                phase -= p * xgrid.axis(ax).lo / hbar;
            }
            a[m] *= scale * std::polar(1.0, phase);
        }
    } else {
        for (std::size_t m = 0; m < total; ++m) {
            double phase = 0.0;
            for (int ax = 0; ax < n; ++ax) {
                const double p = pgrid.coord(ax, pgrid.index_of(m, ax));
                phase += p * xgrid.axis(ax).lo / hbar;
            }
            a[m] *= std::polar(1.0, phase);
        }
        dft_backward(a, xgrid);
        double scale = 1.0;
        for (int ax = 0; ax < n; ++ax)
            scale *= pgrid.spacing(ax) / std::sqrt(2.0 * std::numbers::pi * hbar);
        for (std::size_t j = 0; j < total; ++j) {
            double phase = 0.0;
            for (int ax = 0; ax < n; ++ax) {
                const int c = xgrid.center_index(ax);
                const int jj = xgrid.index_of(j, ax);
                phase -= 2.0 * std::numbers::pi * c * jj / xgrid.axis(ax).n;
            }
            a[j] *= scale * std::polar(1.0, phase);
        }
    }
    return a;
}

} // namespace detail

inline WaveFunction to_momentum(const WaveFunction& psi) {
    if (psi.rep() != Rep::position)
        throw representation_error("to_momentum: input must be in position representation");
    auto amps = detail::continuum_fourier(psi.amplitudes(), psi.grid(), true);
    return WaveFunction(psi.grid(), std::move(amps), Rep::momentum);
}

inline WaveFunction to_position(const WaveFunction& phi) {
    if (phi.rep() != Rep::momentum)
        throw representation_error("to_position: input must be in momentum representation");
    auto amps = detail::continuum_fourier(phi.amplitudes(), phi.grid(), false);
    return WaveFunction(phi.grid(), std::move(amps), Rep::position);
}

inline WaveFunction in_rep(const WaveFunction& psi, Rep rep) {
    if (psi.rep() == rep) return psi;
    return rep == Rep::momentum ? to_momentum(psi) : to_position(psi);
}

inline Density density_of(const WaveFunction& psi) {
    std::vector<double> p(psi.amplitudes().size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::norm(psi.amplitudes()[j]);
    return Density::normalized(psi.domain(), std::move(p), psi.rep());
}

// Momentum-space density evaluated on a caller-chosen grid via the direct
// semidiscrete Fourier sum. Useful when the conjugate grid is too coarse to
// resolve structure (e.g. nodes) in |phi|^2. O(N * M), 1-D only.
inline Density momentum_density_on(const WaveFunction& psi, const GridSpec& pgrid) {
    if (psi.grid().dims() != 1 || pgrid.dims() != 1)
        throw error("momentum_density_on: 1-D only");
    if (psi.rep() != Rep::position)
        throw representation_error("momentum_density_on: input must be in position representation");
    const GridSpec& g = psi.grid();
    const double hbar = g.hbar();
    const std::size_t nx = g.size(), np = pgrid.size();
    std::vector<double> out(np);
    const double scale = g.spacing(0) / std::sqrt(2.0 * std::numbers::pi * hbar);
    for (std::size_t m = 0; m < np; ++m) {
        const double p = pgrid.coord(0, static_cast<int>(m));
        cdouble acc = 0.0;
        for (std::size_t j = 0; j < nx; ++j) {
            const double x = g.coord(0, static_cast<int>(j));
            acc += psi.amplitudes()[j] * std::polar(1.0, -p * x / hbar);
        }
        out[m] = std::norm(acc * scale);
    }
    return Density::normalized(pgrid, std::move(out), Rep::momentum);
}

} // namespace fisherlab
