#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "fisherlab/density.hpp"
#include "fisherlab/fft.hpp"
#include "fisherlab/grid.hpp"

namespace fisherlab {

// Spectral partial derivative along one axis: multiply by (i*k)^order in
// Fourier space. Exact for band-limited fields; assumes the field decays at
// the grid edge (periodic wraparound otherwise). The Nyquist bin is zeroed
// for odd orders so derivatives of real fields stay real.
inline std::vector<cdouble> spectral_derivative(const std::vector<cdouble>& f,
                                                const GridSpec& g, int ax, int order = 1) {
    std::vector<cdouble> a = f;
    dft_forward(a, g);
    const std::size_t total = g.size();
    for (std::size_t m = 0; m < total; ++m) {
        const int bin = g.index_of(m, ax);
        if (order % 2 == 1 && is_nyquist_bin(g, ax, bin)) {
            a[m] = 0.0;
            continue;
        }
        const double k = dft_wavenumber(g, ax, bin);
        a[m] *= std::pow(cdouble(0.0, k), order);
    }
    dft_backward(a, g);
    const double inv = 1.0 / static_cast<double>(total);
    for (auto& v : a) v *= inv;
    return a;
}

inline std::vector<double> spectral_derivative_real(const std::vector<double>& f,
                                                    const GridSpec& g, int ax, int order = 1) {
    std::vector<cdouble> c(f.begin(), f.end());
    auto d = spectral_derivative(c, g, ax, order);
    std::vector<double> out(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) out[j] = d[j].real();
    return out;
}

// All first partials of a complex field.
inline std::vector<std::vector<cdouble>> spectral_gradient(const std::vector<cdouble>& f,
                                                           const GridSpec& g) {
    std::vector<std::vector<cdouble>> out;
    out.reserve(static_cast<std::size_t>(g.dims()));
    for (int ax = 0; ax < g.dims(); ++ax) out.push_back(spectral_derivative(f, g, ax, 1));
    return out;
}

inline std::vector<std::vector<double>> spectral_gradient_real(const std::vector<double>& f,
                                                               const GridSpec& g) {
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(g.dims()));
    for (int ax = 0; ax < g.dims(); ++ax) out.push_back(spectral_derivative_real(f, g, ax, 1));
    return out;
}

// 4th-order central-difference first derivative with periodic wrap;
// cross-check route for fields the spectral method does not like.
inline std::vector<double> fd4_derivative(const std::vector<double>& f, const GridSpec& g,
                                          int ax) {
    const int n = g.axis(ax).n;
    const std::size_t stride = g.stride(ax);
    const double inv12h = 1.0 / (12.0 * g.spacing(ax));
    std::vector<double> out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const int i = g.index_of(j, ax);
        const std::size_t base = j - static_cast<std::size_t>(i) * stride;
        auto at = [&](int ii) {
            const int w = ((ii % n) + n) % n;
            return f[base + static_cast<std::size_t>(w) * stride];
        };
        out[j] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) * inv12h;
    }
    return out;
}

// True when the field magnitude within `cells` spacings of every edge stays
// below `tol` of the global maximum (the spectral-method precondition).
inline bool boundary_decay_ok(const std::vector<cdouble>& f, const GridSpec& g,
                              double tol = 1e-8, int cells = 2) {
    double fmax = 0.0, edge = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double m = std::abs(f[j]);
        fmax = std::max(fmax, m);
        for (int ax = 0; ax < g.dims(); ++ax) {
            const int i = g.index_of(j, ax);
            if (i < cells || i >= g.axis(ax).n - cells) {
                edge = std::max(edge, m);
                break;
            }
        }
    }
    return edge <= tol * fmax;
}

struct Moments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    double boundary_mass = 0.0;
    bool truncation_warning = false; // boundary mass > 1e-6: moments untrustworthy
};

inline Moments moments(const Density& d) {
    const GridSpec& g = d.grid();
    const int n = g.dims();
    const double vol = g.cell_volume();
    Moments out;
    out.mean = Eigen::VectorXd::Zero(n);
    out.cov = Eigen::MatrixXd::Zero(n, n);

    std::vector<double> x(static_cast<std::size_t>(n));
    for (std::size_t j = 0; j < d.values().size(); ++j) {
        const double w = d.values()[j] * vol;
        for (int ax = 0; ax < n; ++ax) x[static_cast<std::size_t>(ax)] = g.coord(ax, g.index_of(j, ax));
        for (int ax = 0; ax < n; ++ax) out.mean(ax) += w * x[static_cast<std::size_t>(ax)];
    }
    for (std::size_t j = 0; j < d.values().size(); ++j) {
        const double w = d.values()[j] * vol;
        for (int ax = 0; ax < n; ++ax) x[static_cast<std::size_t>(ax)] = g.coord(ax, g.index_of(j, ax)) - out.mean(ax);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) out.cov(a, b) += w * x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(b)];
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < a; ++b) out.cov(a, b) = out.cov(b, a);

    out.boundary_mass = d.boundary_mass(4);
    out.truncation_warning = out.boundary_mass > 1e-6;
    return out;
}

inline double variance(const Density& d) {
    if (d.grid().dims() != 1) throw error("variance: 1-D only");
    return moments(d).cov(0, 0);
}

inline double mean(const Density& d) {
    if (d.grid().dims() != 1) throw error("mean: 1-D only");
    return moments(d).mean(0);
}

} // namespace fisherlab
