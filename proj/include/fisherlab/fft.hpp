#pragma once

#include <complex>
#include <vector>

#include <fftw3.h>

#include "fisherlab/grid.hpp"

namespace fisherlab {

using cdouble = std::complex<double>;

namespace detail {

inline void run_dft(std::vector<cdouble>& a, const GridSpec& g, int sign) {
    std::vector<int> n(static_cast<std::size_t>(g.dims()));
    for (int i = 0; i < g.dims(); ++i) n[static_cast<std::size_t>(i)] = g.axis(i).n;
    auto* ptr = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan plan = fftw_plan_dft(g.dims(), n.data(), ptr, ptr, sign, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

// Signed mode number for DFT bin m of an axis with n points; the Nyquist
// bin of an even-length axis maps to -n/2.
inline int signed_mode(int m, int n) { return m < (n + 1) / 2 ? m : m - n; }

} // namespace detail

// Unnormalized forward DFT, exp(-2*pi*i*m*j/N) convention (all axes).
inline void dft_forward(std::vector<cdouble>& a, const GridSpec& g) {
    detail::run_dft(a, g, FFTW_FORWARD);
}

// Unnormalized backward DFT, exp(+2*pi*i*m*j/N) convention (all axes).
inline void dft_backward(std::vector<cdouble>& a, const GridSpec& g) {
    detail::run_dft(a, g, FFTW_BACKWARD);
}

// Spatial angular frequency of DFT bin m on an axis (derivative multiplier
// is i*k). The Nyquist bin has no well-defined sign; callers that build
// derivative multipliers zero it.
inline double dft_wavenumber(const GridSpec& g, int ax, int m) {
    const Axis& a = g.axis(ax);
    const int s = detail::signed_mode(m, a.n);
    return 2.0 * std::numbers::pi * s / (a.n * a.spacing());
}

inline bool is_nyquist_bin(const GridSpec& g, int ax, int m) {
    const int n = g.axis(ax).n;
    return (n % 2 == 0) && m == n / 2;
}

} // namespace fisherlab
