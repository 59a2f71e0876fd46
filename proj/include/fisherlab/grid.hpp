#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "fisherlab/errors.hpp"

namespace fisherlab {

struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;

    double spacing() const { return (hi - lo) / n; }
};

// Uniform rectangular sampling lattice in n dimensions. Point j on an axis
// sits at lo + j*h; the point hi itself is identified with lo by the
// periodicity the spectral operators assume. The conjugate (momentum) grid
// of an axis has the same point count, spacing 2*pi*hbar/(n*h), and is
// centered on zero.
class GridSpec {
public:
    GridSpec(std::vector<Axis> axes, double hbar = 1.0)
        : axes_(std::move(axes)), hbar_(hbar) {
        if (axes_.empty()) throw error("GridSpec: needs at least one axis");
        if (!(hbar_ > 0.0)) throw error("GridSpec: hbar must be positive");
        for (const auto& a : axes_) {
            if (!(a.hi > a.lo))
                throw error("GridSpec: axis upper bound must exceed lower bound");
            if (a.n < 8) throw error("GridSpec: need at least 8 points per axis");
        }
    }

    static GridSpec line(double lo, double hi, int n, double hbar = 1.0) {
        return GridSpec({Axis{lo, hi, n}}, hbar);
    }

    int dims() const { return static_cast<int>(axes_.size()); }
    const Axis& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }
    double hbar() const { return hbar_; }
    double spacing(int i) const { return axis(i).spacing(); }

    std::size_t size() const {
        std::size_t s = 1;
        for (const auto& a : axes_) s *= static_cast<std::size_t>(a.n);
        return s;
    }

    double cell_volume() const {
        double v = 1.0;
        for (const auto& a : axes_) v *= a.spacing();
        return v;
    }

    double coord(int ax, int idx) const {
        const Axis& a = axis(ax);
        return a.lo + idx * a.spacing();
    }

    // The momentum origin index: coord(ax, center_index(ax)) == 0 on the
    // conjugate grid.
    int center_index(int ax) const { return axis(ax).n / 2; }

    GridSpec conjugate() const {
        std::vector<Axis> out;
        out.reserve(axes_.size());
        for (int i = 0; i < dims(); ++i) {
            const Axis& a = axis(i);
            const double hp = 2.0 * std::numbers::pi * hbar_ / (a.n * a.spacing());
            const double lo = -center_index(i) * hp;
            out.push_back(Axis{lo, lo + a.n * hp, a.n});
        }
        return GridSpec(std::move(out), hbar_);
    }

    // Row-major stride of an axis in the flattened value array.
    std::size_t stride(int ax) const {
        std::size_t s = 1;
        for (int i = dims() - 1; i > ax; --i) s *= static_cast<std::size_t>(axis(i).n);
        return s;
    }

    int index_of(std::size_t flat, int ax) const {
        return static_cast<int>((flat / stride(ax)) % static_cast<std::size_t>(axis(ax).n));
    }

    bool same_lattice(const GridSpec& o) const {
        if (dims() != o.dims() || hbar_ != o.hbar_) return false;
        for (int i = 0; i < dims(); ++i) {
            const Axis &a = axis(i), &b = o.axis(i);
            if (a.n != b.n) return false;
            if (std::abs(a.lo - b.lo) > 1e-12 * (1.0 + std::abs(a.lo))) return false;
            if (std::abs(a.hi - b.hi) > 1e-12 * (1.0 + std::abs(a.hi))) return false;
        }
        return true;
    }

private:
    std::vector<Axis> axes_;
    double hbar_;
};

} // namespace fisherlab
