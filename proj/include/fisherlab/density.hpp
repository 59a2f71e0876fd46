#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fisherlab/grid.hpp"

namespace fisherlab {

enum class Rep { position, momentum };

inline const char* rep_name(Rep r) { return r == Rep::position ? "position" : "momentum"; }

// Nonnegative normalized real field on a grid: a position- or momentum-space
// probability density. The domain grid holds the axes the values actually
// live on (the conjugate grid, for momentum densities).
class Density {
public:
    Density(GridSpec domain, std::vector<double> values, Rep rep)
        : domain_(std::move(domain)), values_(std::move(values)), rep_(rep) {
        if (values_.size() != domain_.size())
            throw error("Density: value count does not match grid");
        const double vol = domain_.cell_volume();
        double mass = 0.0, vmax = 0.0;
        for (double v : values_) vmax = std::max(vmax, v);
        for (double& v : values_) {
            if (v < 0.0) {
                if (v < -1e-12 * vmax)
                    throw normalization_error("Density: negative values");
                v = 0.0; // roundoff from spectral operations
            }
            mass += v;
        }
        mass *= vol;
        if (std::abs(mass - 1.0) > 1e-10)
            throw normalization_error("Density: integrates to " + std::to_string(mass) +
                                      ", expected 1");
    }

    // Normalizes before construction; rejects (numerically) massless input.
    static Density normalized(GridSpec domain, std::vector<double> values, Rep rep) {
        double mass = 0.0;
        for (double v : values) mass += std::max(v, 0.0);
        mass *= domain.cell_volume();
        if (!(mass > 1e-300))
            throw degenerate_state_error("Density: cannot normalize zero mass");
        for (double& v : values) v /= mass;
        return Density(std::move(domain), std::move(values), rep);
    }

    const GridSpec& grid() const { return domain_; }
    const std::vector<double>& values() const { return values_; }
    Rep rep() const { return rep_; }

    double max_value() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, v);
        return m;
    }

    // Probability mass within `cells` grid spacings of any grid edge.
    double boundary_mass(int cells = 4) const {
        const double vol = domain_.cell_volume();
        double mass = 0.0;
        for (std::size_t j = 0; j < values_.size(); ++j) {
            for (int ax = 0; ax < domain_.dims(); ++ax) {
                const int i = domain_.index_of(j, ax);
                if (i < cells || i >= domain_.axis(ax).n - cells) {
                    mass += values_[j] * vol;
                    break;
                }
            }
        }
        return mass;
    }

private:
    GridSpec domain_;
    std::vector<double> values_;
    Rep rep_;
};

} // namespace fisherlab
