#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "fisherlab/wavefunction.hpp"

namespace fisherlab {

// Weighted list of pure states sharing one grid; stands in for a mixed state.
class StateEnsemble {
public:
    struct Member {
        double weight;
        WaveFunction state;
    };

    explicit StateEnsemble(std::vector<Member> members) : members_(std::move(members)) {
        if (members_.empty()) throw error("StateEnsemble: needs at least one member");
        double wsum = 0.0;
        for (const auto& m : members_) {
            if (m.weight < 0.0) throw error("StateEnsemble: negative weight");
            if (!m.state.grid().same_lattice(members_.front().state.grid()))
                throw error("StateEnsemble: members must share one grid");
            wsum += m.weight;
        }
        if (std::abs(wsum - 1.0) > 1e-12)
            throw normalization_error("StateEnsemble: weights sum to " + std::to_string(wsum));
    }

    const std::vector<Member>& members() const { return members_; }
    const GridSpec& grid() const { return members_.front().state.grid(); }
    double hbar() const { return grid().hbar(); }

private:
    std::vector<Member> members_;
};

// Weighted sum of the member densities; all members must share one
// representation.
inline Density ensemble_density(const StateEnsemble& ens) {
    const Rep rep = ens.members().front().state.rep();
    for (const auto& m : ens.members())
        if (m.state.rep() != rep)
            throw representation_error("ensemble_density: members in mixed representations");
    std::vector<double> acc(ens.members().front().state.amplitudes().size(), 0.0);
    for (const auto& m : ens.members()) {
        const auto& a = m.state.amplitudes();
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += m.weight * std::norm(a[j]);
    }
    GridSpec domain = ens.members().front().state.domain();
    return Density::normalized(std::move(domain), std::move(acc), rep);
}

// Mixture marginal in the requested representation (members transformed as
// needed).
inline Density ensemble_marginal(const StateEnsemble& ens, Rep rep) {
    std::vector<double> acc;
    GridSpec domain = rep == Rep::position ? ens.grid() : ens.grid().conjugate();
    acc.assign(domain.size(), 0.0);
    for (const auto& m : ens.members()) {
        const WaveFunction w = in_rep(m.state, rep);
        const auto& a = w.amplitudes();
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += m.weight * std::norm(a[j]);
    }
    return Density::normalized(std::move(domain), std::move(acc), rep);
}

} // namespace fisherlab
