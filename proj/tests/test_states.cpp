#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fisherlab/calculus.hpp"
#include "fisherlab/states.hpp"

using namespace fisherlab;
using Catch::Approx;

namespace {
const GridSpec kGrid = GridSpec::line(-16.0, 16.0, 2048);
}

TEST_CASE("gaussian: moments in both representations", "[states]") {
    const WaveFunction psi = gaussian(0.0, 0.0, 1.0, kGrid);
    const Density px = density_of(psi);
    REQUIRE(mean(px) == Approx(0.0).margin(1e-10));
    REQUIRE(variance(px) == Approx(1.0).epsilon(1e-9));

    const Density pp = density_of(to_momentum(gaussian(0.0, 2.0, 1.0, kGrid)));
    REQUIRE(mean(pp) == Approx(2.0).epsilon(1e-9));

    REQUIRE_THROWS_AS(gaussian(0.0, 0.0, 3.0, GridSpec::line(-8.0, 8.0, 256)),
                      truncation_error);
    REQUIRE_THROWS_AS(gaussian(0.0, 0.0, -1.0, kGrid), error);
}

TEST_CASE("gaussian at the oscillator width equals the ground state", "[states]") {
    const WaveFunction g = gaussian(0.0, 0.0, 1.0 / std::sqrt(2.0), kGrid);
    const WaveFunction h = ho_eigenstate(0, 1.0, 1.0, kGrid);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.amplitudes().size(); ++j)
        worst = std::max(worst, std::abs(g.amplitudes()[j] - h.amplitudes()[j]));
    REQUIRE(worst < 1e-10);
}

TEST_CASE("oscillator eigenstates: variances, nodes, energies", "[states]") {
    const WaveFunction h0 = ho_eigenstate(0, 1.0, 1.0, kGrid);
    REQUIRE(variance(density_of(h0)) == Approx(0.5).epsilon(1e-9));

    const WaveFunction h1 = ho_eigenstate(1, 1.0, 1.0, kGrid);
    REQUIRE(variance(density_of(h1)) == Approx(1.5).epsilon(1e-9));

    // node count equals n (Sturm property)
    for (int n : {1, 2, 5, 9}) {
        const WaveFunction hn = ho_eigenstate(n, 1.0, 1.0, kGrid);
        int sign_changes = 0;
        double prev = 0.0;
        for (const auto& a : hn.amplitudes()) {
            const double v = a.real();
            if (std::abs(v) < 1e-9) continue; // skip underflowed tails
            if (prev != 0.0 && v * prev < 0.0) ++sign_changes;
            prev = v;
        }
        REQUIRE(sign_changes == n);
    }

    // eigen-energy <P^2/2m + m w^2 X^2/2> = hbar w (n + 1/2)
    for (int n : {0, 1, 4, 10}) {
        const WaveFunction hn = ho_eigenstate(n, 1.0, 1.0, kGrid);
        const Density px = density_of(hn);
        const Density pp = density_of(to_momentum(hn));
        double x2 = 0.0, p2 = 0.0;
        for (std::size_t j = 0; j < px.values().size(); ++j) {
            const double x = px.grid().coord(0, static_cast<int>(j));
            x2 += px.values()[j] * x * x;
        }
        for (std::size_t m = 0; m < pp.values().size(); ++m) {
            const double p = pp.grid().coord(0, static_cast<int>(m));
            p2 += pp.values()[m] * p * p;
        }
        const double energy = 0.5 * p2 * pp.grid().cell_volume() +
                              0.5 * x2 * px.grid().cell_volume();
        REQUIRE(energy == Approx(n + 0.5).epsilon(1e-8));
    }

    REQUIRE_THROWS_AS(ho_eigenstate(40, 1.0, 1.0, GridSpec::line(-8.0, 8.0, 512)),
                      truncation_error);
}

TEST_CASE("oscillator eigenstates are pairwise orthogonal", "[states]") {
    std::vector<WaveFunction> states;
    for (int n = 0; n <= 10; ++n) states.push_back(ho_eigenstate(n, 1.0, 1.0, kGrid));
    const double vol = kGrid.cell_volume();
    for (std::size_t a = 0; a < states.size(); ++a)
        for (std::size_t b = a + 1; b < states.size(); ++b) {
            cdouble ip = 0.0;
            for (std::size_t j = 0; j < states[a].amplitudes().size(); ++j)
                ip += std::conj(states[a].amplitudes()[j]) * states[b].amplitudes()[j];
            REQUIRE(std::abs(ip) * vol < 1e-8);
        }
}

TEST_CASE("superposition basics", "[states]") {
    const WaveFunction h0 = ho_eigenstate(0, 1.0, 1.0, kGrid);
    const WaveFunction h1 = ho_eigenstate(1, 1.0, 1.0, kGrid);

    const WaveFunction same = superposition({1.0}, {h0});
    double worst = 0.0;
    for (std::size_t j = 0; j < h0.amplitudes().size(); ++j)
        worst = std::max(worst, std::abs(same.amplitudes()[j] - h0.amplitudes()[j]));
    REQUIRE(worst < 1e-12);

    // <X> of (psi0 + psi1)/sqrt(2) is the ladder matrix element 1/sqrt(2)
    const WaveFunction mix = superposition({1.0, 1.0}, {h0, h1});
    REQUIRE(mean(density_of(mix)) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

    // global phase leaves the density unchanged
    const WaveFunction rot = superposition({cdouble(0.0, 1.0)}, {h0});
    const Density d0 = density_of(h0), dr = density_of(rot);
    worst = 0.0;
    for (std::size_t j = 0; j < d0.values().size(); ++j)
        worst = std::max(worst, std::abs(d0.values()[j] - dr.values()[j]));
    REQUIRE(worst < 1e-14);

    REQUIRE_THROWS_AS(superposition({1.0, -1.0}, {h0, h0}), degenerate_state_error);
}

TEST_CASE("thermal oscillator densities", "[states]") {
    const GridSpec wide = GridSpec::line(-100.0, 100.0, 8192);

    const ThermalDensities cold = thermal_ho_densities(0.0, 1.0, 1.0, kGrid);
    REQUIRE(variance(cold.position) == Approx(0.5).epsilon(1e-9));
    REQUIRE(variance(cold.momentum) == Approx(0.5).epsilon(1e-9));

    const ThermalDensities hot = thermal_ho_densities(100.0, 1.0, 1.0, wide);
    REQUIRE(variance(hot.position) == Approx(100.0).epsilon(1e-2)); // equipartition
    const double coth = 1.0 / std::tanh(0.5 / 100.0);
    REQUIRE(variance(hot.position) * variance(hot.momentum) ==
            Approx(0.25 * coth * coth).epsilon(1e-8));
    REQUIRE(variance(hot.position) * variance(hot.momentum) >= 0.25);

    REQUIRE_THROWS_AS(thermal_ho_densities(-1.0, 1.0, 1.0, kGrid), error);
}

TEST_CASE("random states: deterministic, distinct, well-behaved", "[states]") {
    const GridSpec g = GridSpec::line(-12.0, 12.0, 512);
    const WaveFunction a = random_state(1, 0.8, g);
    const WaveFunction b = random_state(1, 0.8, g);
    const WaveFunction c = random_state(2, 0.8, g);

    double same = 0.0, diff = 0.0;
    for (std::size_t j = 0; j < a.amplitudes().size(); ++j) {
        same = std::max(same, std::abs(a.amplitudes()[j] - b.amplitudes()[j]));
        diff += std::norm(a.amplitudes()[j] - c.amplitudes()[j]);
    }
    REQUIRE(same == 0.0);
    REQUIRE(std::sqrt(diff * g.cell_volume()) > 0.1);

    REQUIRE(a.norm_squared() == Approx(1.0).epsilon(1e-12));
    REQUIRE(boundary_decay_ok(a.amplitudes(), g));
    REQUIRE_THROWS_AS(random_state(1, 0.1, g), error);
}

TEST_CASE("random states satisfy the core invariants for many seeds", "[states]") {
    const GridSpec g = GridSpec::line(-12.0, 12.0, 512);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const WaveFunction psi = random_state(seed, 0.7, g);
        REQUIRE(psi.norm_squared() == Approx(1.0).epsilon(1e-10));
        const WaveFunction phi = to_momentum(psi);
        REQUIRE(phi.norm_squared() == Approx(1.0).epsilon(1e-10));
        const WaveFunction back = to_position(phi);
        double worst = 0.0;
        for (std::size_t j = 0; j < psi.amplitudes().size(); ++j)
            worst = std::max(worst, std::abs(psi.amplitudes()[j] - back.amplitudes()[j]));
        REQUIRE(worst < 1e-10);
    }
}
