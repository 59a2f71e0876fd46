#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fisherlab/nonclassical.hpp"
#include "fisherlab/states.hpp"

using namespace fisherlab;
using Catch::Approx;

namespace {

const GridSpec kGrid = GridSpec::line(-16.0, 16.0, 2048);

// Chirped test state: gaussian envelope with a nonlinear phase, so the
// classical momentum field is genuinely position dependent.
WaveFunction chirped(const GridSpec& g = kGrid) {
    std::vector<cdouble> a(g.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double x = g.coord(0, static_cast<int>(j));
        a[j] = std::exp(-0.25 * x * x) * cdouble(1.0, std::tanh(x));
    }
    return WaveFunction::normalized(g, std::move(a));
}

double field_max_abs(const ClassicalObservableField& f) {
    double m = 0.0;
    for (std::size_t j = 0; j < f.components[0].size(); ++j)
        if (!f.mask[j]) m = std::max(m, std::abs(f.components[0][j]));
    return m;
}

} // namespace

TEST_CASE("classical momentum: real, plane-wave, coherent cases", "[nonclassical]") {
    const WaveFunction real_state = ho_eigenstate(2, 1.0, 1.0, kGrid);
    REQUIRE(field_max_abs(classical_momentum(real_state)) < 1e-10);

    // g(x) e^{i p0 x}: P_cl is the constant p0
    const WaveFunction boosted = gaussian(0.0, 1.5, 1.0, kGrid);
    const auto pcl = classical_momentum(boosted);
    double worst = 0.0;
    for (std::size_t j = 0; j < pcl.components[0].size(); ++j)
        if (!pcl.mask[j]) worst = std::max(worst, std::abs(pcl.components[0][j] - 1.5));
    REQUIRE(worst < 1e-8);

    // coherent state: <P_cl> equals <P> from the momentum density
    const WaveFunction coh = coherent_state(1.0, 2.0, 1.0, 1.0, kGrid);
    const Density px = density_of(coh);
    const auto field = classical_momentum(coh);
    double mean_cl = 0.0;
    for (std::size_t j = 0; j < px.values().size(); ++j)
        if (!field.mask[j]) mean_cl += px.values()[j] * field.components[0][j];
    mean_cl *= kGrid.cell_volume();
    const double mean_p = mean(density_of(to_momentum(coh)));
    REQUIRE(mean_cl == Approx(2.0).epsilon(1e-8));
    REQUIRE(mean_p == Approx(mean_cl).epsilon(1e-8));

    REQUIRE_THROWS_AS(classical_momentum(to_momentum(coh)), representation_error);
}

TEST_CASE("classical position: real phi, displaced, eigenstates", "[nonclassical]") {
    const WaveFunction centered = gaussian(0.0, 0.0, 1.0, kGrid);
    REQUIRE(field_max_abs(classical_position(to_momentum(centered))) < 1e-8);

    // position shift x0 shows up as the constant X_cl = x0
    const WaveFunction displaced = gaussian(3.0, 0.0, 1.0, kGrid);
    const auto xcl = classical_position(to_momentum(displaced));
    double worst = 0.0;
    for (std::size_t j = 0; j < xcl.components[0].size(); ++j)
        if (!xcl.mask[j]) worst = std::max(worst, std::abs(xcl.components[0][j] - 3.0));
    REQUIRE(worst < 1e-7);

    for (int n : {0, 1, 3}) {
        const WaveFunction hn = ho_eigenstate(n, 1.0, 1.0, kGrid);
        REQUIRE(field_max_abs(classical_position(to_momentum(hn))) < 1e-9);
    }
}

TEST_CASE("variance split: gaussian, chirped, eigenstate", "[nonclassical]") {
    const WaveFunction boosted = gaussian(0.0, 0.7, 1.0, kGrid);
    const VarianceSplit sp = variance_split_momentum(boosted);
    REQUIRE(sp.var_classical == Approx(0.0).margin(1e-12));
    REQUIRE(sp.delta_nc == Approx(0.5).epsilon(1e-9)); // hbar/(2 sigma)
    REQUIRE(sp.var_total == Approx(sp.var_classical + sp.var_nonclassical).epsilon(1e-9));
    REQUIRE(std::abs(sp.mean_total - sp.mean_classical) < 1e-8);

    const VarianceSplit sc = variance_split_momentum(chirped());
    REQUIRE(sc.var_classical > 1e-3);
    REQUIRE(sc.residual < 1e-6);

    const VarianceSplit sh = variance_split_momentum(ho_eigenstate(1, 1.0, 1.0, kGrid));
    REQUIRE(sh.delta_nc == Approx(std::sqrt(1.5)).epsilon(1e-9));
    REQUIRE(sh.var_nonclassical == Approx(1.5).epsilon(1e-9)); // (1/4) F_X with F_X = 6

    const VarianceSplit sx = variance_split_position(chirped());
    REQUIRE(sx.residual < 1e-6);
    REQUIRE(variance_split_position(boosted).delta_nc == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("fisher-Heisenberg chain", "[nonclassical]") {
    const HeisenbergChain g = fisher_heisenberg_chain(gaussian(0.0, 0.0, 1.0, kGrid));
    REQUIRE(g.dx_dp == Approx(0.5).epsilon(1e-8));
    REQUIRE(g.deltax_dp == Approx(0.5).epsilon(1e-8));
    REQUIRE(g.deltax_dpnc == Approx(0.5).epsilon(1e-10));

    const HeisenbergChain h1 = fisher_heisenberg_chain(ho_eigenstate(1, 1.0, 1.0, kGrid));
    REQUIRE(h1.dx_dp == Approx(1.5).epsilon(1e-8));
    REQUIRE(h1.deltax_dp == Approx(0.5).epsilon(1e-8));
    REQUIRE(h1.deltax_dpnc == Approx(0.5).epsilon(1e-10));

    for (std::uint64_t seed : {3u, 17u}) {
        const HeisenbergChain c =
            fisher_heisenberg_chain(random_state(seed, 0.7, GridSpec::line(-12.0, 12.0, 512)));
        REQUIRE(c.dx_dp >= c.deltax_dp);
        REQUIRE(c.deltax_dp >= c.deltax_dpnc * (1.0 - 1e-10));
    }
}

TEST_CASE("joint nonclassicality: minimum uncertainty, eigenstates, thermal", "[nonclassical]") {
    const NonclassicalityReport gauss =
        joint_nonclassicality(coherent_state(1.0, -1.0, 1.0, 1.0, kGrid));
    REQUIRE(gauss.j_nc == Approx(1.0).epsilon(1e-8));
    REQUIRE(gauss.j_nc * gauss.j_r == Approx(1.0).margin(1e-12));
    REQUIRE(gauss.split_mismatch < 1e-6);

    for (int n : {1, 2}) {
        const NonclassicalityReport r =
            joint_nonclassicality(ho_eigenstate(n, 1.0, 1.0, kGrid), false);
        REQUIRE(r.j_nc == Approx(2.0 * n + 1.0).epsilon(1e-7));
        REQUIRE(r.j_nc * r.j_r == Approx(1.0).margin(1e-12));
        REQUIRE(r.delta_x * r.delta_p == Approx(1.0 / (4.0 * n + 2.0)).epsilon(1e-7));
    }

    // thermal: J_nc = tanh(hbar omega / 2 T)
    for (double t : {0.5, 2.0, 100.0}) {
        const GridSpec g = t > 10.0 ? GridSpec::line(-100.0, 100.0, 8192) : kGrid;
        const ThermalDensities th = thermal_ho_densities(t, 1.0, 1.0, g);
        const NonclassicalityReport r = joint_nonclassicality(th.position, th.momentum);
        REQUIRE(r.j_nc == Approx(std::tanh(0.5 / t)).epsilon(1e-4));
        REQUIRE(r.j_nc * r.j_r == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("joint nonclassicality for ensembles uses the Fisher-length route", "[nonclassical]") {
    const GridSpec wide = GridSpec::line(-24.0, 24.0, 2048);
    const StateEnsemble ens({{0.5, gaussian(-2.0, 0.0, 1.0, wide)},
                             {0.5, gaussian(2.0, 0.0, 1.0, wide)}});
    const NonclassicalityReport r = joint_nonclassicality(ens);
    REQUIRE(r.j_nc > 0.0);
    REQUIRE(r.j_nc * r.j_r == Approx(1.0).margin(1e-12));
    REQUIRE(std::isnan(r.commutator_rhs));
    // mixing reduces joint nonclassicality below the pure-Gaussian value
    REQUIRE(r.j_nc < 1.0);
}

TEST_CASE("commutator bound", "[nonclassical]") {
    const CommutatorBound gauss = commutator_bound(gaussian(0.0, 0.0, 1.0, kGrid));
    REQUIRE(gauss.rhs == Approx(1.0).epsilon(1e-8));
    REQUIRE(gauss.j_nc == Approx(1.0).epsilon(1e-6));

    const CommutatorBound h1 = commutator_bound(ho_eigenstate(1, 1.0, 1.0, kGrid));
    REQUIRE(h1.rhs == Approx(1.0).epsilon(1e-6)); // X_cl vanishes identically
    REQUIRE(h1.j_nc == Approx(3.0).epsilon(1e-6));

    const CommutatorBound ch = commutator_bound(chirped());
    REQUIRE(ch.j_nc >= ch.rhs - 1e-6);
}

TEST_CASE("quantum potential identity and pointwise form", "[nonclassical]") {
    const WaveFunction h0 = ho_eigenstate(0, 1.0, 1.0, kGrid);
    const QuantumPotential q0 = quantum_potential(h0, 1.0);
    REQUIRE(q0.mean_q == Approx(0.25).epsilon(1e-8));
    REQUIRE(q0.predicted == Approx(0.25).epsilon(1e-8));
    // Q(x) = hbar w/2 - m w^2 x^2/2 on the ground state
    double worst = 0.0;
    for (std::size_t j = 0; j < q0.values.size(); ++j) {
        if (q0.mask[j]) continue;
        const double x = kGrid.coord(0, static_cast<int>(j));
        if (std::abs(x) > 6.0) continue; // ratio becomes noisy in the deep tail
        worst = std::max(worst, std::abs(q0.values[j] - (0.5 - 0.5 * x * x)));
    }
    REQUIRE(worst < 1e-6);

    const QuantumPotential qg = quantum_potential(gaussian(0.0, 0.0, 2.0, kGrid), 1.0);
    REQUIRE(qg.mean_q == Approx(1.0 / 32.0).epsilon(1e-8));

    const QuantumPotential qm = quantum_potential(gaussian(0.0, 0.0, 1.0, kGrid), 3.0);
    REQUIRE(qm.mean_q == Approx(1.0 / 24.0).epsilon(1e-8));
}

TEST_CASE("fisher variation against the quantum-potential kernel", "[nonclassical]") {
    const Density base = density_of(gaussian(0.0, 0.0, 1.0, kGrid));

    const std::vector<double> zero(base.values().size(), 0.0);
    const VariationCheck trivial = fisher_variation_check(base, zero);
    REQUIRE(std::abs(trivial.actual) < 1e-9);
    REQUIRE(std::abs(trivial.predicted) < 1e-9);

    // zero-mean bump difference at +-1 sigma
    auto bump_pair = [&](const Density& d) {
        const GridSpec& g = d.grid();
        std::vector<double> dp(g.size());
        double net = 0.0;
        for (std::size_t j = 0; j < dp.size(); ++j) {
            const double x = g.coord(0, static_cast<int>(j));
            dp[j] = std::exp(-8.0 * (x - 1.0) * (x - 1.0)) -
                    std::exp(-8.0 * (x + 1.0) * (x + 1.0));
            net += dp[j];
        }
        for (auto& v : dp) v -= net / static_cast<double>(dp.size());
        return dp;
    };

    const VariationCheck vg = fisher_variation_check(base, bump_pair(base));
    REQUIRE(vg.actual == Approx(vg.predicted).epsilon(1e-3));

    const Density h1 = density_of(ho_eigenstate(1, 1.0, 1.0, kGrid));
    const VariationCheck vh = fisher_variation_check(h1, bump_pair(h1));
    REQUIRE(vh.actual == Approx(vh.predicted).epsilon(1e-3));
}

TEST_CASE("2-D nonclassical covariances", "[nonclassical]") {
    const GridSpec g2({Axis{-12.0, 12.0, 256}, Axis{-24.0, 24.0, 256}});
    const double s1 = 1.0, s2 = 2.0;

    auto make_state = [&](bool with_phase) {
        std::vector<cdouble> a(g2.size());
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double x = g2.coord(0, g2.index_of(j, 0));
            const double y = g2.coord(1, g2.index_of(j, 1));
            const double env = std::exp(-0.25 * x * x / (s1 * s1) - 0.25 * y * y / (s2 * s2));
            a[j] = with_phase ? env * std::polar(1.0, x * y) : cdouble(env, 0.0);
        }
        return WaveFunction::normalized(g2, std::move(a));
    };

    const NonclassicalCovariances plain = nonclassical_covariances(make_state(false));
    REQUIRE(plain.cov_p_nc(0, 0) == Approx(0.25).epsilon(1e-8));
    REQUIRE(plain.cov_p_nc(1, 1) == Approx(1.0 / 16.0).epsilon(1e-8));
    REQUIRE(plain.cov_p_cl.cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(plain.split_residual < 1e-6);
    REQUIRE(plain.heisenberg_min_eig > -1e-8);

    // phase e^{i x y}: P_cl = (y, x), so Cov(P_cl) = diag(Var Y, Var X)
    const NonclassicalCovariances sheared = nonclassical_covariances(make_state(true));
    REQUIRE(sheared.cov_p_cl(0, 0) == Approx(s2 * s2).epsilon(1e-6));
    REQUIRE(sheared.cov_p_cl(1, 1) == Approx(s1 * s1).epsilon(1e-6));
    REQUIRE(sheared.split_residual < 1e-6);
    REQUIRE(sheared.heisenberg_min_eig > -1e-8);

    // 1-D embedding reduces to the variance split
    const WaveFunction flat = chirped();
    const NonclassicalCovariances oneD = nonclassical_covariances(flat);
    const VarianceSplit sp = variance_split_momentum(flat);
    REQUIRE(oneD.cov_p(0, 0) == Approx(sp.var_total).epsilon(1e-10));
    REQUIRE(oneD.cov_p_cl(0, 0) == Approx(sp.var_classical).epsilon(1e-10));
    REQUIRE(oneD.cov_p_nc(0, 0) == Approx(sp.var_nonclassical).epsilon(1e-10));
}

TEST_CASE("reports are invariant under global phase and translation", "[nonclassical]") {
    const WaveFunction base = chirped();
    std::vector<cdouble> rotated = base.amplitudes();
    for (auto& v : rotated) v *= std::polar(1.0, 1.234);
    const WaveFunction rot(kGrid, std::move(rotated), Rep::position);

    const NonclassicalityReport r0 = joint_nonclassicality(base, false);
    const NonclassicalityReport r1 = joint_nonclassicality(rot, false);
    REQUIRE(r1.j_nc == Approx(r0.j_nc).epsilon(1e-10));
    REQUIRE(r1.delta_x == Approx(r0.delta_x).epsilon(1e-10));

    // translation: rebuild the chirp about a shifted center
    std::vector<cdouble> shifted(kGrid.size());
    for (std::size_t j = 0; j < shifted.size(); ++j) {
        const double x = kGrid.coord(0, static_cast<int>(j)) - 1.5;
        shifted[j] = std::exp(-0.25 * x * x) * cdouble(1.0, std::tanh(x));
    }
    const NonclassicalityReport r2 =
        joint_nonclassicality(WaveFunction::normalized(kGrid, std::move(shifted)), false);
    REQUIRE(r2.j_nc == Approx(r0.j_nc).epsilon(1e-8));
    REQUIRE(r2.delta_p == Approx(r0.delta_p).epsilon(1e-8));
}

TEST_CASE("expectation identities hold across seeded random states", "[nonclassical]") {
    const GridSpec g = GridSpec::line(-12.0, 12.0, 512);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const WaveFunction psi = random_state(seed, 0.7, g);
        const VarianceSplit sp = variance_split_momentum(psi);
        const VarianceSplit sx = variance_split_position(psi);
        const double dp = std::sqrt(sp.var_total);
        REQUIRE(std::abs(sp.mean_total - sp.mean_classical) < 1e-6 * dp);
        REQUIRE(sp.residual < 1e-6);
        REQUIRE(sx.residual < 1e-6);
    }
}

TEST_CASE("symmetric real states saturate the first equality of the length product",
          "[nonclassical]") {
    // For symmetric or antisymmetric real wavefunctions:
    // delta X delta P * Delta X Delta P = hbar^2/4.
    for (int n : {0, 1, 2, 5}) {
        const WaveFunction hn = ho_eigenstate(n, 1.0, 1.0, kGrid);
        const Density px = density_of(hn);
        const Density pp = density_of(to_momentum(hn));
        const double product = std::sqrt(variance(px) * variance(pp)) /
                               std::sqrt(fisher_information(px) * fisher_information(pp));
        REQUIRE(product == Approx(0.25).epsilon(1e-6));
    }
}
