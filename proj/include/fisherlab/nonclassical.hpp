#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "fisherlab/ensemble.hpp"
#include "fisherlab/info_measures.hpp"
#include "fisherlab/wavefunction.hpp"

namespace fisherlab {

// A "classical observable" multiplier field: P_cl(x) = hbar Im(psi'/psi) per
// axis in position space, X_cl(p) = -hbar Im(phi'/phi) in momentum space.
// Points where the density sits below the node threshold are masked; their
// values are zeroed and excluded from quadratures.
struct ClassicalObservableField {
    GridSpec domain;
    Rep rep;
    std::vector<std::vector<double>> components; // one per axis
    std::vector<char> mask;                      // 1 = masked (near node)
    double masked_mass = 0.0;
};

namespace detail {

inline ClassicalObservableField phase_gradient_field(const WaveFunction& w, double sign) {
    const GridSpec domain = w.domain();
    const double hbar = w.hbar();
    const auto& a = w.amplitudes();

    double pmax = 0.0;
    for (const auto& v : a) pmax = std::max(pmax, std::norm(v));
    const double thresh = kNodeThresholdRel * pmax;

    ClassicalObservableField f{domain, w.rep(), {}, std::vector<char>(a.size(), 0), 0.0};
    const double vol = domain.cell_volume();
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double p = std::norm(a[j]);
        if (p <= thresh) {
            f.mask[j] = 1;
            f.masked_mass += p * vol;
        }
    }
    for (int ax = 0; ax < domain.dims(); ++ax) {
        const auto da = spectral_derivative(a, domain, ax, 1);
        std::vector<double> comp(a.size(), 0.0);
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (f.mask[j]) continue;
            // Im(da/a) = Im(conj(a) da)/|a|^2
            comp[j] = sign * hbar * std::imag(std::conj(a[j]) * da[j]) / std::norm(a[j]);
        }
        f.components.push_back(std::move(comp));
    }
    return f;
}

struct FieldStats {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    double covered_mass = 0.0; // probability on unmasked points
};

inline FieldStats field_stats(const ClassicalObservableField& f, const std::vector<double>& p) {
    const int n = f.domain.dims();
    const double vol = f.domain.cell_volume();
    FieldStats s{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n), 0.0};
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (f.mask[j]) continue;
        const double w = p[j] * vol;
        s.covered_mass += w;
        for (int a = 0; a < n; ++a) s.mean(a) += w * f.components[static_cast<std::size_t>(a)][j];
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (f.mask[j]) continue;
        const double w = p[j] * vol;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                s.cov(a, b) += w * (f.components[static_cast<std::size_t>(a)][j] - s.mean(a)) *
                               (f.components[static_cast<std::size_t>(b)][j] - s.mean(b));
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < a; ++b) s.cov(a, b) = s.cov(b, a);
    return s;
}

} // namespace detail

inline ClassicalObservableField classical_momentum(const WaveFunction& psi) {
    if (psi.rep() != Rep::position)
        throw representation_error("classical_momentum: input must be in position representation");
    auto f = detail::phase_gradient_field(psi, +1.0);
    if (f.masked_mass > 0.05)
        throw mask_error("classical_momentum: masked points carry " +
                         std::to_string(f.masked_mass) + " probability");
    return f;
}

inline ClassicalObservableField classical_position(const WaveFunction& phi) {
    if (phi.rep() != Rep::momentum)
        throw representation_error("classical_position: input must be in momentum representation");
    auto f = detail::phase_gradient_field(phi, -1.0);
    if (f.masked_mass > 0.05)
        throw mask_error("classical_position: masked points carry " +
                         std::to_string(f.masked_mass) + " probability");
    return f;
}

struct VarianceSplit {
    double var_total;        // variance of the conjugate observable
    double var_classical;    // variance of the multiplier field
    double var_nonclassical; // (hbar^2/4) * Fisher information
    double delta_nc;         // sqrt(var_nonclassical)
    double mean_total;       // <P> (resp. <X>)
    double mean_classical;   // <P_cl> (resp. <X_cl>)
    double residual;         // |var_total - var_classical - var_nonclassical| / var_total
};

namespace detail {

inline VarianceSplit make_split(double var_total, double mean_total,
                                const FieldStats& cls, double fisher, double hbar) {
    VarianceSplit s{};
    s.var_total = var_total;
    s.mean_total = mean_total;
    s.var_classical = cls.cov(0, 0);
    s.mean_classical = cls.mean(0);
    s.var_nonclassical = 0.25 * hbar * hbar * fisher;
    s.delta_nc = std::sqrt(s.var_nonclassical);
    s.residual = std::abs(s.var_total - s.var_classical - s.var_nonclassical) / s.var_total;
    if (s.residual > 1e-6)
        throw discretization_error("variance split: decomposition residual " +
                                   std::to_string(s.residual));
    return s;
}

} // namespace detail

// Var P = Var P_cl + Var P_nc with Var P_nc = (hbar^2/4) F_X.
inline VarianceSplit variance_split_momentum(const WaveFunction& psi) {
    if (psi.grid().dims() != 1) throw error("variance_split_momentum: 1-D only");
    if (psi.rep() != Rep::position)
        throw representation_error("variance_split_momentum: position representation expected");
    const Density px = density_of(psi);
    const Density pp = density_of(to_momentum(psi));
    const Moments mp = moments(pp);
    const auto pcl = classical_momentum(psi);
    const auto stats = detail::field_stats(pcl, px.values());
    return detail::make_split(mp.cov(0, 0), mp.mean(0), stats, fisher_information(px),
                              psi.hbar());
}

// Conjugate split: Var X = Var X_cl + Var X_nc with Var X_nc = (hbar^2/4) F_P.
inline VarianceSplit variance_split_position(const WaveFunction& psi) {
    if (psi.grid().dims() != 1) throw error("variance_split_position: 1-D only");
    const WaveFunction phi = in_rep(psi, Rep::momentum);
    const WaveFunction pos = in_rep(psi, Rep::position);
    const Density px = density_of(pos);
    const Density pp = density_of(phi);
    const Moments mx = moments(px);
    const auto xcl = classical_position(phi);
    const auto stats = detail::field_stats(xcl, pp.values());
    return detail::make_split(mx.cov(0, 0), mx.mean(0), stats, fisher_information(pp),
                              psi.hbar());
}

struct HeisenbergChain {
    double dx_dp;        // Delta X * Delta P
    double deltax_dp;    // delta X * Delta P
    double deltax_dpnc;  // delta X * Delta P_nc  (= hbar/2, identity)
};

inline HeisenbergChain fisher_heisenberg_chain(const WaveFunction& psi) {
    if (psi.grid().dims() != 1) throw error("fisher_heisenberg_chain: 1-D only");
    const WaveFunction pos = in_rep(psi, Rep::position);
    const Density px = density_of(pos);
    const Density pp = density_of(to_momentum(pos));
    const double dx = std::sqrt(variance(px));
    const double dp = std::sqrt(variance(pp));
    const double f = fisher_information(px);
    const double deltax = 1.0 / std::sqrt(f);
    const double dpnc = 0.5 * psi.hbar() * std::sqrt(f);
    HeisenbergChain c{dx * dp, deltax * dp, deltax * dpnc};
    const double half = 0.5 * psi.hbar();
    if (std::abs(c.deltax_dpnc - half) > 1e-6 * half)
        throw discretization_error("fisher_heisenberg_chain: delta X * Delta P_nc != hbar/2");
    if (c.dx_dp < c.deltax_dp - 1e-10 * c.dx_dp || c.deltax_dp < c.deltax_dpnc - 1e-10 * c.dx_dp)
        throw discretization_error("fisher_heisenberg_chain: ordering violated");
    return c;
}

struct CommutatorBound {
    double j_nc;             // joint nonclassicality (variance-split route)
    double rhs;              // |1 + (i/hbar) <[P_cl, X_cl]>|
    cdouble commutator;      // <[P_cl, X_cl]>
};

// Expectation of [P_cl, X_cl] with each field applied as a multiplier in its
// own representation; both operator orders are computed and antisymmetrized.
inline CommutatorBound commutator_bound(const WaveFunction& psi) {
    if (psi.grid().dims() != 1) throw error("commutator_bound: 1-D only");
    const WaveFunction pos = in_rep(psi, Rep::position);
    const WaveFunction mom = to_momentum(pos);
    const auto pcl = classical_momentum(pos);
    const auto xcl = classical_position(mom);
    if (pcl.masked_mass > 1e-3 || xcl.masked_mass > 1e-3)
        throw mask_error("commutator_bound: masked fields cover less than 99.9% of the mass");

    const GridSpec& xg = pos.grid();
    const GridSpec pg = mom.domain();
    const double volx = xg.cell_volume();
    const double volp = pg.cell_volume();
    const std::size_t n = pos.amplitudes().size();

    // <P_cl X_cl>: apply X_cl in momentum space, come back, apply P_cl.
    std::vector<cdouble> xphi(n);
    for (std::size_t m = 0; m < n; ++m) xphi[m] = mom.amplitudes()[m] * xcl.components[0][m];
    const auto chi = detail::continuum_fourier(xphi, xg, false);
    cdouble pcl_xcl = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        pcl_xcl += std::conj(pos.amplitudes()[j]) * pcl.components[0][j] * chi[j];
    pcl_xcl *= volx;

    // <X_cl P_cl>: apply P_cl in position space, transform, apply X_cl.
    std::vector<cdouble> ppsi(n);
    for (std::size_t j = 0; j < n; ++j) ppsi[j] = pos.amplitudes()[j] * pcl.components[0][j];
    const auto xi = detail::continuum_fourier(ppsi, xg, true);
    cdouble xcl_pcl = 0.0;
    for (std::size_t m = 0; m < n; ++m)
        xcl_pcl += std::conj(mom.amplitudes()[m]) * xcl.components[0][m] * xi[m];
    xcl_pcl *= volp;

    CommutatorBound out{};
    out.commutator = pcl_xcl - xcl_pcl;
    const double hbar = psi.hbar();
    out.rhs = std::abs(1.0 + cdouble(0.0, 1.0) / hbar * out.commutator);

    const VarianceSplit sp = variance_split_momentum(pos);
    const VarianceSplit sx = variance_split_position(pos);
    const double dpnc2 = sp.var_total - sp.var_classical;
    const double dxnc2 = sx.var_total - sx.var_classical;
    out.j_nc = std::sqrt(dxnc2 * dpnc2) / (0.5 * hbar);
    if (out.j_nc < out.rhs - 1e-6 * std::max(1.0, out.j_nc))
        throw discretization_error("commutator_bound: J_nc >= |1 + (i/hbar)<[P_cl,X_cl]>| violated");
    return out;
}

// Joint nonclassicality / robustness bundle. The field names of the flat
// JSON serialization are fixed; see report.hpp.
struct NonclassicalityReport {
    double j_nc = 0.0;
    double j_r = 0.0;
    double delta_x = 0.0; // Fisher length (1-D) or Fisher volume (n-D)
    double delta_p = 0.0;
    double dx_nc = std::numeric_limits<double>::quiet_NaN();
    double dp_nc = std::numeric_limits<double>::quiet_NaN();
    double commutator_rhs = std::numeric_limits<double>::quiet_NaN(); // pure 1-D only
    double masked_mass_x = 0.0;
    double masked_mass_p = 0.0;
    // Pure-state cross-check: Eq-(22)-style split route vs Fisher-length route.
    double j_nc_split = std::numeric_limits<double>::quiet_NaN();
    double split_mismatch = std::numeric_limits<double>::quiet_NaN();
    // n-D scalar measures.
    double j_nc_volume = std::numeric_limits<double>::quiet_NaN(); // (hbar/2)^n sqrt(det F_X det F_P)
    double j_nc_trace = std::numeric_limits<double>::quiet_NaN();  // (hbar/2) sqrt(tr F_X tr F_P)
    bool pure = false;
};

// Mixed-state route: only the Fisher-length measures are defined.
inline NonclassicalityReport joint_nonclassicality(const Density& pos, const Density& mom) {
    if (pos.rep() != Rep::position || mom.rep() != Rep::momentum)
        throw representation_error("joint_nonclassicality: need a (position, momentum) pair");
    const double hbar = pos.grid().hbar();
    const int n = pos.grid().dims();
    NonclassicalityReport r;
    FisherDiagnostics dx, dp;
    const Eigen::MatrixXd fx = fisher_matrix(pos, &dx);
    const Eigen::MatrixXd fp = fisher_matrix(mom, &dp);
    r.masked_mass_x = dx.masked_mass;
    r.masked_mass_p = dp.masked_mass;
    r.delta_x = 1.0 / std::sqrt(fx.determinant());
    r.delta_p = 1.0 / std::sqrt(fp.determinant());
    if (n == 1) {
        r.j_nc = 0.5 * hbar / (r.delta_x * r.delta_p);
        r.j_r = r.delta_x * r.delta_p / (0.5 * hbar);
        r.dx_nc = 0.5 * hbar * std::sqrt(fp(0, 0));
        r.dp_nc = 0.5 * hbar * std::sqrt(fx(0, 0));
    } else {
        r.j_nc_volume = std::pow(0.5 * hbar, n) * std::sqrt(fx.determinant() * fp.determinant());
        r.j_nc_trace = 0.5 * hbar * std::sqrt(fx.trace() * fp.trace());
        r.j_nc = r.j_nc_trace;
        r.j_r = 1.0 / (0.5 * hbar * std::sqrt(fx.trace() * fp.trace()));
    }
    return r;
}

inline NonclassicalityReport joint_nonclassicality(const StateEnsemble& ens) {
    return joint_nonclassicality(ensemble_marginal(ens, Rep::position),
                                 ensemble_marginal(ens, Rep::momentum));
}

// Pure-state route: both the variance-split definition and the Fisher-length
// definition are computed and their equality asserted (1-D).
inline NonclassicalityReport joint_nonclassicality(const WaveFunction& psi,
                                                   bool with_commutator = true) {
    const WaveFunction pos = in_rep(psi, Rep::position);
    const Density px = density_of(pos);
    const Density pp = density_of(to_momentum(pos));
    NonclassicalityReport r = joint_nonclassicality(px, pp);
    r.pure = true;
    if (psi.grid().dims() == 1) {
        const VarianceSplit sp = variance_split_momentum(pos);
        const VarianceSplit sx = variance_split_position(pos);
        const double hbar = psi.hbar();
        const double dpnc2 = sp.var_total - sp.var_classical;
        const double dxnc2 = sx.var_total - sx.var_classical;
        r.j_nc_split = std::sqrt(dxnc2 * dpnc2) / (0.5 * hbar);
        r.split_mismatch = std::abs(r.j_nc_split - r.j_nc) / r.j_nc;
        if (r.split_mismatch > 1e-6)
            throw discretization_error("joint_nonclassicality: split/Fisher routes disagree by " +
                                       std::to_string(r.split_mismatch));
        if (with_commutator) r.commutator_rhs = commutator_bound(pos).rhs;
    }
    return r;
}

struct QuantumPotential {
    GridSpec domain;
    std::vector<double> values; // Q(x); zero at masked points
    std::vector<char> mask;
    double mean_q;     // <Q> over unmasked points
    double predicted;  // hbar^2 F_X / (8 m)
};

// Q = (hbar^2/8m) [ (p'/p)^2 - 2 p''/p ]; its average must reproduce the
// Fisher information, which is asserted here.
inline QuantumPotential quantum_potential(const WaveFunction& psi, double mass) {
    if (psi.grid().dims() != 1) throw error("quantum_potential: 1-D only");
    const WaveFunction pos = in_rep(psi, Rep::position);
    const Density px = density_of(pos);
    const GridSpec& g = px.grid();
    const auto& p = px.values();
    const auto dp = spectral_derivative_real(p, g, 0, 1);
    const auto d2p = spectral_derivative_real(p, g, 0, 2);
    const double hbar = psi.hbar();
    const double pref = hbar * hbar / (8.0 * mass);
    const double thresh = kNodeThresholdRel * px.max_value();

    QuantumPotential out{g, std::vector<double>(p.size(), 0.0), std::vector<char>(p.size(), 0),
                         0.0, 0.0};
    double mean = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] <= thresh) {
            out.mask[j] = 1;
            continue;
        }
        const double r = dp[j] / p[j];
        out.values[j] = pref * (r * r - 2.0 * d2p[j] / p[j]);
        mean += p[j] * out.values[j];
    }
    out.mean_q = mean * g.cell_volume();
    out.predicted = pref * fisher_information(px);
    const double resid = std::abs(out.mean_q - out.predicted) / std::abs(out.predicted);
    if (resid > 1e-4)
        throw discretization_error("quantum_potential: <Q> != hbar^2 F_X/(8m), residual " +
                                   std::to_string(resid));
    return out;
}

struct VariationCheck {
    double actual;    // [F(p + eps dp) - F(p)] / eps
    double predicted; // Int [(p'/p)^2 - 2 p''/p] dp dx
};

// First variation of the Fisher information against the quantum-potential
// kernel (the mass prefactor cancels identically).
inline VariationCheck fisher_variation_check(const Density& d, const std::vector<double>& deltap,
                                             double eps = 1e-5) {
    const GridSpec& g = d.grid();
    if (deltap.size() != d.values().size())
        throw error("fisher_variation_check: perturbation size mismatch");
    const double vol = g.cell_volume();
    double net = 0.0, absmass = 0.0;
    for (double v : deltap) {
        net += v;
        absmass += std::abs(v);
    }
    if (std::abs(net) > 1e-10 * std::max(absmass, 1.0))
        throw error("fisher_variation_check: perturbation must integrate to zero");

    std::vector<double> perturbed(d.values());
    for (std::size_t j = 0; j < perturbed.size(); ++j) {
        perturbed[j] += eps * deltap[j];
        if (perturbed[j] < 0.0)
            throw error("fisher_variation_check: perturbed density negative");
    }
    const Density dplus(g, std::move(perturbed), d.rep());

    VariationCheck out{};
    out.actual = (fisher_information(dplus) - fisher_information(d)) / eps;

    const auto& p = d.values();
    const auto dp1 = spectral_derivative_real(p, g, 0, 1);
    const auto d2p = spectral_derivative_real(p, g, 0, 2);
    const double thresh = kNodeThresholdRel * d.max_value();
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] <= thresh) continue;
        const double r = dp1[j] / p[j];
        acc += (r * r - 2.0 * d2p[j] / p[j]) * deltap[j];
    }
    out.predicted = acc * vol;
    return out;
}

struct NonclassicalCovariances {
    Eigen::MatrixXd cov_p;    // covariance of the momentum observable
    Eigen::MatrixXd cov_p_cl; // covariance of the classical momentum field
    Eigen::MatrixXd cov_p_nc; // (hbar^2/4) F_X
    double split_residual;    // max entry residual of cov_p = cov_p_cl + cov_p_nc
    double heisenberg_min_eig; // min eigenvalue of Cov(X) - (hbar^2/4) Cov(P)^-1
};

// Matrix form of the variance decomposition, plus the symmetric restatement
// of the matrix Heisenberg bound as a positive-semidefiniteness check.
inline NonclassicalCovariances nonclassical_covariances(const WaveFunction& psi) {
    const WaveFunction pos = in_rep(psi, Rep::position);
    const Density px = density_of(pos);
    const Density pp = density_of(to_momentum(pos));
    const double hbar = psi.hbar();

    NonclassicalCovariances out;
    out.cov_p = moments(pp).cov;
    const auto pcl = detail::phase_gradient_field(pos, +1.0);
    out.cov_p_cl = detail::field_stats(pcl, px.values()).cov;
    out.cov_p_nc = 0.25 * hbar * hbar * fisher_matrix(px);

    const Eigen::MatrixXd resid = out.cov_p - out.cov_p_cl - out.cov_p_nc;
    out.split_residual = resid.cwiseAbs().maxCoeff() / out.cov_p.cwiseAbs().maxCoeff();
    if (out.split_residual > 1e-6)
        throw discretization_error("nonclassical_covariances: matrix split residual " +
                                   std::to_string(out.split_residual));

    const Eigen::MatrixXd covx = moments(px).cov;
    const Eigen::MatrixXd h = covx - 0.25 * hbar * hbar * out.cov_p.inverse();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (h + h.transpose()));
    out.heisenberg_min_eig = es.eigenvalues().minCoeff();
    return out;
}

} // namespace fisherlab
