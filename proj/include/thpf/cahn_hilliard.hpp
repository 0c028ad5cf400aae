// Convective Cahn-Hilliard stepper with Eyre-type linear stabilization.
#ifndef THPF_CAHN_HILLIARD_HPP
#define THPF_CAHN_HILLIARD_HPP

#include "thpf/constitutive.hpp"
#include "thpf/grid.hpp"

namespace thpf {

struct ChStepReport {
    ScalarField phi_new;
    ScalarField mu_new;
    double mass_drift = 0.0;  // |mean(phi_new) - mean(phi_old)|
};

/// mu = -eps lap(phi) + F'(phi)/eps - theta, with the cubic dealiased.
inline ScalarField chemical_potential(const ScalarField& phi, const ScalarField& theta,
                                      const Grid& g, const Params& p) {
    check_field(phi, g, "chemical_potential");
    check_field(theta, g, "chemical_potential");
    if (!(min_value(theta) > 0))
        throw domain_error("chemical_potential: theta must be positive");
    ScalarField f1(g);
    for (int k = 0; k < phi.size(); ++k) f1[k] = double_well(phi[k]).F1;
    f1 = dealias(f1, g);
    ScalarField lap = laplacian(phi, g);
    ScalarField mu(g);
    for (int k = 0; k < phi.size(); ++k)
        mu[k] = -p.epsilon * lap[k] + f1[k] / p.epsilon - theta[k];
    return mu;
}

/// One semi-implicit step of phi_t + u.grad(phi) = lap(mu).
/// Implicit: -eps lap^2 phi and the stabilization S lap(phi^{n+1}-phi^n);
/// explicit: lap[F'(phi^n)/eps - theta^n] and the dealiased convection.
/// The zero mode of phi is untouched, so the mean is conserved exactly.
/// `forcing`, when given, is added to the right-hand side (manufactured runs).
inline ChStepReport ch_step(const ScalarField& phi, const VectorField& u,
                            const ScalarField& theta, double dt, const Grid& g,
                            const Params& p, const ScalarField* forcing = nullptr) {
    check_field(phi, g, "ch_step");
    check_field(u, g, "ch_step");
    check_field(theta, g, "ch_step");
    if (!(dt > 0)) throw domain_error("ch_step: dt must be positive");
    if (has_nan(phi) || has_nan(u) || has_nan(theta))
        throw domain_error("ch_step: NaN in inputs");
    if (!(min_value(theta) > 0))
        throw domain_error("ch_step: theta must be positive");

    // convection u.grad(phi) in physical space, dealiased
    VectorField gphi = gradient(phi, g);
    ScalarField conv(g);
    for (int k = 0; k < phi.size(); ++k)
        conv[k] = u.x[k] * gphi.x[k] + u.y[k] * gphi.y[k];
    Spectrum conv_h = forward(conv, g);
    dealias_spectrum(conv_h, g);
    conv_h[0] = 0.0;  // mass exactness: convection cannot move the mean

    // nonlinear part F'(phi)/eps - theta, cubic dealiased
    ScalarField f1(g);
    for (int k = 0; k < phi.size(); ++k) f1[k] = double_well(phi[k]).F1;
    Spectrum f1_h = forward(f1, g);
    dealias_spectrum(f1_h, g);
    Spectrum th_h = forward(theta, g);

    Spectrum phi_h = forward(phi, g);
    Spectrum force_h;
    if (forcing) {
        check_field(*forcing, g, "ch_step");
        force_h = forward(*forcing, g);
    }

    const int nj = g.ny / 2 + 1;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < nj; ++j) {
            int k = i * nj + j;
            double k2 = g.kx[i] * g.kx[i] + g.ky[j] * g.ky[j];
            std::complex<double> nonlin = f1_h[k] / p.epsilon - th_h[k];
            std::complex<double> rhs = phi_h[k] * (1.0 + dt * p.stab * k2) -
                                       dt * k2 * nonlin - dt * conv_h[k];
            if (forcing) rhs += dt * force_h[k];
            double denom = 1.0 + dt * p.epsilon * k2 * k2 + dt * p.stab * k2;
            phi_h[k] = rhs / denom;
        }

    ChStepReport rep;
    rep.phi_new = inverse(phi_h, g);
    rep.mu_new = chemical_potential(rep.phi_new, theta, g, p);
    rep.mass_drift = std::abs(mean(rep.phi_new, g) - mean(phi, g));
    return rep;
}

}  // namespace thpf

#endif
