// Internal energy balance stepper. Prognostic variable q = Q(theta);
// nonlinear diffusion advanced in Kirchhoff form by Picard iteration.
#ifndef THPF_HEAT_HPP
#define THPF_HEAT_HPP

#include "thpf/constitutive.hpp"
#include "thpf/grid.hpp"
#include "thpf/navier_stokes.hpp"

namespace thpf {

struct HeatStepReport {
    ScalarField theta_new;
    double theta_min = 0.0;
    double theta_max = 0.0;
    int picard_iters = 0;
    double q_drift = 0.0;  // change in int Q(theta) minus injected sources
};

/// nu(theta)|Du|^2 + |grad mu|^2, pointwise nonnegative.
inline ScalarField dissipation_sources(const VectorField& u, const ScalarField& mu,
                                       const ScalarField& theta, const Grid& g,
                                       const Params& p) {
    check_field(u, g, "dissipation_sources");
    check_field(mu, g, "dissipation_sources");
    check_field(theta, g, "dissipation_sources");
    if (!(min_value(theta) > 0))
        throw domain_error("dissipation_sources: theta must be positive");
    TensorField d = symmetric_gradient(u, g);
    VectorField gmu = gradient(mu, g);
    ScalarField s(g);
    for (int k = 0; k < mu.size(); ++k) {
        double du2 = d.xx[k] * d.xx[k] + 2.0 * d.xy[k] * d.xy[k] + d.yy[k] * d.yy[k];
        double gm2 = gmu.x[k] * gmu.x[k] + gmu.y[k] * gmu.y[k];
        s[k] = viscosity(theta[k], p) * du2 + gm2;
    }
    return s;
}

/// One conservative step of (Q(theta))_t + u.grad Q + theta Dphi/Dt
///   - lap(khat(theta)) = sources.
/// Advection, latent coupling and sources explicit; diffusion by Picard with
/// a frozen mean coefficient and spectral diagonal inversion. The zero mode
/// of q is fixed by the explicit terms alone, so int Q bookkeeping is exact.
inline HeatStepReport heat_step(const ScalarField& theta, const VectorField& u,
                                const ScalarField& phi_old, const ScalarField& phi_new,
                                const ScalarField& mu, double dt, const Grid& g,
                                const Params& p, const ScalarField* forcing = nullptr,
                                int picard_cap = 60, double picard_tol = 1e-10) {
    check_field(theta, g, "heat_step");
    check_field(u, g, "heat_step");
    check_field(phi_old, g, "heat_step");
    check_field(phi_new, g, "heat_step");
    check_field(mu, g, "heat_step");
    if (!(dt > 0)) throw domain_error("heat_step: dt must be positive");
    if (has_nan(theta) || has_nan(u) || has_nan(phi_old) || has_nan(phi_new) || has_nan(mu))
        throw domain_error("heat_step: NaN in inputs");
    if (!(min_value(theta) > 0))
        throw domain_error("heat_step: theta must be positive");

    const int n = theta.size();
    ScalarField q(g);
    for (int k = 0; k < n; ++k) q[k] = heat_laws(theta[k], p).Q;

    // explicit advection u.grad q, dealiased, mean mode zeroed
    VectorField gq = gradient(q, g);
    ScalarField adv(g);
    for (int k = 0; k < n; ++k) adv[k] = u.x[k] * gq.x[k] + u.y[k] * gq.y[k];
    Spectrum adv_h = forward(adv, g);
    dealias_spectrum(adv_h, g);
    adv_h[0] = 0.0;
    adv = inverse(adv_h, g);

    // latent coupling theta^n Dphi/Dt with the discrete CH increment
    VectorField gphi = gradient(phi_old, g);
    ScalarField uconv(g);
    for (int k = 0; k < n; ++k)
        uconv[k] = u.x[k] * gphi.x[k] + u.y[k] * gphi.y[k];
    uconv = dealias(uconv, g);
    ScalarField latent(g);
    for (int k = 0; k < n; ++k)
        latent[k] = theta[k] * ((phi_new[k] - phi_old[k]) / dt + uconv[k]);

    ScalarField src = dissipation_sources(u, mu, theta, g, p);

    ScalarField r(g);
    for (int k = 0; k < n; ++k)
        r[k] = q[k] + dt * (-adv[k] - latent[k] + src[k]);
    if (forcing) {
        check_field(*forcing, g, "heat_step");
        for (int k = 0; k < n; ++k) r[k] += dt * (*forcing)[k];
    }
    Spectrum r_h = forward(r, g);

    // Picard for q - dt lap(khat(theta(q))) = r
    ScalarField qk = r;
    ScalarField th(g), th_prev(g);
    int iters = 0;
    const int nj = g.ny / 2 + 1;
    for (;; ++iters) {
        if (iters > picard_cap)
            throw iteration_error("heat_step: Picard iteration did not converge");
        if (!(min_value(qk) > 0))
            throw positivity_error("heat_step: temperature positivity lost");
        for (int k = 0; k < n; ++k) th[k] = theta_from_q(qk[k], p);
        if (iters > 0) {
            double diff = 0;
            for (int k = 0; k < n; ++k)
                diff = std::max(diff, std::abs(th[k] - th_prev[k]));
            if (diff <= picard_tol) break;
        }
        th_prev = th;

        ScalarField big_g(g);
        double a = 0;
        for (int k = 0; k < n; ++k) {
            HeatLaws hl = heat_laws(th[k], p);
            big_g[k] = hl.khat;
            a += hl.kappa / hl.cV;
        }
        a /= n;

        Spectrum g_h = forward(big_g, g);
        Spectrum q_h = forward(qk, g);
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < nj; ++j) {
                int k = i * nj + j;
                double k2 = g.kx[i] * g.kx[i] + g.ky[j] * g.ky[j];
                q_h[k] = (r_h[k] - dt * k2 * (g_h[k] - a * q_h[k])) / (1.0 + dt * a * k2);
            }
        qk = inverse(q_h, g);
    }

    HeatStepReport rep;
    rep.theta_new = th;
    rep.theta_min = min_value(th);
    rep.theta_max = max_value(th);
    rep.picard_iters = iters;
    double injected = 0;
    for (int k = 0; k < n; ++k) {
        double f = forcing ? (*forcing)[k] : 0.0;
        injected += src[k] - latent[k] + f;
    }
    injected *= g.cell_area() * dt;
    rep.q_drift = std::abs(integrate(qk, g) - integrate(q, g) - injected);
    return rep;
}

}  // namespace thpf

#endif
