// Incompressible momentum stepper: temperature-dependent viscosity,
// capillary stress, spectral Leray projection.
#ifndef THPF_NAVIER_STOKES_HPP
#define THPF_NAVIER_STOKES_HPP

#include <array>

#include "thpf/constitutive.hpp"
#include "thpf/grid.hpp"

namespace thpf {

struct NsStepReport {
    VectorField u_new;
    ScalarField p_new;
    double div_norm = 0.0;
    std::array<double, 2> momentum_drift{0.0, 0.0};
};

/// Symmetric gradient Du = (grad u + grad^t u)/2, computed spectrally.
inline TensorField symmetric_gradient(const VectorField& u, const Grid& g) {
    check_field(u, g, "symmetric_gradient");
    VectorField gx = gradient(u.x, g);
    VectorField gy = gradient(u.y, g);
    TensorField d(g);
    for (int k = 0; k < u.x.size(); ++k) {
        d.xx[k] = gx.x[k];
        d.yy[k] = gy.y[k];
        d.xy[k] = 0.5 * (gx.y[k] + gy.x[k]);
    }
    return d;
}

/// S = nu(theta) Du.
inline TensorField viscous_stress(const VectorField& u, const ScalarField& theta,
                                  const Grid& g, const Params& p) {
    check_field(theta, g, "viscous_stress");
    if (!(min_value(theta) > 0))
        throw domain_error("viscous_stress: theta must be positive");
    TensorField s = symmetric_gradient(u, g);
    for (int k = 0; k < theta.size(); ++k) {
        double nu = viscosity(theta[k], p);
        s.xx[k] *= nu;
        s.xy[k] *= nu;
        s.yy[k] *= nu;
    }
    return s;
}

/// Spectral divergence of a symmetric tensor; exactly mean-free.
inline VectorField tensor_divergence(const TensorField& t, const Grid& g) {
    Spectrum xx = forward(t.xx, g), xy = forward(t.xy, g), yy = forward(t.yy, g);
    const int nj = g.ny / 2 + 1;
    const std::complex<double> I(0, 1);
    Spectrum fx(xx.size()), fy(xx.size());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < nj; ++j) {
            int k = i * nj + j;
            fx[k] = I * (g.kx[i] * xx[k] + g.ky[j] * xy[k]);
            fy[k] = I * (g.kx[i] * xy[k] + g.ky[j] * yy[k]);
        }
    VectorField out;
    out.x = inverse(fx, g);
    out.y = inverse(fy, g);
    return out;
}

/// Capillary force -eps div(grad phi x grad phi), dealiased tensor products.
inline VectorField capillary_force(const ScalarField& phi, const Grid& g, const Params& p) {
    check_field(phi, g, "capillary_force");
    VectorField gp = gradient(phi, g);
    TensorField t(g);
    for (int k = 0; k < phi.size(); ++k) {
        t.xx[k] = p.epsilon * gp.x[k] * gp.x[k];
        t.xy[k] = p.epsilon * gp.x[k] * gp.y[k];
        t.yy[k] = p.epsilon * gp.y[k] * gp.y[k];
    }
    t.xx = dealias(t.xx, g);
    t.xy = dealias(t.xy, g);
    t.yy = dealias(t.yy, g);
    VectorField f = tensor_divergence(t, g);
    for (int k = 0; k < phi.size(); ++k) {
        f.x[k] = -f.x[k];
        f.y[k] = -f.y[k];
    }
    return f;
}

/// One semi-implicit momentum step. Explicit: dealiased convection, capillary
/// force, and the viscosity fluctuation div((nu(theta)-nu_bar) Du); implicit:
/// div(nu_bar Du) = (nu_bar/2) lap u on divergence-free fields. The projection
/// potential recovers the pressure, p = psi/dt.
inline NsStepReport ns_step(const VectorField& u, const ScalarField& phi,
                            const ScalarField& theta, double dt, const Grid& g,
                            const Params& p, const VectorField* forcing = nullptr) {
    check_field(u, g, "ns_step");
    check_field(phi, g, "ns_step");
    check_field(theta, g, "ns_step");
    if (!(dt > 0)) throw domain_error("ns_step: dt must be positive");
    if (has_nan(u) || has_nan(phi) || has_nan(theta))
        throw domain_error("ns_step: NaN in inputs");
    if (!(min_value(theta) > 0))
        throw domain_error("ns_step: theta must be positive");

    const int n = u.x.size();

    // convection (u.grad)u, dealiased
    VectorField gux = gradient(u.x, g);
    VectorField guy = gradient(u.y, g);
    ScalarField cx(g), cy(g);
    for (int k = 0; k < n; ++k) {
        cx[k] = u.x[k] * gux.x[k] + u.y[k] * gux.y[k];
        cy[k] = u.x[k] * guy.x[k] + u.y[k] * guy.y[k];
    }
    cx = dealias(cx, g);
    cy = dealias(cy, g);

    VectorField cap = capillary_force(phi, g, p);

    // viscosity split: mean part implicit, fluctuation explicit
    ScalarField nu(g);
    for (int k = 0; k < n; ++k) nu[k] = viscosity(theta[k], p);
    double nu_bar = mean(nu, g);
    TensorField d(g);
    {
        TensorField du = symmetric_gradient(u, g);
        for (int k = 0; k < n; ++k) {
            double w = nu[k] - nu_bar;
            d.xx[k] = w * du.xx[k];
            d.xy[k] = w * du.xy[k];
            d.yy[k] = w * du.yy[k];
        }
        d.xx = dealias(d.xx, g);
        d.xy = dealias(d.xy, g);
        d.yy = dealias(d.yy, g);
    }
    VectorField visc_rem = tensor_divergence(d, g);

    ScalarField rx(g), ry(g);
    for (int k = 0; k < n; ++k) {
        rx[k] = -cx[k] + cap.x[k] + visc_rem.x[k];
        ry[k] = -cy[k] + cap.y[k] + visc_rem.y[k];
    }
    if (forcing) {
        check_field(*forcing, g, "ns_step");
        for (int k = 0; k < n; ++k) {
            rx[k] += forcing->x[k];
            ry[k] += forcing->y[k];
        }
    }
    Spectrum rxh = forward(rx, g), ryh = forward(ry, g);
    if (!forcing) {
        // all forces are divergences of periodic tensors, hence mean-free;
        // kill the convection roundoff in the zero mode
        rxh[0] = 0.0;
        ryh[0] = 0.0;
    }

    Spectrum uxh = forward(u.x, g), uyh = forward(u.y, g);
    const int nj = g.ny / 2 + 1;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < nj; ++j) {
            int k = i * nj + j;
            double k2 = g.kx[i] * g.kx[i] + g.ky[j] * g.ky[j];
            double denom = 1.0 + dt * 0.5 * nu_bar * k2;
            uxh[k] = (uxh[k] + dt * rxh[k]) / denom;
            uyh[k] = (uyh[k] + dt * ryh[k]) / denom;
        }

    VectorField ustar;
    ustar.x = inverse(uxh, g);
    ustar.y = inverse(uyh, g);

    NsStepReport rep;
    ScalarField psi;
    rep.u_new = leray_project(ustar, g, &psi);
    rep.p_new = ScalarField(g);
    for (int k = 0; k < n; ++k) rep.p_new[k] = psi[k] / dt;
    rep.div_norm = l2_norm(divergence(rep.u_new, g), g);
    rep.momentum_drift = {g.area() * (mean(rep.u_new.x, g) - mean(u.x, g)),
                          g.area() * (mean(rep.u_new.y, g) - mean(u.y, g))};
    return rep;
}

}  // namespace thpf

#endif
