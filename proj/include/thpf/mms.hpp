// Manufactured-solution verification for the three steppers. The
// manufactured fields are low-order trigonometric polynomials, so their
// spectral derivatives on any admissible grid are exact and the measured
// error isolates the first-order time discretization.
#ifndef THPF_MMS_HPP
#define THPF_MMS_HPP

#include <cmath>
#include <string>

#include "thpf/cahn_hilliard.hpp"
#include "thpf/constitutive.hpp"
#include "thpf/grid.hpp"
#include "thpf/heat.hpp"
#include "thpf/navier_stokes.hpp"

namespace thpf {

enum class MmsEquation { ch, ns, heat };

inline MmsEquation mms_equation_from_string(const std::string& s) {
    if (s == "ch") return MmsEquation::ch;
    if (s == "ns") return MmsEquation::ns;
    if (s == "heat") return MmsEquation::heat;
    throw domain_error("unknown mms equation tag '" + s + "'");
}

namespace detail {

inline ScalarField sample(const Grid& g, double amp, double phase_t) {
    // amp * sin(x) cos(y) * cos(t) on the 2pi box, already time-evaluated
    ScalarField f(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            f[g.idx(i, j)] = amp * phase_t * std::sin(g.x(i)) * std::cos(g.y(j));
    return f;
}

inline VectorField taylor_green(const Grid& g, double amp) {
    VectorField u(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            int k = g.idx(i, j);
            u.x[k] = amp * std::sin(g.x(i)) * std::cos(g.y(j));
            u.y[k] = -amp * std::cos(g.x(i)) * std::sin(g.y(j));
        }
    return u;
}

inline double l2_diff(const ScalarField& a, const ScalarField& b, const Grid& g) {
    double s = 0;
    for (int k = 0; k < a.size(); ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(g.cell_area() * s);
}

}  // namespace detail

/// L2 error at T = 0.1 on grid 16*2^level with dt = 4e-3 / 2^level.
inline double mms_error(MmsEquation eq, int level, const Params& p = Params{}) {
    if (level < 0 || level > 4)
        throw domain_error("mms_error: level must be in [0, 4]");
    const int n = 16 << level;
    const double dt = 4e-3 / (1 << level);
    const double t_end = 0.1;
    const int nsteps = static_cast<int>(std::llround(t_end / dt));
    Grid g(n, n, 2.0 * M_PI, 2.0 * M_PI);

    if (eq == MmsEquation::ch) {
        const double amp = 0.2, uamp = 0.2;
        ScalarField theta(g, 1.0);
        VectorField u = detail::taylor_green(g, uamp);
        const ScalarField base = detail::sample(g, amp, 1.0);
        ScalarField phi = base;
        for (int s = 0; s < nsteps; ++s) {
            double t = s * dt;
            ScalarField exact = detail::sample(g, amp, std::cos(t));
            ScalarField mu_ex = chemical_potential(exact, theta, g, p);
            ScalarField lap_mu = laplacian(mu_ex, g);
            VectorField gphi = gradient(exact, g);
            ScalarField f(g);
            for (int k = 0; k < f.size(); ++k) {
                double dphi_dt = -std::sin(t) * base[k];
                f[k] = dphi_dt + u.x[k] * gphi.x[k] + u.y[k] * gphi.y[k] - lap_mu[k];
            }
            phi = ch_step(phi, u, theta, dt, g, p, &f).phi_new;
        }
        return detail::l2_diff(phi, detail::sample(g, amp, std::cos(t_end)), g);
    }

    if (eq == MmsEquation::ns) {
        const double uamp = 0.5;
        ScalarField theta(g, 1.0);
        ScalarField phi(g, 0.0);
        const double nu = viscosity(1.0, p);
        VectorField u = detail::taylor_green(g, uamp);
        const VectorField tg1 = detail::taylor_green(g, 1.0);
        for (int s = 0; s < nsteps; ++s) {
            double t = s * dt;
            VectorField exact = detail::taylor_green(g, uamp * std::cos(t));
            VectorField gux = gradient(exact.x, g);
            VectorField guy = gradient(exact.y, g);
            // div(nu Du) = (nu/2) lap u on divergence-free fields
            ScalarField vx = laplacian(exact.x, g);
            ScalarField vy = laplacian(exact.y, g);
            VectorField f(g);
            for (int k = 0; k < phi.size(); ++k) {
                double conv_x = exact.x[k] * gux.x[k] + exact.y[k] * gux.y[k];
                double conv_y = exact.x[k] * guy.x[k] + exact.y[k] * guy.y[k];
                f.x[k] = -uamp * std::sin(t) * tg1.x[k] + conv_x - 0.5 * nu * vx[k];
                f.y[k] = -uamp * std::sin(t) * tg1.y[k] + conv_y - 0.5 * nu * vy[k];
            }
            u = ns_step(u, phi, theta, dt, g, p, &f).u_new;
        }
        VectorField exact = detail::taylor_green(g, uamp * std::cos(t_end));
        double ex = detail::l2_diff(u.x, exact.x, g);
        double ey = detail::l2_diff(u.y, exact.y, g);
        return std::hypot(ex, ey);
    }

    // heat: theta* = 1 + 0.2 sin(x)cos(y)cos(t), quiescent, phi frozen
    const double amp = 0.2;
    VectorField u(g, 0.0);
    ScalarField phi(g, 0.0), mu(g, 0.0);
    ScalarField theta(g);
    auto exact_theta = [&](double t) {
        ScalarField f = detail::sample(g, amp, std::cos(t));
        for (int k = 0; k < f.size(); ++k) f[k] += 1.0;
        return f;
    };
    theta = exact_theta(0.0);
    for (int s = 0; s < nsteps; ++s) {
        double t = s * dt;
        ScalarField exact = exact_theta(t);
        ScalarField khat(g);
        for (int k = 0; k < khat.size(); ++k) khat[k] = heat_laws(exact[k], p).khat;
        ScalarField lap_khat = laplacian(khat, g);
        ScalarField f(g);
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                int k = g.idx(i, j);
                double th_t = -amp * std::sin(t) * std::sin(g.x(i)) * std::cos(g.y(j));
                f[k] = heat_laws(exact[k], p).cV * th_t - lap_khat[k];
            }
        theta = heat_step(theta, u, phi, phi, mu, dt, g, p, &f).theta_new;
    }
    return detail::l2_diff(theta, exact_theta(t_end), g);
}

}  // namespace thpf

#endif
