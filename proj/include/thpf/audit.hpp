// Thermodynamic audit: conserved/monotone diagnostics, a-priori norm
// monitors, and space-time weak-form residual checks.
#ifndef THPF_AUDIT_HPP
#define THPF_AUDIT_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "thpf/cahn_hilliard.hpp"
#include "thpf/constitutive.hpp"
#include "thpf/grid.hpp"
#include "thpf/heat.hpp"
#include "thpf/navier_stokes.hpp"
#include "thpf/state.hpp"

namespace thpf {

enum class ViscousContraction { symmetric, full };  // |Du|^2 vs |grad u|^2

/// Pointwise entropy production nu|Du|^2/theta + |grad mu|^2/theta
/// + kappa|grad theta|^2/theta^2. The viscous contraction is selectable
/// because the paper's entropy inequality is printed with the full gradient
/// while the internal energy balance uses the symmetric one.
inline ScalarField entropy_production_density(
    const State& s, const Grid& g, const Params& p,
    ViscousContraction contraction = ViscousContraction::symmetric) {
    if (!(min_value(s.theta) > 0))
        throw domain_error("entropy_production_density: theta must be positive");
    TensorField d = symmetric_gradient(s.u, g);
    VectorField gux = gradient(s.u.x, g);
    VectorField guy = gradient(s.u.y, g);
    VectorField gmu = gradient(s.mu, g);
    VectorField gth = gradient(s.theta, g);
    ScalarField out(g);
    for (int k = 0; k < s.phi.size(); ++k) {
        double th = s.theta[k];
        double visc2;
        if (contraction == ViscousContraction::symmetric)
            visc2 = d.xx[k] * d.xx[k] + 2 * d.xy[k] * d.xy[k] + d.yy[k] * d.yy[k];
        else
            visc2 = gux.x[k] * gux.x[k] + gux.y[k] * gux.y[k] +
                    guy.x[k] * guy.x[k] + guy.y[k] * guy.y[k];
        double gm2 = gmu.x[k] * gmu.x[k] + gmu.y[k] * gmu.y[k];
        double gt2 = gth.x[k] * gth.x[k] + gth.y[k] * gth.y[k];
        double kap = heat_laws(th, p).kappa;
        out[k] = viscosity(th, p) * visc2 / th + gm2 / th + kap * gt2 / (th * th);
    }
    return out;
}

inline DiagRecord diagnostics(const State& s, const Grid& g, const Params& p) {
    if (!(min_value(s.theta) > 0))
        throw domain_error("diagnostics: theta must be positive");
    DiagRecord r;
    r.t = s.t;
    r.mean_phi = mean(s.phi, g);
    VectorField gphi = gradient(s.phi, g);
    double kin = 0, ge = 0, pot = 0, th = 0, ent = 0;
    for (int k = 0; k < s.phi.size(); ++k) {
        kin += 0.5 * (s.u.x[k] * s.u.x[k] + s.u.y[k] * s.u.y[k]);
        ge += 0.5 * p.epsilon * (gphi.x[k] * gphi.x[k] + gphi.y[k] * gphi.y[k]);
        pot += double_well(s.phi[k]).F / p.epsilon;
        HeatLaws hl = heat_laws(s.theta[k], p);
        th += hl.Q;
        ent += hl.Lam + s.phi[k];
    }
    double da = g.cell_area();
    r.kinetic = da * kin;
    r.grad_energy = da * ge;
    r.potential = da * pot;
    r.thermal = da * th;
    r.total_energy = r.kinetic + r.grad_energy + r.potential + r.thermal;
    r.entropy = da * ent;
    r.entropy_production = integrate(entropy_production_density(s, g, p), g);
    r.theta_min = min_value(s.theta);
    r.theta_max = max_value(s.theta);
    r.umax = max_speed(s.u);
    r.div_norm = l2_norm(divergence(s.u, g), g);
    return r;
}

/// Incremental accumulator behind apriori_monitor; lets long runs build the
/// BoundReport without storing every snapshot. Time quadrature: left Riemann
/// sum with the step size that produced each snapshot.
class AprioriAccum {
  public:
    void add(const State& s, double dt, const Grid& g, const Params& p) {
        if (!(min_value(s.theta) > 0))
            throw positivity_error("apriori_monitor: theta must be positive");
        double da = g.cell_area();
        TensorField d = symmetric_gradient(s.u, g);
        VectorField gmu = gradient(s.mu, g);
        VectorField gth = gradient(s.theta, g);
        VectorField gphi = gradient(s.phi, g);
        VectorField gux = gradient(s.u.x, g);
        VectorField guy = gradient(s.u.y, g);
        ScalarField logth(g), thb2(g);
        for (int k = 0; k < s.phi.size(); ++k) {
            logth[k] = std::log(s.theta[k]);
            thb2[k] = std::pow(s.theta[k], 0.5 * p.beta);
        }
        VectorField glogth = gradient(logth, g);
        VectorField gthb2 = gradient(thb2, g);

        double q1 = 0, f1 = 0, h1 = 0, tdel = 0, du_th = 0, gmu_th = 0, kgt = 0;
        double gt2 = 0, glt2 = 0, gtb2 = 0, t3b = 0, du2s = 0, gmu2 = 0, muh1 = 0, tp = 0;
        double u2 = 0;
        const double pexp = p.p_beta_delta();
        for (int k = 0; k < s.phi.size(); ++k) {
            double th = s.theta[k];
            HeatLaws hl = heat_laws(th, p);
            q1 += hl.Q;
            f1 += double_well(s.phi[k]).F;
            h1 += s.phi[k] * s.phi[k] + gphi.x[k] * gphi.x[k] + gphi.y[k] * gphi.y[k];
            tdel += std::pow(th, p.delta + 1.0);
            double du2 = d.xx[k] * d.xx[k] + 2 * d.xy[k] * d.xy[k] + d.yy[k] * d.yy[k];
            double gu2 = gux.x[k] * gux.x[k] + gux.y[k] * gux.y[k] +
                         guy.x[k] * guy.x[k] + guy.y[k] * guy.y[k];
            double gm2 = gmu.x[k] * gmu.x[k] + gmu.y[k] * gmu.y[k];
            double gth2 = gth.x[k] * gth.x[k] + gth.y[k] * gth.y[k];
            du_th += gu2 / th;
            gmu_th += gm2 / th;
            kgt += hl.kappa * gth2 / (th * th);
            gt2 += gth2;
            glt2 += glogth.x[k] * glogth.x[k] + glogth.y[k] * glogth.y[k];
            gtb2 += gthb2.x[k] * gthb2.x[k] + gthb2.y[k] * gthb2.y[k];
            t3b += std::pow(th, 3.0 * p.beta);
            du2s += du2;
            gmu2 += gm2;
            muh1 += s.mu[k] * s.mu[k] + gm2;
            tp += std::pow(th, pexp);
            u2 += s.u.x[k] * s.u.x[k] + s.u.y[k] * s.u.y[k];
        }
        b_.Q_Linf_L1 = std::max(b_.Q_Linf_L1, da * q1);
        b_.u_Linf_L2 = std::max(b_.u_Linf_L2, std::sqrt(da * u2));
        b_.F_Linf_L1 = std::max(b_.F_Linf_L1, da * f1);
        b_.phi_Linf_H1 = std::max(b_.phi_Linf_H1, std::sqrt(da * h1));
        b_.theta_Linf_Ldelta1 =
            std::max(b_.theta_Linf_Ldelta1, std::pow(da * tdel, 1.0 / (p.delta + 1.0)));
        acc_du_th_ += dt * da * du_th;
        acc_gmu_th_ += dt * da * gmu_th;
        acc_kgt_ += dt * da * kgt;
        acc_gt2_ += dt * da * gt2;
        acc_glt2_ += dt * da * glt2;
        acc_gtb2_ += dt * da * gtb2;
        acc_t3b_ += dt * std::pow(da * t3b, 1.0 / 3.0);
        acc_du2_ += dt * da * du2s;
        acc_gmu2_ += dt * da * gmu2;
        acc_muh1_ += dt * da * muh1;
        acc_tp_ += dt * da * tp;
        pexp_ = pexp;
        beta_ = p.beta;
    }

    BoundReport report() const {
        BoundReport b = b_;
        b.invsqrt_theta_Du_L2 = std::sqrt(acc_du_th_);
        b.invsqrt_theta_gradmu_L2 = std::sqrt(acc_gmu_th_);
        b.kappa_over_theta2_gradtheta2_L1 = acc_kgt_;
        b.gradtheta_L2 = std::sqrt(acc_gt2_);
        b.gradlogtheta_L2 = std::sqrt(acc_glt2_);
        b.gradthetabeta2_L2 = std::sqrt(acc_gtb2_);
        b.theta_Lbeta_L3beta = std::pow(acc_t3b_, 1.0 / beta_);
        b.Du_L2 = std::sqrt(acc_du2_);
        b.gradmu_L2 = std::sqrt(acc_gmu2_);
        b.mu_L2H1 = std::sqrt(acc_muh1_);
        b.theta_Lp = std::pow(acc_tp_, 1.0 / pexp_);
        return b;
    }

  private:
    BoundReport b_;
    double acc_du_th_ = 0, acc_gmu_th_ = 0, acc_kgt_ = 0, acc_gt2_ = 0;
    double acc_glt2_ = 0, acc_gtb2_ = 0, acc_t3b_ = 0, acc_du2_ = 0;
    double acc_gmu2_ = 0, acc_muh1_ = 0, acc_tp_ = 0;
    double pexp_ = 4.0, beta_ = 2.0;
};

inline BoundReport apriori_monitor(const Trajectory& traj, const Params& p) {
    if (traj.states.empty())
        throw domain_error("apriori_monitor: trajectory has no stored states");
    AprioriAccum acc;
    for (size_t i = 0; i < traj.states.size(); ++i)
        acc.add(traj.states[i], traj.state_dts[i], traj.grid, p);
    return acc.report();
}

/// Smooth space-time test function xi(t,x,y) = T(t) X(x,y): T a bump
/// vanishing at t_final, X a seeded band-limited trigonometric polynomial
/// (squared when a nonnegative xi is required). All derivatives analytic.
class TestFunction {
  public:
    static TestFunction random(double t_final, double lx, double ly,
                               std::uint64_t seed, bool nonnegative) {
        TestFunction f;
        f.t_final_ = t_final;
        f.nonneg_ = nonnegative;
        std::mt19937_64 rng(seed);
        auto u = [&rng]() {  // uniform in [-1,1), bit-exact across platforms
            return 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0;
        };
        f.terms_.push_back({1.0, 0, 0, 0.0, 0.0, lx, ly});
        for (int m = 0; m <= 2; ++m)
            for (int n = 0; n <= 2; ++n) {
                if (m == 0 && n == 0) continue;
                f.terms_.push_back({0.3 * u(), m, n, M_PI * u(), M_PI * u(), lx, ly});
            }
        return f;
    }

    double t_final() const { return t_final_; }
    bool nonnegative() const { return nonneg_; }
    double scale = 1.0;

    double value(double t, double x, double y) const { return scale * tb(t) * X(x, y); }
    double dt(double t, double x, double y) const { return scale * tbp(t) * X(x, y); }
    double dx(double t, double x, double y) const { return scale * tb(t) * Xd(x, y, 1, 0); }
    double dy(double t, double x, double y) const { return scale * tb(t) * Xd(x, y, 0, 1); }
    double dxx(double t, double x, double y) const { return scale * tb(t) * Xd(x, y, 2, 0); }
    double dxy(double t, double x, double y) const { return scale * tb(t) * Xd(x, y, 1, 1); }
    double dyy(double t, double x, double y) const { return scale * tb(t) * Xd(x, y, 0, 2); }
    double lap(double t, double x, double y) const {
        return dxx(t, x, y) + dyy(t, x, y);
    }

  private:
    struct Term {
        double amp;
        int m, n;
        double px, py;
        double lx, ly;
    };

    double tb(double t) const {
        double c = std::cos(0.5 * M_PI * t / t_final_);
        return c * c;
    }
    double tbp(double t) const {
        return -0.5 * M_PI / t_final_ * std::sin(M_PI * t / t_final_);
    }

    // P and partial derivatives up to order (dxo, dyo) <= 2
    double P(double x, double y, int dxo, int dyo) const {
        double s = 0;
        for (const Term& tm : terms_) {
            double a = 2.0 * M_PI * tm.m / tm.lx;
            double b = 2.0 * M_PI * tm.n / tm.ly;
            double fx = std::cos(a * x + tm.px + dxo * 0.5 * M_PI) * std::pow(a, dxo);
            double fy = std::cos(b * y + tm.py + dyo * 0.5 * M_PI) * std::pow(b, dyo);
            s += tm.amp * fx * fy;
        }
        return s;
    }

    double X(double x, double y) const {
        double p0 = P(x, y, 0, 0);
        return nonneg_ ? p0 * p0 : p0;
    }
    double Xd(double x, double y, int dxo, int dyo) const {
        if (!nonneg_) return P(x, y, dxo, dyo);
        double p0 = P(x, y, 0, 0);
        if (dxo + dyo == 1) return 2.0 * p0 * P(x, y, dxo, dyo);
        if (dxo == 2) {
            double px = P(x, y, 1, 0);
            return 2.0 * (px * px + p0 * P(x, y, 2, 0));
        }
        if (dyo == 2) {
            double py = P(x, y, 0, 1);
            return 2.0 * (py * py + p0 * P(x, y, 0, 2));
        }
        return 2.0 * (P(x, y, 1, 0) * P(x, y, 0, 1) + p0 * P(x, y, 1, 1));
    }

    std::vector<Term> terms_;
    double t_final_ = 1.0;
    bool nonneg_ = false;
};

namespace detail {

/// Trapezoid weights over the stored snapshot times.
inline std::vector<double> trapezoid_weights(const Trajectory& traj) {
    const size_t n = traj.states.size();
    std::vector<double> w(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
        double h = traj.states[i + 1].t - traj.states[i].t;
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

}  // namespace detail

/// Residual of the weak total energy balance tested against xi; -> 0 under
/// dt and grid refinement for trajectories produced by the stepper.
/// The d/dt(xi) term is integrated through exact differences of xi in time,
/// so a constant-in-time integrand telescopes against the initial-data term.
inline double weak_energy_residual(const Trajectory& traj, const TestFunction& xi,
                                   const Grid& g, const Params& p) {
    if (traj.states.empty())
        throw domain_error("weak_energy_residual: trajectory has no stored states");
    double tN = traj.states.back().t;
    if (std::abs(xi.value(tN, 0.0, 0.0)) > 1e-12 ||
        std::abs(tN - xi.t_final()) > 1e-12)
        throw domain_error("weak_energy_residual: xi must vanish at the final time");

    std::vector<double> w = detail::trapezoid_weights(traj);
    const size_t ns = traj.states.size();
    std::vector<std::vector<double>> dens(ns);  // 1/2|u|^2 + e per snapshot
    double res = 0;
    for (size_t is = 0; is < ns; ++is) {
        const State& s = traj.states[is];
        VectorField gphi = gradient(s.phi, g);
        VectorField gmu = gradient(s.mu, g);
        ScalarField pxx = second_derivative(s.phi, 0, 0, g);
        ScalarField pxy = second_derivative(s.phi, 0, 1, g);
        ScalarField pyy = second_derivative(s.phi, 1, 1, g);
        TensorField d = symmetric_gradient(s.u, g);
        dens[is].resize(g.size());
        double acc = 0;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                int k = g.idx(i, j);
                double x = g.x(i), y = g.y(j);
                double xv_x = xi.dx(s.t, x, y);
                double xv_y = xi.dy(s.t, x, y);
                double xv_lap = xi.lap(s.t, x, y);
                double xv_xx = xi.dxx(s.t, x, y);
                double xv_xy = xi.dxy(s.t, x, y);
                double xv_yy = xi.dyy(s.t, x, y);

                double th = s.theta[k];
                HeatLaws hl = heat_laws(th, p);
                double g2 = gphi.x[k] * gphi.x[k] + gphi.y[k] * gphi.y[k];
                double e = double_well(s.phi[k]).F / p.epsilon +
                           0.5 * p.epsilon * g2 + hl.Q;
                double etot = 0.5 * (s.u.x[k] * s.u.x[k] + s.u.y[k] * s.u.y[k]) + e;
                dens[is][k] = etot;

                acc += etot * (s.u.x[k] * xv_x + s.u.y[k] * xv_y);
                acc += hl.khat * xv_lap;
                acc += s.p[k] * (s.u.x[k] * xv_x + s.u.y[k] * xv_y);
                double nu = viscosity(th, p);
                double sux = nu * (d.xx[k] * s.u.x[k] + d.xy[k] * s.u.y[k]);
                double suy = nu * (d.xy[k] * s.u.x[k] + d.yy[k] * s.u.y[k]);
                acc -= sux * xv_x + suy * xv_y;
                acc += 0.5 * s.mu[k] * s.mu[k] * xv_lap;
                double uconv = s.u.x[k] * gphi.x[k] + s.u.y[k] * gphi.y[k];
                acc += uconv * (gphi.x[k] * xv_x + gphi.y[k] * xv_y) * p.epsilon;
                acc += p.epsilon * (gmu.x[k] * xv_x * pxx[k] + gmu.x[k] * xv_y * pxy[k] +
                                    gmu.y[k] * xv_x * pxy[k] + gmu.y[k] * xv_y * pyy[k]);
                acc += p.epsilon * (gmu.x[k] * gphi.x[k] * xv_xx +
                                    (gmu.x[k] * gphi.y[k] + gmu.y[k] * gphi.x[k]) * xv_xy +
                                    gmu.y[k] * gphi.y[k] * xv_yy);
            }
        res += w[is] * g.cell_area() * acc;
    }

    // time-derivative term via exact xi differences, then the initial data
    for (size_t is = 0; is + 1 < ns; ++is) {
        double t0 = traj.states[is].t, t1 = traj.states[is + 1].t;
        double acc = 0;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                int k = g.idx(i, j);
                double dxi = xi.value(t1, g.x(i), g.y(j)) - xi.value(t0, g.x(i), g.y(j));
                acc += 0.5 * (dens[is][k] + dens[is + 1][k]) * dxi;
            }
        res += g.cell_area() * acc;
    }
    {
        // + int (1/2|u0|^2 + e0) xi(0): cancels the boundary term produced by
        // moving the time derivative onto xi
        double acc = 0;
        double t0 = traj.states.front().t;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j)
                acc += dens[0][g.idx(i, j)] * xi.value(t0, g.x(i), g.y(j));
        res += g.cell_area() * acc;
    }
    return res;
}

/// (left side) - (right side) of the weak entropy production inequality;
/// nonpositive up to splitting error for trajectories from the stepper.
/// Uses the symmetric |Du|^2 viscous contraction, matching the dissipation
/// the heat step actually injects.
inline double weak_entropy_check(const Trajectory& traj, const TestFunction& xi,
                                 const Grid& g, const Params& p) {
    if (traj.states.empty())
        throw domain_error("weak_entropy_check: trajectory has no stored states");
    if (!xi.nonnegative() && xi.scale != 0.0)
        throw domain_error("weak_entropy_check: xi must be nonnegative");
    double tN = traj.states.back().t;
    if (std::abs(xi.value(tN, 0.0, 0.0)) > 1e-12 ||
        std::abs(tN - xi.t_final()) > 1e-12)
        throw domain_error("weak_entropy_check: xi must vanish at the final time");

    std::vector<double> w = detail::trapezoid_weights(traj);
    const size_t ns = traj.states.size();
    std::vector<std::vector<double>> sdens(ns);  // Lambda(theta) + phi
    double left = 0, right = 0;
    for (size_t is = 0; is < ns; ++is) {
        const State& s = traj.states[is];
        ScalarField prod = entropy_production_density(s, g, p);
        sdens[is].resize(g.size());
        double accl = 0, accr = 0;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                int k = g.idx(i, j);
                double x = g.x(i), y = g.y(j);
                HeatLaws hl = heat_laws(s.theta[k], p);
                double sd = hl.Lam + s.phi[k];
                sdens[is][k] = sd;
                accl += sd * (s.u.x[k] * xi.dx(s.t, x, y) + s.u.y[k] * xi.dy(s.t, x, y));
                accl += hl.h * xi.lap(s.t, x, y);
                accr -= prod[k] * xi.value(s.t, x, y);
            }
        left += w[is] * g.cell_area() * accl;
        right += w[is] * g.cell_area() * accr;
    }
    // time-derivative term via exact xi differences, then the initial data
    for (size_t is = 0; is + 1 < ns; ++is) {
        double t0 = traj.states[is].t, t1 = traj.states[is + 1].t;
        double acc = 0;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                int k = g.idx(i, j);
                double dxi = xi.value(t1, g.x(i), g.y(j)) - xi.value(t0, g.x(i), g.y(j));
                acc += 0.5 * (sdens[is][k] + sdens[is + 1][k]) * dxi;
            }
        left += g.cell_area() * acc;
    }
    {
        const State& s0 = traj.states.front();
        double acc = 0;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j)
                acc += sdens[0][g.idx(i, j)] * xi.value(s0.t, g.x(i), g.y(j));
        right -= g.cell_area() * acc;
    }
    return left - right;
}

}  // namespace thpf

#endif
