// Orchestration: initial conditions, the composite CH -> NS -> heat step
// with positivity retries, and full runs with inline auditing.
#ifndef THPF_SIM_HPP
#define THPF_SIM_HPP

#include <cstdint>
#include <functional>
#include <random>

#include "thpf/audit.hpp"
#include "thpf/cahn_hilliard.hpp"
#include "thpf/config.hpp"
#include "thpf/constitutive.hpp"
#include "thpf/grid.hpp"
#include "thpf/heat.hpp"
#include "thpf/navier_stokes.hpp"
#include "thpf/state.hpp"

namespace thpf {

namespace detail {

inline double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0;
}

}  // namespace detail

inline State init_state(const Config& cfg, const Grid& g, const Params& p) {
    cfg.validate();
    State s(g);
    s.t = 0.0;
    s.theta = ScalarField(g, cfg.theta0);

    if (cfg.scenario == "spinodal") {
        // band-limited seeded noise: random trig polynomial up to mode ~n/8,
        // normalized to unit max, so the perturbation is smooth and exactly
        // mean free on the grid
        std::mt19937_64 rng(cfg.seed);
        int kcx = std::max(2, g.nx / 8), kcy = std::max(2, g.ny / 8);
        ScalarField noise(g);
        for (int m = 0; m <= kcx; ++m)
            for (int n = 0; n <= kcy; ++n) {
                if (m == 0 && n == 0) continue;
                double a = detail::uniform_pm1(rng);
                double px = M_PI * detail::uniform_pm1(rng);
                double py = M_PI * detail::uniform_pm1(rng);
                double wx = 2.0 * M_PI * m / g.lx, wy = 2.0 * M_PI * n / g.ly;
                for (int i = 0; i < g.nx; ++i)
                    for (int j = 0; j < g.ny; ++j)
                        noise[g.idx(i, j)] +=
                            a * std::cos(wx * g.x(i) + px) * std::cos(wy * g.y(j) + py);
            }
        double nmax = linf_norm(noise);
        if (nmax > 0)
            for (int k = 0; k < g.size(); ++k) noise[k] /= nmax;
        for (int k = 0; k < g.size(); ++k)
            s.phi[k] = cfg.m0 + cfg.amplitude * noise[k];
    } else if (cfg.scenario == "bubble") {
        // tanh disk of radius r centered in the box, interface width sqrt(eps)
        double cx = 0.5 * g.lx, cy = 0.5 * g.ly;
        double w = std::sqrt(2.0) * std::sqrt(p.epsilon);
        if (cfg.radius == 0.0) {
            // empty inclusion: pure background phase
            s.phi = ScalarField(g, -1.0);
            s.mu = chemical_potential(s.phi, s.theta, g, p);
            return s;
        }
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                double ddx = std::remainder(g.x(i) - cx, g.lx);
                double ddy = std::remainder(g.y(j) - cy, g.ly);
                double d = std::hypot(ddx, ddy);
                s.phi[g.idx(i, j)] = std::tanh((cfg.radius - d) / w);
            }
    } else if (cfg.scenario == "shear") {
        // Taylor-Green velocity over a stratified phi
        double a = 2.0 * M_PI / g.lx, b = 2.0 * M_PI / g.ly;
        const double u0 = 0.5;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                int k = g.idx(i, j);
                double x = g.x(i), y = g.y(j);
                s.u.x[k] = u0 * std::sin(a * x) * std::cos(b * y);
                s.u.y[k] = -u0 * (a / b) * std::cos(a * x) * std::sin(b * y);
                s.phi[k] = cfg.m0 + cfg.amplitude * std::cos(b * y);
            }
    } else if (cfg.scenario == "manufactured") {
        double a = 2.0 * M_PI / g.lx, b = 2.0 * M_PI / g.ly;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j)
                s.phi[g.idx(i, j)] = cfg.m0 +
                    cfg.amplitude * std::sin(a * g.x(i)) * std::cos(b * g.y(j));
    } else {
        throw config_error("init_state: unknown scenario '" + cfg.scenario + "'");
    }

    s.mu = chemical_potential(s.phi, s.theta, g, p);
    return s;
}

struct StepStats {
    double mass_drift = 0;
    double div_norm = 0;
    int picard_iters = 0;
    int retries = 0;  // positivity-driven dt halvings
};

namespace detail {

inline State composite_step(const State& s, double dt, const Grid& g, const Params& p,
                            StepStats* stats) {
    ChStepReport ch = ch_step(s.phi, s.u, s.theta, dt, g, p);
    NsStepReport ns = ns_step(s.u, ch.phi_new, s.theta, dt, g, p);
    HeatStepReport ht =
        heat_step(s.theta, ns.u_new, s.phi, ch.phi_new, ch.mu_new, dt, g, p);
    State out(g);
    out.t = s.t + dt;
    out.u = std::move(ns.u_new);
    out.phi = std::move(ch.phi_new);
    out.mu = std::move(ch.mu_new);
    out.theta = std::move(ht.theta_new);
    out.p = std::move(ns.p_new);
    if (stats) {
        stats->mass_drift = std::max(stats->mass_drift, ch.mass_drift);
        stats->div_norm = std::max(stats->div_norm, ns.div_norm);
        stats->picard_iters = std::max(stats->picard_iters, ht.picard_iters);
    }
    return out;
}

inline State step_with_retry(const State& s, double dt, const Grid& g, const Params& p,
                             StepStats* stats, int depth) {
    try {
        return composite_step(s, dt, g, p, stats);
    } catch (const positivity_error&) {
        if (depth >= 5) throw;
        if (stats) ++stats->retries;
        // sub-step to cover the same interval with half the step
        State half = step_with_retry(s, 0.5 * dt, g, p, stats, depth + 1);
        return step_with_retry(half, 0.5 * dt, g, p, stats, depth + 1);
    }
}

}  // namespace detail

/// Lie splitting CH -> NS -> heat; on heat positivity failure the whole step
/// is retried with dt/2 (sub-stepping, up to 5 halvings), then rethrown.
inline State step(const State& s, double dt, const Grid& g, const Params& p,
                  double cfl = 0.25, StepStats* stats = nullptr) {
    double umax = max_speed(s.u);
    double dt_max = cfl * std::min(g.dx, g.dy) / std::max(1.0, umax);
    if (dt > dt_max)
        throw domain_error("step: dt violates the CFL bound");
    return detail::step_with_retry(s, dt, g, p, stats, 0);
}

using SnapshotHook = std::function<void(const State&, int /*step index*/)>;

/// Advance until t >= t_final, recording a DiagRecord per step and the
/// a-priori monitors; snapshots go to the hook every cfg.snap_every steps.
inline Trajectory run(const Config& cfg, const SnapshotHook& on_snapshot = {}) {
    cfg.validate();
    Trajectory traj;
    traj.grid = cfg.grid();
    traj.params = cfg.params();
    traj.fingerprint = cfg.fingerprint();
    const Grid& g = traj.grid;
    const Params& p = traj.params;

    State s = init_state(cfg, g, p);
    AprioriAccum bounds;
    auto record = [&](const State& st, double dt_used, const StepStats& stats) {
        DiagRecord r = diagnostics(st, g, p);
        r.dt = dt_used;
        r.div_norm = std::max(r.div_norm, stats.div_norm);
        traj.records.push_back(r);
        bounds.add(st, dt_used, g, p);
        if (cfg.store_states) {
            traj.states.push_back(st);
            traj.state_dts.push_back(dt_used);
        }
    };

    record(s, cfg.dt, StepStats{});
    if (on_snapshot) on_snapshot(s, 0);

    int nsteps = static_cast<int>(std::llround(cfg.t_final / cfg.dt));
    for (int n = 1; n <= nsteps; ++n) {
        StepStats stats;
        s = step(s, cfg.dt, g, p, cfg.cfl, &stats);
        record(s, cfg.dt, stats);
        if (on_snapshot && n % cfg.snap_every == 0) on_snapshot(s, n);
    }
    traj.bounds = bounds.report();
    return traj;
}

}  // namespace thpf

#endif
