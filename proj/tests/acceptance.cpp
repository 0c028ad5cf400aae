// Acceptance gate: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Tolerances are pinned here on purpose.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "thpf/audit.hpp"
#include "thpf/io.hpp"
#include "thpf/mms.hpp"
#include "thpf/sim.hpp"

using namespace thpf;

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    static auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

struct SuiteRun {
    std::string name;
    Trajectory traj;
    double seconds = 0;
    double min_prod_density = 0;  // min over sampled snapshots
};

Config suite_config(const std::string& scenario) {
    Config cfg;
    cfg.nx = cfg.ny = 64;
    cfg.dt = 1e-3;
    cfg.scenario = scenario;
    if (scenario == "spinodal") {
        cfg.t_final = 0.5;  // 500 steps
    } else {
        cfg.t_final = 0.2;
    }
    if (scenario == "bubble") cfg.radius = 2.0;
    return cfg;
}

std::vector<SuiteRun>& suite() {
    static std::vector<SuiteRun> runs = [] {
        std::vector<SuiteRun> out;
        for (const char* sc : {"spinodal", "shear", "bubble"}) {
            SuiteRun r;
            r.name = sc;
            Config cfg = suite_config(sc);
            Grid g = cfg.grid();
            Params p = cfg.params();
            double t0 = now_s();
            double minp = 1e300;
            r.traj = run(cfg, [&](const State& s, int) {
                minp = std::min(minp,
                                min_value(entropy_production_density(s, g, p)));
            });
            r.seconds = now_s() - t0;
            r.min_prod_density = minp;
            out.push_back(std::move(r));
        }
        return out;
    }();
    return runs;
}

double energy_drift(const std::string& scenario, double dt) {
    Config cfg;
    cfg.nx = cfg.ny = 64;
    cfg.scenario = scenario;
    cfg.dt = dt;
    cfg.t_final = 0.2;
    Trajectory traj = run(cfg);
    double e0 = traj.records.front().total_energy;
    double drift = 0;
    for (const DiagRecord& r : traj.records)
        drift = std::max(drift, std::abs(r.total_energy - e0));
    return drift / std::abs(e0);
}

using Criterion = std::function<bool(std::string&)>;

}  // namespace

int main() {
    std::vector<std::pair<std::string, Criterion>> criteria;

    criteria.emplace_back("mass conservation <= 1e-12, runtime <= 10 s", [](std::string& d) {
        bool ok = true;
        std::ostringstream os;
        for (const SuiteRun& r : suite()) {
            double m0 = r.traj.records.front().mean_phi;
            double worst = 0;
            for (const DiagRecord& rec : r.traj.records)
                worst = std::max(worst, std::abs(rec.mean_phi - m0));
            os << r.name << ": drift " << worst << ", " << r.seconds << " s; ";
            if (worst > 1e-12 || r.seconds > 10.0) ok = false;
        }
        d = os.str();
        return ok;
    });

    criteria.emplace_back("energy drift <= 5*dt, halving ratio 2 +/- 0.4", [](std::string& d) {
        double dt = 1e-3;
        double d1 = energy_drift("shear", dt);
        double d2 = energy_drift("shear", dt / 2);
        double ratio = d1 / d2;
        std::ostringstream os;
        os << "drift(dt)=" << d1 << " drift(dt/2)=" << d2 << " ratio=" << ratio;
        d = os.str();
        return d1 <= 5 * dt && std::abs(ratio - 2.0) <= 0.4;
    });

    criteria.emplace_back("entropy production and weak entropy inequality", [](std::string& d) {
        bool ok = true;
        std::ostringstream os;
        for (const SuiteRun& r : suite()) {
            if (r.min_prod_density < 0) {
                ok = false;
                os << r.name << ": negative production density; ";
            }
            double dt = r.traj.records[1].dt;
            double worst = 0;
            for (size_t i = 1; i < r.traj.records.size(); ++i)
                worst = std::max(worst, r.traj.records[i - 1].entropy -
                                            r.traj.records[i].entropy);
            os << r.name << ": max entropy drop " << worst << "; ";
            if (worst > 10 * dt * dt) ok = false;
        }
        // weak inequality on a heated shear run, 5 seeds
        Config cfg;
        cfg.nx = cfg.ny = 32;
        cfg.scenario = "shear";
        cfg.dt = 1e-3;
        cfg.t_final = 0.1;
        cfg.theta0 = 1.5;
        cfg.store_states = true;
        Trajectory traj = run(cfg);
        Grid g = traj.grid;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            TestFunction xi = TestFunction::random(cfg.t_final, g.lx, g.ly, seed, true);
            double xi_max = 0;
            for (int i = 0; i < g.nx; ++i)
                for (int j = 0; j < g.ny; ++j)
                    xi_max = std::max(xi_max, xi.value(0.0, g.x(i), g.y(j)));
            double tol = 10 * cfg.dt * xi_max * g.area();
            double v = weak_entropy_check(traj, xi, g, traj.params);
            os << "wf6 seed " << seed << ": " << v << " (tol " << tol << "); ";
            if (v > tol) ok = false;
        }
        d = os.str();
        return ok;
    });

    criteria.emplace_back("temperature positivity and structured failure", [](std::string& d) {
        bool ok = true;
        std::ostringstream os;
        for (const SuiteRun& r : suite()) {
            double tmin = 1e300;
            for (const DiagRecord& rec : r.traj.records)
                tmin = std::min(tmin, rec.theta_min);
            os << r.name << ": theta_min " << tmin << "; ";
            if (!(tmin > 0)) ok = false;
        }
        // dt = 10 must produce a structured error, not clamped values
        Grid g(16, 16, 2.0 * M_PI, 2.0 * M_PI);
        Params p;
        ScalarField theta(g, 0.05), phi_old(g, -1.0), phi_new(g, 1.0), mu(g, 0.0);
        VectorField u(g, 0.0);
        bool threw = false;
        try {
            heat_step(theta, u, phi_old, phi_new, mu, 10.0, g, p);
        } catch (const positivity_error&) {
            threw = true;
        }
        os << "dt=10 positivity error " << (threw ? "raised" : "MISSING");
        if (!threw) ok = false;
        d = os.str();
        return ok;
    });

    criteria.emplace_back("weak energy residual first-order self-convergence", [](std::string& d) {
        bool ok = true;
        std::ostringstream os;
        auto residual = [&](double dt, std::uint64_t seed) {
            Config cfg;
            cfg.nx = cfg.ny = 32;
            cfg.scenario = "spinodal";
            cfg.amplitude = 0.1;
            cfg.dt = dt;
            cfg.t_final = 0.1;
            cfg.store_states = true;
            Trajectory traj = run(cfg);
            TestFunction xi =
                TestFunction::random(cfg.t_final, traj.grid.lx, traj.grid.ly, seed, false);
            return std::abs(
                weak_energy_residual(traj, xi, traj.grid, traj.params));
        };
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            double r1 = residual(5e-4, seed);
            double r2 = residual(2.5e-4, seed);
            double ratio = r1 / r2;
            os << "seed " << seed << ": ratio " << ratio << "; ";
            if (std::abs(ratio - 2.0) > 0.5) ok = false;
        }
        d = os.str();
        return ok;
    });

    criteria.emplace_back("dense oracle equivalence", [](std::string& d) {
        std::ostringstream os;
        bool ok = true;
        Params p;
        {
            Grid g(8, 8, 2.0 * M_PI, 3.0);
            oracle::Dense dn(g);
            ScalarField f = oracle::random_smooth(g, 51, 1.0, 0.3);
            VectorField grad = gradient(f, g);
            double worst = std::max({oracle::max_diff(grad.x, dn.ddx(f.v)),
                                     oracle::max_diff(grad.y, dn.ddy(f.v)),
                                     oracle::max_diff(laplacian(f, g), dn.lap(f.v)),
                                     oracle::max_diff(dealias(f, g), dn.dealias(f.v))});
            os << "operators " << worst << "; ";
            if (worst > 1e-12) ok = false;
        }
        {
            Grid g(4, 4, 2.0 * M_PI, 2.0 * M_PI);
            oracle::Dense dn(g);
            ScalarField phi = oracle::random_smooth(g, 52, 0.3, 0.1);
            ScalarField theta = oracle::random_smooth(g, 53, 0.2, 1.4);
            VectorField u;
            u.x = oracle::random_smooth(g, 54, 0.3);
            u.y = oracle::random_smooth(g, 55, 0.3);
            double dt = 5e-3;
            ChStepReport ch = ch_step(phi, u, theta, dt, g, p);
            oracle::ChOut cho =
                oracle::dense_ch_step(dn, phi.v, u.x.v, u.y.v, theta.v, dt, p);
            double ch_err = std::max(oracle::max_diff(ch.phi_new, cho.phi),
                                     oracle::max_diff(ch.mu_new, cho.mu));
            NsStepReport ns = ns_step(u, phi, theta, dt, g, p);
            oracle::NsOut nso =
                oracle::dense_ns_step(dn, u.x.v, u.y.v, phi.v, theta.v, dt, p);
            double ns_err = std::max(oracle::max_diff(ns.u_new.x, nso.ux),
                                     oracle::max_diff(ns.u_new.y, nso.uy));
            ScalarField phi2 = oracle::random_smooth(g, 56, 0.3);
            HeatStepReport ht = heat_step(theta, u, phi, phi2, ch.mu_new, dt, g, p,
                                          nullptr, 200, 1e-13);
            std::vector<double> hto = oracle::dense_heat_step(
                dn, theta.v, u.x.v, u.y.v, phi.v, phi2.v, ch.mu_new.v, dt, p, 1e-13);
            double ht_err = oracle::max_diff(ht.theta_new, hto);
            os << "ch " << ch_err << " ns " << ns_err << " heat " << ht_err;
            if (ch_err > 1e-10 || ns_err > 1e-10 || ht_err > 1e-10) ok = false;
        }
        d = os.str();
        return ok;
    });

    criteria.emplace_back("Taylor-Green velocity error <= 1e-4", [](std::string& d) {
        Grid g(64, 64, 2.0 * M_PI, 2.0 * M_PI);
        Params p;
        ScalarField phi(g, 0.0), theta(g, 1.0);
        double nu = viscosity(1.0, p);
        const double amp = 0.5;
        VectorField u(g);
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                int k = g.idx(i, j);
                u.x[k] = amp * std::sin(g.x(i)) * std::cos(g.y(j));
                u.y[k] = -amp * std::cos(g.x(i)) * std::sin(g.y(j));
            }
        double dt = 1e-3;
        for (int n = 0; n < 100; ++n) u = ns_step(u, phi, theta, dt, g, p).u_new;
        double decay = amp * std::exp(-nu * 0.1);
        double err = 0;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                int k = g.idx(i, j);
                err = std::max(err, std::abs(u.x[k] - decay * std::sin(g.x(i)) *
                                                          std::cos(g.y(j))));
                err = std::max(err, std::abs(u.y[k] + decay * std::cos(g.x(i)) *
                                                          std::sin(g.y(j))));
            }
        std::ostringstream os;
        os << "max-norm error " << err;
        d = os.str();
        return err <= 1e-4;
    });

    criteria.emplace_back("a-priori monitors finite, p_beta_delta > 3", [](std::string& d) {
        bool ok = true;
        std::ostringstream os;
        for (const SuiteRun& r : suite()) {
            const BoundReport& b = r.traj.bounds;
            double vals[16] = {b.Q_Linf_L1, b.u_Linf_L2, b.F_Linf_L1, b.phi_Linf_H1,
                               b.theta_Linf_Ldelta1, b.invsqrt_theta_Du_L2,
                               b.invsqrt_theta_gradmu_L2,
                               b.kappa_over_theta2_gradtheta2_L1, b.gradtheta_L2,
                               b.gradlogtheta_L2, b.gradthetabeta2_L2,
                               b.theta_Lbeta_L3beta, b.Du_L2, b.gradmu_L2,
                               b.mu_L2H1, b.theta_Lp};
            int finite = 0;
            for (double v : vals) finite += std::isfinite(v) ? 1 : 0;
            os << r.name << ": " << finite << "/16 finite; ";
            if (finite != 16) ok = false;
            if (!(r.traj.params.p_beta_delta() > 3.0)) ok = false;
        }
        os << "p_beta_delta " << Params{}.p_beta_delta();
        d = os.str();
        return ok;
    });

    criteria.emplace_back("MMS ratios >= 1.8 on levels 0-3, suite <= 2 min", [](std::string& d) {
        bool ok = true;
        std::ostringstream os;
        double t0 = now_s();
        for (MmsEquation eq : {MmsEquation::ch, MmsEquation::ns, MmsEquation::heat}) {
            const char* name = eq == MmsEquation::ch   ? "ch"
                               : eq == MmsEquation::ns ? "ns"
                                                       : "heat";
            double prev = mms_error(eq, 0);
            os << name << ":";
            for (int lvl = 1; lvl <= 3; ++lvl) {
                double cur = mms_error(eq, lvl);
                double ratio = prev / cur;
                os << " " << ratio;
                if (ratio < 1.8) ok = false;
                prev = cur;
            }
            os << "; ";
        }
        double secs = now_s() - t0;
        os << secs << " s";
        if (secs > 120) ok = false;
        d = os.str();
        return ok;
    });

    int fails = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].second(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %zu: %s\n    %s\n", ok ? "PASS" : "FAIL",
                    i + 1, criteria[i].first.c_str(), detail.c_str());
        if (!ok) ++fails;
    }
    std::printf("%d/%zu acceptance criteria passed\n",
                static_cast<int>(criteria.size()) - fails, criteria.size());
    return fails == 0 ? 0 : 1;
}
