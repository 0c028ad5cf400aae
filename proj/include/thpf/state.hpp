// Field bundle at one time level and the trajectory container.
#ifndef THPF_STATE_HPP
#define THPF_STATE_HPP

#include <string>
#include <vector>

#include "thpf/constitutive.hpp"
#include "thpf/grid.hpp"

namespace thpf {

struct State {
    double t = 0.0;
    VectorField u;
    ScalarField phi, mu, theta, p;

    explicit State(const Grid& g)
        : u(g), phi(g), mu(g), theta(g, 1.0), p(g) {}
    State() = default;
};

/// One row of conserved/monotone quantities and norm monitors.
struct DiagRecord {
    double t = 0, dt = 0;
    double mean_phi = 0;
    double kinetic = 0;       // int |u|^2/2
    double grad_energy = 0;   // (eps/2) int |grad phi|^2
    double potential = 0;     // (1/eps) int F(phi)
    double thermal = 0;       // int Q(theta)
    double total_energy = 0;  // sum of the previous four
    double entropy = 0;       // int Lambda(theta) + phi
    double entropy_production = 0;
    double theta_min = 0, theta_max = 0;
    double umax = 0;
    double div_norm = 0;
};

/// A-priori norm monitors accumulated over a run (all must stay finite).
struct BoundReport {
    double Q_Linf_L1 = 0;
    double u_Linf_L2 = 0;
    double F_Linf_L1 = 0;
    double phi_Linf_H1 = 0;
    double theta_Linf_Ldelta1 = 0;
    double invsqrt_theta_Du_L2 = 0;
    double invsqrt_theta_gradmu_L2 = 0;
    double kappa_over_theta2_gradtheta2_L1 = 0;
    double gradtheta_L2 = 0;
    double gradlogtheta_L2 = 0;
    double gradthetabeta2_L2 = 0;
    double theta_Lbeta_L3beta = 0;
    double Du_L2 = 0;
    double gradmu_L2 = 0;
    double mu_L2H1 = 0;
    double theta_Lp = 0;
};

struct Trajectory {
    Grid grid;
    Params params;
    std::string fingerprint;
    std::vector<State> states;       // every accepted step when stored
    std::vector<double> state_dts;   // step size that produced each state
    std::vector<DiagRecord> records;
    BoundReport bounds;
};

}  // namespace thpf

#endif
