// Scalar material laws: double-well potential, heat coefficient family,
// viscosity law, energy and entropy densities.
#ifndef THPF_CONSTITUTIVE_HPP
#define THPF_CONSTITUTIVE_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace thpf {

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Physical constants. Admissibility: beta >= 2, 1/2 < delta < 1, which
/// makes the derived exponent p_beta_delta = beta + 2/3 (delta+1) > 3.
struct Params {
    double epsilon = 1.0;   // interface thickness parameter
    double beta = 2.0;      // conductivity exponent, kappa = 1 + theta^beta
    double delta = 0.75;    // specific heat exponent, c_V = theta^delta
    double nu0 = 0.05;      // viscosity law: nu(theta) = nu0 + nu1/(1+theta)
    double nu1 = 0.1;
    double nu_lo = 0.05;
    double nu_hi = 0.05 + 0.1;  // exact sum, so the default law sits on the bracket
    double stab = 2.0;      // stabilization constant S for the CH step

    double p_beta_delta() const { return beta + 2.0 / 3.0 * (delta + 1.0); }

    void validate() const {
        if (!(beta >= 2.0))
            throw domain_error("Params: beta must satisfy beta >= 2");
        if (!(delta > 0.5 && delta < 1.0))
            throw domain_error("Params: delta must satisfy 1/2 < delta < 1");
        if (!(epsilon > 0))
            throw domain_error("Params: epsilon must be positive");
        if (!(nu0 > 0) || nu1 < 0)
            throw domain_error("Params: need nu0 > 0 and nu1 >= 0");
        if (!(nu_lo > 0) || !(nu_lo <= nu0) || !(nu0 + nu1 <= nu_hi))
            throw domain_error("Params: viscosity bounds must bracket the law");
        if (!(stab >= 0))
            throw domain_error("Params: stabilization constant must be >= 0");
        if (!(p_beta_delta() > 3.0))
            throw domain_error("Params: p_beta_delta must exceed 3");
    }
};

struct DoubleWell {
    double F, F1, F2;  // value, first and second derivative
};

/// F(phi) = (phi^2-1)^2/4, F'(phi) = phi^3 - phi.
inline DoubleWell double_well(double phi) {
    double q = phi * phi - 1.0;
    return {0.25 * q * q, phi * q, 3.0 * phi * phi - 1.0};
}

struct HeatLaws {
    double cV;     // theta^delta
    double kappa;  // 1 + theta^beta
    double Q;      // integral_0^theta cV = theta^{delta+1}/(delta+1)
    double Lam;    // integral_1^theta cV/s = (theta^delta - 1)/delta
    double khat;   // integral_0^theta kappa = theta + theta^{beta+1}/(beta+1)
    double h;      // integral_1^theta kappa/s = log theta + (theta^beta - 1)/beta
};

inline HeatLaws heat_laws(double theta, const Params& p) {
    if (!(theta > 0)) throw domain_error("heat_laws: theta must be positive");
    double td = std::pow(theta, p.delta);
    double tb = std::pow(theta, p.beta);
    HeatLaws out;
    out.cV = td;
    out.kappa = 1.0 + tb;
    out.Q = td * theta / (p.delta + 1.0);
    out.Lam = (td - 1.0) / p.delta;
    out.khat = theta + tb * theta / (p.beta + 1.0);
    out.h = std::log(theta) + (tb - 1.0) / p.beta;
    return out;
}

/// Inverse of Q: theta = ((delta+1) q)^{1/(delta+1)}, q > 0.
inline double theta_from_q(double q, const Params& p) {
    if (!(q > 0)) throw domain_error("theta_from_q: q must be positive");
    return std::pow((p.delta + 1.0) * q, 1.0 / (p.delta + 1.0));
}

/// nu(theta) = nu0 + nu1/(1+theta); monotone from nu0+nu1 at theta=0 to nu0.
inline double viscosity(double theta, const Params& p) {
    if (theta < 0) throw domain_error("viscosity: theta must be nonnegative");
    return p.nu0 + p.nu1 / (1.0 + theta);
}

/// e = F(phi)/eps + (eps/2)|grad phi|^2 + Q(theta).
inline double internal_energy_density(double phi, double gpx, double gpy,
                                      double theta, const Params& p) {
    double g2 = gpx * gpx + gpy * gpy;
    return double_well(phi).F / p.epsilon + 0.5 * p.epsilon * g2 +
           heat_laws(theta, p).Q;
}

/// s = Lambda(theta) + phi.
inline double entropy_density(double phi, double theta, const Params& p) {
    return heat_laws(theta, p).Lam + phi;
}

}  // namespace thpf

#endif
