#pragma once

#include <variant>

#include "soilctl/errors.hpp"

namespace soilctl {

// Haverkamp water retention / conductivity:
//   theta(h) = alpha (theta_S - theta_r) / (alpha + |h|^beta2) + theta_r
//   K(h)     = K_S A / (A + |h|^beta1)
struct HaverkampParams {
    double K_S;
    double A_const;
    double alpha;
    double theta_S;
    double theta_r;
    double beta1;
    double beta2;
    void validate() const;
};

// Gardner (strictly negative h regime):
//   theta(h) = theta_r + (theta_S - theta_r) e^{rho h},  K(h) = K_S e^{rho h}
struct GardnerParams {
    double rho;
    double K_S;
    double theta_S;
    double theta_r;
    void validate() const;
};

// Degenerate constant-coefficient model for verification runs (MMS, heat
// kernel, stencil reduction). Never used by the experiment presets.
struct LinearParams {
    double K0 = 1.0;       // constant conductivity
    double C0 = 1.0;       // constant capacity
    double theta0 = 0.5;   // theta(h) = theta0 + C0 h
    void validate() const;
};

using HydraulicModel = std::variant<HaverkampParams, GardnerParams, LinearParams>;

void validate(const HydraulicModel& model);

// Piecewise-linear Feddes stress: zero for h >= h1 or h <= h4, ramps on
// (h2,h1) and (h4,h3), plateau S_max on [h3,h2].
struct FeddesParams {
    double h1;
    double h2;
    double h3;
    double h4;
    double S_max;
    void validate() const;
};

double theta(const HydraulicModel& model, double h);
double conductivity(const HydraulicModel& model, double h);
double capacity(const HydraulicModel& model, double h);
double uptake(const FeddesParams& p, double h);

// Dimensionless stress R(h) = S(h)/S_max.
double feddes_stress(const FeddesParams& p, double h);

} // namespace soilctl
