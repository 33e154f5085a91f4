#pragma once

#include <cmath>

#include "soilctl/hydraulics.hpp"

// Scalar formulas shared by the pointwise API and the scalar batch kernels.
// No input validation here; callers hold the preconditions.
namespace soilctl::scalar {

inline double haverkamp_theta(const HaverkampParams& p, double h) {
    const double ab = std::pow(std::fabs(h), p.beta2);
    return p.alpha * (p.theta_S - p.theta_r) / (p.alpha + ab) + p.theta_r;
}

inline double haverkamp_conductivity(const HaverkampParams& p, double h) {
    const double ab = std::pow(std::fabs(h), p.beta1);
    return p.K_S * p.A_const / (p.A_const + ab);
}

// Analytic d theta/dh (chain rule on |h|^beta2); positive for h < 0.
inline double haverkamp_capacity(const HaverkampParams& p, double h) {
    const double a = std::fabs(h);
    if (a == 0.0) return 0.0;
    const double ab = std::pow(a, p.beta2);
    const double denom = p.alpha + ab;
    const double sign = h < 0.0 ? -1.0 : 1.0;
    return -p.alpha * (p.theta_S - p.theta_r) * p.beta2 * (ab / a) * sign / (denom * denom);
}

inline double gardner_theta(const GardnerParams& p, double h) {
    return p.theta_r + (p.theta_S - p.theta_r) * std::exp(p.rho * h);
}

inline double gardner_conductivity(const GardnerParams& p, double h) {
    return p.K_S * std::exp(p.rho * h);
}

inline double gardner_capacity(const GardnerParams& p, double h) {
    return p.rho * (p.theta_S - p.theta_r) * std::exp(p.rho * h);
}

inline double feddes_stress(const FeddesParams& p, double h) {
    if (h >= p.h1 || h <= p.h4) return 0.0;
    if (h > p.h2) return (h - p.h1) / (p.h2 - p.h1);
    if (h >= p.h3) return 1.0;
    return (h - p.h4) / (p.h3 - p.h4);
}

inline double feddes_uptake(const FeddesParams& p, double h) {
    return p.S_max * feddes_stress(p, h);
}

// (1 - R(h))^2: the integrand of |S - S_max|^2 / S_max^2.
inline double feddes_deficit(const FeddesParams& p, double h) {
    const double d = 1.0 - feddes_stress(p, h);
    return d * d;
}

} // namespace soilctl::scalar
