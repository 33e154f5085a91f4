#include "soilctl/hydraulics.hpp"

#include <cmath>

#include "soilctl/scalar_core.hpp"

namespace soilctl {

namespace {

void require_finite(double h) {
    if (!std::isfinite(h)) throw_error(errc::invalid_input, "pressure head must be finite");
}

} // namespace

void HaverkampParams::validate() const {
    if (!(theta_r < theta_S)) throw_error(errc::bad_config, "haverkamp: theta_r < theta_S required");
    if (!(K_S > 0.0)) throw_error(errc::bad_config, "haverkamp: K_S > 0 required");
    if (!(A_const > 0.0)) throw_error(errc::bad_config, "haverkamp: A > 0 required");
    if (!(alpha > 0.0)) throw_error(errc::bad_config, "haverkamp: alpha > 0 required");
    if (!(beta1 > 0.0) || !(beta2 > 0.0))
        throw_error(errc::bad_config, "haverkamp: beta1, beta2 > 0 required");
}

void GardnerParams::validate() const {
    if (!(rho > 0.0)) throw_error(errc::bad_config, "gardner: rho > 0 required");
    if (!(theta_r < theta_S)) throw_error(errc::bad_config, "gardner: theta_r < theta_S required");
    if (!(K_S > 0.0)) throw_error(errc::bad_config, "gardner: K_S > 0 required");
}

void LinearParams::validate() const {
    if (!(K0 > 0.0) || !(C0 > 0.0)) throw_error(errc::bad_config, "linear: K0, C0 > 0 required");
}

void validate(const HydraulicModel& model) {
    std::visit([](const auto& p) { p.validate(); }, model);
}

void FeddesParams::validate() const {
    if (!(h4 < h3 && h3 < h2 && h2 < h1))
        throw_error(errc::bad_config, "feddes: h4 < h3 < h2 < h1 required");
    if (!(S_max > 0.0)) throw_error(errc::bad_config, "feddes: S_max > 0 required");
}

double theta(const HydraulicModel& model, double h) {
    require_finite(h);
    return std::visit(
        [h](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, HaverkampParams>) return scalar::haverkamp_theta(p, h);
            else if constexpr (std::is_same_v<T, GardnerParams>) return scalar::gardner_theta(p, h);
            else return p.theta0 + p.C0 * h;
        },
        model);
}

double conductivity(const HydraulicModel& model, double h) {
    require_finite(h);
    return std::visit(
        [h](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, HaverkampParams>)
                return scalar::haverkamp_conductivity(p, h);
            else if constexpr (std::is_same_v<T, GardnerParams>)
                return scalar::gardner_conductivity(p, h);
            else return p.K0;
        },
        model);
}

double capacity(const HydraulicModel& model, double h) {
    require_finite(h);
    return std::visit(
        [h](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, HaverkampParams>)
                return scalar::haverkamp_capacity(p, h);
            else if constexpr (std::is_same_v<T, GardnerParams>)
                return scalar::gardner_capacity(p, h);
            else return p.C0;
        },
        model);
}

double uptake(const FeddesParams& p, double h) {
    require_finite(h);
    return scalar::feddes_uptake(p, h);
}

double feddes_stress(const FeddesParams& p, double h) {
    require_finite(h);
    return scalar::feddes_stress(p, h);
}

} // namespace soilctl
