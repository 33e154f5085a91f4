#include "soilctl/kernels.hpp"
#include "soilctl/scalar_core.hpp"

namespace soilctl::kernels::detail {

namespace {

void hav_theta(const HaverkampParams& p, const double* h, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scalar::haverkamp_theta(p, h[i]);
}

void hav_cond(const HaverkampParams& p, const double* h, double scale, double* out,
              std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scale * scalar::haverkamp_conductivity(p, h[i]);
}

void hav_cap(const HaverkampParams& p, const double* h, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scalar::haverkamp_capacity(p, h[i]);
}

void gar_theta(const GardnerParams& p, const double* h, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scalar::gardner_theta(p, h[i]);
}

void gar_cond(const GardnerParams& p, const double* h, double scale, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scale * scalar::gardner_conductivity(p, h[i]);
}

void gar_cap(const GardnerParams& p, const double* h, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scalar::gardner_capacity(p, h[i]);
}

void fed_uptake(const FeddesParams& p, const double* h, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scalar::feddes_uptake(p, h[i]);
}

void fed_deficit(const FeddesParams& p, const double* h, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scalar::feddes_deficit(p, h[i]);
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{hav_theta, hav_cond, hav_cap,    gar_theta,
                         gar_cond,  gar_cap,  fed_uptake, fed_deficit};
    return ops;
}

} // namespace soilctl::kernels::detail
