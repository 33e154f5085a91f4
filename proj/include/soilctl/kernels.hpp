#pragma once

#include <span>
#include <string>
#include <vector>

#include "soilctl/hydraulics.hpp"

namespace soilctl {

// Batch constitutive kernels. These are the data-parallel inner loops of the
// solver (every RHS/Jacobian evaluation maps theta/K/C/S over the node
// array). A scalar reference implementation always exists; on x86-64 an
// AVX2+FMA variant is selected at startup when the CPU supports it.
// Override with SOILCTL_KERNELS=scalar|avx2 or set_kernel_backend().
enum class KernelBackend { scalar, avx2 };

const char* to_string(KernelBackend b);
KernelBackend active_kernel_backend();
bool kernel_backend_supported(KernelBackend b);
// Returns false (and leaves the backend unchanged) if unsupported.
bool set_kernel_backend(KernelBackend b);
std::vector<KernelBackend> supported_kernel_backends();

// out[i] = theta(model, h[i]); h and out may alias elementwise.
void theta_batch(const HydraulicModel& model, std::span<const double> h, std::span<double> out);
// out[i] = scale * K(model, h[i]); `scale` folds the noise multiplier.
void conductivity_batch(const HydraulicModel& model, std::span<const double> h, double scale,
                        std::span<double> out);
void capacity_batch(const HydraulicModel& model, std::span<const double> h, std::span<double> out);
// out[i] = S(h[i]) = S_max R(h[i]).
void uptake_batch(const FeddesParams& p, std::span<const double> h, std::span<double> out);
// out[i] = (1 - R(h[i]))^2, the per-node tracking deficit of the running cost.
void tracking_deficit_batch(const FeddesParams& p, std::span<const double> h, std::span<double> out);

namespace kernels::detail {

// Function-pointer table filled by the scalar and AVX2 translation units.
struct Ops {
    void (*haverkamp_theta)(const HaverkampParams&, const double*, double*, std::size_t);
    void (*haverkamp_cond)(const HaverkampParams&, const double*, double, double*, std::size_t);
    void (*haverkamp_cap)(const HaverkampParams&, const double*, double*, std::size_t);
    void (*gardner_theta)(const GardnerParams&, const double*, double*, std::size_t);
    void (*gardner_cond)(const GardnerParams&, const double*, double, double*, std::size_t);
    void (*gardner_cap)(const GardnerParams&, const double*, double*, std::size_t);
    void (*feddes_uptake)(const FeddesParams&, const double*, double*, std::size_t);
    void (*feddes_deficit)(const FeddesParams&, const double*, double*, std::size_t);
};

const Ops& scalar_ops();
const Ops* avx2_ops(); // nullptr when not compiled in or CPU lacks AVX2+FMA

} // namespace kernels::detail

} // namespace soilctl
