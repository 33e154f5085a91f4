#include "soilctl/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace soilctl {

namespace {

using kernels::detail::Ops;

KernelBackend detect_initial() {
    if (const char* env = std::getenv("SOILCTL_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return KernelBackend::scalar;
        if (std::strcmp(env, "avx2") == 0 && kernels::detail::avx2_ops())
            return KernelBackend::avx2;
    }
    return kernels::detail::avx2_ops() ? KernelBackend::avx2 : KernelBackend::scalar;
}

std::atomic<KernelBackend>& backend_slot() {
    static std::atomic<KernelBackend> slot{detect_initial()};
    return slot;
}

const Ops& active_ops() {
    if (backend_slot().load(std::memory_order_relaxed) == KernelBackend::avx2) {
        if (const Ops* o = kernels::detail::avx2_ops()) return *o;
    }
    return kernels::detail::scalar_ops();
}

} // namespace

const char* to_string(KernelBackend b) {
    return b == KernelBackend::avx2 ? "avx2" : "scalar";
}

KernelBackend active_kernel_backend() { return backend_slot().load(std::memory_order_relaxed); }

bool kernel_backend_supported(KernelBackend b) {
    return b == KernelBackend::scalar || kernels::detail::avx2_ops() != nullptr;
}

bool set_kernel_backend(KernelBackend b) {
    if (!kernel_backend_supported(b)) return false;
    backend_slot().store(b, std::memory_order_relaxed);
    return true;
}

std::vector<KernelBackend> supported_kernel_backends() {
    std::vector<KernelBackend> v{KernelBackend::scalar};
    if (kernels::detail::avx2_ops()) v.push_back(KernelBackend::avx2);
    return v;
}

void theta_batch(const HydraulicModel& model, std::span<const double> h, std::span<double> out) {
    const Ops& ops = active_ops();
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, HaverkampParams>)
                ops.haverkamp_theta(p, h.data(), out.data(), h.size());
            else if constexpr (std::is_same_v<T, GardnerParams>)
                ops.gardner_theta(p, h.data(), out.data(), h.size());
            else
                for (std::size_t i = 0; i < h.size(); ++i) out[i] = p.theta0 + p.C0 * h[i];
        },
        model);
}

void conductivity_batch(const HydraulicModel& model, std::span<const double> h, double scale,
                        std::span<double> out) {
    const Ops& ops = active_ops();
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, HaverkampParams>)
                ops.haverkamp_cond(p, h.data(), scale, out.data(), h.size());
            else if constexpr (std::is_same_v<T, GardnerParams>)
                ops.gardner_cond(p, h.data(), scale, out.data(), h.size());
            else
                for (std::size_t i = 0; i < h.size(); ++i) out[i] = scale * p.K0;
        },
        model);
}

void capacity_batch(const HydraulicModel& model, std::span<const double> h, std::span<double> out) {
    const Ops& ops = active_ops();
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, HaverkampParams>)
                ops.haverkamp_cap(p, h.data(), out.data(), h.size());
            else if constexpr (std::is_same_v<T, GardnerParams>)
                ops.gardner_cap(p, h.data(), out.data(), h.size());
            else
                for (std::size_t i = 0; i < h.size(); ++i) out[i] = p.C0;
        },
        model);
}

void uptake_batch(const FeddesParams& p, std::span<const double> h, std::span<double> out) {
    active_ops().feddes_uptake(p, h.data(), out.data(), h.size());
}

void tracking_deficit_batch(const FeddesParams& p, std::span<const double> h,
                            std::span<double> out) {
    active_ops().feddes_deficit(p, h.data(), out.data(), h.size());
}

} // namespace soilctl
