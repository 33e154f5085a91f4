#include "soilctl/cost.hpp"

#include <cmath>

#include "soilctl/kernels.hpp"
#include "soilctl/scalar_core.hpp"

namespace soilctl {

void CostModel::validate() const {
    feddes.validate();
    if (!(lambda > 0.0)) throw_error(errc::bad_config, "cost: lambda > 0 required");
    if (!(dz > 0.0)) throw_error(errc::bad_config, "cost: dz > 0 required");
}

Eigen::VectorXd assemble_Q(const CostModel& cm, const Eigen::VectorXd& y) {
    const FeddesParams& p = cm.feddes;
    const double scale = p.S_max * p.S_max * cm.dz;
    const double c1 = 1.0 / ((p.h2 - p.h1) * (p.h2 - p.h1));
    const double c2 = 1.0 / ((p.h3 - p.h4) * (p.h3 - p.h4));

    Eigen::VectorXd q = Eigen::VectorXd::Zero(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double v = y[i];
        if (!std::isfinite(v)) throw_error(errc::invalid_input, "state not finite");
        if (v == 0.0)
            throw_error(errc::undefined_weight,
                        "Q(y) undefined at y[" + std::to_string(i) + "] == 0");
        if (v > p.h2 && v < p.h1) {
            q[i] = c1 * (1.0 + p.h2 * p.h2 / (v * v) - 2.0 * p.h2 / v);
        } else if (v > p.h4 && v < p.h3) {
            q[i] = c2 * (1.0 + p.h3 * p.h3 / (v * v) - 2.0 * p.h3 / v);
        } else if (v <= p.h4 || v >= p.h1) {
            q[i] = 1.0 / (v * v);
        }
        // plateau [h3, h2]: zero
    }
    return scale * q;
}

double running_cost(const CostModel& cm, const Eigen::VectorXd& y, double u, double h_bottom) {
    const Eigen::VectorXd q = assemble_Q(cm, y);
    double state = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) state += q[i] * y[i] * y[i];
    if (cm.include_fixed_bottom_node) {
        const double s = cm.feddes.S_max * cm.feddes.S_max * cm.dz;
        state += s * scalar::feddes_deficit(cm.feddes, h_bottom);
    }
    return state + cm.lambda * u * u;
}

double normalized_running_cost(const CostModel& cm, const Eigen::VectorXd& y, double u,
                               double h_bottom) {
    std::vector<double> def(static_cast<std::size_t>(y.size()));
    tracking_deficit_batch(cm.feddes, std::span<const double>(y.data(), y.size()), def);
    double state = 0.0;
    for (double v : def) state += v;
    if (cm.include_fixed_bottom_node) state += scalar::feddes_deficit(cm.feddes, h_bottom);
    return state + cm.lambda * u * u;
}

double total_cost(std::span<const double> running, std::span<const double> times) {
    if (running.size() != times.size())
        throw_error(errc::invalid_input, "total_cost: series/timestamps length mismatch");
    if (times.size() < 2) return 0.0;
    double total = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double dt = times[k] - times[k - 1];
        if (!(dt > 0.0)) throw_error(errc::invalid_input, "total_cost: timestamps not increasing");
        total += 0.5 * dt * (running[k] + running[k - 1]);
    }
    return total;
}

void CostAccumulator::add(double t, double running) {
    if (!times_.empty()) {
        const double dt = t - times_.back();
        if (!(dt > 0.0))
            throw_error(errc::invalid_input, "accumulator: timestamps must increase");
        total_ += 0.5 * dt * (running + running_.back());
    }
    times_.push_back(t);
    running_.push_back(running);
}

} // namespace soilctl
