#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "soilctl/cost.hpp"
#include "soilctl/discretize.hpp"
#include "soilctl/riccati.hpp"

namespace soilctl {

enum class ControlMode { uncontrolled, sdre };

struct IntegratorConfig {
    double t_end = 1000.0;
    double dt_init = 1e-4;
    double dt_min = 1e-12;
    double dt_max = 5.0;
    double newton_tol = 1e-2; // weighted-norm bound on the last Newton update
    int newton_max_iter = 8;
    double step_rtol = 1e-6;
    double step_atol = 1e-8;
    ControlMode control_mode = ControlMode::uncontrolled;
    // Cap on |u| * dt so sample-and-hold stays faithful during transients.
    double boundary_move_cap = 0.5; // cm per step; <= 0 disables
    SdreOptions sdre;

    void validate() const;
};

struct NoiseConfig {
    bool enabled = false;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    // When set, only the plant sees the noisy conductivity; default shares
    // the draw with the controller model.
    bool plant_only = false;

    void validate() const;
};

// Deterministic counter-based uniform draw in [0, 1).
double uniform_draw(std::uint64_t seed, std::uint64_t index);

struct SimulationRecord {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<double> controls;
    std::vector<double> running_costs;            // printed-scale formula
    std::vector<double> normalized_running_costs; // deficit-normalized
    std::vector<double> mean_uptakes;

    struct Totals {
        double total_cost = 0.0;            // trapezoid of running_costs
        double normalized_total_cost = 0.0; // trapezoid of normalized series
        double wall_seconds = 0.0;
        long steps_accepted = 0;
        long steps_rejected = 0;
        long newton_iterations = 0;
        long are_solves = 0;
        long are_failures = 0;
        double max_are_residual = 0.0;
    } totals;
};

struct StepResult {
    Eigen::VectorXd y_next;
    double error_estimate = 0.0; // weighted rms of the embedded error, accept iff <= 1
    int newton_iterations = 0;
};

// One TR-BDF2 step with frozen control and frozen conductivity multiplier.
// Throws on Newton failure (errc::no_convergence) and on non-finite
// intermediates; the adaptive driver treats both as step rejections.
StepResult step(const SemidiscreteSystem& sys, const IntegratorConfig& cfg, double t,
                const Eigen::VectorXd& y, double u_held, double dt, double k_modifier = 1.0);

// Closed-loop (or uncontrolled) simulation over [0, t_end]: SDRE recomputed
// from the current state once per accepted step and held; noise multiplier
// redrawn per accepted step, indexed by accepted-step count.
SimulationRecord simulate(const SemidiscreteSystem& sys, const CostModel& cm,
                          const IntegratorConfig& cfg, const NoiseConfig& noise);

// Mean uptake over the d state nodes plus the fixed bottom node at h_B(t).
double mean_uptake(const SemidiscreteSystem& sys, const Eigen::VectorXd& y, double t);

} // namespace soilctl
