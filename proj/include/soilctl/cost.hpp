#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "soilctl/hydraulics.hpp"

namespace soilctl {

struct CostModel {
    FeddesParams feddes;
    double dz = 80.0 / 30.0;
    double lambda = 1e-5;
    // Reporting only: add the fixed bottom node's constant deficit to the
    // running cost. Never part of Q (the node is not a state).
    bool include_fixed_bottom_node = true;

    void validate() const;
};

// Diagonal of Q(y) = S_max^2 dz (Q1 + Q2 + Q3); requires y_i != 0.
Eigen::VectorXd assemble_Q(const CostModel& cm, const Eigen::VectorXd& y);

// y^T Q(y) y + lambda u^2, plus the bottom-node term when configured.
// h_bottom is only read when include_fixed_bottom_node is set.
double running_cost(const CostModel& cm, const Eigen::VectorXd& y, double u,
                    double h_bottom = 0.0);

// Same integrand divided by S_max^2 dz on the state part (control term kept
// as lambda u^2): Sum_i (1 - R(y_i))^2 [+ bottom] + lambda u^2. Ratios are
// formed from these totals, where both terms are commensurate.
double normalized_running_cost(const CostModel& cm, const Eigen::VectorXd& y, double u,
                               double h_bottom = 0.0);

// Trapezoidal quadrature of a running-cost series.
double total_cost(std::span<const double> running, std::span<const double> times);

class CostAccumulator {
public:
    void add(double t, double running);
    double total() const { return total_; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& running() const { return running_; }

private:
    std::vector<double> times_, running_;
    double total_ = 0.0;
};

} // namespace soilctl
