#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "soilctl/hydraulics.hpp"

namespace soilctl {

// Uniform grid on [0, depth]; nodes 0..d-1 are state components, node d is
// the fixed bottom boundary.
struct Grid {
    double depth = 80.0;
    int n_nodes = 31;

    double dz() const { return depth / (n_nodes - 1); }
    int state_dim() const { return n_nodes - 1; }
    double z(int i) const { return i * dz(); }
    void validate() const;
};

// Piecewise-linear schedule (constant before the first and after the last
// knot). A single knot is a constant.
class Schedule {
public:
    Schedule() : pts_{{0.0, 0.0}} {}
    explicit Schedule(double constant) : pts_{{0.0, constant}} {}
    explicit Schedule(std::vector<std::pair<double, double>> pts);

    double operator()(double x) const;
    bool is_constant() const { return pts_.size() == 1; }
    const std::vector<std::pair<double, double>>& knots() const { return pts_; }

private:
    std::vector<std::pair<double, double>> pts_;
};

struct BoundaryData {
    double h_top_initial = -20.73; // initial value of the dynamic top node
    Schedule h_bottom{-61.5};      // Dirichlet bottom head h_B(t)
    Schedule h_initial{-61.5};     // initial profile h_0(z), z in [0, depth]
};

struct SemidiscreteSystem {
    Grid grid;
    HydraulicModel model;
    std::optional<FeddesParams> feddes; // absent => S == 0
    BoundaryData boundary;
    bool use_null_augmentation = true;
    // MMS hook: extra source added to the mass-matrix-free RHS, s(z, t).
    std::function<double(double, double)> source;

    Eigen::VectorXd initial_state() const;
    Eigen::VectorXd input_vector() const; // B = e_0
    void validate() const;
};

// Discrete gravity sign convention: rhs carries -sigma*(K_{i+1}-K_{i-1})/(2 dz),
// the pressure-form PDE with z measured downward.
inline constexpr double kGravitySign = 1.0;

// Mass-matrix-inverted right-hand side; component 0 equals u exactly.
void rhs(const SemidiscreteSystem& sys, double t, const Eigen::VectorXd& y, double u,
         double k_modifier, Eigen::VectorXd& dydt);
Eigen::VectorXd rhs(const SemidiscreteSystem& sys, double t, const Eigen::VectorXd& y, double u,
                    double k_modifier = 1.0);

struct Factorization {
    Eigen::MatrixXd A;    // semilinear matrix, A(y) y = f(y)
    Eigen::VectorXd mass; // diagonal of C(y); entry 0 is 1
};

// Exact semilinear factorization: conduction tridiagonal plus the constant
// terms (gravity, sink, bottom inflow) embedded as v_i / y_i on the diagonal,
// plus the verified null row when use_null_augmentation is set.
Factorization assemble_factorization(const SemidiscreteSystem& sys, double t,
                                     const Eigen::VectorXd& y, double k_modifier = 1.0);

// Diagonal of C(y): entry 0 is 1 (dynamic boundary row), entries 1..d-1 are
// capacity(model, y_i).
Eigen::VectorXd mass_matrix(const SemidiscreteSystem& sys, const Eigen::VectorXd& y);

// Conduction-only tridiagonal block (rows/cols 1..d-1 of the flux stencil),
// exposed for the stencil reduction tests.
Eigen::MatrixXd conduction_block(const SemidiscreteSystem& sys, double t,
                                 const Eigen::VectorXd& y, double k_modifier = 1.0);

// Controller-side model: same dynamics as rhs, written as
//   ydot = A y + c + B u   (mass-normalized)
// with A the conduction stencil (plus the null row) and c the constants.
// Avoids the diagonal constant embedding, which manufactures spurious
// near-marginal modes in the frozen pair.
struct ControlModel {
    Eigen::MatrixXd A;
    Eigen::VectorXd c;
};
ControlModel control_model(const SemidiscreteSystem& sys, double t, const Eigen::VectorXd& y,
                           double k_modifier = 1.0);

} // namespace soilctl
