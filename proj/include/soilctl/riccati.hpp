#pragma once

#include <Eigen/Dense>

#include "soilctl/cost.hpp"
#include "soilctl/discretize.hpp"

namespace soilctl {

struct AreProblem {
    Eigen::MatrixXd A;    // d x d
    Eigen::VectorXd B;    // d
    Eigen::MatrixXd Q;    // d x d, symmetric PSD
    double lambda = 1e-5; // control weight
};

struct AreSolution {
    Eigen::MatrixXd Pi;
    double residual_norm = 0.0;               // ||A'Pi + Pi A - Pi B B' Pi / lam + Q||_F
    double closed_loop_spectral_abscissa = 0; // max Re eig(A - B B' Pi / lam)
    int newton_refinements = 0;
};

// Stabilizing solution via the ordered Schur form of the 2d x 2d Hamiltonian
// [[A, -BB'/lam], [-Q, -A']],
// with norm balancing and Newton-Kleinman polish when the residual asks for
// it. Throws errc::not_stabilizable / errc::no_convergence.
AreSolution solve_are(const AreProblem& prob, double tol = 1e-9);

// One Schur pass, no refinement. Exposed for the cross-validation suite.
Eigen::MatrixXd are_schur_solve(const AreProblem& prob);

// Newton-Kleinman iteration from a stabilizing initial guess. Each step is a
// Lyapunov solve (Bartels-Stewart). Returns the refined solution.
Eigen::MatrixXd newton_kleinman(const AreProblem& prob, const Eigen::MatrixXd& Pi0,
                                int max_iter = 20, double tol = 1e-14);

// Solve A' X + X A = -W for symmetric W (A must be Hurwitz-ish).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W);

double are_residual(const AreProblem& prob, const Eigen::MatrixXd& Pi);

// u = -(1/lambda) B' Pi y.
double feedback(const AreSolution& sol, const Eigen::VectorXd& B, double lambda,
                const Eigen::VectorXd& y);

enum class ControlLaw {
    // Affine tracking servo: branch-Hessian weights with per-branch targets
    // and the drift feedforward. Preset default.
    tracking,
    // Literal state-dependent form: printed Q(y), u = -(1/lambda) B' Pi y.
    quadratic,
};

struct SdreOptions {
    ControlLaw law = ControlLaw::tracking;
    // Weight scale for the tracking law's branch Hessians (the printed
    // prefactor S_max^2 dz collapses the gain against lambda = 1e-5).
    double tracking_weight = 1.0;
    double are_tol = 1e-9;
};

struct SdreStep {
    double u = 0.0;
    AreSolution diagnostics;
    bool short_circuit = false; // Q == 0 and A Hurwitz: Pi = 0, u = 0
};

// Assemble the state-frozen model at (t, y), solve the ARE, return the
// feedback. k_modifier mirrors the plant's conductivity multiplier.
SdreStep solve_sdre_step(const SemidiscreteSystem& sys, const CostModel& cm, double t,
                         const Eigen::VectorXd& y, double k_modifier = 1.0,
                         const SdreOptions& opts = {});

// Branch weights / targets of the tracking law (exposed for tests):
// wet side (y > h2, including y >= h1): weight w/(h2-h1)^2, target h2;
// dry side (y < h3, including y <= h4): weight w/(h3-h4)^2, target h3;
// plateau [h3, h2]: weight 0.
void tracking_weights(const FeddesParams& p, const Eigen::VectorXd& y, double w,
                      Eigen::VectorXd& q, Eigen::VectorXd& r);

} // namespace soilctl
