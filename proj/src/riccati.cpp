#include "soilctl/riccati.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <lapacke.h>

#include "soilctl/errors.hpp"

namespace soilctl {

namespace {

lapack_logical select_stable(const double* wr, const double* /*wi*/) { return *wr < 0.0; }

double spectral_abscissa(const Eigen::MatrixXd& A) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff();
}

Eigen::MatrixXd gain_matrix(const AreProblem& prob) {
    return prob.B * prob.B.transpose() / prob.lambda;
}

} // namespace

double are_residual(const AreProblem& prob, const Eigen::MatrixXd& Pi) {
    const Eigen::MatrixXd G = gain_matrix(prob);
    const Eigen::MatrixXd R =
        prob.A.transpose() * Pi + Pi * prob.A - Pi * G * Pi + prob.Q;
    return R.norm();
}

Eigen::MatrixXd are_schur_solve(const AreProblem& prob) {
    const int d = static_cast<int>(prob.A.rows());
    const int n2 = 2 * d;

    // Balance Pi = s * Pi~ so the Hamiltonian blocks share a scale; the raw
    // blocks span ~1e-11 (Q) to ~1e5 (B B'/lambda) in this problem.
    const double normG = gain_matrix(prob).norm();
    const double normQ = prob.Q.norm();
    const double s = (normQ > 0.0 && normG > 0.0) ? std::sqrt(normQ / normG) : 1.0;

    Eigen::MatrixXd H(n2, n2);
    H.topLeftCorner(d, d) = prob.A;
    H.topRightCorner(d, d) = -s * gain_matrix(prob);
    H.bottomLeftCorner(d, d) = -prob.Q / s;
    H.bottomRightCorner(d, d) = -prob.A.transpose();

    Eigen::VectorXd wr(n2), wi(n2);
    Eigen::MatrixXd vs(n2, n2);
    lapack_int sdim = 0;
    const lapack_int info =
        LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', select_stable, n2, H.data(), n2, &sdim,
                      wr.data(), wi.data(), vs.data(), n2);
    if (info < 0) throw_error(errc::no_convergence, "dgees invalid argument");
    if (info > 0 && info <= n2) throw_error(errc::no_convergence, "dgees QR iteration failed");
    if (info > n2)
        throw_error(errc::not_stabilizable, "dgees could not reorder the stable eigenvalues");
    if (sdim != d)
        throw_error(errc::not_stabilizable,
                    "Hamiltonian stable subspace has dimension " + std::to_string(sdim) +
                        ", expected " + std::to_string(d) +
                        " (eigenvalues on or near the imaginary axis)");

    const Eigen::MatrixXd U1 = vs.topLeftCorner(d, d);
    const Eigen::MatrixXd U2 = vs.bottomLeftCorner(d, d);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(U1.transpose());
    if (std::fabs(lu.determinant()) < 1e-300)
        throw_error(errc::not_stabilizable, "stable subspace basis is singular (U1)");
    Eigen::MatrixXd Pi = lu.solve(U2.transpose()).transpose();
    Pi = 0.5 * (Pi + Pi.transpose()).eval();
    return s * Pi;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W) {
    const int d = static_cast<int>(A.rows());
    Eigen::RealSchur<Eigen::MatrixXd> schur(A);
    if (schur.info() != Eigen::Success)
        throw_error(errc::no_convergence, "real Schur failed in Lyapunov solve");
    const Eigen::MatrixXd T = schur.matrixT();
    const Eigen::MatrixXd U = schur.matrixU();

    Eigen::MatrixXd C = -U.transpose() * W * U;
    double scale = 1.0;
    // T' Y + Y T = scale * C
    const lapack_int info = LAPACKE_dtrsyl(LAPACK_COL_MAJOR, 'T', 'N', 1, d, d, T.data(), d,
                                           T.data(), d, C.data(), d, &scale);
    if (info < 0) throw_error(errc::no_convergence, "dtrsyl invalid argument");
    if (scale == 0.0) throw_error(errc::no_convergence, "dtrsyl returned zero scale");
    Eigen::MatrixXd X = U * (C / scale) * U.transpose();
    return 0.5 * (X + X.transpose());
}

Eigen::MatrixXd newton_kleinman(const AreProblem& prob, const Eigen::MatrixXd& Pi0, int max_iter,
                                double tol) {
    const Eigen::MatrixXd G = gain_matrix(prob);
    Eigen::MatrixXd Pi = Pi0;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::MatrixXd Acl = prob.A - G * Pi;
        const Eigen::MatrixXd W = prob.Q + Pi * G * Pi;
        const Eigen::MatrixXd next = solve_lyapunov(Acl, W);
        const double delta = (next - Pi).norm();
        Pi = next;
        if (delta <= tol * std::max(1.0, Pi.norm())) break;
    }
    return Pi;
}

AreSolution solve_are(const AreProblem& prob, double tol) {
    if (prob.A.rows() != prob.A.cols() || prob.Q.rows() != prob.A.rows() ||
        prob.B.size() != prob.A.rows())
        throw_error(errc::invalid_input, "solve_are: dimension mismatch");
    if (!(prob.lambda > 0.0)) throw_error(errc::invalid_input, "solve_are: lambda > 0 required");

    AreSolution sol;
    sol.Pi = are_schur_solve(prob);

    const double res_target = tol * (1.0 + prob.Q.norm());
    sol.residual_norm = are_residual(prob, sol.Pi);
    while (sol.residual_norm > res_target && sol.newton_refinements < 4) {
        sol.Pi = newton_kleinman(prob, sol.Pi, 1);
        sol.residual_norm = are_residual(prob, sol.Pi);
        ++sol.newton_refinements;
    }
    if (sol.residual_norm > res_target)
        throw_error(errc::no_convergence,
                    "ARE residual " + std::to_string(sol.residual_norm) + " above target " +
                        std::to_string(res_target));

    sol.closed_loop_spectral_abscissa = spectral_abscissa(prob.A - gain_matrix(prob) * sol.Pi);
    if (!(sol.closed_loop_spectral_abscissa < 0.0))
        throw_error(errc::not_stabilizable,
                    "closed loop not stable, spectral abscissa = " +
                        std::to_string(sol.closed_loop_spectral_abscissa));
    return sol;
}

double feedback(const AreSolution& sol, const Eigen::VectorXd& B, double lambda,
                const Eigen::VectorXd& y) {
    return -(B.transpose() * sol.Pi * y)(0) / lambda;
}

void tracking_weights(const FeddesParams& p, const Eigen::VectorXd& y, double w,
                      Eigen::VectorXd& q, Eigen::VectorXd& r) {
    const double c_wet = w / ((p.h2 - p.h1) * (p.h2 - p.h1));
    const double c_dry = w / ((p.h3 - p.h4) * (p.h3 - p.h4));
    q.setZero(y.size());
    r.resize(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double v = y[i];
        if (v > p.h2) {
            q[i] = c_wet;
            r[i] = p.h2;
        } else if (v < p.h3) {
            q[i] = c_dry;
            r[i] = p.h3;
        } else {
            r[i] = v; // plateau: no pull
        }
    }
}

SdreStep solve_sdre_step(const SemidiscreteSystem& sys, const CostModel& cm, double t,
                         const Eigen::VectorXd& y, double k_modifier, const SdreOptions& opts) {
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (!(y[i] < 0.0) || y[i] == 0.0)
            throw_error(errc::invalid_input,
                        "sdre: state must be strictly negative (node " + std::to_string(i) + ")");

    const Eigen::VectorXd B = sys.input_vector();
    SdreStep out;

    if (opts.law == ControlLaw::quadratic) {
        const Factorization f = assemble_factorization(sys, t, y, k_modifier);
        Eigen::MatrixXd Ah = f.A;
        for (Eigen::Index i = 0; i < Ah.rows(); ++i) Ah.row(i) /= f.mass[i];
        const Eigen::VectorXd qdiag = sys.feddes ? assemble_Q(cm, y)
                                                 : Eigen::VectorXd::Zero(y.size());
        if (qdiag.isZero(0.0)) {
            if (spectral_abscissa(Ah) < 0.0) {
                out.short_circuit = true;
                out.u = 0.0;
                out.diagnostics.Pi = Eigen::MatrixXd::Zero(y.size(), y.size());
                out.diagnostics.closed_loop_spectral_abscissa = spectral_abscissa(Ah);
                return out;
            }
        }
        AreProblem prob{Ah, B, Eigen::MatrixXd(qdiag.asDiagonal()), cm.lambda};
        out.diagnostics = solve_are(prob, opts.are_tol);
        out.u = feedback(out.diagnostics, B, cm.lambda, y);
        return out;
    }

    // tracking law: drift-split frozen model plus branch-target feedforward
    const ControlModel m = control_model(sys, t, y, k_modifier);
    Eigen::VectorXd q, r;
    if (sys.feddes) {
        tracking_weights(*sys.feddes, y, opts.tracking_weight, q, r);
    } else {
        q.setZero(y.size());
        r = y;
    }
    if (q.isZero(0.0)) {
        if (spectral_abscissa(m.A) < 0.0) {
            out.short_circuit = true;
            out.u = 0.0;
            out.diagnostics.Pi = Eigen::MatrixXd::Zero(y.size(), y.size());
            out.diagnostics.closed_loop_spectral_abscissa = spectral_abscissa(m.A);
            return out;
        }
    }
    AreProblem prob{m.A, B, Eigen::MatrixXd(q.asDiagonal()), cm.lambda};
    out.diagnostics = solve_are(prob, opts.are_tol);

    // feedforward: (A - G Pi)' s = Q r - Pi c
    const Eigen::MatrixXd Acl = m.A - gain_matrix(prob) * out.diagnostics.Pi;
    const Eigen::VectorXd rhs = q.cwiseProduct(r) - out.diagnostics.Pi * m.c;
    const Eigen::VectorXd svec = Acl.transpose().partialPivLu().solve(rhs);
    out.u = -((out.diagnostics.Pi * y + svec).dot(B)) / cm.lambda;
    return out;
}

} // namespace soilctl
