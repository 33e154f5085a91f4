#include "soilctl/integrate.hpp"

#include <chrono>
#include <cmath>

#include "soilctl/kernels.hpp"
#include "soilctl/scalar_core.hpp"

namespace soilctl {

void IntegratorConfig::validate() const {
    if (!(0.0 < dt_min && dt_min <= dt_init && dt_init <= dt_max && dt_max <= t_end))
        throw_error(errc::bad_config, "integrator: need 0 < dt_min <= dt_init <= dt_max <= t_end");
    if (!(newton_tol > 0.0) || !(step_rtol > 0.0) || !(step_atol > 0.0))
        throw_error(errc::bad_config, "integrator: tolerances must be positive");
    if (newton_max_iter < 1) throw_error(errc::bad_config, "integrator: newton_max_iter >= 1");
}

void NoiseConfig::validate() const {
    if (epsilon < 0.0) throw_error(errc::bad_config, "noise: epsilon >= 0 required");
}

double uniform_draw(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer on a seed+counter stream
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double mean_uptake(const SemidiscreteSystem& sys, const Eigen::VectorXd& y, double t) {
    if (!sys.feddes) return 0.0;
    const int d = sys.grid.state_dim();
    std::vector<double> s(static_cast<std::size_t>(d));
    uptake_batch(*sys.feddes, std::span<const double>(y.data(), d), s);
    double sum = 0.0;
    for (double v : s) sum += v;
    sum += scalar::feddes_uptake(*sys.feddes, sys.boundary.h_bottom(t));
    return sum / static_cast<double>(d + 1);
}

namespace {

// TR-BDF2 constants (gamma = 2 - sqrt(2)): both stages share the diagonal
// coefficient dgam = gamma/2 = (1-gamma)/(2-gamma), so one factorization
// serves the whole step.
const double kGamma = 2.0 - std::sqrt(2.0);
const double kDiag = kGamma / 2.0;
const double kC1 = 1.0 / (kGamma * (2.0 - kGamma));
// embedded-error weights: est = dt (d1 f0 + d2 f_gamma + d3 f1)
const double kD1 = (std::sqrt(2.0) - 1.0) / 3.0;
const double kD2 = -1.0 / 3.0;
const double kD3 = (2.0 - std::sqrt(2.0)) / 3.0;

struct Stepper {
    const SemidiscreteSystem& sys;
    const IntegratorConfig& cfg;
    Eigen::MatrixXd jac;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    bool have_jac = false;
    double jac_dt = -1.0;
    long newton_iters = 0;

    Stepper(const SemidiscreteSystem& s, const IntegratorConfig& c) : sys(s), cfg(c) {}

    void build_jacobian(double t, const Eigen::VectorXd& y, double u, double kmod, double dt) {
        const int d = static_cast<int>(y.size());
        const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
        Eigen::VectorXd f0 = rhs(sys, t, y, u, kmod);
        jac.resize(d, d);
        Eigen::VectorXd yp = y;
        for (int j = 0; j < d; ++j) {
            const double delta = sqrt_eps * std::max(std::fabs(y[j]), 1.0);
            yp[j] = y[j] + delta;
            jac.col(j) = (rhs(sys, t, yp, u, kmod) - f0) / delta;
            yp[j] = y[j];
        }
        Eigen::MatrixXd W = Eigen::MatrixXd::Identity(d, d) - (kDiag * dt) * jac;
        lu.compute(W);
        have_jac = true;
        jac_dt = dt;
    }

    double wrms(const Eigen::VectorXd& v, const Eigen::VectorXd& ya,
                const Eigen::VectorXd& yb) const {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double w =
                cfg.step_atol + cfg.step_rtol * std::max(std::fabs(ya[i]), std::fabs(yb[i]));
            const double e = v[i] / w;
            acc += e * e;
        }
        return std::sqrt(acc / static_cast<double>(v.size()));
    }

    // Solve Y - dgam*dt*F(ts, Y) = rhs_const by modified Newton; Y holds the
    // predictor on entry.
    void solve_stage(double ts, Eigen::VectorXd& Y, const Eigen::VectorXd& rhs_const, double dt,
                     double u, double kmod, const Eigen::VectorXd& yref, int& iters) {
        for (iters = 0; iters < cfg.newton_max_iter; ++iters) {
            const Eigen::VectorXd g = Y - kDiag * dt * rhs(sys, ts, Y, u, kmod) - rhs_const;
            const Eigen::VectorXd delta = lu.solve(-g);
            if (!delta.allFinite()) throw_error(errc::no_convergence, "newton update not finite");
            Y += delta;
            ++newton_iters;
            if (wrms(delta, yref, Y) <= cfg.newton_tol) return;
        }
        throw_error(errc::no_convergence, "newton did not converge");
    }

    StepResult attempt(double t, const Eigen::VectorXd& y, double u, double dt, double kmod) {
        if (!have_jac || jac_dt != dt) build_jacobian(t, y, u, kmod, dt);

        const Eigen::VectorXd f0 = rhs(sys, t, y, u, kmod);
        StepResult res;
        int it1 = 0, it2 = 0;

        // TR stage
        Eigen::VectorXd y_gamma = y + (kGamma * dt) * f0; // predictor
        const Eigen::VectorXd rhs1 = y + (kDiag * dt) * f0;
        solve_stage(t + kGamma * dt, y_gamma, rhs1, dt, u, kmod, y, it1);

        // BDF2 stage; constants written as y + c1 (y_gamma - y) so a steady
        // state is preserved bitwise.
        Eigen::VectorXd y1 = y + (y_gamma - y) / kGamma; // predictor
        const Eigen::VectorXd rhs2 = y + kC1 * (y_gamma - y);
        solve_stage(t + dt, y1, rhs2, dt, u, kmod, y, it2);

        // stage derivatives recovered algebraically from the solved equations
        const Eigen::VectorXd f_gamma = (y_gamma - rhs1) / (kDiag * dt);
        const Eigen::VectorXd f1 = (y1 - rhs2) / (kDiag * dt);

        Eigen::VectorXd est = dt * (kD1 * f0 + kD2 * f_gamma + kD3 * f1);
        est = lu.solve(est); // stiff filter
        res.error_estimate = wrms(est, y, y1);
        res.newton_iterations = it1 + it2;
        res.y_next = std::move(y1);
        return res;
    }
};

double control_value(const SemidiscreteSystem& sys, const CostModel& cm,
                     const IntegratorConfig& cfg, double t, const Eigen::VectorXd& y,
                     double kmod_ctrl, Eigen::RowVectorXd& last_gain, double& last_ff,
                     bool& have_gain, int& consecutive_failures, SimulationRecord::Totals& tot) {
    if (cfg.control_mode == ControlMode::uncontrolled) return 0.0;
    try {
        const SdreStep stepr = solve_sdre_step(sys, cm, t, y, kmod_ctrl, cfg.sdre);
        ++tot.are_solves;
        tot.max_are_residual = std::max(tot.max_are_residual, stepr.diagnostics.residual_norm);
        consecutive_failures = 0;
        // cache the affine law pieces for reuse on failure
        const Eigen::VectorXd B = sys.input_vector();
        last_gain = (stepr.diagnostics.Pi.row(0)) / cm.lambda;
        last_ff = stepr.u + last_gain.dot(y); // u = -(gain.y) + (-ff)
        have_gain = true;
        return stepr.u;
    } catch (const error& e) {
        if (e.kind() != errc::not_stabilizable && e.kind() != errc::no_convergence) throw;
        ++tot.are_failures;
        if (++consecutive_failures > 10)
            throw_error(errc::integration_failure,
                        "10 consecutive SDRE failures, aborting: " + std::string(e.what()));
        if (!have_gain) return 0.0;
        return -last_gain.dot(y) + last_ff;
    }
}

} // namespace

StepResult step(const SemidiscreteSystem& sys, const IntegratorConfig& cfg, double t,
                const Eigen::VectorXd& y, double u_held, double dt, double k_modifier) {
    if (!(dt > 0.0)) throw_error(errc::invalid_input, "step: dt must be positive");
    Stepper s(sys, cfg);
    return s.attempt(t, y, u_held, dt, k_modifier);
}

SimulationRecord simulate(const SemidiscreteSystem& sys, const CostModel& cm,
                          const IntegratorConfig& cfg, const NoiseConfig& noise) {
    sys.validate();
    cm.validate();
    cfg.validate();
    noise.validate();

    const auto t_start = std::chrono::steady_clock::now();
    SimulationRecord rec;
    Stepper stepper(sys, cfg);

    Eigen::VectorXd y = sys.initial_state();
    double t = 0.0;
    double dt = cfg.dt_init;

    Eigen::RowVectorXd last_gain;
    double last_ff = 0.0;
    bool have_gain = false;
    int consecutive_failures = 0;

    auto record_row = [&](double time, const Eigen::VectorXd& state, double u) {
        const double hb = sys.boundary.h_bottom(time);
        rec.times.push_back(time);
        rec.states.push_back(state);
        rec.controls.push_back(u);
        rec.running_costs.push_back(running_cost(cm, state, u, hb));
        rec.normalized_running_costs.push_back(normalized_running_cost(cm, state, u, hb));
        rec.mean_uptakes.push_back(mean_uptake(sys, state, time));
    };

    auto admissible = [&](const Eigen::VectorXd& state) {
        for (Eigen::Index i = 0; i < state.size(); ++i)
            if (state[i] >= -1e-6)
                throw_error(errc::inadmissible_state,
                            "node " + std::to_string(i) + " reached " + std::to_string(state[i]) +
                                " (saturation guard)");
    };

    admissible(y);

    while (true) {
        const std::uint64_t draw_index = static_cast<std::uint64_t>(rec.times.size());
        const double kmod_plant =
            noise.enabled ? 1.0 + noise.epsilon * uniform_draw(noise.seed, draw_index) : 1.0;
        const double kmod_ctrl = noise.plant_only ? 1.0 : kmod_plant;

        const double u = control_value(sys, cm, cfg, t, y, kmod_ctrl, last_gain, last_ff,
                                       have_gain, consecutive_failures, rec.totals);
        record_row(t, y, u);
        if (t >= cfg.t_end) break;

        // per-step cap so sample-and-hold tracks the transient
        double dt_cap = cfg.dt_max;
        if (cfg.boundary_move_cap > 0.0 && std::fabs(u) > 0.0)
            dt_cap = std::min(dt_cap, cfg.boundary_move_cap / std::fabs(u));
        dt = std::min({dt, dt_cap, cfg.t_end - t});
        dt = std::max(dt, cfg.dt_min);

        stepper.have_jac = false; // refresh per accepted step
        bool accepted = false;
        while (!accepted) {
            try {
                StepResult r = stepper.attempt(t, y, u, dt, kmod_plant);
                if (r.error_estimate <= 1.0) {
                    t += dt;
                    y = std::move(r.y_next);
                    accepted = true;
                    ++rec.totals.steps_accepted;
                    const double grow = (r.error_estimate > 0.0)
                                            ? 0.9 * std::pow(r.error_estimate, -1.0 / 3.0)
                                            : 5.0;
                    dt = std::min(dt * std::clamp(grow, 0.2, 5.0), cfg.dt_max);
                } else {
                    ++rec.totals.steps_rejected;
                    const double shrink = 0.9 * std::pow(r.error_estimate, -1.0 / 3.0);
                    dt *= std::clamp(shrink, 0.1, 0.9);
                    stepper.have_jac = false;
                }
            } catch (const error& e) {
                if (e.kind() == errc::inadmissible_state) throw;
                ++rec.totals.steps_rejected;
                dt *= 0.5;
                stepper.have_jac = false;
            }
            if (dt < cfg.dt_min)
                throw_error(errc::integration_failure,
                            "step size underflow at t = " + std::to_string(t));
        }
        admissible(y);
    }

    rec.totals.newton_iterations = stepper.newton_iters;
    rec.totals.total_cost = total_cost(rec.running_costs, rec.times);
    rec.totals.normalized_total_cost = total_cost(rec.normalized_running_costs, rec.times);
    rec.totals.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rec;
}

} // namespace soilctl
