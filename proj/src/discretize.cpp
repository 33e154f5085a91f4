#include "soilctl/discretize.hpp"

#include <algorithm>
#include <cmath>

#include "soilctl/kernels.hpp"

namespace soilctl {

void Grid::validate() const {
    if (n_nodes < 4) throw_error(errc::bad_config, "grid: need at least 4 nodes");
    if (!(depth > 0.0)) throw_error(errc::bad_config, "grid: depth must be positive");
}

Schedule::Schedule(std::vector<std::pair<double, double>> pts) : pts_(std::move(pts)) {
    if (pts_.empty()) throw_error(errc::bad_config, "schedule: needs at least one knot");
    if (!std::is_sorted(pts_.begin(), pts_.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; }))
        throw_error(errc::bad_config, "schedule: knots must be sorted by abscissa");
    for (const auto& [x, v] : pts_)
        if (!std::isfinite(x) || !std::isfinite(v))
            throw_error(errc::bad_config, "schedule: non-finite knot");
}

double Schedule::operator()(double x) const {
    if (pts_.size() == 1 || x <= pts_.front().first) return pts_.front().second;
    if (x >= pts_.back().first) return pts_.back().second;
    auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                               [](double v, const auto& p) { return v < p.first; });
    const auto& [x1, v1] = *it;
    const auto& [x0, v0] = *(it - 1);
    const double w = (x - x0) / (x1 - x0);
    return v0 + w * (v1 - v0);
}

Eigen::VectorXd SemidiscreteSystem::initial_state() const {
    const int d = grid.state_dim();
    Eigen::VectorXd y(d);
    y[0] = boundary.h_top_initial;
    for (int i = 1; i < d; ++i) y[i] = boundary.h_initial(grid.z(i));
    return y;
}

Eigen::VectorXd SemidiscreteSystem::input_vector() const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(grid.state_dim());
    b[0] = 1.0;
    return b;
}

void SemidiscreteSystem::validate() const {
    grid.validate();
    soilctl::validate(model);
    if (feddes) feddes->validate();
    if (!std::isfinite(boundary.h_top_initial))
        throw_error(errc::bad_config, "boundary: h_top_initial must be finite");
}

namespace {

struct Workspace {
    std::vector<double> hx, K, C, S;
};

Workspace& scratch() {
    thread_local Workspace w;
    return w;
}

// Fill hx = [y..., h_B(t)], K over all d+1 nodes (scaled), C and S over the
// d state nodes.
void evaluate_fields(const SemidiscreteSystem& sys, double t, const Eigen::VectorXd& y,
                     double k_modifier, Workspace& w) {
    const int d = sys.grid.state_dim();
    w.hx.resize(d + 1);
    for (int i = 0; i < d; ++i) {
        if (!std::isfinite(y[i]))
            throw_error(errc::invalid_input, "state component " + std::to_string(i) + " not finite");
        w.hx[i] = y[i];
    }
    w.hx[d] = sys.boundary.h_bottom(t);
    if (!std::isfinite(w.hx[d])) throw_error(errc::invalid_input, "h_B(t) not finite");

    w.K.resize(d + 1);
    conductivity_batch(sys.model, w.hx, k_modifier, w.K);
    w.C.resize(d);
    capacity_batch(sys.model, std::span<const double>(w.hx.data(), d), w.C);
    w.S.assign(d, 0.0);
    if (sys.feddes) uptake_batch(*sys.feddes, std::span<const double>(w.hx.data(), d), w.S);
}

} // namespace

void rhs(const SemidiscreteSystem& sys, double t, const Eigen::VectorXd& y, double u,
         double k_modifier, Eigen::VectorXd& dydt) {
    const int d = sys.grid.state_dim();
    const double dz = sys.grid.dz();
    const double inv2dz2 = 1.0 / (2.0 * dz * dz);
    const double inv2dz = 1.0 / (2.0 * dz);

    Workspace& w = scratch();
    evaluate_fields(sys, t, y, k_modifier, w);

    dydt.resize(d);
    dydt[0] = u;
    for (int i = 1; i < d; ++i) {
        const double Ci = w.C[i];
        if (!(std::fabs(Ci) > 1e-300))
            throw_error(errc::singular_capacity,
                        "capacity vanished at node " + std::to_string(i));
        const double flux = ((w.K[i - 1] + w.K[i]) * (w.hx[i - 1] - w.hx[i]) +
                             (w.K[i] + w.K[i + 1]) * (w.hx[i + 1] - w.hx[i])) *
                            inv2dz2;
        const double grav = -kGravitySign * (w.K[i + 1] - w.K[i - 1]) * inv2dz;
        double f = flux + grav - w.S[i];
        if (sys.source) f += sys.source(sys.grid.z(i), t);
        dydt[i] = f / Ci;
        if (!std::isfinite(dydt[i]))
            throw_error(errc::numerical_blowup, "non-finite rhs at node " + std::to_string(i));
    }
}

Eigen::VectorXd rhs(const SemidiscreteSystem& sys, double t, const Eigen::VectorXd& y, double u,
                    double k_modifier) {
    Eigen::VectorXd out;
    rhs(sys, t, y, u, k_modifier, out);
    return out;
}

Eigen::VectorXd mass_matrix(const SemidiscreteSystem& sys, const Eigen::VectorXd& y) {
    const int d = sys.grid.state_dim();
    std::vector<double> c(d);
    std::vector<double> h(y.data(), y.data() + d);
    capacity_batch(sys.model, h, c);
    Eigen::VectorXd m(d);
    m[0] = 1.0;
    for (int i = 1; i < d; ++i) m[i] = c[i];
    return m;
}

Factorization assemble_factorization(const SemidiscreteSystem& sys, double t,
                                     const Eigen::VectorXd& y, double k_modifier) {
    const int d = sys.grid.state_dim();
    const double dz = sys.grid.dz();
    const double inv2dz2 = 1.0 / (2.0 * dz * dz);
    const double inv2dz = 1.0 / (2.0 * dz);

    for (int i = 0; i < d; ++i)
        if (y[i] == 0.0)
            throw_error(errc::factorization_undefined,
                        "constant terms cannot be embedded: y[" + std::to_string(i) + "] == 0");

    Workspace& w = scratch();
    evaluate_fields(sys, t, y, k_modifier, w);

    Factorization f;
    f.A = Eigen::MatrixXd::Zero(d, d);
    f.mass.resize(d);
    f.mass[0] = 1.0;

    for (int i = 1; i < d; ++i) {
        f.mass[i] = w.C[i];
        f.A(i, i - 1) = (w.K[i - 1] + w.K[i]) * inv2dz2;
        f.A(i, i) = -(w.K[i + 1] + 2.0 * w.K[i] + w.K[i - 1]) * inv2dz2;
        if (i + 1 < d) f.A(i, i + 1) = (w.K[i] + w.K[i + 1]) * inv2dz2;
        // gravity, sink and bottom-inflow constants, embedded as v_i / y_i
        double v = -kGravitySign * (w.K[i + 1] - w.K[i - 1]) * inv2dz - w.S[i];
        if (i == d - 1) v += (w.K[d - 1] + w.K[d]) * w.hx[d] * inv2dz2;
        f.A(i, i) += v / y[i];
    }
    if (sys.use_null_augmentation) {
        // A* y = y1 y0 - y0 y1 = 0 exactly
        f.A(0, 0) += y[1];
        f.A(0, 1) += -y[0];
    }
    return f;
}

Eigen::MatrixXd conduction_block(const SemidiscreteSystem& sys, double t, const Eigen::VectorXd& y,
                                 double k_modifier) {
    const int d = sys.grid.state_dim();
    const double dz = sys.grid.dz();
    const double inv2dz2 = 1.0 / (2.0 * dz * dz);

    Workspace& w = scratch();
    evaluate_fields(sys, t, y, k_modifier, w);

    Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(d - 1, d - 1);
    for (int i = 1; i < d; ++i) {
        const int r = i - 1;
        if (r > 0) blk(r, r - 1) = (w.K[i - 1] + w.K[i]) * inv2dz2;
        blk(r, r) = -(w.K[i + 1] + 2.0 * w.K[i] + w.K[i - 1]) * inv2dz2;
        if (r + 1 < d - 1) blk(r, r + 1) = (w.K[i] + w.K[i + 1]) * inv2dz2;
    }
    return blk;
}

ControlModel control_model(const SemidiscreteSystem& sys, double t, const Eigen::VectorXd& y,
                           double k_modifier) {
    const int d = sys.grid.state_dim();
    const double dz = sys.grid.dz();
    const double inv2dz2 = 1.0 / (2.0 * dz * dz);
    const double inv2dz = 1.0 / (2.0 * dz);

    Workspace& w = scratch();
    evaluate_fields(sys, t, y, k_modifier, w);

    ControlModel m;
    m.A = Eigen::MatrixXd::Zero(d, d);
    m.c = Eigen::VectorXd::Zero(d);
    for (int i = 1; i < d; ++i) {
        const double Ci = w.C[i];
        if (!(std::fabs(Ci) > 1e-300))
            throw_error(errc::singular_capacity,
                        "capacity vanished at node " + std::to_string(i));
        m.A(i, i - 1) = (w.K[i - 1] + w.K[i]) * inv2dz2 / Ci;
        m.A(i, i) = -(w.K[i + 1] + 2.0 * w.K[i] + w.K[i - 1]) * inv2dz2 / Ci;
        if (i + 1 < d) m.A(i, i + 1) = (w.K[i] + w.K[i + 1]) * inv2dz2 / Ci;
        double v = -kGravitySign * (w.K[i + 1] - w.K[i - 1]) * inv2dz - w.S[i];
        if (i == d - 1) v += (w.K[d - 1] + w.K[d]) * w.hx[d] * inv2dz2;
        m.c[i] = v / Ci;
    }
    if (sys.use_null_augmentation) {
        m.A(0, 0) += y[1];
        m.A(0, 1) += -y[0];
    }
    return m;
}

} // namespace soilctl
