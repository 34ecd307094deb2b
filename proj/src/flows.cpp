#include "geodloom/flows.hpp"

namespace geodloom {

std::vector<double> SpeedField::evaluate(const ShapeData& sd, double t) const {
    std::vector<double> out(sd.nodes.size());
    for (size_t i = 0; i < sd.nodes.size(); ++i) {
        switch (kind) {
            case Kind::Constant: out[i] = constant; break;
            case Kind::FSigma: out[i] = f_sigma(sd.nodes[i]); break;
            case Kind::Custom: out[i] = custom(sd.domain.node(static_cast<int>(i)), t); break;
        }
    }
    return out;
}

FlowState make_flow_state(const ImmersionChart& chart, double t) {
    return FlowState{tabulate(chart), t};
}

namespace {

// Nodewise flow velocity f nu for the given chart values.
std::vector<Vec> flow_rhs(const Domain& d, const std::vector<Vec>& values,
                          const SpeedField& speed, double t, double orientation) {
    ShapeData sd = fundamental_data(make_tabulated_chart(d, values, orientation));
    const std::vector<double> f = speed.evaluate(sd, t);
    std::vector<Vec> out(values.size());
    for (size_t i = 0; i < values.size(); ++i) out[i] = f[i] * sd.nodes[i].nu;
    return out;
}

std::vector<Vec> axpy(const std::vector<Vec>& x, double a, const std::vector<Vec>& y) {
    std::vector<Vec> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
    return out;
}

}  // namespace

FlowStepReport flow_step(const FlowState& state, double dt, const SpeedField& speed,
                         Scheme scheme) {
    require(state.chart.tabulated(), "flow_step: state chart must be tabulated");
    const Domain& d = state.chart.domain;
    const double orient = state.chart.orientation;

    FlowStepReport rep;
    double h = dt;
    for (int attempt = 0; attempt <= 8; ++attempt) {
        try {
            std::vector<Vec> x = state.chart.values;
            std::vector<Vec> next;
            if (scheme == Scheme::Euler) {
                const std::vector<Vec> k1 = flow_rhs(d, x, speed, state.t, orient);
                next = axpy(x, h, k1);
            } else {
                const std::vector<Vec> k1 = flow_rhs(d, x, speed, state.t, orient);
                const std::vector<Vec> k2 =
                    flow_rhs(d, axpy(x, 0.5 * h, k1), speed, state.t + 0.5 * h, orient);
                const std::vector<Vec> k3 =
                    flow_rhs(d, axpy(x, 0.5 * h, k2), speed, state.t + 0.5 * h, orient);
                const std::vector<Vec> k4 =
                    flow_rhs(d, axpy(x, h, k3), speed, state.t + h, orient);
                next.resize(x.size());
                for (size_t i = 0; i < x.size(); ++i)
                    next[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            double drift = 0.0;
            for (Vec& v : next) {
                drift = std::max(drift, std::abs(mink_norm2(v) + 1.0));
                v = project_to_hyperboloid(std::move(v));
            }
            ImmersionChart chart = make_tabulated_chart(d, std::move(next), orient);
            ShapeData sd = fundamental_data(chart);  // throws on rank loss
            rep.state = FlowState{std::move(chart), state.t + h};
            rep.dt_used = h;
            rep.hyperboloid_drift = drift;
            rep.min_lambda = std::numeric_limits<double>::infinity();
            rep.max_lambda = -rep.min_lambda;
            for (const ShapeNode& nd : sd.nodes) {
                rep.min_lambda = std::min(rep.min_lambda, nd.lambdas.minCoeff());
                rep.max_lambda = std::max(rep.max_lambda, nd.lambdas.maxCoeff());
            }
            rep.small_curvatures = rep.min_lambda > -1.0 && rep.max_lambda < 1.0;
            return rep;
        } catch (const precondition_error&) {
            h *= 0.5;
            rep.rejections += 1;
        }
    }
    throw precondition_error("flow_step: persistent immersion failure after 8 halvings");
}

double verify_lift_evolution(const FlowState& s0, const FlowState& s1, const SpeedField& speed) {
    const double dt = s1.t - s0.t;
    require(dt > 0.0, "verify_lift_evolution: states out of order");
    const ShapeData sd0 = fundamental_data(s0.chart);
    const ShapeData sd1 = fundamental_data(s1.chart);
    const std::vector<double> f = speed.evaluate(sd0, s0.t);
    const Domain& d = s0.chart.domain;

    // Gradient of f with respect to Ibar = I - III per node.
    std::vector<Vec> ffield(sd0.nodes.size(), Vec(1));
    for (size_t i = 0; i < ffield.size(); ++i) ffield[i][0] = f[i];

    double worst = 0.0;
    for (int i = 0; i < d.node_count(); ++i) {
        const ShapeNode& nd = sd0.nodes[i];
        const Mat III = (nd.I * nd.B).transpose() * nd.B;  // I(B.,B.)
        const Mat ibar = nd.I - 0.5 * (III + III.transpose());
        const Vec df = lattice_jacobian(d, ffield, i).row(0).transpose();
        const Vec grad = ibar.ldlt().solve(df);
        const Vec bgrad = nd.B * grad;

        const Vec dz_x = nd.dsigma * grad;     // d sigma(grad f)
        const Vec dz_v = nd.dnu * grad;        // d nu(grad f)
        const Vec dzB_x = nd.dsigma * bgrad;
        const Vec dzB_v = nd.dnu * bgrad;

        // RHS = -d zeta(B grad) - J(d zeta(grad)) + f chi, chi = (nu, sigma).
        const Vec rhs_x = -dzB_x - dz_v + f[i] * nd.nu;
        const Vec rhs_v = -dzB_v - dz_x + f[i] * nd.sigma;

        const Vec fd_x = (sd1.nodes[i].sigma - nd.sigma) / dt;
        const Vec fd_v = (sd1.nodes[i].nu - nd.nu) / dt;
        worst = std::max(worst, std::sqrt((fd_x - rhs_x).squaredNorm() +
                                          (fd_v - rhs_v).squaredNorm()));
    }
    return worst;
}

GaussEvolutionReport verify_gauss_evolution(const FlowState& s0, const FlowState& s1,
                                            const SpeedField& speed,
                                            const ImmersionChart* analytic_s0) {
    const double dt = s1.t - s0.t;
    require(dt > 0.0, "verify_gauss_evolution: states out of order");
    const ShapeData sd0 = fundamental_data(s0.chart);
    const ShapeData sd1 = fundamental_data(s1.chart);
    const std::vector<double> f = speed.evaluate(sd0, s0.t);
    const Domain& d = s0.chart.domain;

    std::vector<Vec> ffield(sd0.nodes.size(), Vec(1));
    for (size_t i = 0; i < ffield.size(); ++i) ffield[i][0] = f[i];

    GaussEvolutionReport rep;
    std::optional<GaussChart> g;
    if (analytic_s0 && speed.kind == SpeedField::Kind::FSigma) g = gauss_map(*analytic_s0);
    double worst = 0.0, worst_mcf = -1.0;
    for (int i = 0; i < d.node_count(); ++i) {
        const ShapeNode& nd = sd0.nodes[i];
        const Mat III = (nd.I * nd.B).transpose() * nd.B;
        const Mat ibar = nd.I - 0.5 * (III + III.transpose());
        const Vec df = lattice_jacobian(d, ffield, i).row(0).transpose();
        const Vec grad = ibar.ldlt().solve(df);
        const Vec bgrad = nd.B * grad;

        const UTBPoint at = reproject(nd.sigma, nd.nu);

        // dG/dt: finite difference of the lifts, projected and chi-removed.
        const Vec fd_x = (sd1.nodes[i].sigma - nd.sigma) / dt;
        const Vec fd_v = (sd1.nodes[i].nu - nd.nu) / dt;
        const UTBTangent dgdt = remove_chi(project_to_utb_tangent(at, fd_x, fd_v));

        const Vec dz_x = nd.dsigma * grad, dz_v = nd.dnu * grad;
        const Vec dzB_x = nd.dsigma * bgrad, dzB_v = nd.dnu * bgrad;
        const UTBTangent rhs = remove_chi(
            project_to_utb_tangent(at, -dzB_x - dz_v, -dzB_v - dz_x));

        worst = std::max(worst, std::sqrt((dgdt.xd - rhs.xd).squaredNorm() +
                                          (dgdt.vd - rhs.vd).squaredNorm()));

        // MCF form dG/dt = H + B(J H) with the trace-route H, at analytic
        // snapshots under the f_sigma speed.
        if (g) {
            const GTangent H = mean_curvature_trace(*g, d.node(i));
            const GTangent Ht = transport_to(H, at, 1e-5);
            const Vec mcf_x = Ht.rep.xd - dzB_x;
            const Vec mcf_v = Ht.rep.vd - dzB_v;
            const UTBTangent mcf = remove_chi(project_to_utb_tangent(at, mcf_x, mcf_v));
            worst_mcf = std::max(worst_mcf, std::sqrt((dgdt.xd - mcf.xd).squaredNorm() +
                                                      (dgdt.vd - mcf.vd).squaredNorm()));
        }
    }
    rep.generic_residual = worst;
    rep.mcf_residual = worst_mcf;
    return rep;
}

}  // namespace geodloom
