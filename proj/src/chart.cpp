#include "geodloom/chart.hpp"

namespace geodloom {

Domain make_domain(std::vector<double> lo, std::vector<double> hi, std::vector<int> samples,
                   std::vector<bool> periodic) {
    Domain d;
    const int dim = static_cast<int>(samples.size());
    require(lo.size() == samples.size() && hi.size() == samples.size(),
            "make_domain: inconsistent axis counts");
    if (periodic.empty()) periodic.assign(dim, false);
    require(periodic.size() == samples.size(), "make_domain: inconsistent periodic flags");
    d.lo = Eigen::Map<Vec>(lo.data(), dim);
    d.hi = Eigen::Map<Vec>(hi.data(), dim);
    d.samples = std::move(samples);
    d.periodic = std::move(periodic);
    for (int a = 0; a < dim; ++a) {
        require(d.samples[a] >= 5, "make_domain: need at least 5 samples per axis");
        require(d.hi[a] > d.lo[a], "make_domain: empty axis");
    }
    return d;
}

Vec fd_weights(double x0, const Vec& nodes, int order) {
    // Fornberg's recursion, specialized output: weights of derivative `order`.
    const int n = static_cast<int>(nodes.size());
    Mat c = Mat::Zero(n, order + 1);
    double c1 = 1.0;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        double c2 = 1.0;
        const double c4 = nodes[i] - x0;
        const double c5 = nodes[i - 1] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                // New row from the previous one before it is updated.
                for (int k = std::min(i, order); k >= 1; --k)
                    c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = std::min(i, order); k >= 1; --k)
                c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c.col(order);
}

Mat fd_jacobian(const Domain& d, const MapFn& f, const Vec& u) {
    const Vec f0 = f(u);
    Mat out(f0.size(), d.dim());
    for (int a = 0; a < d.dim(); ++a) {
        const double h = d.fd_step(a);
        double base = u[a];
        if (!d.periodic[a]) {
            base = std::min(base, d.hi[a] - 2.0 * h);
            base = std::max(base, d.lo[a] + 2.0 * h);
        }
        Vec nodes(5);
        for (int k = 0; k < 5; ++k) nodes[k] = base + (k - 2) * h;
        const Vec w = fd_weights(u[a], nodes, 1);
        Vec col = Vec::Zero(f0.size());
        for (int k = 0; k < 5; ++k) {
            Vec uk = u;
            uk[a] = nodes[k];
            col += w[k] * f(uk);
        }
        out.col(a) = col;
    }
    return out;
}

Mat lattice_jacobian(const Domain& d, const std::vector<Vec>& field, int linear) {
    const std::vector<int> idx = d.unravel(linear);
    const int amb = static_cast<int>(field[linear].size());
    Mat out(amb, d.dim());
    for (int a = 0; a < d.dim(); ++a) {
        const int s = d.samples[a];
        const double h = d.step(a);
        int start = idx[a] - 2;
        if (!d.periodic[a]) start = std::max(0, std::min(start, s - 5));
        Vec nodes(5);
        for (int k = 0; k < 5; ++k) nodes[k] = (start + k) * h;
        const Vec w = fd_weights(idx[a] * h, nodes, 1);
        Vec col = Vec::Zero(amb);
        std::vector<int> nidx = idx;
        for (int k = 0; k < 5; ++k) {
            int j = start + k;
            if (d.periodic[a]) j = ((j % s) + s) % s;
            nidx[a] = j;
            col += w[k] * field[d.ravel(nidx)];
        }
        out.col(a) = col;
    }
    return out;
}

ImmersionChart make_analytic_chart(Domain d, MapFn map, JacFn jac, double orientation) {
    ImmersionChart c;
    c.domain = std::move(d);
    c.map = std::move(map);
    c.jac = std::move(jac);
    c.orientation = orientation;
    return c;
}

ImmersionChart make_tabulated_chart(Domain d, std::vector<Vec> values, double orientation) {
    require(static_cast<int>(values.size()) == d.node_count(),
            "make_tabulated_chart: value count does not match the grid");
    ImmersionChart c;
    c.domain = std::move(d);
    c.values = std::move(values);
    c.orientation = orientation;
    return c;
}

ImmersionChart tabulate(const ImmersionChart& chart) {
    if (chart.tabulated()) return chart;
    std::vector<Vec> vals(chart.domain.node_count());
    for (int i = 0; i < chart.domain.node_count(); ++i) vals[i] = chart.map(chart.domain.node(i));
    return make_tabulated_chart(chart.domain, std::move(vals), chart.orientation);
}

Vec ImmersionChart::value_at(const Vec& u) const {
    require(static_cast<bool>(map), "chart: no analytic evaluator");
    return map(u);
}

Vec ImmersionChart::value_node(int linear) const {
    return tabulated() ? values[linear] : map(domain.node(linear));
}

Mat ImmersionChart::jac_at(const Vec& u) const {
    if (jac) return jac(u);
    require(static_cast<bool>(map), "chart: no analytic evaluator");
    return fd_jacobian(domain, map, u);
}

Mat ImmersionChart::jac_node(int linear) const {
    if (tabulated()) return lattice_jacobian(domain, values, linear);
    return jac_at(domain.node(linear));
}

UTBPoint UTBChart::value_at(const Vec& u) const {
    require(static_cast<bool>(map), "utb chart: no analytic evaluator");
    return map(u);
}

UTBPoint UTBChart::value_node(int linear) const {
    return tabulated() ? values[linear] : map(domain.node(linear));
}

void UTBChart::dzeta_at(const Vec& u, Mat& dx, Mat& dv) const {
    require(static_cast<bool>(map), "utb chart: no analytic evaluator");
    dx = fd_jacobian(domain, [this](const Vec& p) { return map(p).x; }, u);
    dv = fd_jacobian(domain, [this](const Vec& p) { return map(p).v; }, u);
}

void UTBChart::dzeta_node(int linear, Mat& dx, Mat& dv) const {
    if (!tabulated()) {
        dzeta_at(domain.node(linear), dx, dv);
        return;
    }
    std::vector<Vec> xs(values.size()), vs(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        xs[i] = values[i].x;
        vs[i] = values[i].v;
    }
    dx = lattice_jacobian(domain, xs, linear);
    dv = lattice_jacobian(domain, vs, linear);
}

double seam_residual(const ImmersionChart& chart) {
    if (chart.tabulated() || !chart.map) return 0.0;
    double worst = 0.0;
    const Domain& d = chart.domain;
    for (int a = 0; a < d.dim(); ++a) {
        if (!d.periodic[a]) continue;
        for (int i = 0; i < d.node_count(); ++i) {
            std::vector<int> idx = d.unravel(i);
            if (idx[a] != 0) continue;
            Vec u = d.node(i);
            Vec w = u;
            w[a] += d.width(a);
            worst = std::max(worst, (chart.map(u) - chart.map(w)).norm());
        }
    }
    return worst;
}

}  // namespace geodloom
