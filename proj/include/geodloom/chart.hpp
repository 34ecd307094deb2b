#pragma once

#include "geodloom/utb.hpp"

#include <functional>
#include <vector>

// Sampled parametric charts. A chart is an evaluator over a rectangular
// parameter box (analytic backend) or a table of node values (tabulated
// backend). Derivatives come from a supplied jacobian when available and
// from 4th-order central differences otherwise; tabulated charts use
// 4th-order lattice stencils, shifted at non-periodic boundaries.

namespace geodloom {

struct Domain {
    Vec lo, hi;
    std::vector<int> samples;
    std::vector<bool> periodic;

    int dim() const { return static_cast<int>(samples.size()); }
    double width(int axis) const { return hi[axis] - lo[axis]; }
    double step(int axis) const {
        return periodic[axis] ? width(axis) / samples[axis] : width(axis) / (samples[axis] - 1);
    }
    // Per-axis finite-difference step for analytic evaluators.
    double fd_step(int axis) const { return width(axis) / (8.0 * samples[axis]); }

    int node_count() const {
        int total = 1;
        for (int s : samples) total *= s;
        return total;
    }
    std::vector<int> unravel(int linear) const {
        std::vector<int> idx(dim());
        for (int a = dim() - 1; a >= 0; --a) {
            idx[a] = linear % samples[a];
            linear /= samples[a];
        }
        return idx;
    }
    int ravel(const std::vector<int>& idx) const {
        int linear = 0;
        for (int a = 0; a < dim(); ++a) linear = linear * samples[a] + idx[a];
        return linear;
    }
    Vec node(const std::vector<int>& idx) const {
        Vec u(dim());
        for (int a = 0; a < dim(); ++a) u[a] = lo[a] + idx[a] * step(a);
        return u;
    }
    Vec node(int linear) const { return node(unravel(linear)); }
};

Domain make_domain(std::vector<double> lo, std::vector<double> hi, std::vector<int> samples,
                   std::vector<bool> periodic = {});

// Finite-difference weights for the m-th derivative at x0 on given nodes
// (Fornberg recursion).
Vec fd_weights(double x0, const Vec& nodes, int order);

using MapFn = std::function<Vec(const Vec&)>;
using JacFn = std::function<Mat(const Vec&)>;

struct ImmersionChart {
    Domain domain;
    MapFn map;                // analytic backend
    JacFn jac;                // optional analytic jacobian, ambient x n
    std::vector<Vec> values;  // tabulated backend, node-major
    double orientation = +1.0;

    bool tabulated() const { return !values.empty(); }
    int n() const { return domain.dim(); }

    Vec value_at(const Vec& u) const;     // analytic only
    Vec value_node(int linear) const;     // both backends
    Mat jac_at(const Vec& u) const;       // analytic only
    Mat jac_node(int linear) const;       // both backends
};

ImmersionChart make_analytic_chart(Domain d, MapFn map, JacFn jac = nullptr,
                                   double orientation = +1.0);
ImmersionChart make_tabulated_chart(Domain d, std::vector<Vec> values, double orientation = +1.0);
ImmersionChart tabulate(const ImmersionChart& chart);

// zeta-valued chart into the unit tangent bundle.
struct UTBChart {
    Domain domain;
    std::function<UTBPoint(const Vec&)> map;
    std::vector<UTBPoint> values;

    bool tabulated() const { return !values.empty(); }
    int n() const { return domain.dim(); }

    UTBPoint value_at(const Vec& u) const;
    UTBPoint value_node(int linear) const;
    // Differential columns as ambient pairs (not projected).
    void dzeta_node(int linear, Mat& dx, Mat& dv) const;
    void dzeta_at(const Vec& u, Mat& dx, Mat& dv) const;  // analytic only
};

// Central-difference differential of an analytic map at u (4th order),
// one-sided-shifted stencils at the domain boundary of non-periodic axes.
Mat fd_jacobian(const Domain& d, const MapFn& f, const Vec& u);

// Node derivative of a tabulated node field along each axis (4th order).
Mat lattice_jacobian(const Domain& d, const std::vector<Vec>& field, int linear);

// Periodic seam residual of the chart (max over sampled seam nodes); 0 when
// no axis is periodic.
double seam_residual(const ImmersionChart& chart);

}  // namespace geodloom
