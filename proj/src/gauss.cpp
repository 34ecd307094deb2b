#include "geodloom/gauss.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace geodloom {

GaussChart gauss_map(const ImmersionChart& chart) {
    require(!chart.tabulated(), "gauss_map: analytic charts only");
    GaussChart g;
    g.domain = chart.domain;
    g.source = chart;
    ImmersionChart src = chart;
    g.liftHint = [src](const Vec& u) {
        const Vec sigma = src.value_at(u);
        const Vec nu = unit_normal(sigma, src.jac_at(u), src.orientation);
        return reproject(sigma, nu);
    };
    auto lift = g.liftHint;
    g.gmap = [lift](const Vec& u) { return p_project(lift(u)); };
    return g;
}

GaussChart gauss_chart_of_lift(const UTBChart& zeta) {
    require(!zeta.tabulated(), "gauss_chart_of_lift: analytic charts only");
    GaussChart g;
    g.domain = zeta.domain;
    g.liftHint = zeta.map;
    auto lift = zeta.map;
    g.gmap = [lift](const Vec& u) { return p_project(lift(u)); };
    return g;
}

std::function<UTBPoint(const Vec&)> lift_section(const GaussChart& g) {
    if (g.has_lift_hint()) return g.liftHint;
    auto gmap = g.gmap;
    return [gmap](const Vec& u) { return canonical_rep(gmap(u)); };
}

namespace {

// Columns of the finite-difference differential of a UTB-valued section.
void section_differential(const Domain& d, const std::function<UTBPoint(const Vec&)>& zeta,
                          const Vec& u, Mat& dx, Mat& dv) {
    dx = fd_jacobian(d, [&zeta](const Vec& p) { return zeta(p).x; }, u);
    dv = fd_jacobian(d, [&zeta](const Vec& p) { return zeta(p).v; }, u);
}

// Single-axis derivative of the section (5-point stencil, 4th order).
void section_axis_derivative(const Domain& d, const std::function<UTBPoint(const Vec&)>& zeta,
                             const Vec& u, int axis, Vec& dx, Vec& dv) {
    const double h = d.fd_step(axis);
    Vec nodes(5);
    for (int k = 0; k < 5; ++k) nodes[k] = u[axis] + (k - 2) * h;
    const Vec w = fd_weights(u[axis], nodes, 1);
    const UTBPoint probe = zeta(u);
    dx = Vec::Zero(probe.x.size());
    dv = Vec::Zero(probe.x.size());
    for (int k = 0; k < 5; ++k) {
        Vec uk = u;
        uk[axis] = nodes[k];
        const UTBPoint q = zeta(uk);
        dx += w[k] * q.x;
        dv += w[k] * q.v;
    }
}

}  // namespace

GFrame gauss_frame(const GaussChart& g, const Vec& u) {
    const auto zeta = lift_section(g);
    GFrame f;
    f.anchor = zeta(u);
    Mat dx, dv;
    section_differential(g.domain, zeta, u, dx, dv);
    const int n = g.domain.dim();
    f.cols.reserve(n);
    for (int a = 0; a < n; ++a) {
        const UTBTangent t = project_to_utb_tangent(f.anchor, dx.col(a), dv.col(a));
        f.cols.push_back(make_gtangent(f.anchor, t));
    }
    f.gram.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.gram(i, j) = ghat_metric(f.cols[i].rep, f.cols[j].rep);
    f.gram = 0.5 * (f.gram + f.gram.transpose()).eval();
    return f;
}

double lagrangian_residual(const GaussChart& g) {
    double worst = 0.0;
    for (int node = 0; node < g.domain.node_count(); ++node) {
        const GFrame f = gauss_frame(g, g.domain.node(node));
        const int n = g.domain.dim();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                worst = std::max(worst,
                                 std::abs(ghat_metric(f.cols[i].rep, J_endo(f.cols[j].rep))));
    }
    return worst;
}

double riemannian_residual(const GaussChart& g) {
    double lo = std::numeric_limits<double>::infinity();
    for (int node = 0; node < g.domain.node_count(); ++node) {
        const GFrame f = gauss_frame(g, g.domain.node(node));
        Eigen::SelfAdjointEigenSolver<Mat> es(f.gram);
        lo = std::min(lo, es.eigenvalues().minCoeff());
    }
    return lo;
}

namespace {

// Integral of section^* omega over the segment from u0 to u1 along one axis
// (3-point Gauss-Legendre).
double edge_integral(const Domain& d, const std::function<UTBPoint(const Vec&)>& zeta,
                     const Vec& u0, int axis, double len) {
    static const double xs[3] = {0.5 - std::sqrt(0.15), 0.5, 0.5 + std::sqrt(0.15)};
    static const double ws[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    double acc = 0.0;
    for (int q = 0; q < 3; ++q) {
        Vec u = u0;
        u[axis] += xs[q] * len;
        Vec dx, dv;
        section_axis_derivative(d, zeta, u, axis, dx, dv);
        const UTBPoint at = zeta(u);
        const UTBTangent t = project_to_utb_tangent(at, dx, dv);
        acc += ws[q] * connection_form(t) * len;
    }
    return acc;
}

}  // namespace

FlatSection integrate_flat_section(const GaussChart& g, int basepoint_node, double u0,
                                   bool accept_multivalued, double tol) {
    const Domain& d = g.domain;
    const int n = d.dim();
    for (int a = 0; a < n; ++a)
        require(accept_multivalued || !d.periodic[a],
                "integrate_flat_section: periodic domain without multivaluedness opt-in");

    const auto zeta = lift_section(g);
    const std::vector<int> base = d.unravel(basepoint_node);

    // Edge integrals of section^* omega along each axis between adjacent
    // nodes, cached per (node, axis).
    const int total = d.node_count();
    std::vector<Vec> edge(total, Vec::Zero(n));  // edge[i][a]: from node i to its +a neighbour
    for (int i = 0; i < total; ++i) {
        const std::vector<int> idx = d.unravel(i);
        for (int a = 0; a < n; ++a) {
            if (idx[a] + 1 >= d.samples[a]) continue;
            edge[i][a] = edge_integral(d, zeta, d.node(i), a, d.step(a));
        }
    }

    // W(node) = path integral along axis-ordered lattice paths from base.
    std::vector<double> W(total, 0.0);
    std::vector<char> done(total, 0);
    const std::function<double(const std::vector<int>&)> walk =
        [&](const std::vector<int>& idx) -> double {
        const int lin = d.ravel(idx);
        if (done[lin]) return W[lin];
        // Find last axis where idx differs from base; step toward base.
        int axis = -1;
        for (int a = n - 1; a >= 0; --a)
            if (idx[a] != base[a]) {
                axis = a;
                break;
            }
        double val = 0.0;
        if (axis >= 0) {
            std::vector<int> prev = idx;
            if (idx[axis] > base[axis]) {
                prev[axis] -= 1;
                val = walk(prev) + edge[d.ravel(prev)][axis];
            } else {
                prev[axis] += 1;
                val = walk(prev) - edge[lin][axis];
            }
        }
        done[lin] = 1;
        W[lin] = val;
        return val;
    };
    for (int i = 0; i < total; ++i) walk(d.unravel(i));

    FlatSection out;
    out.u.resize(total);
    out.zeta.domain = d;
    out.zeta.values.resize(total);
    for (int i = 0; i < total; ++i) {
        out.u[i] = u0 - W[i];
        out.zeta.values[i] = geodesic_flow(zeta(d.node(i)), out.u[i]);
    }

    // Loop defect of the 1-form over every elementary cell.
    double worst = 0.0;
    for (int i = 0; i < total; ++i) {
        const std::vector<int> idx = d.unravel(i);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                if (idx[a] + 1 >= d.samples[a] || idx[b] + 1 >= d.samples[b]) continue;
                std::vector<int> ia = idx, ib = idx;
                ia[a] += 1;
                ib[b] += 1;
                const double circ = edge[i][a] + edge[d.ravel(ia)][b] - edge[d.ravel(ib)][a] -
                                    edge[i][b];
                worst = std::max(worst, std::abs(circ));
            }
    }
    out.pathIndependenceResidual = worst;

    // Wrap defect across periodic axes (one full period from the base).
    for (int a = 0; a < n; ++a) {
        if (!d.periodic[a]) continue;
        double loop = 0.0;
        std::vector<int> idx = base;
        for (int k = 0; k < d.samples[a]; ++k) {
            idx[a] = k;
            Vec u = d.node(d.ravel(idx));
            u[a] = d.lo[a] + k * d.step(a);
            loop += edge_integral(d, zeta, u, a, d.step(a));
        }
        out.seam_defect = std::max(out.seam_defect, std::abs(loop));
    }

    require(accept_multivalued || out.pathIndependenceResidual <= tol,
            "integrate_flat_section: cell residual above tolerance on a simply connected domain");
    return out;
}

namespace {

struct NodeDifferentials {
    std::vector<Mat> dx, dv;  // ambient x n per node
    std::vector<UTBPoint> at;
};

NodeDifferentials bulk_differentials(const UTBChart& zeta) {
    NodeDifferentials nd;
    const int total = zeta.domain.node_count();
    nd.dx.resize(total);
    nd.dv.resize(total);
    nd.at.resize(total);
    if (zeta.tabulated()) {
        std::vector<Vec> xs(total), vs(total);
        for (int i = 0; i < total; ++i) {
            xs[i] = zeta.values[i].x;
            vs[i] = zeta.values[i].v;
            nd.at[i] = zeta.values[i];
        }
        for (int i = 0; i < total; ++i) {
            nd.dx[i] = lattice_jacobian(zeta.domain, xs, i);
            nd.dv[i] = lattice_jacobian(zeta.domain, vs, i);
        }
    } else {
        for (int i = 0; i < total; ++i) {
            const Vec u = zeta.domain.node(i);
            nd.at[i] = zeta.map(u);
            zeta.dzeta_at(u, nd.dx[i], nd.dv[i]);
        }
    }
    return nd;
}

}  // namespace

DesingularizeResult desingularize_and_project(const UTBChart& zeta,
                                              const DesingularizeOptions& opts) {
    DesingularizeResult res;
    const Domain& d = zeta.domain;
    const int n = d.dim();
    const int total = d.node_count();
    const NodeDifferentials nd = bulk_differentials(zeta);

    // Precondition: zeta orthogonal to chi.
    double omega_res = 0.0;
    for (int i = 0; i < total; ++i) {
        for (int a = 0; a < n; ++a) {
            const UTBTangent t =
                project_to_utb_tangent(nd.at[i], nd.dx[i].col(a), nd.dv[i].col(a));
            const double scale = std::max(1.0, t.xd.norm() + t.vd.norm());
            omega_res = std::max(omega_res, std::abs(connection_form(t)) / scale);
        }
    }
    require(omega_res <= opts.omega_tol, "desingularize: zeta is not orthogonal to chi");

    const auto project_sigma = [&](double t) {
        const double c = std::cosh(t), s = std::sinh(t);
        if (zeta.tabulated()) {
            std::vector<Vec> vals(total);
            for (int i = 0; i < total; ++i)
                vals[i] = project_to_hyperboloid(c * zeta.values[i].x + s * zeta.values[i].v);
            return make_tabulated_chart(d, std::move(vals));
        }
        auto map = zeta.map;
        return make_analytic_chart(d, [map, c, s](const Vec& u) {
            const UTBPoint q = map(u);
            return project_to_hyperboloid(c * q.x + s * q.v);
        });
    };

    // Theorem-B fast path: positive definite ghat pullback.
    double min_gram = std::numeric_limits<double>::infinity();
    for (int i = 0; i < total; ++i) {
        Mat gram(n, n);
        const auto tangent = [&](int a) {
            return remove_chi(project_to_utb_tangent(nd.at[i], nd.dx[i].col(a), nd.dv[i].col(a)));
        };
        std::vector<UTBTangent> cols;
        for (int a = 0; a < n; ++a) cols.push_back(tangent(a));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) gram(a, b) = ghat_metric(cols[a], cols[b]);
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gram + gram.transpose()));
        min_gram = std::min(min_gram, es.eigenvalues().minCoeff());
    }
    if (min_gram > 0.0) {
        res.ok = true;
        res.riemannian_fast_path = true;
        res.tstar = 0.0;
        res.admissible_from = 0.0;
        res.sigma = project_sigma(0.0);
        return res;
    }

    // Per-node degeneracy measure at flow time t.
    const auto row_at = [&](double t) {
        DesingularizeRow row;
        row.t = t;
        const double c = std::cosh(t), s = std::sinh(t);
        row.worst_measure = std::numeric_limits<double>::infinity();
        bool fold = false;
        Vec prev_dir;
        for (int i = 0; i < total; ++i) {
            const Mat P = c * nd.dx[i] + s * nd.dv[i];
            const Mat L1 = c * nd.dx[i] + s * nd.dv[i];
            const Mat L2 = s * nd.dx[i] + c * nd.dv[i];
            Mat L(2 * P.rows(), n);
            L << L1, L2;
            Eigen::JacobiSVD<Mat> psvd(P);
            Eigen::JacobiSVD<Mat> lsvd(L);
            const double measure = psvd.singularValues().minCoeff() /
                                   std::max(lsvd.singularValues().maxCoeff(), 1e-300);
            if (measure < row.worst_measure) {
                row.worst_measure = measure;
                row.worst_node = i;
            }
            if (n == 1) {
                const Vec dir = P.col(0);
                if (i > 0 && prev_dir.dot(dir) <= 0.0) fold = true;
                prev_dir = dir;
            }
        }
        row.admissible = !fold && row.worst_measure > opts.rank_tol;
        return row;
    };

    res.scan.reserve(opts.samples);
    int best = -1;
    for (int k = 0; k < opts.samples; ++k) {
        const double t = -opts.window + 2.0 * opts.window * k / (opts.samples - 1);
        res.scan.push_back(row_at(t));
        if (res.scan.back().admissible) {
            const bool better =
                best < 0 || std::abs(t) < std::abs(res.scan[best].t) - 1e-15 ||
                (std::abs(std::abs(t) - std::abs(res.scan[best].t)) <= 1e-15 && t > 0.0);
            if (better) best = k;
        }
    }
    if (best < 0) {
        res.ok = false;
        res.message = "desingularize: no admissible flow time in the scan window";
        return res;
    }
    res.ok = true;
    res.tstar = res.scan[best].t;
    res.sigma = project_sigma(res.tstar);

    // Golden-section refinement of the inner admissible boundary (metadata).
    double good = res.tstar;
    double bad = 0.0;
    if (best > 0 && !res.scan[best - 1].admissible && res.tstar > 0.0)
        bad = res.scan[best - 1].t;
    else if (best + 1 < static_cast<int>(res.scan.size()) && !res.scan[best + 1].admissible &&
             res.tstar < 0.0)
        bad = res.scan[best + 1].t;
    else
        bad = good;
    constexpr double golden = 0.6180339887498949;
    for (int it = 0; it < 40 && std::abs(good - bad) > 1e-10; ++it) {
        const double mid = good + (bad - good) * golden;
        (row_at(mid).admissible ? good : bad) = mid;
    }
    res.admissible_from = good;
    return res;
}

BoundaryChart hyperbolic_gauss(const ImmersionChart& chart, int sign) {
    require(sign == 1 || sign == -1, "hyperbolic_gauss: sign must be +-1");
    require(!chart.tabulated(), "hyperbolic_gauss: analytic charts only");
    BoundaryChart out;
    out.domain = chart.domain;
    ImmersionChart src = chart;
    out.map = [src, sign](const Vec& u) {
        const Vec sigma = src.value_at(u);
        const Vec nu = unit_normal(sigma, src.jac_at(u), src.orientation);
        return BoundaryPoint(sigma + sign * nu).v;
    };
    return out;
}

void hyperbolic_gauss_differentials(const ImmersionChart& chart, int sign, const Vec& u,
                                    Mat& fd_route, Mat& shape_route) {
    const BoundaryChart bc = hyperbolic_gauss(chart, sign);
    fd_route = fd_jacobian(chart.domain, bc.map, u);
    const ShapeNode sn = fundamental_data_at(chart, u);
    const int n = chart.n();
    // d normalize(sigma + s nu) = (d sigma (id -+ B)) / lastcoord - value *
    // d(lastcoord)/lastcoord; compare in the normalized slice.
    const Mat dG = sn.dsigma * (Mat::Identity(n, n) - sign * sn.B);
    const Vec G = sn.sigma + sign * sn.nu;
    const int last = static_cast<int>(G.size()) - 1;
    shape_route.resize(G.size(), n);
    for (int a = 0; a < n; ++a)
        shape_route.col(a) = dG.col(a) / G[last] - (G / G[last]) * (dG(last, a) / G[last]);
}

namespace {

GTangent normal_projection(const GFrame& f, const GTangent& W) {
    const int n = static_cast<int>(f.cols.size());
    Vec rhs(n);
    for (int k = 0; k < n; ++k) rhs[k] = ghat_metric(W.rep, J_endo(f.cols[k].rep));
    const Vec c = -f.gram.ldlt().solve(rhs);
    UTBTangent acc{f.anchor, Vec::Zero(f.anchor.x.size()), Vec::Zero(f.anchor.x.size())};
    for (int k = 0; k < n; ++k) {
        const UTBTangent jk = J_endo(f.cols[k].rep);
        acc.xd += c[k] * jk.xd;
        acc.vd += c[k] * jk.vd;
    }
    return make_gtangent(f.anchor, acc);
}

}  // namespace

GTangent mean_curvature_trace(const GaussChart& g, const Vec& u) {
    const GFrame f = gauss_frame(g, u);
    const int n = g.domain.dim();
    Eigen::LLT<Mat> llt(f.gram);
    require(llt.info() == Eigen::Success,
            "mean_curvature_trace: chart is not Riemannian at this node");
    const Mat ibar_inv = llt.solve(Mat::Identity(n, n));
    const auto zeta = lift_section(g);
    const double h = 1e-4;

    UTBTangent acc{f.anchor, Vec::Zero(f.anchor.x.size()), Vec::Zero(f.anchor.x.size())};
    for (int i = 0; i < n; ++i) {
        Vec dir = Vec::Zero(n);
        dir[i] = 1.0;
        const auto anchor_line = [&](double s) { return zeta(u + s * dir); };
        for (int j = 0; j < n; ++j) {
            const auto rep_line = [&](double s) {
                const GFrame fs = gauss_frame(g, u + s * dir);
                return fs.cols[j].rep;
            };
            const GTangent dij = ambient_cov_deriv(anchor_line, rep_line, h);
            const GTangent at_anchor = transport_to(dij, f.anchor);
            acc.xd += ibar_inv(i, j) * at_anchor.rep.xd;
            acc.vd += ibar_inv(i, j) * at_anchor.rep.vd;
        }
    }
    acc.xd /= n;
    acc.vd /= n;
    return normal_projection(f, make_gtangent(f.anchor, acc));
}

MeanCurvature mean_curvature_G(const GaussChart& g, const Vec& u) {
    require(g.source.has_value(), "mean_curvature_G: needs a source immersion for f_sigma");
    MeanCurvature out;
    out.trace_route = mean_curvature_trace(g, u);

    const GFrame f = gauss_frame(g, u);
    const int n = g.domain.dim();
    const ImmersionChart& src = *g.source;
    const MapFn fmap = [&src](const Vec& p) {
        Vec val(1);
        val[0] = f_sigma(fundamental_data_at(src, p));
        return val;
    };
    const Mat df = fd_jacobian(g.domain, fmap, u);  // 1 x n
    const Vec grad = f.gram.ldlt().solve(df.row(0).transpose());
    UTBTangent acc{f.anchor, Vec::Zero(f.anchor.x.size()), Vec::Zero(f.anchor.x.size())};
    for (int i = 0; i < n; ++i) {
        acc.xd += grad[i] * f.cols[i].rep.xd;
        acc.vd += grad[i] * f.cols[i].rep.vd;
    }
    out.closed_form = J_para(make_gtangent(f.anchor, acc));
    out.closed_form.rep.xd *= -1.0;
    out.closed_form.rep.vd *= -1.0;

    const Vec ddx = out.trace_route.rep.xd - out.closed_form.rep.xd;
    const Vec ddv = out.trace_route.rep.vd - out.closed_form.rep.vd;
    out.disagreement = std::sqrt(std::abs(mink_norm2(ddx) - mink_norm2(ddv)));
    return out;
}

MaslovField maslov_form(const GaussChart& g) {
    MaslovField out;
    out.domain = g.domain;
    const int total = g.domain.node_count();
    const int n = g.domain.dim();
    out.oneForm.resize(total);
    const bool have_source = g.source.has_value();
    if (have_source) out.fsigma.resize(total);

    double ident = -1.0;
    for (int i = 0; i < total; ++i) {
        const Vec u = g.domain.node(i);
        const GFrame f = gauss_frame(g, u);
        const GTangent H = mean_curvature_trace(g, u);
        Vec omega_row(n);
        for (int a = 0; a < n; ++a)
            omega_row[a] = ghat_metric(H.rep, J_endo(f.cols[a].rep));
        out.oneForm[i] = omega_row;
        if (have_source) {
            const ImmersionChart& src = *g.source;
            out.fsigma[i] = f_sigma(fundamental_data_at(src, u));
            const MapFn fmap = [&src](const Vec& p) {
                Vec val(1);
                val[0] = f_sigma(fundamental_data_at(src, p));
                return val;
            };
            const Mat df = fd_jacobian(g.domain, fmap, u);
            ident = std::max(ident, (omega_row - df.row(0).transpose()).cwiseAbs().maxCoeff());
        }
    }
    out.identity_residual = ident;

    // Closedness: lattice curl of the one-form.
    double closed = 0.0;
    if (n >= 2) {
        std::vector<Vec> field = out.oneForm;
        for (int i = 0; i < total; ++i) {
            const Mat dmu = lattice_jacobian(g.domain, field, i);  // n x n: d(mu_j)/du_a
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    closed = std::max(closed, std::abs(dmu(b, a) - dmu(a, b)));
        }
    }
    out.closedness_residual = closed;
    return out;
}

double maslov_integrand(const GaussChart& g, const Vec& u, const Vec& dir) {
    const GFrame f = gauss_frame(g, u);
    const GTangent H = mean_curvature_trace(g, u);
    UTBTangent acc{f.anchor, Vec::Zero(f.anchor.x.size()), Vec::Zero(f.anchor.x.size())};
    for (int a = 0; a < g.domain.dim(); ++a) {
        acc.xd += dir[a] * f.cols[a].rep.xd;
        acc.vd += dir[a] * f.cols[a].rep.vd;
    }
    return ghat_metric(H.rep, J_endo(acc));
}

}  // namespace geodloom
