#include "geodloom/utb.hpp"

#include <Eigen/SVD>

namespace geodloom {

UTBPoint reproject(Vec x, Vec v) {
    x = project_to_hyperboloid(std::move(x));
    v = project_to_unit_tangent(x, std::move(v));
    return UTBPoint(std::move(x), std::move(v));
}

UTBPoint geodesic_flow(const UTBPoint& p, double t) {
    const double c = std::cosh(t), s = std::sinh(t);
    return reproject(c * p.x + s * p.v, s * p.x + c * p.v);
}

UTBTangent dflow(const UTBTangent& X, double t) {
    const double c = std::cosh(t), s = std::sinh(t);
    UTBTangent out;
    out.base = geodesic_flow(X.base, t);
    out.xd = c * X.xd + s * X.vd;
    out.vd = s * X.xd + c * X.vd;
    return out;
}

UTBTangent chi(const UTBPoint& p) { return UTBTangent{p, p.v, p.x}; }

static Vec project_horizontal_slot(const UTBPoint& p, Vec w) {
    w += mink_inner(w, p.x) * p.x;
    w -= mink_inner(w, p.v) * p.v;
    return w;
}

UTBTangent hlift(const UTBPoint& p, Vec w, bool project, double tol) {
    if (project) {
        w = project_horizontal_slot(p, std::move(w));
    } else {
        require(std::abs(mink_inner(w, p.x)) <= tol && std::abs(mink_inner(w, p.v)) <= tol,
                "hlift: w is not in v-perp intersect x-perp");
    }
    return UTBTangent{p, std::move(w), Vec::Zero(p.ambient_dim())};
}

UTBTangent vlift(const UTBPoint& p, Vec w, bool project, double tol) {
    if (project) {
        w = project_horizontal_slot(p, std::move(w));
    } else {
        require(std::abs(mink_inner(w, p.x)) <= tol && std::abs(mink_inner(w, p.v)) <= tol,
                "vlift: w is not in v-perp intersect x-perp");
    }
    return UTBTangent{p, Vec::Zero(p.ambient_dim()), std::move(w)};
}

double ghat_metric(const UTBTangent& X, const UTBTangent& Y) {
    require((X.base.x - Y.base.x).norm() < 1e-8 && (X.base.v - Y.base.v).norm() < 1e-8,
            "ghat_metric: base point mismatch");
    return mink_inner(X.xd, Y.xd) - mink_inner(X.vd, Y.vd);
}

double connection_form(const UTBTangent& X) {
    // g_S(X, chi) = ghat(X, chi)/2 since ghat(chi,chi) = 2 and the metrics
    // agree on chi-perp.
    return 0.5 * (mink_inner(X.xd, X.base.v) - mink_inner(X.vd, X.base.x));
}

double sasaki_metric(const UTBTangent& X, const UTBTangent& Y) {
    return ghat_metric(X, Y) - connection_form(X) * connection_form(Y);
}

TangentSplit split_tangent(const UTBTangent& X, double tol) {
    const UTBTangent c = chi(X.base);
    TangentSplit s;
    s.chiCoeff = connection_form(X);
    s.h0 = X.xd - s.chiCoeff * c.xd;
    s.v0 = X.vd - s.chiCoeff * c.vd;
    const double scale = std::max({1.0, X.xd.norm(), X.vd.norm()});
    require(std::abs(mink_inner(s.h0, X.base.x)) <= tol * scale &&
                std::abs(mink_inner(s.h0, X.base.v)) <= tol * scale &&
                std::abs(mink_inner(s.v0, X.base.x)) <= tol * scale &&
                std::abs(mink_inner(s.v0, X.base.v)) <= tol * scale,
            "split_tangent: reconstruction residual above tolerance");
    return s;
}

UTBTangent J_endo(const UTBTangent& X, double tol) {
    const double scale = std::max({1.0, X.xd.norm(), X.vd.norm()});
    require(std::abs(connection_form(X)) <= tol * scale, "J_endo: tangent is not orthogonal to chi");
    return UTBTangent{X.base, X.vd, X.xd};
}

UTBTangent project_to_utb_tangent(const UTBPoint& p, const Vec& xd, const Vec& vd) {
    // ghat-orthogonal complement of the tangent space is spanned by
    // (x,0), (0,v), (v,-x) with ghat-Gram diag(-1,-1,2).
    const double a1 = -mink_inner(xd, p.x);
    const double a2 = mink_inner(vd, p.v);
    const double a3 = 0.5 * (mink_inner(xd, p.v) + mink_inner(vd, p.x));
    UTBTangent out{p, xd, vd};
    out.xd -= a1 * p.x + a3 * p.v;
    out.vd -= a2 * p.v - a3 * p.x;
    return out;
}

UTBTangent remove_chi(const UTBTangent& X) {
    const double a = connection_form(X);
    return UTBTangent{X.base, X.xd - a * X.base.v, X.vd - a * X.base.x};
}

double tangent_residual(const UTBTangent& X) {
    const double r1 = mink_inner(X.base.x, X.xd);
    const double r2 = mink_inner(X.base.v, X.vd);
    const double r3 = mink_inner(X.base.x, X.vd) + mink_inner(X.base.v, X.xd);
    return std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
}

std::vector<Vec> horizontal_basis(const UTBPoint& p) {
    const int m = p.ambient_dim();
    const Mat J = signature_matrix(m);
    Mat rows(2, m);
    rows.row(0) = (J * p.x).transpose();
    rows.row(1) = (J * p.v).transpose();
    Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
    std::vector<Vec> basis;
    for (int k = 2; k < m; ++k) {
        Vec w = svd.matrixV().col(k);
        // Nullspace of [<x,.>, <v,.>] is spacelike; Minkowski Gram-Schmidt.
        for (const Vec& b : basis) w -= mink_inner(w, b) * b;
        w = project_horizontal_slot(p, std::move(w));
        basis.push_back(w / std::sqrt(mink_norm2(w)));
    }
    return basis;
}

namespace {

// omega extended to ambient pair "vectors" at a bundle point q.
double omega_ambient(const UTBPoint& q, const Vec& xd, const Vec& vd) {
    return 0.5 * (mink_inner(xd, q.v) - mink_inner(vd, q.x));
}

double plaquette_circulation(const UTBPoint& p, const UTBTangent& X, const UTBTangent& Y,
                             double h, int subdiv) {
    // F(a,b) = reproject(p + a h Y + b h X): traversing the boundary of the
    // unit (a,b)-square counterclockwise makes the circulation converge to
    // h^2 Omega(dp X, dp Y).
    const auto F = [&](double a, double b) {
        return reproject(p.x + a * h * Y.xd + b * h * X.xd,
                         p.v + a * h * Y.vd + b * h * X.vd);
    };
    const auto edge = [&](double a0, double b0, double a1, double b1) {
        double acc = 0.0;
        UTBPoint prev = F(a0, b0);
        for (int i = 1; i <= subdiv; ++i) {
            const double t = static_cast<double>(i) / subdiv;
            const UTBPoint cur = F(a0 + t * (a1 - a0), b0 + t * (b1 - b0));
            const double tm = (i - 0.5) / subdiv;
            const UTBPoint mid = F(a0 + tm * (a1 - a0), b0 + tm * (b1 - b0));
            acc += omega_ambient(mid, cur.x - prev.x, cur.v - prev.v);
            prev = cur;
        }
        return acc;
    };
    return edge(0, 0, 1, 0) + edge(1, 0, 1, 1) + edge(1, 1, 0, 1) + edge(0, 1, 0, 0);
}

}  // namespace

double curvature_fd(const UTBPoint& p, const UTBTangent& X, const UTBTangent& Y, double h) {
    require(h > 0.0, "curvature_fd: step must be positive");
    constexpr int subdiv = 8;
    const double full = plaquette_circulation(p, X, Y, h, subdiv) / (h * h);
    const double half = plaquette_circulation(p, X, Y, 0.5 * h, subdiv) / (0.25 * h * h);
    const double scale = std::max({1.0, X.xd.norm() + X.vd.norm(), Y.xd.norm() + Y.vd.norm()});
    require(std::abs(full - half) <= 1e3 * std::max(h, 1e-12) * scale * scale,
            "curvature_fd: Richardson disagreement, step too small or field too rough");
    return half;
}

}  // namespace geodloom
