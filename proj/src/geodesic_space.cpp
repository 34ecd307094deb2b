#include "geodloom/geodesic_space.hpp"

namespace geodloom {

OrientedGeodesic p_project(const UTBPoint& p) {
    return OrientedGeodesic(geodesic_endpoint(HPoint(p.x), p.v, +1),
                            geodesic_endpoint(HPoint(p.x), p.v, -1));
}

UTBPoint canonical_rep(const OrientedGeodesic& g) {
    // Points of the geodesic are (e^t f + e^{-t} b)/sqrt(-2<f,b>); the last
    // ambient coordinate is 2 cosh(t)/sqrt(-2<f,b>), minimized at t = 0.
    const Vec& f = g.fwd.v;
    const Vec& b = g.bwd.v;
    const double c = mink_inner(f, b);
    require(c < 0.0, "canonical_rep: degenerate endpoints");
    const double s = std::sqrt(-2.0 * c);
    return reproject((f + b) / s, (f - b) / s);
}

double flow_offset(const UTBPoint& from, const UTBPoint& to, double tol) {
    require(same_geodesic(p_project(from), p_project(to), tol),
            "flow_offset: points are not on the same geodesic");
    // to.x = cosh(t) from.x + sinh(t) from.v
    const double sh = mink_inner(to.x, from.v);
    const double ch = -mink_inner(to.x, from.x);
    require(ch > 0.0, "flow_offset: inconsistent pair");
    return std::asinh(sh);
}

GTangent make_gtangent(const UTBPoint& anchor, const UTBTangent& rep) {
    GTangent X;
    X.anchor = anchor;
    X.rep = remove_chi(rep);
    X.rep.base = anchor;
    return X;
}

GTangent transport_to(const GTangent& X, const UTBPoint& target, double tol) {
    const double t = flow_offset(X.anchor, target, tol);
    GTangent out;
    out.anchor = target;
    out.rep = dflow(X.rep, t);
    out.rep.base = target;
    return out;
}

double G_metric(const GTangent& X, const GTangent& Y) {
    const GTangent Yt = transport_to(Y, X.anchor);
    return ghat_metric(X.rep, Yt.rep);
}

double Omega(const GTangent& X, const GTangent& Y) {
    const GTangent Yt = transport_to(Y, X.anchor);
    return ghat_metric(X.rep, J_endo(Yt.rep));
}

GTangent J_para(const GTangent& X) { return GTangent{X.anchor, J_endo(X.rep)}; }

GTangent curve_tangent_fd(const std::function<OrientedGeodesic(double)>& c, double h) {
    const UTBPoint at = canonical_rep(c(0.0));
    const UTBPoint pp = canonical_rep(c(h));
    const UTBPoint pm = canonical_rep(c(-h));
    const Vec xd = (pp.x - pm.x) / (2.0 * h);
    const Vec vd = (pp.v - pm.v) / (2.0 * h);
    return make_gtangent(at, project_to_utb_tangent(at, xd, vd));
}

GTangent ambient_cov_deriv(const std::function<UTBPoint(double)>& anchor,
                           const std::function<UTBTangent(double)>& rep, double h) {
    const UTBPoint at = anchor(0.0);
    const UTBTangent Yp = rep(h);
    const UTBTangent Ym = rep(-h);
    const Vec dxd = (Yp.xd - Ym.xd) / (2.0 * h);
    const Vec dvd = (Yp.vd - Ym.vd) / (2.0 * h);

    // chi-component of the anchor velocity; Dhat along the fiber of the
    // horizontal-lift field contributes J(Y), which must be removed so that
    // the derivative is taken along the projected direction only.
    const UTBPoint ap = anchor(h);
    const UTBPoint am = anchor(-h);
    UTBTangent avel{at, (ap.x - am.x) / (2.0 * h), (ap.v - am.v) / (2.0 * h)};
    const double chi_coeff = connection_form(project_to_utb_tangent(at, avel.xd, avel.vd));

    UTBTangent val = project_to_utb_tangent(at, dxd, dvd);
    const UTBTangent y0 = rep(0.0);
    val.xd -= chi_coeff * y0.vd;
    val.vd -= chi_coeff * y0.xd;
    return make_gtangent(at, val);
}

}  // namespace geodloom
