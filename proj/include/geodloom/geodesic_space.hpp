#pragma once

#include "geodloom/utb.hpp"

#include <functional>

// Oriented geodesics of H^{n+1} as ordered endpoint pairs, tangent vectors as
// fiber-anchored chi-perp representatives, the para-Kahler tensors (G, J,
// Omega) pushed forward from the para-Sasaki structure, and the ambient
// covariant derivative computed through horizontal lifts.

namespace geodloom {

struct OrientedGeodesic {
    BoundaryPoint fwd, bwd;

    OrientedGeodesic() = default;
    OrientedGeodesic(BoundaryPoint f, BoundaryPoint b, double tol = 1e-12)
        : fwd(std::move(f)), bwd(std::move(b)) {
        require(boundary_distance(fwd, bwd) > tol, "OrientedGeodesic: coinciding endpoints");
    }
};

inline bool same_geodesic(const OrientedGeodesic& a, const OrientedGeodesic& b, double tol = 1e-8) {
    return boundary_distance(a.fwd, b.fwd) <= tol && boundary_distance(a.bwd, b.bwd) <= tol;
}

// Tangent vector to the space of geodesics: a chi-free representative
// anchored at a chosen point of the fiber.
struct GTangent {
    UTBPoint anchor;
    UTBTangent rep;  // rep.base == anchor, connection_form(rep) == 0
};

OrientedGeodesic p_project(const UTBPoint& p);

// The unique (x,v) on the geodesic with x nearest to the basepoint
// (0,...,0,1) and v oriented toward fwd.
UTBPoint canonical_rep(const OrientedGeodesic& g);

// Flow parameter t with geodesic_flow(from, t) == to; both on one geodesic.
double flow_offset(const UTBPoint& from, const UTBPoint& to, double tol = 1e-6);

GTangent make_gtangent(const UTBPoint& anchor, const UTBTangent& rep);

// Push the representative along the fiber to the given anchor.
GTangent transport_to(const GTangent& X, const UTBPoint& target, double tol = 1e-6);

double G_metric(const GTangent& X, const GTangent& Y);
double Omega(const GTangent& X, const GTangent& Y);
GTangent J_para(const GTangent& X);

// Tangent of a curve of geodesics by central differences through the
// canonical section, anchored at canonical_rep(c(0)).
GTangent curve_tangent_fd(const std::function<OrientedGeodesic(double)>& c, double h = 1e-5);

// Covariant derivative D_X Y = dp(Dhat_{Xtilde} Ytilde) of a field of
// geodesic tangents along a curve s -> anchor(s) on the bundle, with the
// field given by its chi-perp representatives rep(s) at anchor(s). The
// differentiation direction is dp of the anchor velocity. Central
// differences with step h in s; the chi-component of the anchor velocity is
// compensated (the horizontal-lift field has Dhat_chi Ytilde = J Ytilde).
GTangent ambient_cov_deriv(const std::function<UTBPoint(double)>& anchor,
                           const std::function<UTBTangent(double)>& rep, double h = 1e-4);

}  // namespace geodloom
