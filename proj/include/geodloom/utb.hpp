#pragma once

#include "geodloom/lorentz.hpp"

// The unit tangent bundle T^1 H^{n+1} in the pair model
//   {(x,v) : <x,x> = -1, <v,v> = 1, <x,v> = 0},
// with the geodesic flow, horizontal/vertical lifts, the para-Sasaki metric
// g_S, the product metric ghat = <.,.> (x) -<.,.>, the endomorphism J on the
// orthogonal complement of the flow generator chi, and the connection form
// omega = g_S(. , chi) of the principal R-bundle over the space of geodesics.

namespace geodloom {

struct UTBPoint {
    Vec x, v;

    UTBPoint() = default;
    UTBPoint(Vec x_, Vec v_, double tol = 1e-8) : x(std::move(x_)), v(std::move(v_)) {
        require(x.size() == v.size(), "UTBPoint: dimension mismatch");
        require(std::abs(mink_norm2(x) + 1.0) <= tol, "UTBPoint: <x,x> != -1");
        require(std::abs(mink_norm2(v) - 1.0) <= tol, "UTBPoint: <v,v> != 1");
        require(std::abs(mink_inner(x, v)) <= tol, "UTBPoint: <x,v> != 0");
    }
    int ambient_dim() const { return static_cast<int>(x.size()); }
};

// Tangent pair (xd, vd) at (x,v), subject to the linearized constraints
// <x,xd> = <v,vd> = <x,vd> + <v,xd> = 0.
struct UTBTangent {
    UTBPoint base;
    Vec xd, vd;
};

struct TangentSplit {
    double chiCoeff = 0.0;
    Vec h0, v0;  // both in v-perp intersect x-perp
};

// Renormalize a drifted pair back onto the bundle.
UTBPoint reproject(Vec x, Vec v);

UTBPoint geodesic_flow(const UTBPoint& p, double t);

// Differential of the flow: (xd, vd) -> (cosh t xd + sinh t vd, sinh t xd + cosh t vd).
UTBTangent dflow(const UTBTangent& X, double t);

UTBTangent chi(const UTBPoint& p);

UTBTangent hlift(const UTBPoint& p, Vec w, bool project = false, double tol = 1e-8);
UTBTangent vlift(const UTBPoint& p, Vec w, bool project = false, double tol = 1e-8);

TangentSplit split_tangent(const UTBTangent& X, double tol = 1e-8);

double sasaki_metric(const UTBTangent& X, const UTBTangent& Y);
double ghat_metric(const UTBTangent& X, const UTBTangent& Y);

// J(xd, vd) = (vd, xd); defined on chi-perp only.
UTBTangent J_endo(const UTBTangent& X, double tol = 1e-6);

double connection_form(const UTBTangent& X);

// ghat-orthogonal projection of an ambient pair onto the tangent space at p.
UTBTangent project_to_utb_tangent(const UTBPoint& p, const Vec& xd, const Vec& vd);

// Remove the chi-component (g_S-orthogonal, equivalently ghat-orthogonal).
UTBTangent remove_chi(const UTBTangent& X);

// Validity residual of the linearized constraints; 0 for an exact tangent.
double tangent_residual(const UTBTangent& X);

// Minkowski-orthonormal basis of v-perp intersect x-perp (n vectors).
std::vector<Vec> horizontal_basis(const UTBPoint& p);

// Finite-difference estimate of the curvature 2-form of the connection omega
// at p, evaluated on X, Y in chi-perp: circulation of omega around the
// reprojected plaquette spanned by h X and h Y, divided by h^2. The plaquette
// orientation is fixed so that the estimate converges to Omega(dp X, dp Y)
// on the space of geodesics (mixed pair (w^H, w^V) -> +1). A Richardson pass
// with step h/2 guards against cancellation for too-small h.
double curvature_fd(const UTBPoint& p, const UTBTangent& X, const UTBTangent& Y, double h);

}  // namespace geodloom
