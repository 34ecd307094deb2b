#pragma once

#include "geodloom/hypersurface.hpp"

#include <map>
#include <optional>
#include <string>

// Model charts: totally geodesic hyperplanes, horospheres, r-caps, vertical
// spheres in a tangent space, unit normal bundles of totally geodesic
// k-planes, the constant-angle curve family in H^2, and the glued
// cap/circle curve whose projections are singular at every flow time.

namespace geodloom {

// Totally geodesic hyperplane {x_1 = 0}, hyperbolic product coordinates.
ImmersionChart gallery_plane(int n, Domain d);
ImmersionChart gallery_plane(int n);

// Horosphere through the basepoint with null direction (1,0,...,0,1) in
// parabolic coordinates; default orientation gives shape operator +id.
ImmersionChart gallery_horosphere(int n, Domain d);
ImmersionChart gallery_horosphere(int n);

// Hypersurface at signed distance r from the plane {x_1 = 0}; default
// orientation gives principal curvatures -tanh(r).
ImmersionChart gallery_rcap(int n, double r, Domain d);
ImmersionChart gallery_rcap(int n, double r);

// Fiber sphere {(x0, v)} over the basepoint (vertical immersion into the
// bundle; the projection to H^{n+1} is constant).
UTBChart gallery_sphere_vertical(int n);

// Unit normal bundle of a totally geodesic k-plane, 0 < k < n.
UTBChart gallery_normal_bundle_NQ(int n, int k);

// Curve in H^2 whose Gauss map is the constant-angle family Psi(s, theta0)
// along the geodesic gamma(s) = (sinh s, 0, cosh s); the default
// orientation selects the normal with curvature tanh(s cos theta0), so
// f_sigma(s) = s cos(theta0).
ImmersionChart gallery_constant_angle_curve(double theta0, Domain d);
ImmersionChart gallery_constant_angle_curve(double theta0, double domain_len = 1.0);

// The oriented-geodesic family Psi(s, theta0) evaluated directly (used by
// isotopies); same geodesics as the Gauss map of the curve above.
UTBChart gallery_constant_angle_lift(double theta0, Domain d);

struct GluedCurveParams {
    double r = 0.5;
    double eps = 0.3;
    double t0 = 2.0;
    double tmax = 2.5;
    int samples = 481;
};

// Flat (chi-orthogonal) curve in T^1 H^2 glued from the lift of an r-cap
// piece and its point-symmetric copy, with curvature interpolating between
// tanh(r) and coth(r); pi . phi_t . zeta fails to be an immersion for every
// t.
UTBChart gallery_cap_circle_glued_curve(const GluedCurveParams& params = {});

// Hyperbolic translation of length c along gamma(s) = (sinh s, 0, ..., 0,
// cosh s) (first and last coordinates), ambient dimension amb.
Mat translation_matrix(double c, int amb);

// Deterministic analytic perturbation of an immersion chart: low-frequency
// ambient modes of the given amplitude, reprojected onto the hyperboloid.
// Chain-rule jacobian is provided when the base chart has one.
ImmersionChart perturb_chart(const ImmersionChart& base, unsigned seed, double amplitude,
                             int modes = 3);

struct GalleryEntry {
    std::string kind;  // "immersion" or "utb"
    std::optional<ImmersionChart> immersion;
    std::optional<UTBChart> utb;
};

// String-keyed dispatcher for the CLI; throws on unknown names or bad
// parameters.
GalleryEntry gallery(const std::string& name, const std::map<std::string, double>& params, int n);

std::vector<std::string> gallery_names();

}  // namespace geodloom
