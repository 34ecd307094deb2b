#pragma once

#include "geodloom/gallery.hpp"
#include "geodloom/geodesic_space.hpp"

#include <optional>

// Gauss maps into the space of oriented geodesics, the Lagrangian and
// Riemannian diagnostics, flat-section integration (reconstructing a lift
// from a Lagrangian chart), desingularization by the geodesic flow,
// hyperbolic Gauss maps, mean curvature in the space of geodesics, and the
// Maslov 1-form.

namespace geodloom {

struct GaussChart {
    Domain domain;
    std::function<OrientedGeodesic(const Vec&)> gmap;
    std::function<UTBPoint(const Vec&)> liftHint;  // may be empty
    std::optional<ImmersionChart> source;          // set when built from an immersion

    bool has_lift_hint() const { return static_cast<bool>(liftHint); }
};

GaussChart gauss_map(const ImmersionChart& chart);

// Gauss chart of a chi-orthogonal UTB chart (uses the chart as lift hint).
GaussChart gauss_chart_of_lift(const UTBChart& zeta);

// The working section: liftHint when present, else canonical_rep . gmap.
std::function<UTBPoint(const Vec&)> lift_section(const GaussChart& g);

// Frame dG(e_1..e_n) at parameter u, anchored at the section value.
struct GFrame {
    UTBPoint anchor;
    std::vector<GTangent> cols;
    Mat gram;  // G-metric Gram, n x n
};
GFrame gauss_frame(const GaussChart& g, const Vec& u);

double lagrangian_residual(const GaussChart& g);
double riemannian_residual(const GaussChart& g);  // min Gram eigenvalue over nodes

struct FlatSection {
    UTBChart zeta;              // tabulated: phi_{u(node)} . section(node)
    std::vector<double> u;      // integrated flow parameter per node
    double pathIndependenceResidual = 0.0;
    double seam_defect = 0.0;   // wrap defect over periodic axes (holonomy)
};

// Solve du = -section^* omega along axis-ordered lattice paths from the
// basepoint node; the cell-circulation residual localizes the Lagrangian
// defect d(section^* omega) = G^* Omega.
FlatSection integrate_flat_section(const GaussChart& g, int basepoint_node = 0, double u0 = 0.0,
                                   bool accept_multivalued = false, double tol = 1e-6);

struct DesingularizeRow {
    double t = 0.0;
    double worst_measure = 0.0;
    int worst_node = -1;
    bool admissible = false;
};

struct DesingularizeResult {
    bool ok = false;
    bool riemannian_fast_path = false;
    double tstar = 0.0;
    double admissible_from = 0.0;  // refined inner boundary of the chosen interval
    ImmersionChart sigma;
    std::vector<DesingularizeRow> scan;
    std::string message;
};

struct DesingularizeOptions {
    double window = 5.0;
    int samples = 1001;
    double rank_tol = 1e-6;
    double omega_tol = 1e-6;
};

// Scan t for which pi . phi_t . zeta is an immersion on the grid; when the
// ghat pullback of zeta is positive definite, t* = 0 is returned directly.
// For n = 1 a fold between adjacent nodes (reversal of the projected
// tangent) also marks t as inadmissible.
DesingularizeResult desingularize_and_project(const UTBChart& zeta,
                                              const DesingularizeOptions& opts = {});

// Boundary-valued chart node -> normalize(sigma + sign * nu).
struct BoundaryChart {
    Domain domain;
    MapFn map;  // ambient null vectors with last coordinate 1
};
BoundaryChart hyperbolic_gauss(const ImmersionChart& chart, int sign);

// Differential of the hyperbolic Gauss map in the chart basis: both the
// finite-difference route and d sigma . (id -+ B).
void hyperbolic_gauss_differentials(const ImmersionChart& chart, int sign, const Vec& u,
                                    Mat& fd_route, Mat& shape_route);

struct MeanCurvature {
    GTangent trace_route;   // (1/n) tr_Ibar of the second fundamental form
    GTangent closed_form;   // -J dG(grad f_sigma)
    double disagreement = 0.0;
};

// Mean curvature of the Gauss map at parameter u, both routes; requires the
// chart to be Riemannian at u and a source immersion for the closed form.
MeanCurvature mean_curvature_G(const GaussChart& g, const Vec& u);

// Trace-route mean curvature alone (no source needed).
GTangent mean_curvature_trace(const GaussChart& g, const Vec& u);

struct MaslovField {
    Domain domain;
    std::vector<Vec> oneForm;        // per node, n components
    std::vector<double> fsigma;      // per node, when source is known
    double identity_residual = -1.0; // max |oneForm - d f_sigma|, -1 if unknown
    double closedness_residual = 0.0;
};

MaslovField maslov_form(const GaussChart& g);

// Pointwise Maslov integrand Omega(H, dG(dir)) at parameter u.
double maslov_integrand(const GaussChart& g, const Vec& u, const Vec& dir);

}  // namespace geodloom
