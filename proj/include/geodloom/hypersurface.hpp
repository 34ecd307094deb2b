#pragma once

#include "geodloom/chart.hpp"

// First/second fundamental data of parametric immersions in H^{n+1}: unit
// normal, shape operator B with d sigma . B(W) = -D_W nu, principal
// curvatures, the function f_sigma = mean of arctanh of the principal
// curvatures in log-det form, normal evolution, and the closed-form evolved
// shape operator.

namespace geodloom {

// Per-node extrinsic data in the chart basis.
struct ShapeNode {
    Vec sigma;    // ambient position
    Mat dsigma;   // ambient x n
    Mat I;        // n x n Gram, positive definite
    Vec nu;       // ambient unit normal
    Mat dnu;      // ambient x n
    Mat B;        // n x n shape operator
    Vec lambdas;  // sorted ascending
};

struct ShapeData {
    Domain domain;
    std::vector<ShapeNode> nodes;
    double orientation = +1.0;
};

// Unit Minkowski-orthogonal completion of span{sigma, dsigma columns},
// signed so that det[dsigma | nu | sigma] * orientation > 0.
Vec unit_normal(const Vec& sigma, const Mat& dsigma, double orientation);

ShapeNode fundamental_node(const Vec& sigma, const Mat& dsigma, const Vec& nu, const Mat& dnu,
                           double rank_tol = 1e-10);

// Pointwise data for analytic charts (dnu by 4th-order differences of the
// pointwise normal).
ShapeNode fundamental_data_at(const ImmersionChart& chart, const Vec& u);

ShapeData fundamental_data(const ImmersionChart& chart);

// (1/2n) log det(id+B) - log det(id-B); requires |lambda_i| < 1.
double f_sigma(const Mat& B, double tol = 1e-10);
double f_sigma(const ShapeNode& node, double tol = 1e-10);

// Chart p -> cosh(t) sigma(p) + sinh(t) nu(p). Analytic charts stay
// analytic, tabulated charts stay tabulated. Result validity is checked by
// the caller (see immersion_scan in gauss.hpp); the map itself is always
// defined.
ImmersionChart normal_evolution(const ImmersionChart& chart, double t);

// (id - tanh(t) B)^{-1} (B - tanh(t) id).
Mat shape_evolved(const Mat& B, double t);

// -1 + II(V,V) II(W,W) - II(V,W)^2 for an I-orthonormal pair in chart
// coordinates, II = I(B.,.).
double sectional_curvature(const ShapeNode& node, const Vec& V, const Vec& W, double tol = 1e-8);

// Smallest/largest singular value of dsigma over the grid; immersion
// validity at every node requires node smallest singular value
// > tol * grid largest.
struct RankReport {
    double min_sv = 0.0;
    double max_sv = 0.0;
    int worst_node = -1;
    bool ok(double tol = 1e-6) const { return min_sv > tol * max_sv; }
};
RankReport rank_report(const ShapeData& sd);

// Lift zeta_sigma = (sigma, nu) as a UTB chart (analytic charts only).
UTBChart lift_chart(const ImmersionChart& chart);

}  // namespace geodloom
