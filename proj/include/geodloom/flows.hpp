#pragma once

#include "geodloom/gauss.hpp"

// Time integration of normal-speed flows d sigma/dt = f_t nu_t on tabulated
// charts, with verification of the induced evolution equations for the lift
// and the Gauss map.

namespace geodloom {

struct SpeedField {
    enum class Kind { Constant, FSigma, Custom } kind = Kind::Constant;
    double constant = 0.0;
    std::function<double(const Vec&, double)> custom;

    static SpeedField make_constant(double c) { return SpeedField{Kind::Constant, c, nullptr}; }
    static SpeedField make_fsigma() { return SpeedField{Kind::FSigma, 0.0, nullptr}; }

    // Per-node speed values.
    std::vector<double> evaluate(const ShapeData& sd, double t) const;
};

struct FlowState {
    ImmersionChart chart;  // tabulated
    double t = 0.0;
};

FlowState make_flow_state(const ImmersionChart& chart, double t = 0.0);

struct FlowStepReport {
    FlowState state;
    double dt_used = 0.0;
    int rejections = 0;
    double min_lambda = 0.0;
    double max_lambda = 0.0;
    bool small_curvatures = true;
    double hyperboloid_drift = 0.0;  // max |<x,x>+1| before reprojection
};

enum class Scheme { Euler, RK4 };

// One accepted step; dt is halved on immersion-check failure, up to 8 times.
FlowStepReport flow_step(const FlowState& state, double dt, const SpeedField& speed,
                         Scheme scheme = Scheme::RK4);

// Max nodewise residual of d zeta/dt = -d zeta(B grad f) - J(d zeta(grad f))
// + f chi between two consecutive accepted states (forward difference).
double verify_lift_evolution(const FlowState& s0, const FlowState& s1, const SpeedField& speed);

struct GaussEvolutionReport {
    double generic_residual = 0.0;  // against -dG(B grad f) - J(dG grad f)
    double mcf_residual = -1.0;     // against H + B(J H), trace-route H (analytic s0 only)
};

GaussEvolutionReport verify_gauss_evolution(const FlowState& s0, const FlowState& s1,
                                            const SpeedField& speed,
                                            const ImmersionChart* analytic_s0 = nullptr);

}  // namespace geodloom
