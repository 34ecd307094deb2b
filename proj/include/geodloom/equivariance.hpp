#pragma once

#include "geodloom/gauss.hpp"

// Group representations paired with deck maps on the parameter domain, the
// three holonomy computations (via f_sigma, via the connection form, via the
// Maslov form), the equivariant-integrability verdict, and the Lagrangian
// flux of isotopies.

namespace geodloom {

// Affine diffeomorphism of the parameter domain u -> linear u + translation.
struct DeckMap {
    Mat linear;
    Vec translation;

    Vec apply(const Vec& u) const { return linear * u + translation; }
    DeckMap inverse() const {
        DeckMap inv;
        inv.linear = linear.inverse();
        inv.translation = -inv.linear * translation;
        return inv;
    }
};

struct Generator {
    std::string name;
    Isometry rho;
    DeckMap deck;
};

struct Representation {
    std::vector<Generator> generators;
    Vec basepoint;  // parameter-domain basepoint for loops
};

struct Loop {
    enum class Kind { Generator, Polyline } kind = Kind::Generator;
    int generator = 0;
    std::vector<Vec> points;  // polyline vertices, closed within tolerance
    int samples = 257;        // quadrature samples (odd)
};

// Equivariance defect of the Gauss chart under one generator: max over
// sample points of the endpoint distance between gmap(deck(p)) and
// rho . gmap(p).
double gauss_equivariance_defect(const GaussChart& g, const Generator& gen, int nsamples = 16);

struct HolonomyValue {
    double value = 0.0;
    double spread = 0.0;  // sample spread (holonomy_from_f only)
};

// t_alpha = f_sigma(deck(p)) - f_sigma(p), averaged over sample points.
HolonomyValue holonomy_from_f(const ImmersionChart& chart, const Representation& rep, int genIdx,
                              int nsamples = 16, double tol = 1e-5);

// Loop integral of section^* omega, closed through the fiber via rho at the
// deck seam.
double holonomy_from_connection(const UTBChart& zeta, const Loop& loop, const Representation& rep);

// Loop integral of the Maslov 1-form Omega(H, dG .).
double holonomy_from_maslov(const GaussChart& g, const Loop& loop, const Representation& rep);

struct VerdictReport {
    bool integrable = false;
    std::vector<double> holonomies;  // per generator
    double tolerance = 1e-5;
    double lagrangian = 0.0;
    double riemannian = 0.0;
    double equivariance_defect = 0.0;
    // Filled when integrable: reconstructed immersion and its equivariance
    // defect under every generator.
    std::optional<ImmersionChart> recovered;
    double recovered_defect = -1.0;
};

VerdictReport rho_integrability_verdict(const GaussChart& g, const Representation& rep,
                                        double tol = 1e-5);

struct LagrangianIsotopy {
    std::vector<GaussChart> stages;  // uniform grid over s in [0,1]
};

// Surface integral of Omega over the (loop-parameter, s) strip; equals the
// holonomy difference between the endpoint stages.
double flux(const LagrangianIsotopy& iso, const Loop& loop, const Representation& rep);

}  // namespace geodloom
