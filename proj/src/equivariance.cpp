#include "geodloom/equivariance.hpp"

namespace geodloom {

namespace {

// Sample points spread over the chart domain (interior-biased lattice).
std::vector<Vec> spread_samples(const Domain& d, int count) {
    std::vector<Vec> out;
    const int total = d.node_count();
    const int stride = std::max(1, total / count);
    for (int i = 0; i < total && static_cast<int>(out.size()) < count; i += stride)
        out.push_back(d.node(i));
    return out;
}

double simpson(const std::function<double(double)>& f, double a, double b, int samples) {
    if (samples % 2 == 0) samples += 1;
    const int n = samples - 1;  // even number of intervals
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// omega(d/ds zeta(path(s))) by a 5-point stencil in s.
double omega_along(const std::function<UTBPoint(double)>& zeta, double s, double h) {
    static const double w[5] = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
    const UTBPoint at = zeta(s);
    Vec dx = Vec::Zero(at.x.size()), dv = Vec::Zero(at.x.size());
    for (int k = 0; k < 5; ++k) {
        if (w[k] == 0.0) continue;
        const UTBPoint q = zeta(s + (k - 2) * h);
        dx += (w[k] / h) * q.x;
        dv += (w[k] / h) * q.v;
    }
    return connection_form(project_to_utb_tangent(at, dx, dv));
}

}  // namespace

double gauss_equivariance_defect(const GaussChart& g, const Generator& gen, int nsamples) {
    double worst = 0.0;
    for (const Vec& p : spread_samples(g.domain, nsamples)) {
        const OrientedGeodesic lhs = g.gmap(gen.deck.apply(p));
        const OrientedGeodesic rhs_src = g.gmap(p);
        const OrientedGeodesic rhs(BoundaryPoint(gen.rho.apply(rhs_src.fwd.v)),
                                   BoundaryPoint(gen.rho.apply(rhs_src.bwd.v)));
        worst = std::max(worst, std::max(boundary_distance(lhs.fwd, rhs.fwd),
                                         boundary_distance(lhs.bwd, rhs.bwd)));
    }
    return worst;
}

HolonomyValue holonomy_from_f(const ImmersionChart& chart, const Representation& rep, int genIdx,
                              int nsamples, double tol) {
    require(genIdx >= 0 && genIdx < static_cast<int>(rep.generators.size()),
            "holonomy_from_f: generator index out of range");
    const Generator& gen = rep.generators[genIdx];

    const GaussChart g = gauss_map(chart);
    const double eq = gauss_equivariance_defect(g, gen, nsamples);
    require(eq <= 1e-6, "holonomy_from_f: Gauss map is not rho-equivariant");

    double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const auto samples = spread_samples(chart.domain, nsamples);
    for (const Vec& p : samples) {
        const double fp = f_sigma(fundamental_data_at(chart, p));
        const double fq = f_sigma(fundamental_data_at(chart, gen.deck.apply(p)));
        const double t = fq - fp;
        sum += t;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    HolonomyValue out;
    out.value = sum / static_cast<double>(samples.size());
    out.spread = hi - lo;
    require(out.spread <= 10.0 * tol,
            "holonomy_from_f: sample spread too large, equivariance of the Gauss map fails");
    return out;
}

double holonomy_from_connection(const UTBChart& zeta, const Loop& loop,
                                const Representation& rep) {
    require(!zeta.tabulated(), "holonomy_from_connection: analytic lift required");
    const auto lift = zeta.map;

    if (loop.kind == Loop::Kind::Polyline) {
        require(loop.points.size() >= 2, "holonomy_from_connection: empty polyline");
        require((loop.points.front() - loop.points.back()).norm() <= 1e-8,
                "holonomy_from_connection: open polyline loop");
        double acc = 0.0;
        for (size_t k = 0; k + 1 < loop.points.size(); ++k) {
            const Vec a = loop.points[k], b = loop.points[k + 1];
            const auto zs = [&](double s) { return lift(a + s * (b - a)); };
            acc += simpson([&](double s) { return omega_along(zs, s, 1e-5); }, 0.0, 1.0,
                           loop.samples);
        }
        return acc;
    }

    require(loop.generator >= 0 && loop.generator < static_cast<int>(rep.generators.size()),
            "holonomy_from_connection: generator index out of range");
    const Generator& gen = rep.generators[loop.generator];
    const Vec a = rep.basepoint;
    const Vec b = gen.deck.apply(a);
    const auto zs = [&](double s) { return lift(a + s * (b - a)); };
    const double line = simpson([&](double s) { return omega_along(zs, s, 1e-5); }, 0.0, 1.0,
                                loop.samples);

    // Close through the fiber: rho^{-1} zeta(deck(base)) = phi_Delta zeta(base).
    const UTBPoint end = lift(b);
    const Mat rho_inv = gen.rho.m.inverse();
    const UTBPoint pulled = reproject(rho_inv * end.x, rho_inv * end.v);
    const double delta = flow_offset(lift(a), pulled);
    return line - delta;
}

double holonomy_from_maslov(const GaussChart& g, const Loop& loop, const Representation& rep) {
    if (loop.kind == Loop::Kind::Polyline) {
        require(loop.points.size() >= 2 &&
                    (loop.points.front() - loop.points.back()).norm() <= 1e-8,
                "holonomy_from_maslov: open polyline loop");
        double acc = 0.0;
        for (size_t k = 0; k + 1 < loop.points.size(); ++k) {
            const Vec a = loop.points[k], b = loop.points[k + 1];
            acc += simpson(
                [&](double s) { return maslov_integrand(g, a + s * (b - a), b - a); }, 0.0, 1.0,
                loop.samples);
        }
        return acc;
    }
    require(loop.generator >= 0 && loop.generator < static_cast<int>(rep.generators.size()),
            "holonomy_from_maslov: generator index out of range");
    const Generator& gen = rep.generators[loop.generator];
    const Vec a = rep.basepoint;
    const Vec b = gen.deck.apply(a);
    return simpson([&](double s) { return maslov_integrand(g, a + s * (b - a), b - a); }, 0.0,
                   1.0, loop.samples);
}

VerdictReport rho_integrability_verdict(const GaussChart& g, const Representation& rep,
                                        double tol) {
    VerdictReport rep_out;
    rep_out.tolerance = tol;
    rep_out.lagrangian = lagrangian_residual(g);
    rep_out.riemannian = riemannian_residual(g);
    require(rep_out.riemannian > 0.0, "verdict: chart is not Riemannian");
    require(rep_out.lagrangian <= 1e-6, "verdict: chart is not Lagrangian within tolerance");
    for (const Generator& gen : rep.generators)
        rep_out.equivariance_defect =
            std::max(rep_out.equivariance_defect, gauss_equivariance_defect(g, gen));
    require(rep_out.equivariance_defect <= 1e-6, "verdict: chart is not rho-equivariant");

    bool all_small = true;
    for (int k = 0; k < static_cast<int>(rep.generators.size()); ++k) {
        Loop loop;
        loop.kind = Loop::Kind::Generator;
        loop.generator = k;
        const double h = holonomy_from_maslov(g, loop, rep);
        rep_out.holonomies.push_back(h);
        all_small = all_small && std::abs(h) < tol;
    }
    rep_out.integrable = all_small;
    if (!rep_out.integrable) return rep_out;

    const FlatSection fs = integrate_flat_section(g);
    const DesingularizeResult ds = desingularize_and_project(fs.zeta);
    if (ds.ok) {
        rep_out.recovered = ds.sigma;
        // Equivariance defect of the recovered immersion across each deck map.
        double worst = 0.0;
        for (const Generator& gen : rep.generators) {
            for (const Vec& p : spread_samples(g.domain, 8)) {
                const Vec q = gen.deck.apply(p);
                bool inside = true;
                for (int a = 0; a < g.domain.dim(); ++a)
                    inside = inside && q[a] >= g.domain.lo[a] - 1e-12 &&
                             q[a] <= g.domain.hi[a] + 1e-12;
                if (!inside) continue;
                // Nearest-node evaluation of the tabulated reconstruction.
                const auto nearest = [&](const Vec& u) {
                    std::vector<int> idx(g.domain.dim());
                    for (int a = 0; a < g.domain.dim(); ++a) {
                        const double t = (u[a] - g.domain.lo[a]) / g.domain.step(a);
                        idx[a] = std::min(g.domain.samples[a] - 1,
                                          std::max(0, static_cast<int>(std::lround(t))));
                    }
                    return g.domain.ravel(idx);
                };
                const Vec lhs = ds.sigma.tabulated()
                                    ? ds.sigma.values[nearest(q)]
                                    : ds.sigma.value_at(q);
                const Vec rhs = gen.rho.m * (ds.sigma.tabulated() ? ds.sigma.values[nearest(p)]
                                                                  : ds.sigma.value_at(p));
                worst = std::max(worst, (lhs - rhs).norm());
            }
        }
        rep_out.recovered_defect = worst;
    }
    return rep_out;
}

double flux(const LagrangianIsotopy& iso, const Loop& loop, const Representation& rep) {
    const int S = static_cast<int>(iso.stages.size());
    require(S >= 3, "flux: need at least three stages");
    require(loop.kind == Loop::Kind::Generator, "flux: generator loops only");
    const Generator& gen = rep.generators.at(loop.generator);
    const Vec a = rep.basepoint;
    const Vec b = gen.deck.apply(a);
    const Vec dir = b - a;
    const double ds = 1.0 / (S - 1);

    // Canonical sections for the s-derivative (smooth across stages) and the
    // stages' own sections for the loop-parameter derivative.
    const auto canon = [&](int k, const Vec& u) { return canonical_rep(iso.stages[k].gmap(u)); };

    const auto integrand = [&](int k, double tau) {
        const Vec u = a + tau * dir;
        const GFrame f = gauss_frame(iso.stages[k], u);
        UTBTangent xt{f.anchor, Vec::Zero(f.anchor.x.size()), Vec::Zero(f.anchor.x.size())};
        for (int c = 0; c < static_cast<int>(dir.size()); ++c) {
            xt.xd += dir[c] * f.cols[c].rep.xd;
            xt.vd += dir[c] * f.cols[c].rep.vd;
        }
        const GTangent X_tau = make_gtangent(f.anchor, xt);

        // d/ds through the canonical section, central in the interior.
        UTBPoint c0 = canon(k, u);
        Vec dxs, dvs;
        if (k == 0) {
            const UTBPoint c1 = canon(1, u), c2 = canon(2, u);
            dxs = (-1.5 * c0.x + 2.0 * c1.x - 0.5 * c2.x) / ds;
            dvs = (-1.5 * c0.v + 2.0 * c1.v - 0.5 * c2.v) / ds;
        } else if (k == S - 1) {
            const UTBPoint c1 = canon(S - 2, u), c2 = canon(S - 3, u);
            dxs = (1.5 * c0.x - 2.0 * c1.x + 0.5 * c2.x) / ds;
            dvs = (1.5 * c0.v - 2.0 * c1.v + 0.5 * c2.v) / ds;
        } else {
            const UTBPoint cp = canon(k + 1, u), cm = canon(k - 1, u);
            dxs = (cp.x - cm.x) / (2.0 * ds);
            dvs = (cp.v - cm.v) / (2.0 * ds);
        }
        const GTangent X_s = make_gtangent(c0, project_to_utb_tangent(c0, dxs, dvs));
        return Omega(X_tau, X_s);
    };

    // Simpson in the loop parameter per stage, Simpson across stages.
    std::vector<double> per_stage(S);
    for (int k = 0; k < S; ++k)
        per_stage[k] = simpson([&](double tau) { return integrand(k, tau); }, 0.0, 1.0,
                               loop.samples);
    int m = S - 1;
    require(m % 2 == 0, "flux: stage count must be odd for Simpson");
    double acc = per_stage[0] + per_stage[m];
    for (int i = 1; i < m; ++i) acc += per_stage[i] * ((i % 2) ? 4.0 : 2.0);
    return acc * ds / 3.0;
}

}  // namespace geodloom
