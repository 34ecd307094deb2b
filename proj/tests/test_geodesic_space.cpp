#include "doctest.h"
#include "geodloom/gallery.hpp"
#include "geodloom/geodesic_space.hpp"

#include <random>

using namespace geodloom;

namespace {

UTBPoint random_utb_point(std::mt19937& rng, int amb) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vec y(amb), v(amb);
    for (int i = 0; i < amb; ++i) {
        y[i] = 0.5 * unif(rng);
        v[i] = unif(rng);
    }
    y[amb - 1] = 1.0 + y.head(amb - 1).squaredNorm();
    return reproject(y, v);
}

GTangent random_gtangent(std::mt19937& rng, const UTBPoint& p) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vec xd(p.ambient_dim()), vd(p.ambient_dim());
    for (int i = 0; i < p.ambient_dim(); ++i) {
        xd[i] = unif(rng);
        vd[i] = unif(rng);
    }
    return make_gtangent(p, project_to_utb_tangent(p, xd, vd));
}

UTBPoint base_point_pair(int amb) {
    Vec x = Vec::Zero(amb), v = Vec::Zero(amb);
    x[amb - 1] = 1.0;
    v[0] = 1.0;
    return UTBPoint(std::move(x), std::move(v));
}

}  // namespace

TEST_CASE("p_project basics, flow invariance, equivariance") {
    const UTBPoint p = base_point_pair(3);
    const OrientedGeodesic g = p_project(p);
    CHECK((g.fwd.v - Vec(Vec::Map((const double[]){1.0, 0.0, 1.0}, 3))).norm() < 1e-12);
    CHECK((g.bwd.v - Vec(Vec::Map((const double[]){-1.0, 0.0, 1.0}, 3))).norm() < 1e-12);

    std::mt19937 rng(41);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int amb : {3, 4, 5}) {
        const Mat A = translation_matrix(0.6, amb);
        for (int rep = 0; rep < 10; ++rep) {
            const UTBPoint q = random_utb_point(rng, amb);
            const OrientedGeodesic gq = p_project(q);
            const OrientedGeodesic gf = p_project(geodesic_flow(q, unif(rng)));
            CHECK(boundary_distance(gq.fwd, gf.fwd) < 1e-9);
            CHECK(boundary_distance(gq.bwd, gf.bwd) < 1e-9);
            // Isometry equivariance of the projection.
            const UTBPoint qa = reproject(A * q.x, A * q.v);
            const OrientedGeodesic ga = p_project(qa);
            CHECK(boundary_distance(ga.fwd, BoundaryPoint(A * gq.fwd.v)) < 1e-10);
            CHECK(boundary_distance(ga.bwd, BoundaryPoint(A * gq.bwd.v)) < 1e-10);
        }
    }
}

TEST_CASE("canonical_rep round trip and nearest point") {
    const OrientedGeodesic g(BoundaryPoint(Vec(Vec::Map((const double[]){1.0, 0.0, 1.0}, 3))),
                             BoundaryPoint(Vec(Vec::Map((const double[]){-1.0, 0.0, 1.0}, 3))));
    const UTBPoint c = canonical_rep(g);
    CHECK((c.x - base_point_pair(3).x).norm() < 1e-12);
    CHECK((c.v - base_point_pair(3).v).norm() < 1e-12);

    std::mt19937 rng(43);
    for (int amb : {3, 4, 5}) {
        for (int rep = 0; rep < 10; ++rep) {
            const UTBPoint q = random_utb_point(rng, amb);
            const OrientedGeodesic gq = p_project(q);
            const UTBPoint c2 = canonical_rep(gq);
            const OrientedGeodesic back = p_project(c2);
            CHECK(boundary_distance(back.fwd, gq.fwd) < 1e-10);
            CHECK(boundary_distance(back.bwd, gq.bwd) < 1e-10);
            // Last coordinate is minimized along the fiber at the section.
            const double at0 = c2.x[amb - 1];
            for (double t : {-0.4, -0.1, 0.1, 0.4})
                CHECK(geodesic_flow(c2, t).x[amb - 1] >= at0 - 1e-12);
        }
    }
}

TEST_CASE("transport preserves norm and commutes with J") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int amb : {3, 4, 5}) {
        for (int rep = 0; rep < 10; ++rep) {
            const UTBPoint q = random_utb_point(rng, amb);
            const GTangent X = random_gtangent(rng, q);
            const UTBPoint target = geodesic_flow(q, unif(rng));
            const GTangent Xt = transport_to(X, target);
            CHECK((Xt.anchor.x - target.x).norm() < 1e-12);
            CHECK(std::abs(ghat_metric(Xt.rep, Xt.rep) - ghat_metric(X.rep, X.rep)) < 1e-10);
            const GTangent lhs = transport_to(J_para(X), target);
            const GTangent rhs = J_para(Xt);
            CHECK((lhs.rep.xd - rhs.rep.xd).norm() + (lhs.rep.vd - rhs.rep.vd).norm() < 1e-10);
            // Identity transport.
            const GTangent same = transport_to(X, q);
            CHECK((same.rep.xd - X.rep.xd).norm() < 1e-12);
        }
        CHECK_THROWS_AS(
            transport_to(random_gtangent(rng, random_utb_point(rng, amb)),
                         random_utb_point(rng, amb)),
            precondition_error);
    }
}

TEST_CASE("para-Kahler tensors: antisymmetry, anti-isometry, signature") {
    std::mt19937 rng(53);
    for (int amb : {3, 4, 5}) {
        const int n = amb - 2;
        for (int rep = 0; rep < 8; ++rep) {
            const UTBPoint q = random_utb_point(rng, amb);
            const GTangent X = random_gtangent(rng, q);
            const GTangent Y = random_gtangent(rng, q);
            CHECK(std::abs(Omega(X, X)) < 1e-12);
            CHECK(std::abs(Omega(X, Y) + Omega(Y, X)) < 1e-11);
            CHECK(G_metric(J_para(X), J_para(Y)) ==
                  doctest::Approx(-G_metric(X, Y)).epsilon(1e-10));

            // Signature (n, n) on a random frame.
            const auto basis = horizontal_basis(q);
            Mat gram(2 * n, 2 * n);
            std::vector<GTangent> frame;
            for (int k = 0; k < n; ++k) frame.push_back(make_gtangent(q, hlift(q, basis[k])));
            for (int k = 0; k < n; ++k) frame.push_back(make_gtangent(q, vlift(q, basis[k])));
            for (int i = 0; i < 2 * n; ++i)
                for (int j = 0; j < 2 * n; ++j) gram(i, j) = G_metric(frame[i], frame[j]);
            Eigen::SelfAdjointEigenSolver<Mat> es(gram);
            int pos = 0, neg = 0;
            for (int i = 0; i < 2 * n; ++i) (es.eigenvalues()[i] > 0 ? pos : neg) += 1;
            CHECK(pos == n);
            CHECK(neg == n);

            // J-eigenspaces have dimension n each.
            Mat jmat(2 * n, 2 * n);
            for (int j = 0; j < 2 * n; ++j) {
                const GTangent Jf = J_para(frame[j]);
                // Coordinates in the frame via the hlift/vlift structure.
                for (int i = 0; i < n; ++i) {
                    jmat(i, j) = mink_inner(Jf.rep.xd, basis[i]);
                    jmat(n + i, j) = mink_inner(Jf.rep.vd, basis[i]);
                }
            }
            Eigen::EigenSolver<Mat> jes(jmat);
            int plus = 0, minus = 0;
            for (int i = 0; i < 2 * n; ++i) {
                CHECK(std::abs(jes.eigenvalues()[i].imag()) < 1e-10);
                (jes.eigenvalues()[i].real() > 0 ? plus : minus) += 1;
            }
            CHECK(plus == n);
            CHECK(minus == n);
        }
    }
}

TEST_CASE("ambient covariant derivative: zero field, metric compatibility") {
    std::mt19937 rng(59);
    const int amb = 4;

    // A constant field over a constant geodesic differentiates to zero.
    const UTBPoint q0 = random_utb_point(rng, amb);
    const OrientedGeodesic fixed = p_project(q0);
    const auto anchor_const = [&](double) { return canonical_rep(fixed); };
    const GTangent Xf = random_gtangent(rng, canonical_rep(fixed));
    const auto rep_const = [&](double) { return Xf.rep; };
    const GTangent dz = ambient_cov_deriv(anchor_const, rep_const, 1e-4);
    CHECK(dz.rep.xd.norm() + dz.rep.vd.norm() < 1e-8);

    // Metric compatibility d/ds G(Y,Z) = G(DY,Z) + G(Y,DZ) on sampled fields.
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        const UTBPoint p = random_utb_point(rng, amb);
        const GTangent dir = random_gtangent(rng, p);
        const auto anchor = [&](double s) {
            return reproject(p.x + s * dir.rep.xd, p.v + s * dir.rep.vd);
        };
        Vec cy(2 * amb), cz(2 * amb);
        for (int i = 0; i < 2 * amb; ++i) {
            cy[i] = unif(rng);
            cz[i] = unif(rng);
        }
        const auto field = [&](const Vec& coeff) {
            return [&, coeff](double s) {
                const UTBPoint at = anchor(s);
                return remove_chi(
                    project_to_utb_tangent(at, coeff.head(amb), coeff.tail(amb)));
            };
        };
        const auto Y = field(cy);
        const auto Z = field(cz);
        const double h = 1e-4;
        const auto gyz = [&](double s) { return ghat_metric(Y(s), Z(s)); };
        const double lhs = (gyz(h) - gyz(-h)) / (2.0 * h);
        const GTangent DY = ambient_cov_deriv(anchor, Y, h);
        const GTangent DZ = ambient_cov_deriv(anchor, Z, h);
        const double rhs = ghat_metric(DY.rep, Z(0.0)) + ghat_metric(Y(0.0), DZ.rep);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));
    }
}

TEST_CASE("torsion-free on coordinate fields") {
    // For the coordinate fields of a two-parameter family of geodesics the
    // bracket vanishes, so D_a(d/db) - D_b(d/da) must be zero.
    std::mt19937 rng(67);
    const int amb = 4;
    for (int rep = 0; rep < 4; ++rep) {
        const UTBPoint p = random_utb_point(rng, amb);
        const GTangent A = random_gtangent(rng, p);
        const GTangent B = random_gtangent(rng, p);
        const auto F = [&](double a, double b) {
            return reproject(p.x + a * A.rep.xd + b * B.rep.xd,
                             p.v + a * A.rep.vd + b * B.rep.vd);
        };
        const double dq = 1e-4;
        const auto tangent_b = [&](double a, double b) {
            const UTBPoint at = F(a, b);
            const UTBPoint pp = F(a, b + dq), pm = F(a, b - dq);
            return remove_chi(project_to_utb_tangent(at, (pp.x - pm.x) / (2 * dq),
                                                     (pp.v - pm.v) / (2 * dq)));
        };
        const auto tangent_a = [&](double a, double b) {
            const UTBPoint at = F(a, b);
            const UTBPoint pp = F(a + dq, b), pm = F(a - dq, b);
            return remove_chi(project_to_utb_tangent(at, (pp.x - pm.x) / (2 * dq),
                                                     (pp.v - pm.v) / (2 * dq)));
        };
        const double h = 1e-4;
        const GTangent DaDb = ambient_cov_deriv([&](double s) { return F(s, 0.0); },
                                                [&](double s) { return tangent_b(s, 0.0); }, h);
        const GTangent DbDa = ambient_cov_deriv([&](double s) { return F(0.0, s); },
                                                [&](double s) { return tangent_a(0.0, s); }, h);
        CHECK((DaDb.rep.xd - DbDa.rep.xd).norm() < 1e-5);
        CHECK((DaDb.rep.vd - DbDa.rep.vd).norm() < 1e-5);
    }
}

TEST_CASE("dOmega vanishes on coordinate fields") {
    // d Omega(da, db, dc) = d/da Omega(db,dc) - d/db Omega(da,dc)
    //                      + d/dc Omega(da,db) for coordinate fields.
    std::mt19937 rng(61);
    const int amb = 4;
    for (int rep = 0; rep < 3; ++rep) {
        const UTBPoint p = random_utb_point(rng, amb);
        const GTangent X = random_gtangent(rng, p);
        const GTangent Y = random_gtangent(rng, p);
        const GTangent Z = random_gtangent(rng, p);
        const auto F = [&](const Vec& abc) {
            return p_project(
                reproject(p.x + abc[0] * X.rep.xd + abc[1] * Y.rep.xd + abc[2] * Z.rep.xd,
                          p.v + abc[0] * X.rep.vd + abc[1] * Y.rep.vd + abc[2] * Z.rep.vd));
        };
        const auto omega_ij = [&](int i, int j, const Vec& abc) {
            const auto ci = [&](double q) {
                Vec w = abc;
                w[i] += q;
                return F(w);
            };
            const auto cj = [&](double q) {
                Vec w = abc;
                w[j] += q;
                return F(w);
            };
            const GTangent Ti = curve_tangent_fd(ci, 1e-5);
            const GTangent Tj = curve_tangent_fd(cj, 1e-5);
            return Omega(Ti, Tj);
        };
        const double hc = 1e-3;
        const auto partial = [&](int axis, int i, int j) {
            Vec up = Vec::Zero(3), dn = Vec::Zero(3);
            up[axis] += hc;
            dn[axis] -= hc;
            return (omega_ij(i, j, up) - omega_ij(i, j, dn)) / (2.0 * hc);
        };
        const double dOmega = partial(0, 1, 2) - partial(1, 0, 2) + partial(2, 0, 1);
        const double scale = std::abs(omega_ij(1, 2, Vec::Zero(3))) +
                             std::abs(omega_ij(0, 2, Vec::Zero(3))) +
                             std::abs(omega_ij(0, 1, Vec::Zero(3))) + 1.0;
        CHECK(std::abs(dOmega) < 5e-4 * scale);
    }
}
