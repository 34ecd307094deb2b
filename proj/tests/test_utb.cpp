#include "doctest.h"
#include "geodloom/geodesic_space.hpp"
#include "geodloom/utb.hpp"

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
    y[amb - 1] = 1.0 + y.head(amb - 1).squaredNorm();  // timelike
    return reproject(y, v);
}

UTBTangent random_tangent(std::mt19937& rng, const UTBPoint& p) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vec xd(p.ambient_dim()), vd(p.ambient_dim());
    for (int i = 0; i < p.ambient_dim(); ++i) {
        xd[i] = unif(rng);
        vd[i] = unif(rng);
    }
    return project_to_utb_tangent(p, xd, vd);
}

UTBPoint base_point_pair(int amb) {
    Vec x = Vec::Zero(amb), v = Vec::Zero(amb);
    x[amb - 1] = 1.0;
    v[0] = 1.0;
    return UTBPoint(std::move(x), std::move(v));
}

}  // namespace

TEST_CASE("geodesic_flow closed form and additivity") {
    const UTBPoint p = base_point_pair(3);
    const UTBPoint q = geodesic_flow(p, std::log(2.0));
    // cosh(ln 2) = 5/4, sinh(ln 2) = 3/4.
    CHECK(q.x[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(q.x[2] == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(q.v[0] == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(q.v[2] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK((geodesic_flow(p, 0.0).x - p.x).norm() == doctest::Approx(0.0));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int amb : {3, 4, 5}) {
        for (int rep = 0; rep < 15; ++rep) {
            const UTBPoint a = random_utb_point(rng, amb);
            const double s = unif(rng), t = unif(rng);
            const UTBPoint lhs = geodesic_flow(geodesic_flow(a, t), s);
            const UTBPoint rhs = geodesic_flow(a, s + t);
            CHECK((lhs.x - rhs.x).norm() + (lhs.v - rhs.v).norm() < 1e-10);
            CHECK(std::abs(mink_norm2(rhs.x) + 1.0) < 1e-10);
            CHECK(std::abs(mink_norm2(rhs.v) - 1.0) < 1e-10);
            CHECK(std::abs(mink_inner(rhs.x, rhs.v)) < 1e-10);
        }
    }
}

TEST_CASE("chi expression and norms") {
    const UTBPoint p = base_point_pair(3);
    const UTBTangent c = chi(p);
    CHECK((c.xd - p.v).norm() == doctest::Approx(0.0));
    CHECK((c.vd - p.x).norm() == doctest::Approx(0.0));
    CHECK(ghat_metric(c, c) == doctest::Approx(2.0));
    CHECK(sasaki_metric(c, c) == doctest::Approx(1.0));
    CHECK(connection_form(c) == doctest::Approx(1.0));
}

TEST_CASE("lifts and flow differential") {
    std::mt19937 rng(5);
    for (int amb : {3, 4, 5}) {
        for (int rep = 0; rep < 10; ++rep) {
            const UTBPoint p = random_utb_point(rng, amb);
            const auto basis = horizontal_basis(p);
            REQUIRE(static_cast<int>(basis.size()) == amb - 2);
            for (const Vec& w : basis) {
                const UTBTangent h = hlift(p, w);
                const UTBTangent v = vlift(p, w);
                CHECK(std::abs(mink_inner(p.x, v.vd)) < 1e-12);
                CHECK(connection_form(h) == doctest::Approx(0.0).epsilon(1e-12));
                CHECK(connection_form(v) == doctest::Approx(0.0).epsilon(1e-12));
                // d phi_t(w^H) = cosh t w^H + sinh t w^V and symmetrically.
                const double t = 0.8;
                const UTBTangent dh = dflow(h, t);
                CHECK((dh.xd - std::cosh(t) * w).norm() < 1e-12);
                CHECK((dh.vd - std::sinh(t) * w).norm() < 1e-12);
                const UTBTangent dv = dflow(v, t);
                CHECK((dv.xd - std::sinh(t) * w).norm() < 1e-12);
                CHECK((dv.vd - std::cosh(t) * w).norm() < 1e-12);
            }
            CHECK_THROWS_AS(hlift(p, p.x + basis[0]), precondition_error);
            const UTBTangent fixed = hlift(p, p.x + 2.0 * p.v + basis[0], true);
            CHECK((fixed.xd - basis[0]).norm() < 1e-10);
        }
    }
}

TEST_CASE("split_tangent reconstruction") {
    std::mt19937 rng(9);
    for (int amb : {3, 4, 5}) {
        const UTBPoint p = random_utb_point(rng, amb);
        const TangentSplit sc = split_tangent(chi(p));
        CHECK(sc.chiCoeff == doctest::Approx(1.0));
        CHECK(sc.h0.norm() < 1e-12);
        CHECK(sc.v0.norm() < 1e-12);

        const auto basis = horizontal_basis(p);
        const TangentSplit sh = split_tangent(hlift(p, basis[0]));
        CHECK(sh.chiCoeff == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((sh.h0 - basis[0]).norm() < 1e-12);

        for (int rep = 0; rep < 10; ++rep) {
            const UTBTangent X = random_tangent(rng, p);
            const TangentSplit s = split_tangent(X);
            const UTBTangent c = chi(p);
            CHECK((s.chiCoeff * c.xd + s.h0 - X.xd).norm() < 1e-12);
            CHECK((s.chiCoeff * c.vd + s.v0 - X.vd).norm() < 1e-12);
            CHECK(std::abs(connection_form(X) - s.chiCoeff) < 1e-12);
        }
    }
}

TEST_CASE("metrics: blocks, agreement on chi-perp, flow isometry") {
    std::mt19937 rng(21);
    for (int amb : {3, 4, 5}) {
        const UTBPoint p = random_utb_point(rng, amb);
        const auto basis = horizontal_basis(p);
        for (const Vec& w : basis) {
            CHECK(sasaki_metric(hlift(p, w), hlift(p, w)) == doctest::Approx(mink_norm2(w)));
            CHECK(sasaki_metric(vlift(p, w), vlift(p, w)) == doctest::Approx(-mink_norm2(w)));
            CHECK(sasaki_metric(hlift(p, w), vlift(p, w)) == doctest::Approx(0.0));
        }
        std::uniform_real_distribution<double> unif(-1.5, 1.5);
        for (int rep = 0; rep < 10; ++rep) {
            const UTBTangent X = remove_chi(random_tangent(rng, p));
            const UTBTangent Y = remove_chi(random_tangent(rng, p));
            CHECK(std::abs(ghat_metric(X, Y) - sasaki_metric(X, Y)) < 1e-12);
            const double t = unif(rng);
            const UTBTangent A = random_tangent(rng, p);
            const UTBTangent B = random_tangent(rng, p);
            CHECK(std::abs(sasaki_metric(dflow(A, t), dflow(B, t)) - sasaki_metric(A, B)) <
                  1e-10);
        }
    }
}

TEST_CASE("J endomorphism") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int amb : {3, 4, 5}) {
        const UTBPoint p = random_utb_point(rng, amb);
        for (int rep = 0; rep < 10; ++rep) {
            const UTBTangent X = remove_chi(random_tangent(rng, p));
            const UTBTangent JJX = J_endo(J_endo(X));
            CHECK((JJX.xd - X.xd).norm() + (JJX.vd - X.vd).norm() < 1e-12);
            const UTBTangent Y = remove_chi(random_tangent(rng, p));
            CHECK(ghat_metric(J_endo(X), J_endo(Y)) ==
                  doctest::Approx(-ghat_metric(X, Y)).epsilon(1e-10));
            // Flow commutes with J on chi-perp.
            const double t = unif(rng);
            const UTBTangent lhs = dflow(J_endo(X), t);
            const UTBTangent rhs = J_endo(dflow(X, t));
            CHECK((lhs.xd - rhs.xd).norm() + (lhs.vd - rhs.vd).norm() < 1e-10);
        }
        CHECK_THROWS_AS(J_endo(chi(p)), precondition_error);
    }
}

TEST_CASE("connection form invariance under the flow") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int amb : {3, 4}) {
        const UTBPoint p = random_utb_point(rng, amb);
        for (int rep = 0; rep < 10; ++rep) {
            const UTBTangent X = random_tangent(rng, p);
            const double t = unif(rng);
            CHECK(std::abs(connection_form(dflow(X, t)) - connection_form(X)) < 1e-11);
        }
    }
}

TEST_CASE("curvature_fd basis cases") {
    const double h = 1e-4;

    const UTBPoint p2 = base_point_pair(3);
    const auto basis2 = horizontal_basis(p2);
    const UTBTangent wh = hlift(p2, basis2[0]);
    const UTBTangent wv = vlift(p2, basis2[0]);
    CHECK(curvature_fd(p2, wh, wv, h) == doctest::Approx(1.0).epsilon(5e-3));

    const UTBPoint p3 = base_point_pair(4);
    const auto basis3 = horizontal_basis(p3);
    const UTBTangent h1 = hlift(p3, basis3[0]);
    const UTBTangent h2 = hlift(p3, basis3[1]);
    const UTBTangent v1 = vlift(p3, basis3[0]);
    const UTBTangent v2 = vlift(p3, basis3[1]);
    CHECK(std::abs(curvature_fd(p3, h1, h2, h)) < 50 * h);
    CHECK(std::abs(curvature_fd(p3, v1, v2, h)) < 50 * h);
    CHECK(std::abs(curvature_fd(p3, h1, v2, h)) < 50 * h);
    CHECK(curvature_fd(p3, h1, v1, h) == doctest::Approx(1.0).epsilon(5e-3));

    std::mt19937 rng(31);
    const UTBTangent Y = random_tangent(rng, p3);
    CHECK(std::abs(curvature_fd(p3, chi(p3), Y, h)) < 50 * h);
}

TEST_CASE("curvature_fd converges to Omega at order >= 1") {
    std::mt19937 rng(37);
    for (int amb : {3, 4}) {
        for (int rep = 0; rep < 5; ++rep) {
            const UTBPoint p = random_utb_point(rng, amb);
            const UTBTangent X = remove_chi(random_tangent(rng, p));
            const UTBTangent Y = remove_chi(random_tangent(rng, p));
            const double expected = ghat_metric(X, J_endo(Y));
            const double e1 = std::abs(curvature_fd(p, X, Y, 2e-3) - expected);
            const double e2 = std::abs(curvature_fd(p, X, Y, 1e-3) - expected);
            CHECK(e2 < 50 * 1e-3 * (1.0 + std::abs(expected)));
            if (e1 > 1e-9) CHECK(e2 < 0.75 * e1);
        }
    }
}
