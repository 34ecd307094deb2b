#include "doctest.h"
#include "geodloom/gallery.hpp"
#include "geodloom/lorentz.hpp"

#include <random>

using namespace geodloom;

namespace {

Vec make_vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

// Random unit tangent pair at a random point near the basepoint.
std::pair<HPoint, Vec> random_tangent_pair(std::mt19937& rng, int amb) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vec w(amb);
    for (int i = 0; i < amb; ++i) w[i] = unif(rng);
    w[amb - 1] = 0.0;
    HPoint base = basepoint(amb);
    HPoint x = w.norm() < 1e-12 ? base : exp_point(base, w / w.norm(), 0.7 * unif(rng) + 0.8);
    Vec v(amb);
    for (int i = 0; i < amb; ++i) v[i] = unif(rng);
    return {x, project_to_unit_tangent(x.v, v)};
}

// Brute-force orientation oracle for the Lorentzian cross product: the unit
// vector orthogonal to both factors with det[a b w] > 0.
Vec cross_oracle(const Vec& a, const Vec& b) {
    const Mat J = signature_matrix(3);
    Mat rows(2, 3);
    rows.row(0) = (J * a).transpose();
    rows.row(1) = (J * b).transpose();
    Eigen::FullPivLU<Mat> lu(rows);
    Mat null = lu.kernel();
    Vec w = null.col(0);
    const double q = mink_norm2(w);
    w /= std::sqrt(std::abs(q));
    Mat frame(3, 3);
    frame.col(0) = a;
    frame.col(1) = b;
    frame.col(2) = w;
    if (frame.determinant() < 0.0) w = -w;
    // Scale to match bilinearity: |a x b| relates to the Gram determinant.
    Mat gram(2, 2);
    gram << mink_inner(a, a), mink_inner(a, b), mink_inner(a, b), mink_inner(b, b);
    return w * std::sqrt(std::abs(gram.determinant()));
}

}  // namespace

TEST_CASE("mink_inner basics") {
    for (int amb : {3, 4, 5}) {
        Vec e_last = Vec::Zero(amb);
        e_last[amb - 1] = 1.0;
        CHECK(mink_inner(e_last, e_last) == doctest::Approx(-1.0));
        Vec e0 = Vec::Zero(amb);
        e0[0] = 1.0;
        CHECK(mink_inner(e0, e_last) == doctest::Approx(0.0));
        CHECK(mink_inner(e0 + e_last, e0 + e_last) == doctest::Approx(0.0));
    }
    CHECK_THROWS_AS(mink_inner(Vec::Zero(3), Vec::Zero(4)), precondition_error);
}

TEST_CASE("exp_point basics and round trip") {
    const HPoint x(make_vec({0.0, 0.0, 1.0}));
    const Vec v = make_vec({1.0, 0.0, 0.0});
    CHECK((exp_point(x, v, 0.0).v - x.v).norm() == doctest::Approx(0.0));
    const HPoint y = exp_point(x, v, 1.0);
    CHECK(y.v[0] == doctest::Approx(std::sinh(1.0)));
    CHECK(y.v[1] == doctest::Approx(0.0));
    CHECK(y.v[2] == doctest::Approx(std::cosh(1.0)));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int amb : {3, 4, 5}) {
        for (int rep = 0; rep < 20; ++rep) {
            auto [p, w] = random_tangent_pair(rng, amb);
            const double t = unif(rng);
            const HPoint q = exp_point(p, w, t);
            const Vec wt = std::sinh(t) * p.v + std::cosh(t) * w;
            const HPoint back = exp_point(q, project_to_unit_tangent(q.v, wt), -t);
            CHECK((back.v - p.v).norm() < 1e-12);
        }
    }
}

TEST_CASE("exp_point flow semigroup") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(-1.2, 1.2);
    for (int amb : {3, 4, 5}) {
        for (int rep = 0; rep < 20; ++rep) {
            auto [p, w] = random_tangent_pair(rng, amb);
            const double s = unif(rng), t = unif(rng);
            const HPoint direct = exp_point(p, w, s + t);
            const HPoint mid = exp_point(p, w, s);
            const Vec ws = project_to_unit_tangent(mid.v, std::sinh(s) * p.v + std::cosh(s) * w);
            const HPoint composed = exp_point(mid, ws, t);
            CHECK((direct.v - composed.v).norm() < 1e-9);
        }
    }
}

TEST_CASE("geodesic_endpoint basics and equivariance") {
    const HPoint x(make_vec({0.0, 0.0, 1.0}));
    const Vec v = make_vec({1.0, 0.0, 0.0});
    CHECK((geodesic_endpoint(x, v, +1).v - make_vec({1.0, 0.0, 1.0})).norm() ==
          doctest::Approx(0.0));
    CHECK((geodesic_endpoint(x, v, -1).v - make_vec({-1.0, 0.0, 1.0})).norm() ==
          doctest::Approx(0.0));

    std::mt19937 rng(13);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int amb : {3, 4}) {
        const Mat A = translation_matrix(0.8, amb);
        REQUIRE(is_isometry(A));
        const Isometry iso(A);
        for (int rep = 0; rep < 10; ++rep) {
            auto [p, w] = random_tangent_pair(rng, amb);
            for (int sign : {+1, -1}) {
                const BoundaryPoint lhs =
                    geodesic_endpoint(iso.apply(p), project_to_unit_tangent(A * p.v, A * w),
                                      sign);
                const BoundaryPoint rhs(A * (p.v + sign * w));
                CHECK(boundary_distance(lhs, rhs) < 1e-10);
            }
            // Endpoints are invariant under flowing the pair.
            const double t = unif(rng);
            const HPoint q = exp_point(p, w, t);
            const Vec wt = project_to_unit_tangent(q.v, std::sinh(t) * p.v + std::cosh(t) * w);
            for (int sign : {+1, -1})
                CHECK(boundary_distance(geodesic_endpoint(p, w, sign),
                                        geodesic_endpoint(q, wt, sign)) < 1e-9);
        }
    }
}

TEST_CASE("isometry invariants") {
    std::mt19937 rng(17);
    for (int amb : {3, 4, 5}) {
        const Mat A = translation_matrix(-1.3, amb);
        REQUIRE(is_isometry(A));
        const Isometry iso(A);
        for (int rep = 0; rep < 10; ++rep) {
            auto [p, w] = random_tangent_pair(rng, amb);
            (void)w;
            CHECK(std::abs(mink_norm2(iso.apply(p).v) + 1.0) < 1e-10);
        }
    }
    Mat bad = Mat::Identity(3, 3);
    bad(0, 0) = 2.0;
    CHECK_FALSE(is_isometry(bad));
    Mat flip = Mat::Identity(3, 3);
    flip(2, 2) = -1.0;
    CHECK_FALSE(is_isometry(flip));  // time orientation
}

TEST_CASE("lorentz_cross") {
    const Vec x = make_vec({0.0, 0.0, 1.0});
    const Vec v = make_vec({1.0, 0.0, 0.0});
    const Vec w = lorentz_cross(x, v);
    CHECK((w - cross_oracle(x, v)).norm() < 1e-12);
    CHECK((w - make_vec({0.0, 1.0, 0.0})).norm() < 1e-12);
    CHECK(lorentz_cross(x, x).norm() == doctest::Approx(0.0));

    // Double product against the component-formula oracle; for the
    // basepoint triple the oracle evaluates to -v.
    const Vec xxv = lorentz_cross(x, lorentz_cross(x, v));
    CHECK((xxv - cross_oracle(x, cross_oracle(x, v))).norm() < 1e-12);
    CHECK((xxv + v).norm() < 1e-12);

    std::mt19937 rng(19);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int rep = 0; rep < 30; ++rep) {
        Vec a(3), b(3);
        for (int i = 0; i < 3; ++i) {
            a[i] = unif(rng);
            b[i] = unif(rng);
        }
        const Vec c = lorentz_cross(a, b);
        CHECK(std::abs(mink_inner(c, a)) < 1e-12);
        CHECK(std::abs(mink_inner(c, b)) < 1e-12);
    }
    CHECK_THROWS_AS(lorentz_cross(Vec::Zero(4), Vec::Zero(4)), precondition_error);
}

TEST_CASE("boundary normalization") {
    const BoundaryPoint b(make_vec({2.0, 0.0, 2.0}));
    CHECK(b.v[2] == doctest::Approx(1.0));
    CHECK_THROWS_AS(BoundaryPoint(make_vec({1.0, 0.0, -1.0})), precondition_error);
    CHECK_THROWS_AS(BoundaryPoint(make_vec({1.0, 1.0, 1.0})), precondition_error);
}
