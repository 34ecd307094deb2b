#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

// Minkowski linear algebra and the hyperboloid model of H^{n+1}.
//
// Ambient space is R^{n+1,1} with the bilinear form
//   <x,y> = x_1 y_1 + ... + x_{n+1} y_{n+1} - x_{n+2} y_{n+2},
// the hyperboloid is <x,x> = -1 with positive last coordinate, and the
// boundary at infinity is realized as the slice of the positive null cone
// with last coordinate 1. Supported hypersurface dimensions are n in {1,2,3},
// i.e. ambient dimension n+2 in {3,4,5}.

namespace geodloom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class precondition_error : public std::runtime_error {
public:
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw precondition_error(what);
}

template <class D1, class D2>
double mink_inner(const Eigen::MatrixBase<D1>& u, const Eigen::MatrixBase<D2>& v) {
    if (u.size() != v.size())
        throw precondition_error("mink_inner: dimension mismatch");
    const Eigen::Index m = u.size() - 1;
    return u.head(m).dot(v.head(m)) - u[m] * v[m];
}

template <class D>
double mink_norm2(const Eigen::MatrixBase<D>& u) {
    return mink_inner(u, u);
}

inline Mat signature_matrix(int ambient_dim) {
    Vec d = Vec::Ones(ambient_dim);
    d[ambient_dim - 1] = -1.0;
    return d.asDiagonal();
}

// Rescale a timelike vector onto the hyperboloid (upper sheet).
inline Vec project_to_hyperboloid(Vec x) {
    const double q = mink_norm2(x);
    require(q < 0.0, "project_to_hyperboloid: vector is not timelike");
    x /= std::sqrt(-q);
    if (x[x.size() - 1] < 0.0) x = -x;
    return x;
}

// Project w off x (<x,x> = -1) and normalize to a unit spacelike vector.
inline Vec project_to_unit_tangent(const Vec& x, Vec w) {
    w += mink_inner(w, x) * x;
    const double q = mink_norm2(w);
    require(q > 0.0, "project_to_unit_tangent: degenerate tangent");
    return w / std::sqrt(q);
}

struct HPoint {
    Vec v;

    HPoint() = default;
    explicit HPoint(Vec coords, double tol = 1e-8) : v(std::move(coords)) {
        require(std::abs(mink_norm2(v) + 1.0) <= tol, "HPoint: <v,v> != -1");
        require(v[v.size() - 1] > 0.0, "HPoint: not on the upper sheet");
    }
    int ambient_dim() const { return static_cast<int>(v.size()); }
};

// Null direction normalized to last coordinate 1.
struct BoundaryPoint {
    Vec v;

    BoundaryPoint() = default;
    explicit BoundaryPoint(Vec dir, double tol = 1e-8) {
        const double last = dir[dir.size() - 1];
        require(last > 0.0, "BoundaryPoint: not on the positive null cone");
        v = dir / last;
        require(std::abs(mink_norm2(v)) <= tol * std::max(1.0, v.squaredNorm()),
                "BoundaryPoint: direction is not null");
    }
};

inline double boundary_distance(const BoundaryPoint& a, const BoundaryPoint& b) {
    return (a.v - b.v).norm();
}

inline bool is_isometry(const Mat& m, double tol = 1e-10) {
    if (m.rows() != m.cols()) return false;
    const Mat J = signature_matrix(static_cast<int>(m.rows()));
    if ((m.transpose() * J * m - J).norm() > tol * std::max(1.0, m.norm())) return false;
    if (m(m.rows() - 1, m.cols() - 1) <= 0.0) return false;  // time orientation
    return m.determinant() > 0.0;                            // space orientation
}

// Element of SO_0(n+1,1) acting on the hyperboloid model.
struct Isometry {
    Mat m;

    Isometry() = default;
    explicit Isometry(Mat mat, double tol = 1e-8) : m(std::move(mat)) {
        require(is_isometry(m, tol), "Isometry: matrix is not in SO_0(n+1,1)");
    }
    Vec apply(const Vec& x) const { return m * x; }
    HPoint apply(const HPoint& x) const { return HPoint(project_to_hyperboloid(m * x.v)); }
};

// Geodesic point cosh(t) x + sinh(t) v, reprojected onto the hyperboloid.
inline HPoint exp_point(const HPoint& x, const Vec& v, double t, double tol = 1e-8) {
    require(std::abs(mink_inner(x.v, v)) <= tol, "exp_point: <x,v> != 0");
    require(std::abs(mink_norm2(v) - 1.0) <= tol, "exp_point: v is not unit spacelike");
    return HPoint(project_to_hyperboloid(std::cosh(t) * x.v + std::sinh(t) * v));
}

// Endpoint at infinity of t -> exp_point(x, v, sign*t): the null direction x +- v.
inline BoundaryPoint geodesic_endpoint(const HPoint& x, const Vec& v, int sign, double tol = 1e-8) {
    require(sign == 1 || sign == -1, "geodesic_endpoint: sign must be +-1");
    require(std::abs(mink_inner(x.v, v)) <= tol && std::abs(mink_norm2(v) - 1.0) <= tol,
            "geodesic_endpoint: (x,v) is not a unit tangent pair");
    return BoundaryPoint(x.v + sign * v);
}

// Lorentzian cross product in R^{2,1}: <a x b, c> = det[a b c].
inline Vec lorentz_cross(const Vec& a, const Vec& b) {
    require(a.size() == 3 && b.size() == 3, "lorentz_cross: ambient dimension must be 3");
    Vec e(3);
    e[0] = a[1] * b[2] - a[2] * b[1];
    e[1] = a[2] * b[0] - a[0] * b[2];
    e[2] = -(a[0] * b[1] - a[1] * b[0]);
    return e;
}

inline HPoint basepoint(int ambient_dim) {
    Vec x = Vec::Zero(ambient_dim);
    x[ambient_dim - 1] = 1.0;
    return HPoint(std::move(x));
}

}  // namespace geodloom
