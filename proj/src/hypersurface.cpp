#include "geodloom/hypersurface.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace geodloom {

Vec unit_normal(const Vec& sigma, const Mat& dsigma, double orientation) {
    const int amb = static_cast<int>(sigma.size());
    const int n = static_cast<int>(dsigma.cols());
    require(n + 2 == amb, "unit_normal: not a hypersurface chart");
    const Mat J = signature_matrix(amb);
    Mat rows(n + 1, amb);
    rows.row(0) = (J * sigma).transpose();
    for (int k = 0; k < n; ++k) rows.row(k + 1) = (J * dsigma.col(k)).transpose();
    Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
    Vec nu = svd.matrixV().col(amb - 1);
    const double q = mink_norm2(nu);
    require(q > 0.0, "unit_normal: degenerate frame");
    nu /= std::sqrt(q);
    Mat frame(amb, amb);
    frame.leftCols(n) = dsigma;
    frame.col(n) = nu;
    frame.col(n + 1) = sigma;
    if (orientation * frame.determinant() < 0.0) nu = -nu;
    return nu;
}

ShapeNode fundamental_node(const Vec& sigma, const Mat& dsigma, const Vec& nu, const Mat& dnu,
                           double rank_tol) {
    ShapeNode out;
    out.sigma = sigma;
    out.dsigma = dsigma;
    out.nu = nu;
    out.dnu = dnu;
    const int n = static_cast<int>(dsigma.cols());
    Mat I(n, n), N(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            I(i, j) = mink_inner(dsigma.col(i), dsigma.col(j));
            N(i, j) = mink_inner(dsigma.col(i), dnu.col(j));
        }
    out.I = 0.5 * (I + I.transpose());
    Eigen::LLT<Mat> llt(out.I);
    require(llt.info() == Eigen::Success && out.I.determinant() > rank_tol,
            "fundamental_node: first fundamental form is not positive definite");
    // d sigma . B = -D nu, so in the chart basis B = -I^{-1} <dsigma, dnu>.
    out.B = -llt.solve(N);
    const Mat II = 0.5 * (N + N.transpose()) * -1.0;  // I(B.,.) symmetrized
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(II, out.I);
    require(es.info() == Eigen::Success, "fundamental_node: eigen solve failed");
    out.lambdas = es.eigenvalues();
    return out;
}

ShapeNode fundamental_data_at(const ImmersionChart& chart, const Vec& u) {
    require(!chart.tabulated(), "fundamental_data_at: analytic charts only");
    const Vec sigma = chart.value_at(u);
    const Mat dsigma = chart.jac_at(u);
    const Vec nu = unit_normal(sigma, dsigma, chart.orientation);
    const MapFn nu_map = [&chart](const Vec& p) {
        return unit_normal(chart.value_at(p), chart.jac_at(p), chart.orientation);
    };
    const Mat dnu = fd_jacobian(chart.domain, nu_map, u);
    return fundamental_node(sigma, dsigma, nu, dnu);
}

ShapeData fundamental_data(const ImmersionChart& chart) {
    ShapeData sd;
    sd.domain = chart.domain;
    sd.orientation = chart.orientation;
    const int total = chart.domain.node_count();
    sd.nodes.resize(total);
    if (chart.tabulated()) {
        std::vector<Vec> nus(total);
        std::vector<Mat> jacs(total);
        for (int i = 0; i < total; ++i) {
            jacs[i] = chart.jac_node(i);
            nus[i] = unit_normal(chart.values[i], jacs[i], chart.orientation);
        }
        for (int i = 0; i < total; ++i) {
            const Mat dnu = lattice_jacobian(chart.domain, nus, i);
            sd.nodes[i] = fundamental_node(chart.values[i], jacs[i], nus[i], dnu);
        }
    } else {
        for (int i = 0; i < total; ++i)
            sd.nodes[i] = fundamental_data_at(chart, chart.domain.node(i));
    }
    return sd;
}

double f_sigma(const Mat& B, double tol) {
    const int n = static_cast<int>(B.rows());
    const Mat P = Mat::Identity(n, n) + B;
    const Mat M = Mat::Identity(n, n) - B;
    const double dp = P.determinant();
    const double dm = M.determinant();
    require(dp > tol && dm > tol, "f_sigma: a principal curvature reaches +-1");
    return std::log(dp / dm) / (2.0 * n);
}

double f_sigma(const ShapeNode& node, double tol) { return f_sigma(node.B, tol); }

ImmersionChart normal_evolution(const ImmersionChart& chart, double t) {
    const double c = std::cosh(t), s = std::sinh(t);
    if (chart.tabulated()) {
        ShapeData sd = fundamental_data(chart);
        std::vector<Vec> vals(sd.nodes.size());
        for (size_t i = 0; i < sd.nodes.size(); ++i)
            vals[i] = project_to_hyperboloid(c * sd.nodes[i].sigma + s * sd.nodes[i].nu);
        return make_tabulated_chart(chart.domain, std::move(vals), chart.orientation);
    }
    ImmersionChart src = chart;  // capture by value, charts are immutable
    MapFn evolved = [src, c, s](const Vec& u) {
        const Vec sigma = src.value_at(u);
        const Vec nu = unit_normal(sigma, src.jac_at(u), src.orientation);
        return project_to_hyperboloid(c * sigma + s * nu);
    };
    return make_analytic_chart(chart.domain, std::move(evolved), nullptr, chart.orientation);
}

Mat shape_evolved(const Mat& B, double t) {
    const int n = static_cast<int>(B.rows());
    const double th = std::tanh(t);
    const Mat R = Mat::Identity(n, n) - th * B;
    Eigen::FullPivLU<Mat> lu(R);
    require(lu.isInvertible(), "shape_evolved: singular resolvent id - tanh(t) B");
    return lu.solve(B - th * Mat::Identity(n, n));
}

double sectional_curvature(const ShapeNode& node, const Vec& V, const Vec& W, double tol) {
    const auto ip = [&](const Vec& a, const Vec& b) { return a.dot(node.I * b); };
    require(std::abs(ip(V, V) - 1.0) <= tol && std::abs(ip(W, W) - 1.0) <= tol &&
                std::abs(ip(V, W)) <= tol,
            "sectional_curvature: pair is not I-orthonormal");
    const auto II = [&](const Vec& a, const Vec& b) { return a.dot(node.I * (node.B * b)); };
    return -1.0 + II(V, V) * II(W, W) - II(V, W) * II(V, W);
}

RankReport rank_report(const ShapeData& sd) {
    // Singular values of the Minkowski Gram I (positive definite on
    // validated charts), extremized over the grid.
    RankReport r;
    r.min_sv = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < sd.nodes.size(); ++i) {
        Eigen::SelfAdjointEigenSolver<Mat> es(sd.nodes[i].I);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        if (lo < r.min_sv) {
            r.min_sv = lo;
            r.worst_node = static_cast<int>(i);
        }
        r.max_sv = std::max(r.max_sv, hi);
    }
    return r;
}

UTBChart lift_chart(const ImmersionChart& chart) {
    UTBChart z;
    z.domain = chart.domain;
    if (chart.tabulated()) {
        ShapeData sd = fundamental_data(chart);
        z.values.resize(sd.nodes.size());
        for (size_t i = 0; i < sd.nodes.size(); ++i)
            z.values[i] = reproject(sd.nodes[i].sigma, sd.nodes[i].nu);
        return z;
    }
    ImmersionChart src = chart;
    z.map = [src](const Vec& u) {
        const Vec sigma = src.value_at(u);
        const Vec nu = unit_normal(sigma, src.jac_at(u), src.orientation);
        return reproject(sigma, nu);
    };
    return z;
}

}  // namespace geodloom
