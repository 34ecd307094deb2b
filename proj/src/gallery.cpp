#include "geodloom/gallery.hpp"

#include <random>

namespace geodloom {

namespace {

// Hyperbolic product coordinates on H^k inside R^{k,1}: k+1 components.
Vec hk_coords(const Vec& u) {
    const int k = static_cast<int>(u.size());
    Vec out(k + 1);
    double prefix = 1.0;
    for (int j = 0; j < k; ++j) {
        out[j] = prefix * std::sinh(u[j]);
        prefix *= std::cosh(u[j]);
    }
    out[k] = prefix;
    return out;
}

Mat hk_jac(const Vec& u) {
    const int k = static_cast<int>(u.size());
    Mat out = Mat::Zero(k + 1, k);
    for (int a = 0; a < k; ++a) {
        for (int j = 0; j < k + 1; ++j) {
            // out[j] = sinh(u_j) * prod_{i<j} cosh(u_i)  (cosh for j == k)
            if (j < a) continue;
            double term = 1.0;
            for (int i = 0; i < std::min(j, k); ++i)
                term *= (i == a) ? std::sinh(u[i]) : std::cosh(u[i]);
            if (j < k) term *= (j == a) ? std::cosh(u[j]) : std::sinh(u[j]);
            out(j, a) = term;
        }
    }
    return out;
}

Domain default_box(int n, double halfwidth, int samples) {
    std::vector<double> lo(n, -halfwidth), hi(n, halfwidth);
    std::vector<int> s(n, samples);
    return make_domain(lo, hi, s);
}

}  // namespace

ImmersionChart gallery_plane(int n, Domain d) {
    MapFn map = [n](const Vec& u) {
        Vec out = Vec::Zero(n + 2);
        out.tail(n + 1) = hk_coords(u);
        return out;
    };
    JacFn jac = [n](const Vec& u) {
        Mat out = Mat::Zero(n + 2, n);
        out.bottomRows(n + 1) = hk_jac(u);
        return out;
    };
    const double orient = (n % 2 == 0) ? +1.0 : -1.0;
    return make_analytic_chart(std::move(d), std::move(map), std::move(jac), orient);
}

ImmersionChart gallery_plane(int n) { return gallery_plane(n, default_box(n, 1.0, n > 2 ? 9 : 17)); }

ImmersionChart gallery_horosphere(int n, Domain d) {
    MapFn map = [n](const Vec& u) {
        Vec out = Vec::Zero(n + 2);
        const double q = 0.5 * u.squaredNorm();
        out[0] = q;                  // basepoint + sum u_i E_i + q * xi
        out.segment(1, n) = u;       // E_i = e_{i+1}
        out[n + 1] = 1.0 + q;        // xi = (1, 0, ..., 0, 1)
        return out;
    };
    JacFn jac = [n](const Vec& u) {
        Mat out = Mat::Zero(n + 2, n);
        for (int a = 0; a < n; ++a) {
            out(0, a) = u[a];
            out(1 + a, a) = 1.0;
            out(n + 1, a) = u[a];
        }
        return out;
    };
    // Orientation selecting nu = xi - sigma, for which B = +id.
    const double orient = (n % 2 == 0) ? +1.0 : -1.0;
    return make_analytic_chart(std::move(d), std::move(map), std::move(jac), orient);
}

ImmersionChart gallery_horosphere(int n) {
    return gallery_horosphere(n, default_box(n, 1.0, n > 2 ? 9 : 17));
}

ImmersionChart gallery_rcap(int n, double r, Domain d) {
    const double cr = std::cosh(r), sr = std::sinh(r);
    MapFn map = [n, cr, sr](const Vec& u) {
        Vec out = Vec::Zero(n + 2);
        out.tail(n + 1) = cr * hk_coords(u);
        out[0] = sr;
        return out;
    };
    JacFn jac = [n, cr](const Vec& u) {
        Mat out = Mat::Zero(n + 2, n);
        out.bottomRows(n + 1) = cr * hk_jac(u);
        return out;
    };
    // Orientation selecting the increasing-distance normal, for which the
    // principal curvatures are -tanh(r).
    const double orient = (n % 2 == 0) ? +1.0 : -1.0;
    return make_analytic_chart(std::move(d), std::move(map), std::move(jac), orient);
}

ImmersionChart gallery_rcap(int n, double r) {
    return gallery_rcap(n, r, default_box(n, 1.0, n > 2 ? 9 : 17));
}

UTBChart gallery_sphere_vertical(int n) {
    UTBChart z;
    if (n == 1) {
        z.domain = make_domain({0.0}, {2.0 * M_PI}, {64}, {true});
        z.map = [](const Vec& u) {
            Vec x = Vec::Zero(3), v(3);
            x[2] = 1.0;
            v << std::cos(u[0]), std::sin(u[0]), 0.0;
            return UTBPoint(std::move(x), std::move(v));
        };
    } else if (n == 2) {
        z.domain = make_domain({0.4, 0.0}, {M_PI - 0.4, 2.0 * M_PI}, {17, 32}, {false, true});
        z.map = [](const Vec& u) {
            Vec x = Vec::Zero(4), v(4);
            x[3] = 1.0;
            v << std::sin(u[0]) * std::cos(u[1]), std::sin(u[0]) * std::sin(u[1]),
                std::cos(u[0]), 0.0;
            return UTBPoint(std::move(x), std::move(v));
        };
    } else {
        throw precondition_error("gallery_sphere_vertical: n must be 1 or 2");
    }
    return z;
}

UTBChart gallery_normal_bundle_NQ(int n, int k) {
    require(0 < k && k < n, "gallery_normal_bundle_NQ: need 0 < k < n");
    const int amb = n + 2;
    const int nk = n - k;  // sphere factor dimension
    UTBChart z;
    std::vector<double> lo(n), hi(n);
    std::vector<int> samples(n);
    std::vector<bool> periodic(n, false);
    for (int a = 0; a < k; ++a) {
        lo[a] = -1.0;
        hi[a] = 1.0;
        samples[a] = (n > 2) ? 7 : 13;
    }
    if (nk == 1) {
        lo[k] = 0.0;
        hi[k] = 2.0 * M_PI;
        samples[k] = (n > 2) ? 16 : 32;
        periodic[k] = true;
    } else {
        lo[k] = 0.4;
        hi[k] = M_PI - 0.4;
        samples[k] = 7;
        lo[k + 1] = 0.0;
        hi[k + 1] = 2.0 * M_PI;
        samples[k + 1] = 16;
        periodic[k + 1] = true;
    }
    z.domain = make_domain(lo, hi, samples, periodic);
    z.map = [amb, k, nk](const Vec& u) {
        Vec x = Vec::Zero(amb), v = Vec::Zero(amb);
        x.tail(k + 1) = hk_coords(u.head(k));
        if (nk == 1) {
            v[0] = std::cos(u[k]);
            v[1] = std::sin(u[k]);
        } else {
            v[0] = std::sin(u[k]) * std::cos(u[k + 1]);
            v[1] = std::sin(u[k]) * std::sin(u[k + 1]);
            v[2] = std::cos(u[k]);
        }
        return UTBPoint(std::move(x), std::move(v));
    };
    return z;
}

namespace {

void constant_angle_frames(double s, double theta0, Vec& gamma, Vec& dgamma, Vec& w) {
    gamma = Vec(3);
    dgamma = Vec(3);
    w = Vec(3);
    gamma << std::sinh(s), 0.0, std::cosh(s);
    dgamma << std::cosh(s), 0.0, std::sinh(s);
    w << 0.0, 1.0, 0.0;
    (void)theta0;
}

}  // namespace

ImmersionChart gallery_constant_angle_curve(double theta0, Domain d) {
    require(theta0 > 0.0 && theta0 < M_PI, "constant_angle_curve: theta0 must be in (0, pi)");
    const double a = std::cos(theta0), b = std::sin(theta0);
    MapFn map = [a, b, theta0](const Vec& u) {
        Vec g, dg, w;
        constant_angle_frames(u[0], theta0, g, dg, w);
        const Vec v = a * dg + b * w;
        return Vec(std::cosh(a * u[0]) * g - std::sinh(a * u[0]) * v);
    };
    JacFn jac = [a, b, theta0](const Vec& u) {
        // sigma' = b cosh(a s) (b gamma' - a w)
        Vec g, dg, w;
        constant_angle_frames(u[0], theta0, g, dg, w);
        Mat out(3, 1);
        out.col(0) = b * std::cosh(a * u[0]) * (b * dg - a * w);
        return out;
    };
    // Orientation selecting nu = -sinh(a s) gamma + cosh(a s) v, for which
    // the curvature is tanh(a s).
    return make_analytic_chart(std::move(d), std::move(map), std::move(jac), +1.0);
}

ImmersionChart gallery_constant_angle_curve(double theta0, double domain_len) {
    return gallery_constant_angle_curve(theta0, make_domain({0.0}, {domain_len}, {65}));
}

UTBChart gallery_constant_angle_lift(double theta0, Domain d) {
    const double a = std::cos(theta0), b = std::sin(theta0);
    UTBChart z;
    z.domain = std::move(d);
    z.map = [a, b, theta0](const Vec& u) {
        Vec g, dg, w;
        constant_angle_frames(u[0], theta0, g, dg, w);
        return UTBPoint(g, a * dg + b * w);
    };
    return z;
}

namespace {

struct GluedCurveIntegrator {
    GluedCurveParams prm;
    double coth_r;

    double curvature(double s) const {
        const double k0 = std::tanh(prm.r);
        if (s <= prm.eps) return k0;
        if (s >= prm.t0) return coth_r;
        const auto bump = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
        const double x = (s - prm.eps) / (prm.t0 - prm.eps);
        const double w = bump(x) / (bump(x) + bump(1.0 - x));
        return k0 + (coth_r - k0) * w;
    }

    // Frame ODE sigma' = T, T' = sigma + k nu, nu' = -k T for the cap-based
    // branch sigma_plus, from arclength 0.
    void sigma_plus(double s, Vec& sigma, Vec& T, Vec& nu) const {
        sigma = Vec(3);
        T = Vec(3);
        nu = Vec(3);
        sigma << 0.0, std::sinh(prm.r), std::cosh(prm.r);
        T << 1.0, 0.0, 0.0;
        nu << 0.0, -std::cosh(prm.r), -std::sinh(prm.r);
        const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(s) / 5e-4)));
        const double h = s / steps;
        Vec y(9);
        y << sigma, T, nu;
        const auto rhs = [this](double t, const Vec& st) {
            Vec dy(9);
            const double k = curvature(t);
            dy.segment(0, 3) = st.segment(3, 3);
            dy.segment(3, 3) = st.segment(0, 3) + k * st.segment(6, 3);
            dy.segment(6, 3) = -k * st.segment(3, 3);
            return dy;
        };
        double t = 0.0;
        for (int i = 0; i < steps; ++i) {
            const Vec k1 = rhs(t, y);
            const Vec k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
            const Vec k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
            const Vec k4 = rhs(t + h, y + h * k3);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
        }
        sigma = y.segment(0, 3);
        T = y.segment(3, 3);
        nu = y.segment(6, 3);
    }

    UTBPoint eval(double s) const {
        Vec sigma, T, nu;
        if (s >= 0.0) {
            sigma_plus(s, sigma, T, nu);
            return geodesic_flow(reproject(sigma, nu), prm.r);
        }
        sigma_plus(-s, sigma, T, nu);
        // Point symmetry at gamma(0) = (0,0,1): diag(-1,-1,1).
        Vec rsigma(3), rnu(3);
        rsigma << -sigma[0], -sigma[1], sigma[2];
        rnu << nu[0], nu[1], -nu[2];  // -R0 nu
        return geodesic_flow(reproject(rsigma, rnu), -prm.r);
    }
};

}  // namespace

UTBChart gallery_cap_circle_glued_curve(const GluedCurveParams& params) {
    require(params.r > 0.0 && params.eps > 0.0 && params.t0 > params.eps &&
                params.tmax > params.t0,
            "cap_circle_glued_curve: need 0 < eps < t0 < tmax and r > 0");
    GluedCurveIntegrator integ{params, 1.0 / std::tanh(params.r)};
    UTBChart z;
    z.domain = make_domain({-params.tmax}, {params.tmax}, {params.samples});
    z.map = [integ](const Vec& u) { return integ.eval(u[0]); };
    return z;
}

Mat translation_matrix(double c, int amb) {
    Mat m = Mat::Identity(amb, amb);
    m(0, 0) = std::cosh(c);
    m(0, amb - 1) = std::sinh(c);
    m(amb - 1, 0) = std::sinh(c);
    m(amb - 1, amb - 1) = std::cosh(c);
    return m;
}

ImmersionChart perturb_chart(const ImmersionChart& base, unsigned seed, double amplitude,
                             int modes) {
    require(!base.tabulated(), "perturb_chart: analytic charts only");
    const int n = base.n();
    const int amb = n + 2;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<Vec> dirs(modes), freqs(modes);
    std::vector<double> phases(modes);
    for (int m = 0; m < modes; ++m) {
        Vec d(amb), k(n);
        for (int i = 0; i < amb; ++i) d[i] = unif(rng);
        for (int i = 0; i < n; ++i) k[i] = std::round(2.0 * unif(rng));
        dirs[m] = amplitude * d / std::max(1.0, d.norm());
        freqs[m] = k;
        phases[m] = M_PI * unif(rng);
    }
    ImmersionChart src = base;
    MapFn map = [src, dirs, freqs, phases, modes](const Vec& u) {
        Vec y = src.value_at(u);
        for (int m = 0; m < modes; ++m) y += std::sin(freqs[m].dot(u) + phases[m]) * dirs[m];
        return project_to_hyperboloid(std::move(y));
    };
    JacFn jac;
    if (src.jac) {
        jac = [src, dirs, freqs, phases, modes](const Vec& u) {
            Vec y = src.value_at(u);
            Mat dy = src.jac_at(u);
            for (int m = 0; m < modes; ++m) {
                y += std::sin(freqs[m].dot(u) + phases[m]) * dirs[m];
                dy += std::cos(freqs[m].dot(u) + phases[m]) * dirs[m] * freqs[m].transpose();
            }
            const double s = std::sqrt(-mink_norm2(y));
            Mat out(y.size(), dy.cols());
            for (int a = 0; a < dy.cols(); ++a) {
                const Vec w = dy.col(a);
                out.col(a) = w / s + y * (mink_inner(y, w) / (s * s * s));
            }
            return out;
        };
    }
    return make_analytic_chart(base.domain, std::move(map), std::move(jac), base.orientation);
}

GalleryEntry gallery(const std::string& name, const std::map<std::string, double>& params, int n) {
    const auto get = [&params](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    GalleryEntry e;
    if (name == "plane") {
        e.kind = "immersion";
        e.immersion = gallery_plane(n);
    } else if (name == "horosphere") {
        e.kind = "immersion";
        e.immersion = gallery_horosphere(n);
    } else if (name == "rcap") {
        e.kind = "immersion";
        e.immersion = gallery_rcap(n, get("r", 0.5));
    } else if (name == "sphere_vertical") {
        e.kind = "utb";
        e.utb = gallery_sphere_vertical(n);
    } else if (name == "normal_bundle_NQ") {
        e.kind = "utb";
        e.utb = gallery_normal_bundle_NQ(n, static_cast<int>(get("k", 1.0)));
    } else if (name == "constant_angle_curve") {
        require(n == 1, "constant_angle_curve: n must be 1");
        e.kind = "immersion";
        e.immersion = gallery_constant_angle_curve(get("theta0", M_PI / 4.0), get("length", 1.0));
    } else if (name == "cap_circle_glued_curve") {
        require(n == 1, "cap_circle_glued_curve: n must be 1");
        GluedCurveParams p;
        p.r = get("r", p.r);
        p.eps = get("eps", p.eps);
        p.t0 = get("t0", p.t0);
        p.tmax = get("tmax", p.tmax);
        e.kind = "utb";
        e.utb = gallery_cap_circle_glued_curve(p);
    } else {
        throw precondition_error("gallery: unknown chart name '" + name + "'");
    }
    return e;
}

std::vector<std::string> gallery_names() {
    return {"plane",     "horosphere",           "rcap",
            "sphere_vertical", "normal_bundle_NQ", "constant_angle_curve",
            "cap_circle_glued_curve"};
}

}  // namespace geodloom
