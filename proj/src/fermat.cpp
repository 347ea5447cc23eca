#include "hcg/fermat.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

namespace hcg {

namespace {

constexpr double kTwoPiOver3 = 2.0 * kPi / 3.0;

double mnorm(const Vec4& v) { return std::sqrt(std::max(0.0, minkowski_dot(v, v))); }

Vec4 project_tangent(const Vec4& x, const Vec4& v) { return v + minkowski_dot(v, x) * x; }

std::array<Vec4, 3> tangent_basis(const Vec4& x) {
    std::array<Vec4, 3> e;
    int k = 0;
    for (int i = 1; i <= 3 && k < 3; ++i) {
        Vec4 v = Vec4::Zero();
        v(i) = 1.0;
        v = project_tangent(x, v);
        for (int j = 0; j < k; ++j) v -= minkowski_dot(v, e[j]) * e[j];
        double n = mnorm(v);
        if (n > 1e-8) e[k++] = v / n;
    }
    return e;
}

Vec4 normalize_point(const Vec4& s) { return s / std::sqrt(-minkowski_dot(s, s)); }

// A target of the sum-of-distances objective: a point or a geodesic.
struct Target {
    bool is_point;
    Vec4 point;
    Geodesic geo;
};

struct Eval {
    double value;
    Vec4 grad;  // ambient tangent vector at x
};

// distance and unit tangent toward the nearest point of the target
std::pair<double, Vec4> toward(const Vec4& x, const Target& t) {
    Vec4 foot;
    double d;
    if (t.is_point) {
        foot = t.point;
        d = std::acosh(std::max(1.0, -minkowski_dot(x, foot)));
        if (d < 1e-6) d = dist_h3(from_hyperboloid(x), from_hyperboloid(foot));
    } else {
        Projection pr = dist_point_geodesic(from_hyperboloid(x), t.geo);
        foot = to_hyperboloid(pr.foot);
        d = pr.distance;
    }
    Vec4 v = log_map(x, foot);
    double n = mnorm(v);
    if (n < 1e-15) return {d, Vec4::Zero()};
    return {d, v / n};
}

Eval evaluate(const Vec4& x, const std::vector<Target>& ts) {
    Eval e{0.0, Vec4::Zero()};
    for (const Target& t : ts) {
        auto [d, u] = toward(x, t);
        e.value += d;
        e.grad -= u;
    }
    return e;
}

struct MinResult {
    Vec4 x;
    double value;
    int iterations;
};

// Damped Newton on the hyperboloid with a finite-difference Hessian from analytic gradients.
MinResult minimize_sum(Vec4 x, const std::vector<Target>& ts) {
    Eval cur = evaluate(x, ts);
    int it = 0;
    for (; it < 200; ++it) {
        auto e = tangent_basis(x);
        Eigen::Vector3d g;
        for (int k = 0; k < 3; ++k) g(k) = minkowski_dot(cur.grad, e[k]);
        if (g.norm() < 1e-13) break;
        const double h = 1e-6;
        Eigen::Matrix3d H;
        for (int k = 0; k < 3; ++k) {
            Vec4 xp = exp_map(x, h * e[k]), xm = exp_map(x, -h * e[k]);
            Eval ep = evaluate(xp, ts), em = evaluate(xm, ts);
            for (int l = 0; l < 3; ++l) {
                double gp = minkowski_dot(ep.grad, project_tangent(xp, e[l]));
                double gm = minkowski_dot(em.grad, project_tangent(xm, e[l]));
                H(l, k) = (gp - gm) / (2.0 * h);
            }
        }
        H = 0.5 * (H + H.transpose());
        Eigen::Vector3d dir;
        Eigen::LLT<Eigen::Matrix3d> llt(H);
        if (llt.info() == Eigen::Success)
            dir = -llt.solve(g);
        else
            dir = -g;
        if (dir.dot(g) >= 0) dir = -g;
        double slope = dir.dot(g);
        double alpha = 1.0;
        bool moved = false;
        Vec4 xn;
        Eval en;
        while (alpha > 1e-20) {
            Vec4 v = alpha * (dir(0) * e[0] + dir(1) * e[1] + dir(2) * e[2]);
            xn = exp_map(x, v);
            en = evaluate(xn, ts);
            if (en.value <= cur.value + 1e-4 * alpha * slope || alpha * dir.norm() < 1e-11) {
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;
        double step = alpha * dir.norm();
        if (en.value > cur.value) break;
        x = xn;
        cur = en;
        if (step < 1e-15) break;
    }
    return {x, cur.value, it};
}

Vec4 unit_along(const Geodesic& g, double s) {
    Vec4 p = to_hyperboloid(point_on(g, s));
    Vec4 q = to_hyperboloid(point_on(g, s + 1.0));
    Vec4 v = log_map(p, q);
    return v / mnorm(v);
}

Target geo_target(const Geodesic& g) { return {false, Vec4::Zero(), g}; }

// d/ds of the distance from point_on(g, s) to the target
double slope_along(const Geodesic& g, double s, const Target& t) {
    Vec4 x = to_hyperboloid(point_on(g, s));
    auto [d, u] = toward(x, t);
    (void)d;
    return -minkowski_dot(unit_along(g, s), u);
}

// root of an increasing function, bracketed by expanding around s0
double increasing_root(const std::function<double(double)>& f, double s0) {
    double lo = s0 - 1.0, hi = s0 + 1.0, step = 1.0;
    for (int i = 0; i < 200 && f(lo) > 0; ++i) {
        step *= 2.0;
        lo -= step;
    }
    step = 1.0;
    for (int i = 0; i < 200 && f(hi) < 0; ++i) {
        step *= 2.0;
        hi += step;
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double balance_of(const Vec4& x, const std::vector<Target>& ts) {
    Vec4 s = Vec4::Zero();
    for (const Target& t : ts) s += toward(x, t).second;
    return mnorm(s);
}

}  // namespace

std::array<double, 3> triangle_angles(const Triangle& t) {
    std::array<Vec4, 3> x;
    for (int i = 0; i < 3; ++i) x[i] = to_hyperboloid(t.v[i]);
    for (int i = 0; i < 3; ++i)
        if (dist_h3(t.v[i], t.v[(i + 1) % 3]) < 1e-12)
            throw Error(ErrorKind::DegenerateTriangle, "coincident vertices");
    std::array<double, 3> a;
    for (int i = 0; i < 3; ++i)
        a[i] = tangent_angle(log_map(x[i], x[(i + 1) % 3]), log_map(x[i], x[(i + 2) % 3]));
    for (int i = 0; i < 3; ++i)
        if (a[i] > kPi - 1e-12 || a[i] < 1e-12) throw Error(ErrorKind::DegenerateTriangle, "collinear vertices");
    return a;
}

TriangleClass classify_triangle(const Triangle& t) {
    TriangleClass c{TriangleShape::Acute2pi3, -1, triangle_angles(t)};
    for (int i = 0; i < 3; ++i)
        if (c.angles[i] >= kTwoPiOver3 - 1e-12) {
            c.shape = TriangleShape::Obtuse2pi3;
            c.vertex = i;
        }
    return c;
}

FermatResult fermat_point_triangle(const Triangle& t) {
    TriangleClass c = classify_triangle(t);
    if (c.shape == TriangleShape::Obtuse2pi3) {
        int j = c.vertex;
        double v = dist_h3(t.v[j], t.v[(j + 1) % 3]) + dist_h3(t.v[j], t.v[(j + 2) % 3]);
        return {t.v[j], v, j, 0, 0.0};
    }
    std::vector<Target> ts;
    Vec4 s = Vec4::Zero();
    for (const H3Point& p : t.v) {
        Vec4 x = to_hyperboloid(p);
        ts.push_back({true, x, {}});
        s += x;
    }
    MinResult m = minimize_sum(normalize_point(s), ts);
    return {from_hyperboloid(m.x), m.value, -1, m.iterations, balance_of(m.x, ts)};
}

void check_general_position(const GeodesicTriple& g, const Tol& tol) {
    std::array<Geodesic, 3> cp;
    try {
        for (int i = 0; i < 3; ++i) cp[i] = common_perpendicular(g[i], g[(i + 1) % 3], tol);
    } catch (const Error& e) {
        throw Error(ErrorKind::GenericityViolation, e.what());
    }
    if (same_geodesic(cp[0], cp[1], 1e-9, false) && same_geodesic(cp[1], cp[2], 1e-9, false))
        throw Error(ErrorKind::GenericityViolation, "all three geodesics are orthogonal to one geodesic");
}

double length_function(const GeodesicTriple& g, const H3Point& p) {
    double s = 0.0;
    for (const Geodesic& x : g) s += dist_point_geodesic(p, x).distance;
    return s;
}

H3Point perpendicular_foot(const Geodesic& g, const Geodesic& h) {
    Isometry n = normalizer(g);
    Geodesic k = mobius_apply(n, h);
    double r;
    if (k.start.is_inf() || k.end.is_inf())
        throw Error(ErrorKind::DegenerateConfiguration, "geodesics share an endpoint");
    r = std::sqrt(std::abs(k.start.value() * k.end.value()));
    return mobius_apply_interior(n.inverse(), H3Point(0.0, 0.0, r));
}

PlanarPoint planar_point(const GeodesicTriple& g, int j, const Tol& tol) {
    check_general_position(g, tol);
    const Geodesic& gj = g[j];
    int a = (j + 2) % 3, b = (j + 1) % 3;
    Target ta = geo_target(g[a]), tb = geo_target(g[b]);
    double s0 = 0.5 * (arclength_of(gj, perpendicular_foot(gj, common_perpendicular(gj, g[a], tol))) +
                       arclength_of(gj, perpendicular_foot(gj, common_perpendicular(gj, g[b], tol))));
    double s = increasing_root([&](double t) { return slope_along(gj, t, ta) + slope_along(gj, t, tb); }, s0);
    PlanarPoint r;
    r.s = s;
    r.point = point_on(gj, s);
    Projection pa = dist_point_geodesic(r.point, g[a]), pb = dist_point_geodesic(r.point, g[b]);
    r.value = pa.distance + pb.distance;
    r.feet = {pa.foot, pb.foot};
    Vec4 x = to_hyperboloid(r.point);
    Vec4 ua = log_map(x, to_hyperboloid(pa.foot)), ub = log_map(x, to_hyperboloid(pb.foot));
    Vec4 T = unit_along(gj, s);
    r.internal_angle = tangent_angle(ua, ub);
    r.base_angles = {tangent_angle(ua, -T), tangent_angle(ub, T)};
    return r;
}

namespace {

Eigen::Vector3d on_sphere(const ExtendedComplex& u) {
    if (u.is_inf()) return {0.0, 0.0, 1.0};
    cd z = u.value();
    double n = std::norm(z);
    return Eigen::Vector3d(2.0 * z.real(), 2.0 * z.imag(), n - 1.0) / (n + 1.0);
}

// Isometry moving the six endpoints towards a balanced position on the sphere, so that the
// solvers below work with coordinates of unit size
Isometry balancing_map(const GeodesicTriple& g) {
    Isometry t;
    for (int it = 0; it < 60; ++it) {
        Eigen::Vector3d m = Eigen::Vector3d::Zero();
        for (const Geodesic& x : g)
            m += on_sphere(mobius_apply_boundary(t, x.start)) + on_sphere(mobius_apply_boundary(t, x.end));
        m /= 6.0;
        double r = m.norm();
        if (r < 1e-3) break;
        Eigen::Vector3d d = m / r;
        Isometry rot;
        if (1.0 - d.z() > 1e-12) {
            cd w = cd(d.x(), d.y()) / (1.0 - d.z());  // rotate w to the north pole
            rot = Isometry::normalized((Mat2() << std::conj(w), 1.0, -1.0, w).finished());
        }
        double lam = std::sqrt((1.0 + r) / (1.0 - r));
        Isometry shrink(1.0 / std::sqrt(lam), 0.0, 0.0, std::sqrt(lam));
        t = shrink * rot * t;
    }
    return t;
}

GeodesicTriple moved(const Isometry& t, const GeodesicTriple& g) {
    return {mobius_apply(t, g[0]), mobius_apply(t, g[1]), mobius_apply(t, g[2])};
}

FermatResult fermat_point_balanced(const GeodesicTriple& g, const Tol& tol) {
    RightAngledHexagon hex = hexagon_of_triple(g[0], g[1], g[2], tol);
    if (hex.degenerate_flags[0] && hex.degenerate_flags[2] && hex.degenerate_flags[4]) {
        // all three orthogonal to one plane: the triangle case
        Triangle t(perpendicular_foot(g[0], hex.sides[1]), perpendicular_foot(g[1], hex.sides[3]),
                   perpendicular_foot(g[2], hex.sides[5]));
        return fermat_point_triangle(t);
    }
    std::array<PlanarPoint, 3> pp;
    for (int j = 0; j < 3; ++j) pp[j] = planar_point(g, j, tol);
    for (int j = 0; j < 3; ++j)
        if (pp[j].internal_angle >= kTwoPiOver3 - 1e-12) return {pp[j].point, pp[j].value, j, 0, 0.0};
    std::vector<Target> ts;
    Vec4 s = Vec4::Zero();
    for (int j = 0; j < 3; ++j) {
        ts.push_back(geo_target(g[j]));
        s += to_hyperboloid(pp[j].point);
    }
    MinResult m = minimize_sum(normalize_point(s), ts);
    return {from_hyperboloid(m.x), m.value, -1, m.iterations, balance_of(m.x, ts)};
}

std::vector<SteinerTree> candidates_balanced(const GeodesicTriple& g, const Tol& tol) {
    std::vector<SteinerTree> out;
    FermatResult f = fermat_point_balanced(g, tol);
    {
        SteinerTree t;
        t.kind = SteinerKind::FermatTripod;
        t.center = f.point;
        Vec4 x = to_hyperboloid(f.point);
        std::vector<Vec4> dirs;
        for (int j = 0; j < 3; ++j) {
            Projection p = dist_point_geodesic(f.point, g[j]);
            t.feet.push_back(p.foot);
            t.legs.push_back(p.distance);
            t.plain_length += p.distance;
            if (p.distance < 1e-9)
                t.degenerate_on_axis = true;
            else
                dirs.push_back(log_map(x, to_hyperboloid(p.foot)));
        }
        for (size_t i = 0; i < dirs.size(); ++i)
            for (size_t k = i + 1; k < dirs.size(); ++k) t.junction_angles.push_back(tangent_angle(dirs[i], dirs[k]));
        t.steiner_length = t.plain_length;
        out.push_back(t);
    }
    for (int j = 0; j < 3; ++j) {
        const Geodesic& gj = g[j];
        for (int flip = 0; flip < 2; ++flip) {
            int a = flip ? (j + 1) % 3 : (j + 2) % 3;
            int b = flip ? (j + 2) % 3 : (j + 1) % 3;
            Target ta = geo_target(g[a]), tb = geo_target(g[b]);
            double sa0 = arclength_of(gj, perpendicular_foot(gj, common_perpendicular(gj, g[a], tol)));
            double sb0 = arclength_of(gj, perpendicular_foot(gj, common_perpendicular(gj, g[b], tol)));
            // q2 at lower arclength joins g[a], q3 joins g[b]; the bar carries weight one half
            double s2 = increasing_root([&](double t) { return slope_along(gj, t, ta) - 0.5; }, sa0);
            double s3 = increasing_root([&](double t) { return slope_along(gj, t, tb) + 0.5; }, sb0);
            if (s2 > s3 + 1e-9) continue;
            SteinerTree t;
            t.kind = SteinerKind::AxisPath;
            t.axis_index = j;
            t.ends = {a, b};
            t.q2 = point_on(gj, s2);
            t.q3 = point_on(gj, std::max(s2, s3));
            Projection pa = dist_point_geodesic(t.q2, g[a]), pb = dist_point_geodesic(t.q3, g[b]);
            t.feet = {pa.foot, pb.foot};
            t.legs = {pa.distance, pb.distance};
            t.bar = std::max(0.0, s3 - s2);
            t.plain_length = pa.distance + pb.distance + t.bar;
            t.steiner_length = pa.distance + pb.distance + 0.5 * t.bar;
            t.degenerate_on_axis = t.bar < 1e-9;
            Vec4 x2 = to_hyperboloid(t.q2), x3 = to_hyperboloid(t.q3);
            t.junction_angles = {tangent_angle(log_map(x2, to_hyperboloid(pa.foot)), unit_along(gj, s2)),
                                 tangent_angle(log_map(x3, to_hyperboloid(pb.foot)), -unit_along(gj, s3))};
            out.push_back(t);
        }
    }
    return out;
}

}  // namespace

FermatResult fermat_point_triple(const GeodesicTriple& g, const Tol& tol) {
    check_general_position(g, tol);
    Isometry t = balancing_map(g);
    FermatResult r = fermat_point_balanced(moved(t, g), tol);
    r.point = mobius_apply_interior(t.inverse(), r.point);
    return r;
}

const char* to_string(SteinerKind k) { return k == SteinerKind::FermatTripod ? "FermatTripod" : "AxisPath"; }

std::vector<SteinerTree> steiner_candidates(const GeodesicTriple& g, const Tol& tol) {
    check_general_position(g, tol);
    Isometry t = balancing_map(g), ti = t.inverse();
    std::vector<SteinerTree> out = candidates_balanced(moved(t, g), tol);
    for (SteinerTree& c : out) {
        c.center = mobius_apply_interior(ti, c.center);
        c.q2 = mobius_apply_interior(ti, c.q2);
        c.q3 = mobius_apply_interior(ti, c.q3);
        for (H3Point& f : c.feet) f = mobius_apply_interior(ti, f);
    }
    return out;
}

std::vector<SteinerTree> steiner_tree(const GeodesicTriple& g, const Tol& tol) {
    std::vector<SteinerTree> c = steiner_candidates(g, tol);
    std::stable_sort(c.begin(), c.end(), [](const SteinerTree& a, const SteinerTree& b) {
        if (a.steiner_length != b.steiner_length) return a.steiner_length < b.steiner_length;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.axis_index < b.axis_index;
    });
    double best = c.front().steiner_length;
    std::vector<SteinerTree> out;
    for (const SteinerTree& t : c)
        if (t.steiner_length <= best + tol.tie) out.push_back(t);
    return out;
}

}  // namespace hcg
