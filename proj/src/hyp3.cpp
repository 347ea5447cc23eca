#include "hcg/hyp3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hcg {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NotAxial: return "NotAxial";
        case ErrorKind::Intersecting: return "Intersecting";
        case ErrorKind::Parallel: return "Parallel";
        case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
        case ErrorKind::NotADoubleCross: return "NotADoubleCross";
        case ErrorKind::IdentityInput: return "IdentityInput";
        case ErrorKind::CommonFixedPoint: return "CommonFixedPoint";
        case ErrorKind::GenericityViolation: return "GenericityViolation";
        case ErrorKind::ReducibleTriple: return "ReducibleTriple";
        case ErrorKind::NonLoxodromicPrimitive: return "NonLoxodromicPrimitive";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
        case ErrorKind::DegenerateValenceFour: return "DegenerateValenceFour";
        case ErrorKind::NotBqAccepted: return "NotBqAccepted";
    }
    return "?";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

// ---------------------------------------------------------------------------

ExtendedComplex::ExtendedComplex(cd z) : z_(z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(ErrorKind::InvalidInput, "non-finite boundary point");
}

ExtendedComplex ExtendedComplex::infinity() {
    ExtendedComplex e;
    e.inf_ = true;
    return e;
}

cd ExtendedComplex::value() const {
    if (inf_) throw Error(ErrorKind::InvalidInput, "value() of infinity");
    return z_;
}

double chordal(const ExtendedComplex& u, const ExtendedComplex& v) {
    if (u.is_inf() && v.is_inf()) return 0.0;
    if (u.is_inf()) return 1.0 / std::sqrt(1.0 + std::norm(v.value()));
    if (v.is_inf()) return 1.0 / std::sqrt(1.0 + std::norm(u.value()));
    cd a = u.value(), b = v.value();
    return std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

bool approx_equal(const ExtendedComplex& u, const ExtendedComplex& v, double tol) {
    return chordal(u, v) <= tol;
}

// ---------------------------------------------------------------------------

H3Point::H3Point(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
    if (!(c > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
        throw Error(ErrorKind::InvalidInput, "point outside upper half-space");
}

double dist_h3(const H3Point& p, const H3Point& q) {
    double da = p.a - q.a, db = p.b - q.b, dc = p.c - q.c;
    double e = std::sqrt(da * da + db * db + dc * dc);
    return 2.0 * std::asinh(e / (2.0 * std::sqrt(p.c * q.c)));
}

Vec4 to_hyperboloid(const H3Point& p) {
    double r2 = p.a * p.a + p.b * p.b + p.c * p.c;
    return Vec4((r2 + 1.0) / (2.0 * p.c), p.a / p.c, p.b / p.c, (r2 - 1.0) / (2.0 * p.c));
}

H3Point from_hyperboloid(const Vec4& x) {
    // x0 - x3 = 1/c; recompute x0 from the spatial part to stay on the sheet
    double s2 = x(1) * x(1) + x(2) * x(2) + x(3) * x(3);
    double x0 = std::sqrt(1.0 + s2);
    double d = x0 - x(3);
    if (x(3) > 0) d = (1.0 + x(1) * x(1) + x(2) * x(2)) / (x0 + x(3));
    double c = 1.0 / d;
    return H3Point(x(1) * c, x(2) * c, c);
}

double minkowski_dot(const Vec4& x, const Vec4& y) {
    return -x(0) * y(0) + x(1) * y(1) + x(2) * y(2) + x(3) * y(3);
}

Vec4 exp_map(const Vec4& p, const Vec4& v) {
    double n = std::sqrt(std::max(0.0, minkowski_dot(v, v)));
    if (n < 1e-300) return p;
    Vec4 q = std::cosh(n) * p + (std::sinh(n) / n) * v;
    q(0) = std::sqrt(1.0 + q(1) * q(1) + q(2) * q(2) + q(3) * q(3));
    return q;
}

Vec4 log_map(const Vec4& p, const Vec4& q) {
    Vec4 u = q + minkowski_dot(p, q) * p;
    double n = std::sqrt(std::max(0.0, minkowski_dot(u, u)));
    if (n < 1e-300) return Vec4::Zero();
    double d = std::asinh(n);
    return (d / n) * u;
}

double tangent_angle(const Vec4& u, const Vec4& v) {
    double nu = std::sqrt(std::max(0.0, minkowski_dot(u, u)));
    double nv = std::sqrt(std::max(0.0, minkowski_dot(v, v)));
    double c = minkowski_dot(u, v) / (nu * nv);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

H3Point lerp_geodesic(const H3Point& p, const H3Point& q, double t) {
    Vec4 x = to_hyperboloid(p);
    return from_hyperboloid(exp_map(x, t * log_map(x, to_hyperboloid(q))));
}

// ---------------------------------------------------------------------------

namespace {

double entry_scale(const Mat2& m) {
    return std::max({std::abs(m(0, 0)), std::abs(m(0, 1)), std::abs(m(1, 0)), std::abs(m(1, 1)), 1.0});
}

}  // namespace

Isometry::Isometry(const Mat2& m, const Tol& tol) : m_(m) {
    for (int i = 0; i < 4; ++i)
        if (!std::isfinite(m(i).real()) || !std::isfinite(m(i).imag()))
            throw Error(ErrorKind::InvalidInput, "non-finite matrix entry");
    double s = entry_scale(m);
    if (std::abs(m.determinant() - 1.0) > tol.det * s * s)
        throw Error(ErrorKind::InvalidInput, "determinant differs from 1");
}

Isometry::Isometry(cd m11, cd m12, cd m21, cd m22, const Tol& tol)
    : Isometry((Mat2() << m11, m12, m21, m22).finished(), tol) {}

Isometry Isometry::normalized(const Mat2& m) {
    cd d = m.determinant();
    if (std::abs(d) == 0.0) throw Error(ErrorKind::InvalidInput, "singular matrix");
    return Isometry(Mat2(m / std::sqrt(d)), Raw{});
}

Isometry Isometry::inverse() const {
    Mat2 r;
    r << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
    return Isometry(r, Raw{});
}

Isometry Isometry::operator-() const { return Isometry(Mat2(-m_), Raw{}); }

Isometry operator*(const Isometry& a, const Isometry& b) {
    return Isometry(Mat2(a.m_ * b.m_), Isometry::Raw{});
}

const char* to_string(IsometryClass c) {
    switch (c) {
        case IsometryClass::Identity: return "Identity";
        case IsometryClass::Loxodromic: return "Loxodromic";
        case IsometryClass::Parabolic: return "Parabolic";
        case IsometryClass::Elliptic: return "Elliptic";
    }
    return "?";
}

ExtendedComplex mobius_apply_boundary(const Isometry& m, const ExtendedComplex& u) {
    cd a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    if (u.is_inf()) {
        if (std::abs(c) <= 1e-15 * std::abs(a)) return ExtendedComplex::infinity();
        return a / c;
    }
    cd w = u.value();
    cd num = a * w + b, den = c * w + d;
    if (std::abs(den) <= 1e-15 * (std::abs(c * w) + std::abs(d)) || std::abs(den) == 0.0)
        return ExtendedComplex::infinity();
    return num / den;
}

H3Point mobius_apply_interior(const Isometry& m, const H3Point& p) {
    cd a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    cd z(p.a, p.b);
    double t2 = p.c * p.c;
    cd czd = c * z + d;
    double den = std::norm(czd) + std::norm(c) * t2;
    cd w = ((a * z + b) * std::conj(czd) + a * std::conj(c) * t2) / den;
    return H3Point(w.real(), w.imag(), p.c / den);
}

IsometryClass classify_isometry(const Isometry& m, const Tol& tol) {
    double s = entry_scale(m.mat());
    Mat2 I = Mat2::Identity();
    double dp = (m.mat() - I).cwiseAbs().maxCoeff();
    double dm = (m.mat() + I).cwiseAbs().maxCoeff();
    if (std::min(dp, dm) <= tol.eps * s) return IsometryClass::Identity;
    cd t = m.trace();
    if (std::abs(t.imag()) <= tol.eps && std::abs(t.real()) <= 2.0 + tol.eps) {
        if (std::abs(t.real()) >= 2.0 - tol.eps) return IsometryClass::Parabolic;
        return IsometryClass::Elliptic;
    }
    return IsometryClass::Loxodromic;
}

double projective_residual(const Isometry& m, const Isometry& n) {
    double dp = (m.mat() - n.mat()).cwiseAbs().maxCoeff();
    double dm = (m.mat() + n.mat()).cwiseAbs().maxCoeff();
    return std::min(dp, dm);
}

// ---------------------------------------------------------------------------

Geodesic::Geodesic(const ExtendedComplex& s, const ExtendedComplex& e) : start(s), end(e) {
    if (chordal(s, e) <= 1e-12) throw Error(ErrorKind::InvalidInput, "geodesic endpoints coincide");
}

Geodesic mobius_apply(const Isometry& m, const Geodesic& g) {
    return Geodesic(mobius_apply_boundary(m, g.start), mobius_apply_boundary(m, g.end));
}

bool same_geodesic(const Geodesic& g, const Geodesic& h, double tol, bool oriented) {
    bool same = chordal(g.start, h.start) <= tol && chordal(g.end, h.end) <= tol;
    if (same || oriented) return same;
    return chordal(g.start, h.end) <= tol && chordal(g.end, h.start) <= tol;
}

Isometry normalizer(const Geodesic& g) {
    const cd I(0.0, 1.0);
    Mat2 m;
    if (g.start.is_inf()) {
        m << 0.0, I, I, -I * g.end.value();
        return Isometry::normalized(m);
    }
    if (g.end.is_inf()) {
        m << 1.0, -g.start.value(), 0.0, 1.0;
        return Isometry::normalized(m);
    }
    m << 1.0, -g.start.value(), 1.0, -g.end.value();
    return Isometry::normalized(m);
}

H3Point point_on(const Geodesic& g, double s) {
    return mobius_apply_interior(normalizer(g).inverse(), H3Point(0.0, 0.0, std::exp(s)));
}

double arclength_of(const Geodesic& g, const H3Point& p) {
    H3Point q = mobius_apply_interior(normalizer(g), p);
    return 0.5 * std::log(q.a * q.a + q.b * q.b + q.c * q.c);
}

Isometry pi_rotation(const Geodesic& g) {
    const cd I(0.0, 1.0);
    Mat2 m;
    if (g.start.is_inf()) {
        cd v = g.end.value();
        m << I, -2.0 * v * I, 0.0, -I;
    } else if (g.end.is_inf()) {
        cd u = g.start.value();
        m << -I, 2.0 * u * I, 0.0, I;
    } else {
        cd u = g.start.value(), v = g.end.value();
        cd k = I / (u - v);
        m << k * (u + v), -2.0 * k * u * v, 2.0 * k, -k * (u + v);
    }
    return Isometry(m);
}

namespace {

struct Eigenpair {
    cd lambda;
    ExtendedComplex fixed;
};

ExtendedComplex fixed_point_for(const Isometry& m, cd lambda) {
    cd a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    // eigenvector candidates (b, lambda - a) and (lambda - d, c)
    cd p0 = b, p1 = lambda - a;
    cd q0 = lambda - d, q1 = c;
    double np = std::abs(p0) + std::abs(p1), nq = std::abs(q0) + std::abs(q1);
    cd v0 = np >= nq ? p0 : q0;
    cd v1 = np >= nq ? p1 : q1;
    if (std::abs(v1) <= 1e-15 * std::abs(v0)) return ExtendedComplex::infinity();
    return v0 / v1;
}

// Returns (end, start) eigenpairs: end is attracting for loxodromics.
std::pair<Eigenpair, Eigenpair> eigen_split(const Isometry& m, IsometryClass cls) {
    cd t = m.trace();
    cd disc = std::sqrt(t * t - 4.0);
    cd l1 = 0.5 * (t + disc), l2 = 0.5 * (t - disc);
    cd big = std::abs(l1) >= std::abs(l2) ? l1 : l2;
    cd small = 1.0 / big;
    cd e = big, s = small;
    if (cls == IsometryClass::Elliptic) {
        cd sq = big * big;
        if (std::abs(sq.imag()) > 1e-12) {
            if (sq.imag() < 0) std::swap(e, s);
        } else if (big.imag() > 0) {
            // pi-rotation: lift decides orientation, end belongs to the eigenvalue -i
            std::swap(e, s);
        }
    }
    return {{e, fixed_point_for(m, e)}, {s, fixed_point_for(m, s)}};
}

}  // namespace

Geodesic axis_of(const Isometry& m, const Tol& tol) {
    IsometryClass cls = classify_isometry(m, tol);
    if (cls == IsometryClass::Identity || cls == IsometryClass::Parabolic)
        throw Error(ErrorKind::NotAxial, "isometry has no axis");
    auto [e, s] = eigen_split(m, cls);
    return Geodesic(s.fixed, e.fixed);
}

namespace {

bool shares_endpoint(const Geodesic& g1, const Geodesic& g2, double tol) {
    return chordal(g1.start, g2.start) <= tol || chordal(g1.start, g2.end) <= tol ||
           chordal(g1.end, g2.start) <= tol || chordal(g1.end, g2.end) <= tol;
}

}  // namespace

Geodesic mutual_perpendicular(const Geodesic& g1, const Geodesic& g2, const Tol& tol) {
    // only exact contact is refused here; nearly asymptotic pairs are still well defined
    if (shares_endpoint(g1, g2, 1e-15))
        throw Error(ErrorKind::Parallel, "geodesics share a boundary endpoint");
    // Send g1 to (0, inf); the perpendicular to (0, inf) and (c, d) has endpoints +-sqrt(cd).
    // Solving from the endpoints avoids the cancellation in pi(g2) pi(g1) when the geodesics are small.
    Geodesic u = g1.start.is_inf() ? g1.reversed() : g1;
    cd a = u.start.value();
    std::array<ExtendedComplex, 2> z;
    if (u.end.is_inf()) {
        cd c = g2.start.is_inf() ? cd(0) : g2.start.value() - a;
        cd d = g2.end.is_inf() ? cd(0) : g2.end.value() - a;
        cd w = std::sqrt(c * d);
        if (g2.start.is_inf() || g2.end.is_inf()) throw Error(ErrorKind::Parallel, "geodesics share a boundary endpoint");
        z = {ExtendedComplex(a + w), ExtendedComplex(a - w)};
    } else {
        cd b = u.end.value();
        auto img = [&](const ExtendedComplex& e) { return e.is_inf() ? cd(1) : (e.value() - a) / (e.value() - b); };
        cd w = std::sqrt(img(g2.start) * img(g2.end));
        auto back = [&](cd x) {
            return std::abs(1.0 - x) <= 1e-14 ? ExtendedComplex::infinity() : ExtendedComplex(b + (a - b) / (1.0 - x));
        };
        z = {back(w), back(-w)};
    }
    Geodesic g(z[0], z[1]);
    Isometry p = pi_rotation(g2) * pi_rotation(g1);
    IsometryClass cls = classify_isometry(p, tol);
    if (cls == IsometryClass::Identity || cls == IsometryClass::Parabolic) return g;  // orientation unresolvable
    Geodesic h = axis_of(p, tol);
    if (chordal(h.start, g.end) + chordal(h.end, g.start) < chordal(h.start, g.start) + chordal(h.end, g.end))
        g = g.reversed();
    return g;
}

Geodesic common_perpendicular(const Geodesic& g1, const Geodesic& g2, const Tol& tol) {
    if (shares_endpoint(g1, g2, tol.eps))
        throw Error(ErrorKind::Parallel, "geodesics share a boundary endpoint");
    Isometry p = pi_rotation(g2) * pi_rotation(g1);
    switch (classify_isometry(p, tol)) {
        case IsometryClass::Identity:
        case IsometryClass::Elliptic:
            throw Error(ErrorKind::Intersecting, "geodesics meet in H3");
        case IsometryClass::Parabolic:
            throw Error(ErrorKind::Parallel, "geodesics are asymptotic");
        case IsometryClass::Loxodromic:
            break;
    }
    return mutual_perpendicular(g1, g2, tol);
}

Projection dist_point_geodesic(const H3Point& p, const Geodesic& g) {
    Isometry n = normalizer(g);
    H3Point q = mobius_apply_interior(n, p);
    double h = std::hypot(q.a, q.b);
    double r = std::sqrt(h * h + q.c * q.c);
    double d = std::asinh(h / q.c);
    return {d, mobius_apply_interior(n.inverse(), H3Point(0.0, 0.0, r))};
}

cd cross_ratio(const ExtendedComplex& u1, const ExtendedComplex& u2, const ExtendedComplex& u3,
               const ExtendedComplex& u4, const Tol& tol) {
    const ExtendedComplex* u[4] = {&u1, &u2, &u3, &u4};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (chordal(*u[i], *u[j]) <= tol.eps)
                throw Error(ErrorKind::DegenerateConfiguration, "cross-ratio of coincident points");
    auto f = [](const ExtendedComplex& a, const ExtendedComplex& b) -> cd {
        if (a.is_inf() || b.is_inf()) return 1.0;
        return a.value() - b.value();
    };
    return f(u1, u3) * f(u2, u4) / (f(u1, u4) * f(u2, u3));
}

// ---------------------------------------------------------------------------

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

ComplexDistance complex_distance(const Geodesic& axis, const Geodesic& g1, const Geodesic& g2,
                                 const Tol& tol) {
    Isometry n = normalizer(axis);
    Geodesic h1 = mobius_apply(n, g1), h2 = mobius_apply(n, g2);
    auto check = [&](const Geodesic& h) {
        if (h.start.is_inf() || h.end.is_inf())
            throw Error(ErrorKind::NotADoubleCross, "geodesic shares an endpoint with the axis");
        cd v = h.start.value(), w = h.end.value();
        double scale = std::abs(v) + std::abs(w);
        if (std::abs(v + w) > 1e3 * tol.residual * scale)
            throw Error(ErrorKind::NotADoubleCross, "geodesic not orthogonal to the axis");
    };
    check(h1);
    check(h2);
    cd v = h1.end.value(), w = h2.end.value();
    return {std::log(std::abs(w)) - std::log(std::abs(v)), wrap_angle(std::arg(w / v))};
}

ComplexDistance translation_lengths(const Isometry& m, const Tol& tol) {
    IsometryClass cls = classify_isometry(m, tol);
    if (cls == IsometryClass::Identity) throw Error(ErrorKind::IdentityInput, "identity has no translation");
    if (cls == IsometryClass::Parabolic) return {0.0, 0.0};
    auto [e, s] = eigen_split(m, cls);
    (void)s;
    double a = 2.0 * std::log(std::abs(e.lambda));
    if (cls == IsometryClass::Elliptic) a = 0.0;
    return {a, wrap_angle(std::arg(e.lambda * e.lambda))};
}

cd half_length(const Isometry& r2, const Isometry& r1, const Tol& tol) {
    Isometry p = r2 * r1;
    IsometryClass cls = classify_isometry(p, tol);
    if (cls == IsometryClass::Loxodromic || cls == IsometryClass::Elliptic) {
        ComplexDistance l = complex_distance(axis_of(p, tol), axis_of(r1, tol), axis_of(r2, tol), tol);
        return l.value();
    }
    Geodesic g1 = axis_of(r1, tol), g2 = axis_of(r2, tol);
    if (cls == IsometryClass::Identity) {
        // r2 = +-r1: same geodesic, same or opposite orientation
        return same_geodesic(g1, g2, 1e-9) ? cd(0.0, 0.0) : cd(0.0, kPi);
    }
    // parabolic: co-oriented toward or away from the shared endpoint gives 0
    bool co = chordal(g1.end, g2.end) <= 1e-7 || chordal(g1.start, g2.start) <= 1e-7;
    return co ? cd(0.0, 0.0) : cd(0.0, kPi);
}

CoxeterTriple coxeter_decomposition(const Isometry& xi, const Isometry& eta, const Tol& tol) {
    // common fixed point test on the boundary
    auto fixed = [&](const Isometry& m) {
        std::vector<ExtendedComplex> f;
        IsometryClass c = classify_isometry(m, tol);
        if (c == IsometryClass::Identity) return f;
        auto [e, s] = eigen_split(m, c);
        f.push_back(e.fixed);
        f.push_back(s.fixed);
        return f;
    };
    auto fx = fixed(xi), fe = fixed(eta);
    if (fx.empty() || fe.empty()) throw Error(ErrorKind::CommonFixedPoint, "identity generator");
    for (auto& a : fx)
        for (auto& b : fe)
            if (chordal(a, b) <= 1e-9) throw Error(ErrorKind::CommonFixedPoint, "generators share a fixed point");

    // r2 inverts both: r2 * m = m^{-1} * r2, solved as a null vector
    Eigen::Matrix<cd, 8, 4> A = Eigen::Matrix<cd, 8, 4>::Zero();
    auto add = [&](const Isometry& m, int row0) {
        Mat2 M = m.mat() / entry_scale(m.mat());
        Mat2 Mi = m.inverse().mat() / entry_scale(m.mat());
        // unknown R = [p q; r s] flattened as (p, q, r, s)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                int row = row0 + 2 * i + j;
                for (int k = 0; k < 2; ++k) {
                    A(row, 2 * i + k) += M(k, j);
                    A(row, 2 * k + j) -= Mi(i, k);
                }
            }
    };
    add(xi, 0);
    add(eta, 4);
    Eigen::JacobiSVD<Eigen::Matrix<cd, 8, 4>> svd(A, Eigen::ComputeFullV);
    Eigen::Matrix<cd, 4, 1> v = svd.matrixV().col(3);
    Mat2 R;
    R << v(0), v(1), v(2), v(3);
    Isometry r2 = Isometry::normalized(R);

    // canonical sign: match the pi-rotation of the oriented perpendicular
    bool fixed_sign = false;
    IsometryClass cx = classify_isometry(xi, tol), ce = classify_isometry(eta, tol);
    bool axial = (cx == IsometryClass::Loxodromic || cx == IsometryClass::Elliptic) &&
                 (ce == IsometryClass::Loxodromic || ce == IsometryClass::Elliptic);
    if (axial) {
        Isometry p = pi_rotation(axis_of(eta, tol)) * pi_rotation(axis_of(xi, tol));
        IsometryClass cp = classify_isometry(p, tol);
        if (cp == IsometryClass::Loxodromic || cp == IsometryClass::Elliptic) {
            Isometry ref = pi_rotation(axis_of(p, tol));
            double dp = (r2.mat() - ref.mat()).cwiseAbs().maxCoeff();
            double dm = (r2.mat() + ref.mat()).cwiseAbs().maxCoeff();
            if (dm < dp) r2 = -r2;
            fixed_sign = true;
        }
    }
    if (!fixed_sign) {
        int k = 0;
        for (int i = 1; i < 4; ++i)
            if (std::abs(r2.mat()(i)) > std::abs(r2.mat()(k))) k = i;
        cd lead = r2.mat()(k);
        if (lead.real() < 0 || (lead.real() == 0 && lead.imag() < 0)) r2 = -r2;
    }
    Isometry r3 = -(xi * r2);
    Isometry r1 = -(r2 * eta);
    return {r1, r2, r3};
}

// ---------------------------------------------------------------------------

RightAngledHexagon hexagon_of_triple(const Geodesic& g1, const Geodesic& g2, const Geodesic& g3,
                                     const Tol& tol) {
    RightAngledHexagon h;
    std::array<Geodesic, 3> g = {g1, g2, g3};
    try {
        for (int i = 0; i < 3; ++i) h.sides[2 * i + 1] = common_perpendicular(g[i], g[(i + 1) % 3], tol);
    } catch (const Error& e) {
        throw Error(ErrorKind::GenericityViolation, e.what());
    }
    for (int i = 0; i < 3; ++i) {
        const Geodesic& prev = h.sides[(2 * i + 5) % 6];
        const Geodesic& next = h.sides[2 * i + 1];
        Geodesic s = g[i];
        ComplexDistance l = complex_distance(s, prev, next, tol);
        if (std::abs(l.real_part) <= 1e-9) {
            // feet coincide: orient so the angle from prev to next lies in (0, pi)
            h.degenerate_flags[2 * i] = true;
            if (l.angle > kPi) s = s.reversed();
        } else if (l.real_part < 0) {
            s = s.reversed();
        }
        h.sides[2 * i] = s;
    }
    for (int n = 0; n < 6; ++n) {
        h.side_lengths[n] = complex_distance(h.sides[n], h.sides[(n + 5) % 6], h.sides[(n + 1) % 6], tol);
        double re = h.side_lengths[n].real_part;
        double im = h.side_lengths[n].angle;
        if (im > kPi) im -= kTwoPi;
        h.l[n] = cd(h.degenerate_flags[n] ? 0.0 : re, im);
    }
    return h;
}

double cosine_rule_residual(const RightAngledHexagon& h, int n) {
    auto L = [&](int k) { return h.l[((k % 6) + 6) % 6]; };
    cd lhs = std::cosh(L(n));
    cd t1 = std::cosh(L(n - 2)) * std::cosh(L(n + 2));
    cd t2 = std::sinh(L(n - 2)) * std::sinh(L(n + 2)) * std::cosh(L(n + 3));
    double scale = std::max({1.0, std::abs(lhs), std::abs(t1), std::abs(t2)});
    return std::abs(lhs - t1 - t2) / scale;
}

double cosine_rule_trace_residual(const std::array<Isometry, 6>& r, int n) {
    auto R = [&](int k) -> const Isometry& { return r[((k % 6) + 6) % 6]; };
    cd a = -0.5 * (R(n + 1) * R(n - 1)).trace();
    cd b = 0.25 * (R(n - 1) * R(n - 3)).trace() * (R(n - 3) * R(n + 1)).trace();
    cd c = 0.125 * (R(n - 1) * R(n - 2) * R(n - 3)).trace() * (R(n - 3) * R(n + 2) * R(n + 1)).trace() *
           (R(n - 2) * R(n + 2)).trace();
    double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    return std::abs(a - b - c) / scale;
}

}  // namespace hcg
