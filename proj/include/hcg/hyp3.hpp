#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace hcg {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec4 = Eigen::Vector4d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Single tolerance context threaded through every numeric decision.
struct Tol {
    double eps = 1e-9;       // real-interval inflation, classification
    double residual = 1e-9;  // algebraic identities
    double det = 1e-12;      // determinant check on construction
    double tie = 1e-7;       // equal-length band for Steiner trees and carriers
};

enum class ErrorKind {
    InvalidInput,
    NotAxial,
    Intersecting,
    Parallel,
    DegenerateConfiguration,
    NotADoubleCross,
    IdentityInput,
    CommonFixedPoint,
    GenericityViolation,
    ReducibleTriple,
    NonLoxodromicPrimitive,
    CapExceeded,
    DegenerateTriangle,
    DegenerateValenceFour,
    NotBqAccepted,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// ---------------------------------------------------------------------------
// Boundary points

class ExtendedComplex {
public:
    ExtendedComplex() = default;
    ExtendedComplex(cd z);
    ExtendedComplex(double re, double im = 0.0) : ExtendedComplex(cd(re, im)) {}
    static ExtendedComplex infinity();

    bool is_inf() const { return inf_; }
    cd value() const;  // throws on infinity

private:
    bool inf_ = false;
    cd z_{0.0, 0.0};
};

/// Chordal distance on the Riemann sphere; 0 iff equal, at most 1.
double chordal(const ExtendedComplex& u, const ExtendedComplex& v);
bool approx_equal(const ExtendedComplex& u, const ExtendedComplex& v, double tol);

// ---------------------------------------------------------------------------
// Points of H^3 (upper half-space)

struct H3Point {
    double a = 0.0, b = 0.0, c = 1.0;
    H3Point() = default;
    H3Point(double a_, double b_, double c_);
};

double dist_h3(const H3Point& p, const H3Point& q);

/// Hyperboloid model helpers (Minkowski signature -+++).
Vec4 to_hyperboloid(const H3Point& p);
H3Point from_hyperboloid(const Vec4& x);
double minkowski_dot(const Vec4& x, const Vec4& y);
Vec4 exp_map(const Vec4& p, const Vec4& v);
Vec4 log_map(const Vec4& p, const Vec4& q);
/// Angle at p between the tangent vectors u and v.
double tangent_angle(const Vec4& u, const Vec4& v);
/// Point at fraction t along the segment pq.
H3Point lerp_geodesic(const H3Point& p, const H3Point& q, double t);

// ---------------------------------------------------------------------------
// Isometries

class Isometry {
public:
    Isometry() : m_(Mat2::Identity()) {}
    /// Checks det = 1 within tol.det relative to the entry scale.
    explicit Isometry(const Mat2& m, const Tol& tol = {});
    Isometry(cd m11, cd m12, cd m21, cd m22, const Tol& tol = {});

    /// Rescales by a square root of the determinant.
    static Isometry normalized(const Mat2& m);
    static Isometry identity() { return Isometry(); }

    const Mat2& mat() const { return m_; }
    cd operator()(int i, int j) const { return m_(i, j); }
    cd trace() const { return m_.trace(); }
    Isometry inverse() const;
    Isometry operator-() const;

    friend Isometry operator*(const Isometry& a, const Isometry& b);

private:
    struct Raw {};
    Isometry(const Mat2& m, Raw) : m_(m) {}
    Mat2 m_;
};

enum class IsometryClass { Identity, Loxodromic, Parabolic, Elliptic };
const char* to_string(IsometryClass c);

ExtendedComplex mobius_apply_boundary(const Isometry& m, const ExtendedComplex& u);
H3Point mobius_apply_interior(const Isometry& m, const H3Point& p);
IsometryClass classify_isometry(const Isometry& m, const Tol& tol = {});

/// Residual max |m_ij - n_ij| allowing for the lift sign.
double projective_residual(const Isometry& m, const Isometry& n);

// ---------------------------------------------------------------------------
// Geodesics

struct Geodesic {
    ExtendedComplex start, end;
    Geodesic() = default;
    Geodesic(const ExtendedComplex& s, const ExtendedComplex& e);
    Geodesic reversed() const { return Geodesic(end, start); }
};

Geodesic mobius_apply(const Isometry& m, const Geodesic& g);
bool same_geodesic(const Geodesic& g, const Geodesic& h, double tol, bool oriented = true);

/// Isometry sending g to (0, inf) with start -> 0 and end -> inf.
Isometry normalizer(const Geodesic& g);

/// Point at signed arclength s along g; s = 0 is the foot of the normalizer's unit height.
H3Point point_on(const Geodesic& g, double s);
/// Arclength parameter of the orthogonal projection of p onto g.
double arclength_of(const Geodesic& g, const H3Point& p);

Isometry pi_rotation(const Geodesic& g);
Geodesic axis_of(const Isometry& m, const Tol& tol = {});
Geodesic common_perpendicular(const Geodesic& g1, const Geodesic& g2, const Tol& tol = {});
/// Common perpendicular, or the perpendicular through the crossing point when g1 and g2 meet.
/// Oriented as the axis of pi(g2) pi(g1).
Geodesic mutual_perpendicular(const Geodesic& g1, const Geodesic& g2, const Tol& tol = {});

struct Projection {
    double distance;
    H3Point foot;
};
Projection dist_point_geodesic(const H3Point& p, const Geodesic& g);

cd cross_ratio(const ExtendedComplex& u1, const ExtendedComplex& u2, const ExtendedComplex& u3,
               const ExtendedComplex& u4, const Tol& tol = {});

// ---------------------------------------------------------------------------
// Complex distances

struct ComplexDistance {
    double real_part = 0.0;
    double angle = 0.0;  // [0, 2pi)
    cd value() const { return {real_part, angle}; }
};

double wrap_angle(double a);  // into [0, 2pi)

ComplexDistance complex_distance(const Geodesic& axis, const Geodesic& g1, const Geodesic& g2,
                                 const Tol& tol = {});
ComplexDistance translation_lengths(const Isometry& m, const Tol& tol = {});

/// Half complex translation of r2*r1 as a lift-exact value with tr(r2 r1) = -2 cosh l.
/// Parabolic products give 0 or i*pi following the co-orientation convention.
cd half_length(const Isometry& r2, const Isometry& r1, const Tol& tol = {});

struct CoxeterTriple {
    Isometry r1, r2, r3;
};
CoxeterTriple coxeter_decomposition(const Isometry& xi, const Isometry& eta, const Tol& tol = {});

// ---------------------------------------------------------------------------
// Right-angled hexagons

struct RightAngledHexagon {
    std::array<Geodesic, 6> sides;
    std::array<ComplexDistance, 6> side_lengths;
    std::array<bool, 6> degenerate_flags{};
    /// Complex half-lengths used by the cosine rule (cos/cosh unified via complex cosh).
    std::array<cd, 6> l{};
};

/// Sides alternate g1, perp(g1,g2), g2, perp(g2,g3), g3, perp(g3,g1).
RightAngledHexagon hexagon_of_triple(const Geodesic& g1, const Geodesic& g2, const Geodesic& g3,
                                     const Tol& tol = {});

/// |cosh l_n - cosh l_{n-2} cosh l_{n+2} - sinh l_{n-2} sinh l_{n+2} cosh l_{n+3}|.
double cosine_rule_residual(const RightAngledHexagon& h, int n);

/// Same identity written in traces of pi-rotations; valid for any side orientations.
double cosine_rule_trace_residual(const std::array<Isometry, 6>& r, int n);

}  // namespace hcg
