#pragma once

#include "hcg/hyp3.hpp"

#include <array>
#include <vector>

namespace hcg {

// Indices of vertices and geodesics are 0-based throughout.

struct Triangle {
    std::array<H3Point, 3> v;
    Triangle(const H3Point& a, const H3Point& b, const H3Point& c) : v{a, b, c} {}
};

enum class TriangleShape { Acute2pi3, Obtuse2pi3 };

struct TriangleClass {
    TriangleShape shape;
    int vertex = -1;  // the obtuse vertex, or -1
    std::array<double, 3> angles;
};

/// Internal angles; throws DegenerateTriangle for coincident or collinear vertices.
std::array<double, 3> triangle_angles(const Triangle& t);
TriangleClass classify_triangle(const Triangle& t);

struct FermatResult {
    H3Point point;
    double value = 0.0;
    int planar_index = -1;  // vertex or geodesic index when the minimizer sits there, else -1
    int iterations = 0;
    double balance_residual = 0.0;  // |sum of unit directions to the targets|
};

FermatResult fermat_point_triangle(const Triangle& t);

using GeodesicTriple = std::array<Geodesic, 3>;

/// Throws GenericityViolation unless pairwise disjoint, no shared endpoints, no common perpendicular.
void check_general_position(const GeodesicTriple& g, const Tol& tol = {});

/// L(p) = sum of distances from p to the three geodesics.
double length_function(const GeodesicTriple& g, const H3Point& p);

struct PlanarPoint {
    H3Point point;
    double s = 0.0;  // arclength parameter on g[j]
    double value = 0.0;
    double internal_angle = 0.0;
    std::array<H3Point, 2> feet;  // projections to g[j-1], g[j+1]
    std::array<double, 2> base_angles{};
};

PlanarPoint planar_point(const GeodesicTriple& g, int j, const Tol& tol = {});

/// Point where h meets g when h is orthogonal to g (foot of their common perpendicular in general).
H3Point perpendicular_foot(const Geodesic& g, const Geodesic& h);

FermatResult fermat_point_triple(const GeodesicTriple& g, const Tol& tol = {});

enum class SteinerKind { FermatTripod, AxisPath };
const char* to_string(SteinerKind k);

struct SteinerTree {
    SteinerKind kind = SteinerKind::FermatTripod;
    H3Point center;               // tripod
    std::vector<H3Point> feet;    // tripod: feet on g[0..2]; path: feet on g[ends[0]], g[ends[1]]
    int axis_index = -1;          // path
    std::array<int, 2> ends{-1, -1};
    H3Point q2, q3;               // path junctions on g[axis_index]
    std::vector<double> legs;     // leg lengths, same order as feet
    double bar = 0.0;             // |q2 q3|
    double steiner_length = 0.0;
    double plain_length = 0.0;
    std::vector<double> junction_angles;
    bool degenerate_on_axis = false;  // a junction of valence four
};

/// Every candidate: the Fermat tripod and each valid axis path (both end assignments).
std::vector<SteinerTree> steiner_candidates(const GeodesicTriple& g, const Tol& tol = {});
/// The minimizers; more than one when candidates tie within tol.tie.
std::vector<SteinerTree> steiner_tree(const GeodesicTriple& g, const Tol& tol = {});

}  // namespace hcg
