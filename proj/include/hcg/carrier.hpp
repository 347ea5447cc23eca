#pragma once

#include "hcg/bqtree.hpp"
#include "hcg/fermat.hpp"

#include <vector>

namespace hcg {

struct AxesTriple {
    TreeVertex vertex;
    GeodesicTriple axes;                // gamma_X, gamma_Y, gamma_Z: axes of r_X, r_Y, r_Z
    std::array<Isometry, 3> r;          // r_X, r_Y, r_Z
    std::array<Geodesic, 3> delta_axes; // oriented translation axes of rho X, rho Y, rho Z
    double residual = 0.0;              // worst of the three product relations
};

/// rho X = r_Y r_Z, rho Y = r_Z r_X, rho Z = -r_X r_Y.
AxesTriple axes_for_vertex(const RepresentationPair& rep, const TreeVertex& v, const Tol& tol = {});

/// Complex length l(gamma_W) of the hexagon side between the delta axes of the other two slots:
/// 2 cosh l = -tr(r_delta(U) r_delta(V)).
cd gamma_cosh(const AxesTriple& a, Slot w);

enum class Combinatorics { Buckle, Dumbbell };
const char* to_string(Combinatorics c);

struct CarrierGraph {
    Combinatorics combinatorics = Combinatorics::Buckle;
    std::vector<double> edge_lengths;  // Buckle: three edges; Dumbbell: two loops then the bar
    double total_length = 0.0;
    std::array<std::string, 3> marking;
    std::string vertex_address;
    SteinerTree source;
    double identification_residual = 0.0;
    double sink_margin = 0.0;  // smallest increase of the Steiner length to a neighbour
    bool margin_tied = false;  // some neighbour has the same Steiner length
};

CarrierGraph double_steiner(const SteinerTree& tree, const AxesTriple& axes);

/// One carrier graph per Steiner tree at every sink of the Steiner-length orientation.
std::vector<CarrierGraph> find_critical_carriers(const RepresentationPair& rep, const TraceTriple& t,
                                                 int depth_cap = 30, const Tol& tol = {});
/// The critical carriers of least total length (ties within tol.tie).
std::vector<CarrierGraph> minimal_carrier(const RepresentationPair& rep, const TraceTriple& t, int depth_cap = 30,
                                          const Tol& tol = {});

}  // namespace hcg
