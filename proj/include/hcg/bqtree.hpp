#pragma once

#include "hcg/charvar.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hcg {

/// Moves are named by the slot they replace: A <-> X, B <-> Y, C <-> Z.
char move_letter(Slot s);
Slot slot_of_move(char m);

struct TreeVertex {
    std::string address;              // never repeats its last letter
    std::array<std::string, 3> words; // reduced, product X Y Z = id
    TraceTriple traces;
    int depth() const { return static_cast<int>(address.size()); }
};

TreeVertex root_vertex(const TraceTriple& t);
TreeVertex neighbor(const TreeVertex& v, Slot s);
/// Walk a sequence of moves from the root.
TreeVertex vertex_at(const TraceTriple& t, const std::string& address);

/// Fibonacci function for the root edge e (the C edge): seeds 1, 1 on X, Y and 2 on Z, Z'.
long long fibonacci_value(const std::string& address, Slot s);

/// All vertices within the given distance of the root, breadth first.
std::vector<TreeVertex> enumerate_tree(const TraceTriple& t, int depth);

enum class OrientationKind { TraceModulus, RealLength, Angle, SteinerLength };
const char* to_string(OrientationKind k);

/// Value of the orientation function at (slot, vertex). rep is required for Angle and SteinerLength
/// and must realize the root triple.
double orientation_value(const TreeVertex& v, Slot s, OrientationKind kind, const RepresentationPair* rep,
                         const Tol& tol = {});

/// Edge between v and neighbor(v, s): returns the address of the vertex it points to.
std::string orient_edge(const TreeVertex& v, Slot s, OrientationKind kind, const RepresentationPair* rep,
                        const Tol& tol = {});

enum class BqStatus { Accept, RejectElliptic, RejectReducible, Indeterminate };
const char* to_string(BqStatus s);

struct BqVerdict {
    BqStatus status = BqStatus::Indeterminate;
    std::vector<std::string> subtree;   // Accept: explored region
    std::vector<std::string> sinks;     // Accept: trace-modulus sinks of the region
    std::string witness;                // RejectElliptic
    Slot witness_slot = Slot::X;
    std::vector<std::string> frontier;  // Indeterminate: unresolved vertices
    int depth_cap = 0;
    bool near_boundary = false;  // some trace within the guard band
};

BqVerdict bq_test(const TraceTriple& t, int depth_cap = 30, const Tol& tol = {});

struct AttractingSubtree {
    std::vector<std::string> vertices;  // sorted
    std::vector<std::string> sinks;     // sorted
};

/// Minimal subtree with every outside edge pointing into it. Throws CapExceeded.
/// Without rep the normal-form realization of t is used.
AttractingSubtree attracting_subtree(const TraceTriple& t, OrientationKind kind, int depth_cap = 30,
                                     const Tol& tol = {}, const RepresentationPair* rep = nullptr);

}  // namespace hcg
