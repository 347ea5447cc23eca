#pragma once

#include "hcg/hyp3.hpp"

#include <string>
#include <string_view>

namespace hcg {

enum class Slot { X = 0, Y = 1, Z = 2 };
const char* to_string(Slot s);

struct TraceTriple {
    cd x, y, z;
    TraceTriple() = default;
    TraceTriple(cd x_, cd y_, cd z_) : x(x_), y(y_), z(z_) {}
    cd operator[](Slot s) const { return s == Slot::X ? x : s == Slot::Y ? y : z; }
    cd& operator[](Slot s) { return s == Slot::X ? x : s == Slot::Y ? y : z; }
    cd mu() const;
};

cd mu_of(const TraceTriple& t);
/// |mu - 4| within tol.eps, scaled by the size of the terms.
bool is_reducible(const TraceTriple& t, const Tol& tol = {});
/// w -> (product of the other two) - w at the chosen slot.
TraceTriple neighbor_trace(const TraceTriple& t, Slot s);

struct RepresentationPair {
    Isometry xi, eta;
};

RepresentationPair realize(const TraceTriple& t, const Tol& tol = {});
TraceTriple traces_of(const RepresentationPair& p);
RepresentationPair conjugate(const RepresentationPair& p, const Isometry& g);

// Words over {X, x, Y, y}; lowercase is the inverse.
bool is_word(std::string_view w);
std::string reduce_word(std::string_view w);
std::string inverse_word(std::string_view w);
std::string concat(std::string_view a, std::string_view b);

Isometry word_image(const RepresentationPair& p, std::string_view word);

}  // namespace hcg
