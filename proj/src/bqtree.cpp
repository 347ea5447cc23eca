#include "hcg/bqtree.hpp"

#include "hcg/carrier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace hcg {

char move_letter(Slot s) { return static_cast<char>('A' + static_cast<int>(s)); }

Slot slot_of_move(char m) {
    if (m < 'A' || m > 'C') throw Error(ErrorKind::InvalidInput, std::string("bad move letter ") + m);
    return static_cast<Slot>(m - 'A');
}

TreeVertex root_vertex(const TraceTriple& t) { return {"", {"X", "Y", "yx"}, t}; }

TreeVertex neighbor(const TreeVertex& v, Slot s) {
    const auto& [X, Y, Z] = v.words;
    TreeVertex w;
    switch (s) {
        case Slot::X: w.words = {concat(Z, inverse_word(Y)), Y, inverse_word(Z)}; break;
        case Slot::Y: w.words = {inverse_word(X), concat(X, inverse_word(Z)), Z}; break;
        case Slot::Z: w.words = {X, inverse_word(Y), concat(Y, inverse_word(X))}; break;
    }
    w.traces = neighbor_trace(v.traces, s);
    char m = move_letter(s);
    w.address = v.address;
    if (!w.address.empty() && w.address.back() == m)
        w.address.pop_back();
    else
        w.address.push_back(m);
    return w;
}

TreeVertex vertex_at(const TraceTriple& t, const std::string& address) {
    TreeVertex v = root_vertex(t);
    for (char m : address) v = neighbor(v, slot_of_move(m));
    return v;
}

long long fibonacci_value(const std::string& address, Slot s) {
    std::array<long long, 3> f = {1, 1, 2};
    for (char m : address) {
        int i = static_cast<int>(slot_of_move(m));
        f[i] = f[(i + 1) % 3] + f[(i + 2) % 3];
    }
    return f[static_cast<int>(s)];
}

namespace {

constexpr Slot kSlots[3] = {Slot::X, Slot::Y, Slot::Z};

// slots whose move leads away from the root
std::vector<Slot> children(const TreeVertex& v) {
    std::vector<Slot> out;
    for (Slot s : kSlots)
        if (v.address.empty() || v.address.back() != move_letter(s)) out.push_back(s);
    return out;
}

// neighbor without the words, which grow exponentially with depth
TreeVertex trace_neighbor(const TreeVertex& v, Slot s) {
    TreeVertex w;
    w.traces = neighbor_trace(v.traces, s);
    char m = move_letter(s);
    w.address = v.address;
    if (!w.address.empty() && w.address.back() == m)
        w.address.pop_back();
    else
        w.address.push_back(m);
    return w;
}

Slot other(Slot s, int k) { return static_cast<Slot>((static_cast<int>(s) + k) % 3); }

bool in_band(cd t, double eps) {
    return std::abs(t.imag()) <= eps && t.real() >= -2.0 - eps && t.real() <= 2.0 + eps;
}

// closing test for the directed edge from v across slot s
bool escapes(const TreeVertex& v, Slot s, const TreeVertex& w, const Tol& tol) {
    return std::abs(v.traces[other(s, 1)]) > 2.0 + tol.eps && std::abs(v.traces[other(s, 2)]) > 2.0 + tol.eps &&
           std::abs(w.traces[s]) >= std::abs(v.traces[s]);
}

double real_length_of_trace(cd x) {
    Mat2 m;
    m << x, -1.0, 1.0, 0.0;
    return translation_lengths(Isometry(m)).real_part;
}

}  // namespace

std::vector<TreeVertex> enumerate_tree(const TraceTriple& t, int depth) {
    std::vector<TreeVertex> out{root_vertex(t)};
    for (size_t i = 0; i < out.size(); ++i) {
        if (out[i].depth() >= depth) continue;
        for (Slot s : children(out[i])) out.push_back(neighbor(out[i], s));
    }
    return out;
}

const char* to_string(OrientationKind k) {
    switch (k) {
        case OrientationKind::TraceModulus: return "TraceModulus";
        case OrientationKind::RealLength: return "RealLength";
        case OrientationKind::Angle: return "Angle";
        case OrientationKind::SteinerLength: return "SteinerLength";
    }
    return "?";
}

double orientation_value(const TreeVertex& v, Slot s, OrientationKind kind, const RepresentationPair* rep,
                         const Tol& tol) {
    switch (kind) {
        case OrientationKind::TraceModulus: return std::abs(v.traces[s]);
        case OrientationKind::RealLength: {
            if (rep) {
                Isometry m = word_image(*rep, v.words[static_cast<int>(s)]);
                if (classify_isometry(m, tol) != IsometryClass::Loxodromic)
                    throw Error(ErrorKind::NonLoxodromicPrimitive, "primitive image is not loxodromic");
                return translation_lengths(m, tol).real_part;
            }
            return real_length_of_trace(v.traces[s]);
        }
        case OrientationKind::Angle: {
            if (!rep) throw Error(ErrorKind::InvalidInput, "angle orientation needs a representation");
            // the restriction of rep to the vertex basis is conjugate to the normal form of its traces,
            // whose entries stay the size of the traces instead of growing with the word length
            RepresentationPair local = realize(v.traces, tol);
            TreeVertex base = root_vertex(v.traces);
            std::array<Geodesic, 3> delta;
            for (int i = 0; i < 3; ++i) {
                Isometry m = word_image(local, base.words[i]);
                if (classify_isometry(m, tol) != IsometryClass::Loxodromic)
                    throw Error(ErrorKind::NonLoxodromicPrimitive, "primitive image is not loxodromic");
                delta[i] = axis_of(m, tol);
            }
            Isometry a = pi_rotation(delta[static_cast<int>(other(s, 1))]);
            Isometry b = pi_rotation(delta[static_cast<int>(other(s, 2))]);
            cd l = std::acosh(-0.5 * (a * b).trace());
            return kPi - std::abs(l.imag());
        }
        case OrientationKind::SteinerLength: {
            if (!rep) throw Error(ErrorKind::InvalidInput, "Steiner orientation needs a representation");
            RepresentationPair local = realize(v.traces, tol);
            AxesTriple ax = axes_for_vertex(local, root_vertex(v.traces), tol);
            return steiner_tree(ax.axes, tol).front().steiner_length;
        }
    }
    return 0.0;
}

namespace {

bool tied(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

// true when the edge v -- neighbor(v, s) points at v, given both values
bool points_to_first(double a, double b, const std::string& va, const std::string& vb) {
    if (tied(a, b)) return va < vb;
    return a < b;
}

}  // namespace

std::string orient_edge(const TreeVertex& v, Slot s, OrientationKind kind, const RepresentationPair* rep,
                        const Tol& tol) {
    TreeVertex w = neighbor(v, s);
    double a = orientation_value(v, s, kind, rep, tol), b = orientation_value(w, s, kind, rep, tol);
    return points_to_first(a, b, v.address, w.address) ? v.address : w.address;
}

const char* to_string(BqStatus s) {
    switch (s) {
        case BqStatus::Accept: return "Accept";
        case BqStatus::RejectElliptic: return "RejectElliptic";
        case BqStatus::RejectReducible: return "RejectReducible";
        case BqStatus::Indeterminate: return "Indeterminate";
    }
    return "?";
}

BqVerdict bq_test(const TraceTriple& t, int depth_cap, const Tol& tol) {
    if (depth_cap < 1) throw Error(ErrorKind::InvalidInput, "depth cap must be at least 1");
    BqVerdict r;
    r.depth_cap = depth_cap;
    if (is_reducible(t, tol)) {
        r.status = BqStatus::RejectReducible;
        return r;
    }
    const double guard = 10.0 * tol.eps;
    auto check = [&](const TreeVertex& v, Slot s) {
        cd x = v.traces[s];
        if (in_band(x, tol.eps)) {
            r.status = BqStatus::RejectElliptic;
            r.witness = v.address;
            r.witness_slot = s;
            return false;
        }
        if (in_band(x, guard)) r.near_boundary = true;
        return true;
    };
    TreeVertex root = root_vertex(t);
    for (Slot s : kSlots)
        if (!check(root, s)) return r;
    const size_t max_vertices = 200000;
    std::vector<TreeVertex> seen{root};
    std::set<std::string> open;
    for (size_t i = 0; i < seen.size(); ++i) {
        TreeVertex v = seen[i];
        for (Slot s : children(v)) {
            TreeVertex w = trace_neighbor(v, s);
            if (!check(w, s)) return r;
            if (escapes(v, s, w, tol)) continue;
            if (w.depth() > depth_cap || seen.size() >= max_vertices) {
                open.insert(v.address);
                continue;
            }
            seen.push_back(w);
        }
    }
    for (const TreeVertex& v : seen) r.subtree.push_back(v.address);
    if (!open.empty() || r.near_boundary) {
        r.status = BqStatus::Indeterminate;
        r.frontier.assign(open.begin(), open.end());
        return r;
    }
    r.status = BqStatus::Accept;
    for (const TreeVertex& v : seen) {
        bool sink = true;
        for (Slot s : kSlots) {
            TreeVertex w = trace_neighbor(v, s);
            if (!points_to_first(std::abs(v.traces[s]), std::abs(w.traces[s]), v.address, w.address)) sink = false;
        }
        if (sink) r.sinks.push_back(v.address);
    }
    std::sort(r.subtree.begin(), r.subtree.end());
    return r;
}

AttractingSubtree attracting_subtree(const TraceTriple& t, OrientationKind kind, int depth_cap, const Tol& tol,
                                     const RepresentationPair* rep) {
    RepresentationPair own;
    if (!rep && (kind == OrientationKind::Angle || kind == OrientationKind::SteinerLength)) {
        own = realize(t, tol);
        rep = &own;
    }
    bool per_vertex = kind == OrientationKind::SteinerLength;
    std::map<std::string, TreeVertex> vertices;
    std::map<std::pair<std::string, int>, double> cache;
    std::function<const TreeVertex&(const std::string&)> get = [&](const std::string& a) -> const TreeVertex& {
        auto it = vertices.find(a);
        if (it != vertices.end()) return it->second;
        if (static_cast<int>(a.size()) > depth_cap + 3) throw Error(ErrorKind::CapExceeded, "depth cap exceeded");
        TreeVertex v = a.empty() ? root_vertex(t) : neighbor(get(a.substr(0, a.size() - 1)), slot_of_move(a.back()));
        return vertices.emplace(a, v).first->second;
    };
    auto value = [&](const std::string& a, Slot s) {
        auto key = std::make_pair(a, per_vertex ? 0 : static_cast<int>(s));
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        double v = orientation_value(get(a), s, kind, rep, tol);
        cache.emplace(key, v);
        return v;
    };
    auto nb = [&](const std::string& a, Slot s) {
        std::string b = a;
        char m = move_letter(s);
        if (!b.empty() && b.back() == m)
            b.pop_back();
        else {
            get(a);
            b.push_back(m);
        }
        get(b);
        return b;
    };
    // does the edge a -- nb(a, s) point at a?
    auto inward = [&](const std::string& a, Slot s) {
        std::string b = nb(a, s);
        return points_to_first(value(a, s), value(b, s), a, b);
    };
    // Far out the axes of adjacent primitives agree to machine precision and the Steiner solve can
    // fail. gamma_U and gamma_V are a(rho W)/2 apart and twice the Steiner length covers the three
    // pairwise paths, so L >= (a(rho X) + a(rho Y) + a(rho Z))/4 bounds the far value from below.
    // 0: points away from a, 1: points at a, 2: points at a by the bound (nothing computable beyond)
    auto inward_or_bound = [&](const std::string& a, Slot s) -> int {
        if (kind != OrientationKind::SteinerLength) return inward(a, s) ? 1 : 0;
        try {
            return inward(a, s) ? 1 : 0;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NonLoxodromicPrimitive) throw;
            const TreeVertex& w = get(nb(a, s));
            double lb = 0.0;
            for (Slot u : kSlots) lb += 0.25 * real_length_of_trace(w.traces[u]);
            if (lb > value(a, s)) return 2;
            throw;
        }
    };
    auto is_sink = [&](const std::string& a) {
        for (Slot s : kSlots)
            if (!inward(a, s)) return false;
        return true;
    };
    // every edge within `levels` beyond b (away from a) points back toward a
    std::function<bool(const std::string&, Slot, int)> beyond_inward = [&](const std::string& b, Slot came, int levels) {
        if (levels == 0) return true;
        for (Slot s : kSlots) {
            if (s == came) continue;
            int in = inward_or_bound(b, s);
            if (in == 0) return false;
            if (in == 1 && !beyond_inward(nb(b, s), s, levels - 1)) return false;
        }
        return true;
    };

    // descent to a sink
    std::string cur;
    for (int steps = 0;; ++steps) {
        if (steps > 4 * depth_cap + 10) throw Error(ErrorKind::CapExceeded, "descent did not reach a sink");
        std::string next;
        double best = 0.0;
        for (Slot s : kSlots) {
            if (inward(cur, s)) continue;
            std::string b = nb(cur, s);
            double v = value(b, s);
            if (next.empty() || v < best) next = b, best = v;
        }
        if (next.empty()) break;
        if (static_cast<int>(next.size()) > depth_cap) throw Error(ErrorKind::CapExceeded, "descent left the depth cap");
        cur = next;
    }

    // closure
    std::set<std::string> S{cur};
    std::deque<std::string> queue{cur};
    const size_t max_vertices = 100000;
    while (!queue.empty()) {
        std::string a = queue.front();
        queue.pop_front();
        for (Slot s : kSlots) {
            std::string b = nb(a, s);
            if (S.count(b)) continue;
            bool closed = inward_or_bound(a, s) != 0 && escapes(get(a), s, get(b), tol);
            if (closed && kind != OrientationKind::TraceModulus) closed = beyond_inward(b, s, 2);
            if (closed) continue;
            if (static_cast<int>(b.size()) > depth_cap || S.size() >= max_vertices)
                throw Error(ErrorKind::CapExceeded, "attracting subtree exceeds the depth cap");
            S.insert(b);
            queue.push_back(b);
        }
    }

    // prune leaves whose only edge into S points away from them
    for (bool changed = true; changed;) {
        changed = false;
        for (auto it = S.begin(); it != S.end();) {
            const std::string& a = *it;
            int deg = 0;
            Slot via = Slot::X;
            for (Slot s : kSlots)
                if (S.count(nb(a, s))) ++deg, via = s;
            if (S.size() > 1 && deg == 1 && !inward(a, via)) {
                it = S.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }

    AttractingSubtree out;
    out.vertices.assign(S.begin(), S.end());
    for (const std::string& a : out.vertices)
        if (is_sink(a)) out.sinks.push_back(a);
    return out;
}

}  // namespace hcg
