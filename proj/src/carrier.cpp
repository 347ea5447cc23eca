#include "hcg/carrier.hpp"

#include <algorithm>
#include <cmath>

namespace hcg {

namespace {

double rel_residual(const Mat2& a, const Mat2& b) {
    double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

AxesTriple axes_for_vertex(const RepresentationPair& rep, const TreeVertex& v, const Tol& tol) {
    if (is_reducible(traces_of(rep), tol))
        throw Error(ErrorKind::CommonFixedPoint, "reducible representation");
    AxesTriple a;
    a.vertex = v;
    std::array<Isometry, 3> rho;
    for (int i = 0; i < 3; ++i) {
        rho[i] = word_image(rep, v.words[i]);
        if (classify_isometry(rho[i], tol) != IsometryClass::Loxodromic)
            throw Error(ErrorKind::NonLoxodromicPrimitive, "primitive " + v.words[i] + " is not loxodromic");
        a.delta_axes[i] = axis_of(rho[i], tol);
    }
    // gamma_W is perpendicular to the translation axes of the other two slots (they may cross)
    try {
        for (int i = 0; i < 3; ++i) a.axes[i] = mutual_perpendicular(a.delta_axes[(i + 1) % 3], a.delta_axes[(i + 2) % 3], tol);
    } catch (const Error& e) {
        throw Error(ErrorKind::CommonFixedPoint, std::string("translation axes: ") + e.what());
    }
    for (int i = 0; i < 3; ++i) a.r[i] = pi_rotation(a.axes[i]);
    // r_Z keeps its canonical sign; r_Y and r_X follow from rho X = r_Y r_Z and rho Y = r_Z r_X
    if (rel_residual(rho[0].mat(), (a.r[1] * a.r[2]).mat()) > rel_residual(rho[0].mat(), (-(a.r[1] * a.r[2])).mat()))
        a.r[1] = -a.r[1];
    if (rel_residual(rho[1].mat(), (a.r[2] * a.r[0]).mat()) > rel_residual(rho[1].mat(), (-(a.r[2] * a.r[0])).mat()))
        a.r[0] = -a.r[0];
    a.residual = std::max({rel_residual(rho[0].mat(), (a.r[1] * a.r[2]).mat()),
                           rel_residual(rho[1].mat(), (a.r[2] * a.r[0]).mat()),
                           rel_residual(rho[2].mat(), (-(a.r[0] * a.r[1])).mat())});
    return a;
}

cd gamma_cosh(const AxesTriple& a, Slot w) {
    int i = static_cast<int>(w);
    Isometry u = pi_rotation(a.delta_axes[(i + 1) % 3]), v = pi_rotation(a.delta_axes[(i + 2) % 3]);
    return -0.5 * (u * v).trace();
}

const char* to_string(Combinatorics c) { return c == Combinatorics::Buckle ? "Buckle" : "Dumbbell"; }

CarrierGraph double_steiner(const SteinerTree& tree, const AxesTriple& axes) {
    if (tree.degenerate_on_axis)
        throw Error(ErrorKind::DegenerateValenceFour, "Steiner tree has a junction on an axis");
    CarrierGraph g;
    g.source = tree;
    g.marking = axes.vertex.words;
    g.vertex_address = axes.vertex.address;
    double res = 0.0;
    if (tree.kind == SteinerKind::FermatTripod) {
        g.combinatorics = Combinatorics::Buckle;
        for (double l : tree.legs) g.edge_lengths.push_back(2.0 * l);
        for (int i = 0; i < 3; ++i)
            res = std::max(res, dist_h3(mobius_apply_interior(axes.r[i], tree.feet[i]), tree.feet[i]));
        // rho(Y)^-1 r_Z p_X = p_X and rho(X) r_Z p_Y = p_Y
        Isometry rx = axes.r[0], ry = axes.r[1], rz = axes.r[2];
        Isometry rhoX = ry * rz, rhoY = rz * rx;
        res = std::max(res, dist_h3(mobius_apply_interior(rhoY.inverse() * rz, tree.feet[0]), tree.feet[0]));
        res = std::max(res, dist_h3(mobius_apply_interior(rhoX * rz, tree.feet[1]), tree.feet[1]));
    } else {
        g.combinatorics = Combinatorics::Dumbbell;
        g.edge_lengths = {2.0 * tree.legs[0], 2.0 * tree.legs[1], tree.bar};
        for (int k = 0; k < 2; ++k) {
            const Isometry& r = axes.r[tree.ends[k]];
            res = std::max(res, dist_h3(mobius_apply_interior(r, tree.feet[k]), tree.feet[k]));
        }
        const Isometry& r = axes.r[tree.axis_index];
        res = std::max({res, dist_h3(mobius_apply_interior(r, tree.q2), tree.q2),
                        dist_h3(mobius_apply_interior(r, tree.q3), tree.q3)});
    }
    for (double l : g.edge_lengths)
        if (!(l > 0.0)) throw Error(ErrorKind::DegenerateValenceFour, "carrier edge of zero length");
    g.identification_residual = res;
    for (double l : g.edge_lengths) g.total_length += l;
    return g;
}

std::vector<CarrierGraph> find_critical_carriers(const RepresentationPair& rep, const TraceTriple& t, int depth_cap,
                                                 const Tol& tol) {
    BqVerdict bq = bq_test(t, depth_cap, tol);
    if (bq.status != BqStatus::Accept)
        throw Error(ErrorKind::NotBqAccepted, std::string("bq test: ") + to_string(bq.status));
    TraceTriple rt = traces_of(rep);
    for (Slot s : {Slot::X, Slot::Y, Slot::Z})
        if (std::abs(rt[s] - t[s]) > 1e-8 * std::max(1.0, std::abs(t[s])))
            throw Error(ErrorKind::InvalidInput, "representation does not realize the trace triple");
    AttractingSubtree sub = attracting_subtree(t, OrientationKind::SteinerLength, depth_cap, tol, &rep);
    auto L_of = [&](const TreeVertex& v) {
        return orientation_value(v, Slot::X, OrientationKind::SteinerLength, &rep, tol);
    };
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); };
    // a sink and any neighbour of equal Steiner length that is itself a (weak) local minimum: the tie
    // rule picks one of them as the sink but both carry critical carriers
    std::vector<std::string> critical(sub.sinks.begin(), sub.sinks.end());
    for (const std::string& a : sub.sinks) {
        TreeVertex v = vertex_at(t, a);
        double L = L_of(v);
        for (Slot s : {Slot::X, Slot::Y, Slot::Z}) {
            TreeVertex w = neighbor(v, s);
            if (!same(L_of(w), L)) continue;
            bool minimum = true;
            for (Slot u : {Slot::X, Slot::Y, Slot::Z})
                if (u != s && L_of(neighbor(w, u)) < L - 1e-9 * std::max(1.0, L)) minimum = false;
            if (minimum && std::find(critical.begin(), critical.end(), w.address) == critical.end())
                critical.push_back(w.address);
        }
    }
    std::vector<CarrierGraph> out;
    for (const std::string& a : critical) {
        TreeVertex v = vertex_at(t, a);
        AxesTriple ax = axes_for_vertex(rep, v, tol);
        std::vector<SteinerTree> trees = steiner_tree(ax.axes, tol);
        double L = L_of(v);
        double margin = 1e300;
        for (Slot s : {Slot::X, Slot::Y, Slot::Z}) margin = std::min(margin, L_of(neighbor(v, s)) - L);
        for (const SteinerTree& tr : trees) {
            if (tr.degenerate_on_axis) continue;  // valence four: not critical
            CarrierGraph g = double_steiner(tr, ax);
            g.sink_margin = margin;
            g.margin_tied = same(margin + L, L);
            out.push_back(g);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const CarrierGraph& a, const CarrierGraph& b) {
        // lengths equal to 1e-9 count as equal so rounding noise cannot reorder ties
        long long ka = std::llround(a.total_length * 1e9), kb = std::llround(b.total_length * 1e9);
        if (ka != kb) return ka < kb;
        return a.vertex_address < b.vertex_address;
    });
    return out;
}

std::vector<CarrierGraph> minimal_carrier(const RepresentationPair& rep, const TraceTriple& t, int depth_cap,
                                          const Tol& tol) {
    std::vector<CarrierGraph> all = find_critical_carriers(rep, t, depth_cap, tol);
    std::vector<CarrierGraph> out;
    if (all.empty()) return out;
    double best = all.front().total_length;
    for (const CarrierGraph& g : all)
        if (g.total_length <= best + tol.tie) out.push_back(g);
    return out;
}

}  // namespace hcg
