#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <thread>

#ifndef HCG_DATA_DIR
#define HCG_DATA_DIR "data"
#endif

namespace hcg::cli {

namespace {

double parse_real(std::string_view s, const std::string& whole) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
        throw std::invalid_argument("malformed complex literal '" + whole + "'");
    return v;
}

}  // namespace

cd parse_complex(const std::string& in) {
    std::string s;
    for (char c : in)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    if (s.back() != 'i' && s.back() != 'j') {
        if (s == "+" || s == "-") throw std::invalid_argument("malformed complex literal '" + in + "'");
        return {parse_real(s, in), 0.0};
    }
    std::string_view body(s.data(), s.size() - 1);
    // split at the last sign that is not a leading sign or an exponent sign
    std::size_t cut = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            cut = k;
            break;
        }
    if (cut == std::string_view::npos) return {0.0, parse_real(body, in)};
    std::string_view re = body.substr(0, cut), im = body.substr(cut);
    if (re.empty() || re == "+" || re == "-") throw std::invalid_argument("malformed complex literal '" + in + "'");
    return {parse_real(re, in), parse_real(im, in)};
}

json to_json(cd z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const ExtendedComplex& u) { return u.is_inf() ? json("inf") : to_json(u.value()); }

json to_json(const Geodesic& g) { return json{{"start", to_json(g.start)}, {"end", to_json(g.end)}}; }

json to_json(const TraceTriple& t) { return json{{"x", to_json(t.x)}, {"y", to_json(t.y)}, {"z", to_json(t.z)}}; }

json to_json(const BqVerdict& v) {
    json j{{"status", to_string(v.status)}, {"depth_cap", v.depth_cap}, {"near_boundary", v.near_boundary}};
    switch (v.status) {
    case BqStatus::Accept:
        j["sinks"] = v.sinks;
        j["subtree_size"] = v.subtree.size();
        break;
    case BqStatus::RejectElliptic:
        j["witness"] = v.witness;
        j["witness_slot"] = to_string(v.witness_slot);
        break;
    case BqStatus::Indeterminate:
        j["frontier_size"] = v.frontier.size();
        break;
    case BqStatus::RejectReducible:
        break;
    }
    return j;
}

static json point_json(const H3Point& p) { return json::array({p.a, p.b, p.c}); }

json to_json(const SteinerTree& t) {
    json j{{"kind", to_string(t.kind)}, {"steiner_length", t.steiner_length}, {"legs", t.legs},
           {"junction_angles", t.junction_angles}, {"degenerate_on_axis", t.degenerate_on_axis}};
    json feet = json::array();
    for (const H3Point& p : t.feet) feet.push_back(point_json(p));
    j["feet"] = feet;
    if (t.kind == SteinerKind::FermatTripod) {
        j["center"] = point_json(t.center);
    } else {
        j["axis_index"] = t.axis_index;
        j["ends"] = t.ends;
        j["bar"] = t.bar;
        j["q2"] = point_json(t.q2);
        j["q3"] = point_json(t.q3);
    }
    return j;
}

json to_json(const CarrierGraph& g) {
    return json{{"combinatorics", to_string(g.combinatorics)},
                {"edge_lengths", g.edge_lengths},
                {"total_length", g.total_length},
                {"marking_words", g.marking},
                {"vertex_address", g.vertex_address},
                {"steiner_kind", to_string(g.source.kind)},
                {"identification_residual", g.identification_residual},
                {"sink_margin", g.sink_margin},
                {"margin_tied", g.margin_tied}};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int exit_code(BqStatus s) {
    switch (s) {
    case BqStatus::Accept: return 0;
    case BqStatus::Indeterminate: return 2;
    default: return 1;
    }
}

// ---------------------------------------------------------------------------

cd fixed_xy_z(cd x, cd y, cd mu) {
    cd b = x * y, c = x * x + y * y - mu;
    cd s = std::sqrt(b * b - 4.0 * c);
    cd z1 = 0.5 * (b + s), z2 = 0.5 * (b - s);
    double m1 = std::abs(z1), m2 = std::abs(z2);
    if (std::abs(m1 - m2) <= 1e-12 * std::max(1.0, m1)) return z1.real() >= z2.real() ? z1 : z2;
    return m1 > m2 ? z1 : z2;
}

static cd lerp(cd a, cd b, int k, int n) { return n <= 1 ? a : a + (b - a) * (static_cast<double>(k) / (n - 1)); }

TraceTriple scan_point(const ScanSpec& spec, int i, int j) {
    if (spec.mode == ScanSpec::Mode::Diagonal) {
        cd t(lerp(spec.lo.real(), spec.hi.real(), i, spec.width).real(),
             lerp(spec.lo.imag(), spec.hi.imag(), j, spec.height).real());
        return {t, t, t};
    }
    cd x = lerp(spec.x_lo, spec.x_hi, i, spec.width), y = lerp(spec.y_lo, spec.y_hi, j, spec.height);
    return {x, y, fixed_xy_z(x, y, spec.mu)};
}

ScanResult run_scan(const ScanSpec& spec) {
    if (spec.width < 1 || spec.height < 1) throw std::invalid_argument("scan resolution must be positive");
    for (cd c : {spec.lo, spec.hi, spec.x_lo, spec.x_hi, spec.y_lo, spec.y_hi, spec.mu})
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw std::invalid_argument("scan bounds must be finite");
    ScanResult r;
    r.width = spec.width;
    r.height = spec.height;
    std::size_t n = static_cast<std::size_t>(spec.width) * spec.height;
    r.points.resize(n);
    r.verdicts.resize(n);
    for (int j = 0; j < spec.height; ++j)
        for (int i = 0; i < spec.width; ++i) r.points[static_cast<std::size_t>(j) * spec.width + i] = scan_point(spec, i, j);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < n;) r.verdicts[k] = bq_test(r.points[k], spec.depth_cap, spec.tol).status;
    };
    unsigned workers = spec.threads > 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
    return r;
}

std::uint8_t pixel_value(BqStatus s) {
    switch (s) {
    case BqStatus::Accept: return 255;
    case BqStatus::Indeterminate: return 128;
    default: return 0;
    }
}

std::string scan_pgm(const ScanResult& r) {
    std::string out = "P5\n" + std::to_string(r.width) + " " + std::to_string(r.height) + "\n255\n";
    for (BqStatus s : r.verdicts) out += static_cast<char>(pixel_value(s));
    return out;
}

std::string scan_csv(const ScanResult& r) {
    std::string out = "i,j,x_re,x_im,y_re,y_im,z_re,z_im,verdict\r\n";
    for (int j = 0; j < r.height; ++j)
        for (int i = 0; i < r.width; ++i) {
            std::size_t k = static_cast<std::size_t>(j) * r.width + i;
            const TraceTriple& t = r.points[k];
            out += std::to_string(i) + "," + std::to_string(j);
            for (cd c : {t.x, t.y, t.z}) out += "," + csv_number(c.real()) + "," + csv_number(c.imag());
            out += "," + csv_field(to_string(r.verdicts[k])) + "\r\n";
        }
    return out;
}

// ---------------------------------------------------------------------------

std::string default_fixture_path() { return std::string(HCG_DATA_DIR) + "/presets.json"; }

json load_fixtures(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture file " + path);
    return json::parse(in);
}

GeodesicTriple preset_axes(const json& fixtures, const std::string& name) {
    const json& presets = fixtures.at("presets");
    if (!presets.contains(name)) throw std::invalid_argument("unknown preset '" + name + "'");
    const json& axes = presets.at(name).at("axes");
    if (axes.size() != 3) throw std::runtime_error("preset '" + name + "' needs three axes");
    GeodesicTriple g;
    for (int k = 0; k < 3; ++k) {
        const json& a = axes[k];
        if (a.contains("orthogonal_at")) {
            cd p(a["orthogonal_at"][0].get<double>(), a["orthogonal_at"][1].get<double>());
            g[k] = Geodesic(p, std::conj(p));
        } else {
            g[k] = Geodesic(cd(a["in_plane"][0].get<double>()), cd(a["in_plane"][1].get<double>()));
        }
    }
    return g;
}

RepresentationPair representation_from_axes(const GeodesicTriple& g) {
    Isometry rx = pi_rotation(g[0]), ry = pi_rotation(g[1]), rz = pi_rotation(g[2]);
    return {ry * rz, rz * rx};
}

const char* to_string(PlanePosition p) {
    switch (p) {
    case PlanePosition::Orthogonal: return "orthogonal";
    case PlanePosition::Contained: return "contained";
    default: return "other";
    }
}

PlanePosition plane_position(const Geodesic& g, double tol) {
    if (g.start.is_inf() || g.end.is_inf()) {
        cd u = g.start.is_inf() ? g.end.value() : g.start.value();
        return std::abs(u.imag()) <= tol * std::max(1.0, std::abs(u)) ? PlanePosition::Contained : PlanePosition::Other;
    }
    cd a = g.start.value(), b = g.end.value();
    double s = std::max({1.0, std::abs(a), std::abs(b)});
    if (std::abs(a.imag()) <= tol * s && std::abs(b.imag()) <= tol * s) return PlanePosition::Contained;
    if (std::abs(a - std::conj(b)) <= tol * s) return PlanePosition::Orthogonal;
    return PlanePosition::Other;
}

namespace {

// Where a geodesic orthogonal to the plane meets it.
H3Point plane_point(const Geodesic& g) {
    cd a = g.start.value(), b = g.end.value();
    return H3Point(0.5 * (a.real() + b.real()), 0.0, 0.5 * (std::abs(a.imag()) + std::abs(b.imag())));
}

// After sending g to (0, inf) the plane is a vertical half-plane through 0: the two sides of g in it
// are opposite rays, so the horizontal position decides the side.
cd side_of(const Geodesic& g, const H3Point& p) {
    H3Point q = mobius_apply_interior(normalizer(g), p);
    return {q.a, q.b};
}

cd side_of(const Geodesic& g, const ExtendedComplex& e) { return mobius_apply_boundary(normalizer(g), e).value(); }

// +1 same side, -1 opposite sides, 0 when either lies on g.
int compare_sides(cd u, cd v) {
    double s = std::abs(u) * std::abs(v);
    if (s < 1e-18) return 0;
    double c = (u * std::conj(v)).real() / s;
    return std::abs(c) < 1e-9 ? 0 : (c > 0 ? 1 : -1);
}

bool separates(const Geodesic& g, const Geodesic& h, const Geodesic& k) {
    return compare_sides(side_of(g, h.start), side_of(g, k.start)) < 0;
}

double angle_at(const H3Point& v, const H3Point& p, const H3Point& q) {
    Vec4 x = to_hyperboloid(v);
    return tangent_angle(log_map(x, to_hyperboloid(p)), log_map(x, to_hyperboloid(q)));
}

struct VertexGeometry {
    std::string address;
    AxesTriple axes;
    std::array<PlanePosition, 3> pos;
};

json positions_json(const std::array<PlanePosition, 3>& p) {
    return json::array({to_string(p[0]), to_string(p[1]), to_string(p[2])});
}

int count_of(const std::array<PlanePosition, 3>& p, PlanePosition q) {
    return static_cast<int>(std::count(p.begin(), p.end(), q));
}

json torus_checks(const RepresentationPair& rep, const TraceTriple& t, const std::vector<VertexGeometry>& minimal,
                  const std::vector<CarrierGraph>& min_graphs, int levels, json& details, bool& pass) {
    json checks;
    // 2pi/3-acute superbases by depth; finitely many means the deepest levels have none.
    // The triangle of the intersection points has cosh(side) = |trace|/2, so the test needs no axes;
    // the axes only cross-check it where they are resolvable.
    std::vector<int> per_depth(levels + 1, 0);
    json acute = json::array();
    int unresolved = 0;
    double angle_residual = 0.0;
    for (const TreeVertex& v : enumerate_tree(t, levels)) {
        std::array<double, 3> ch{std::abs(v.traces.x) / 2, std::abs(v.traces.y) / 2, std::abs(v.traces.z) / 2};
        std::array<double, 3> ang;
        for (int k = 0; k < 3; ++k) {
            double b = ch[(k + 1) % 3], c = ch[(k + 2) % 3];
            double cosv = (b * c - ch[k]) / std::sqrt((b * b - 1) * (c * c - 1));
            ang[k] = std::acos(std::clamp(cosv, -1.0, 1.0));
        }
        bool acute_here = *std::max_element(ang.begin(), ang.end()) < 2.0 * kPi / 3.0;
        if (acute_here) {
            ++per_depth[v.depth()];
            acute.push_back(v.address);
        }
        if (v.depth() > 3) continue;
        try {
            AxesTriple ax = axes_for_vertex(rep, v);
            Triangle tri(plane_point(ax.axes[0]), plane_point(ax.axes[1]), plane_point(ax.axes[2]));
            std::array<double, 3> geo = triangle_angles(tri);
            for (int k = 0; k < 3; ++k) angle_residual = std::max(angle_residual, std::abs(geo[k] - ang[k]));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::CommonFixedPoint && e.kind() != ErrorKind::DegenerateTriangle) throw;
            ++unresolved;
        }
    }
    details["acute_superbases"] = acute;
    details["acute_per_depth"] = per_depth;
    details["unresolved_vertices"] = unresolved;
    details["trace_angle_residual"] = angle_residual;
    checks["trace_angles_match_axes"] = angle_residual < 1e-6;
    bool finite = levels >= 2 && per_depth[levels] == 0 && per_depth[levels - 1] == 0;
    checks["acute_superbases_finite"] = finite;
    double worst = 0.0;
    for (std::size_t k = 0; k < minimal.size(); ++k) {
        const GeodesicTriple& g = minimal[k].axes.axes;
        Triangle tri(plane_point(g[0]), plane_point(g[1]), plane_point(g[2]));
        worst = std::max(worst, std::abs(2.0 * fermat_point_triangle(tri).value - min_graphs[k].total_length));
    }
    details["planar_fermat_residual"] = worst;
    checks["planar_fermat_match"] = worst < 1e-7;
    pass = pass && finite && worst < 1e-7 && angle_residual < 1e-6;
    return checks;
}

}  // namespace

json run_preset(const json& fixtures, const std::string& name, int depth_cap, const Tol& tol) {
    static const std::map<std::string, std::pair<int, int>> pattern{
        {"punctured-torus", {3, 0}}, {"three-holed-sphere", {0, 3}}, {"mobius", {1, 2}}, {"klein", {2, 1}}};
    auto it = pattern.find(name);
    if (it == pattern.end()) throw std::invalid_argument("unknown preset '" + name + "'");
    GeodesicTriple root = preset_axes(fixtures, name);
    RepresentationPair rep = representation_from_axes(root);
    TraceTriple t = traces_of(rep);

    json out;
    out["preset"] = name;
    out["fixture_note"] = fixtures.at("presets").at(name).value("note", "");
    out["fixture_values"] = "implementation choice";
    out["traces"] = to_json(t);
    out["mu"] = to_json(t.mu());
    json root_axes = json::array();
    for (const Geodesic& g : root) root_axes.push_back(to_json(g));
    out["root_axes"] = root_axes;

    BqVerdict bq = bq_test(t, depth_cap, tol);
    out["bq"] = to_json(bq);
    json checks;
    checks["bq_accept"] = bq.status == BqStatus::Accept;
    if (bq.status != BqStatus::Accept) {
        out["checks"] = checks;
        out["pass"] = false;
        return out;
    }

    std::vector<CarrierGraph> critical = find_critical_carriers(rep, t, depth_cap, tol);
    std::vector<CarrierGraph> minimal;
    for (const CarrierGraph& g : critical)
        if (g.total_length <= critical.front().total_length + tol.tie) minimal.push_back(g);
    json jc = json::array(), jm = json::array();
    for (const CarrierGraph& g : critical) jc.push_back(to_json(g));
    for (const CarrierGraph& g : minimal) jm.push_back(to_json(g));
    out["critical"] = jc;
    out["minimal"] = jm;
    out["minimal_count"] = minimal.size();

    auto geometry = [&](const std::string& a) {
        VertexGeometry vg;
        vg.address = a;
        vg.axes = axes_for_vertex(rep, vertex_at(t, a), tol);
        for (int k = 0; k < 3; ++k) vg.pos[k] = plane_position(vg.axes.axes[k]);
        return vg;
    };
    std::vector<VertexGeometry> crit_geo, min_geo;
    for (const CarrierGraph& g : critical) crit_geo.push_back(geometry(g.vertex_address));
    for (const CarrierGraph& g : minimal) min_geo.push_back(geometry(g.vertex_address));

    auto [n_orth, n_in] = it->second;
    bool pattern_ok = true;
    std::array<PlanePosition, 3> root_pos;
    for (int k = 0; k < 3; ++k) root_pos[k] = plane_position(root[k]);
    out["root_positions"] = positions_json(root_pos);
    auto fits = [&](const std::array<PlanePosition, 3>& p) {
        return count_of(p, PlanePosition::Orthogonal) == n_orth && count_of(p, PlanePosition::Contained) == n_in;
    };
    pattern_ok = fits(root_pos);
    json verts = json::array();
    for (const VertexGeometry& vg : crit_geo) {
        pattern_ok = pattern_ok && fits(vg.pos);
        json jv{{"address", vg.address}, {"positions", positions_json(vg.pos)}};
        json ax = json::array();
        for (const Geodesic& g : vg.axes.axes) ax.push_back(to_json(g));
        jv["axes"] = ax;
        verts.push_back(jv);
    }
    out["critical_vertices"] = verts;
    checks["axis_pattern"] = pattern_ok;
    checks["minimal_nonempty"] = !minimal.empty();
    bool pass = pattern_ok && !minimal.empty();
    json details;

    if (name == "punctured-torus") {
        checks["axes_orthogonal_to_plane"] = pattern_ok;
        bool count_ok = minimal.size() == 1 || minimal.size() == 2;
        checks["minimal_count_in_1_2"] = count_ok;
        pass = pass && count_ok;
        json more = torus_checks(rep, t, min_geo, minimal, std::min(depth_cap, 6), details, pass);
        checks.update(more);
    } else if (name == "three-holed-sphere") {
        checks["axes_coplanar"] = pattern_ok;
        auto config = [](const GeodesicTriple& g) {
            for (int k = 0; k < 3; ++k)
                if (separates(g[k], g[(k + 1) % 3], g[(k + 2) % 3])) return "Separating";
            return "NonSeparating";
        };
        details["root_configuration"] = config(root);
        std::string win = "NonSeparating";
        for (const VertexGeometry& vg : min_geo)
            if (std::string(config(vg.axes.axes)) != "NonSeparating") win = "Separating";
        details["winning_configuration"] = win;
        checks["winning_nonseparating"] = win == "NonSeparating";
        pass = pass && win == "NonSeparating";
    } else if (name == "mobius") {
        json per = json::array();
        bool all_second = true, angles_ok = true;
        for (const VertexGeometry& vg : min_geo) {
            int o = static_cast<int>(std::find(vg.pos.begin(), vg.pos.end(), PlanePosition::Orthogonal) - vg.pos.begin());
            const Geodesic &gu = vg.axes.axes[(o + 1) % 3], &gv = vg.axes.axes[(o + 2) % 3];
            H3Point v = plane_point(vg.axes.axes[o]);
            bool sep = compare_sides(side_of(gu, v), side_of(gu, gv.start)) < 0 ||
                       compare_sides(side_of(gv, v), side_of(gv, gu.start)) < 0;
            double ang = angle_at(v, dist_point_geodesic(v, gu).foot, dist_point_geodesic(v, gv).foot);
            all_second = all_second && !sep;
            // two minimal graphs only with right angles; a unique one has the smaller angle
            if (minimal.size() == 2) angles_ok = angles_ok && std::abs(ang - kPi / 2) < 1e-6;
            else angles_ok = angles_ok && ang <= kPi / 2 + 1e-9;
            per.push_back({{"address", vg.address},
                           {"orthogonal_slot", to_string(static_cast<Slot>(o))},
                           {"configuration", sep ? "Separating" : "NonSeparating"},
                           {"internal_angle", ang}});
        }
        details["minimal_vertices"] = per;
        checks["winning_nonseparating"] = all_second;
        checks["internal_angles_consistent"] = angles_ok;
        pass = pass && all_second && angles_ok;
    } else {
        json per = json::array();
        bool disjoint_all = true, split_all = true;
        for (const VertexGeometry& vg : min_geo) {
            int w = static_cast<int>(std::find(vg.pos.begin(), vg.pos.end(), PlanePosition::Contained) - vg.pos.begin());
            const Geodesic& gw = vg.axes.axes[w];
            const Geodesic& dw = vg.axes.delta_axes[w];
            H3Point vu = plane_point(vg.axes.axes[(w + 1) % 3]), vv = plane_point(vg.axes.axes[(w + 2) % 3]);
            json jv{{"address", vg.address}, {"contained_slot", to_string(static_cast<Slot>(w))}};
            jv["configuration"] = compare_sides(side_of(gw, vu), side_of(gw, vv)) < 0 ? "Separated" : "SameSide";
            jv["delta_through_v"] = dist_point_geodesic(vu, dw).distance < 1e-7 && dist_point_geodesic(vv, dw).distance < 1e-7;
            bool disjoint = false, split = false;
            try {
                Geodesic perp = common_perpendicular(dw, gw, tol);
                disjoint = true;
                jv["delta_gamma_distance"] = dist_h3(perpendicular_foot(dw, perp), perpendicular_foot(gw, perp));
                split = compare_sides(side_of(perp, vu), side_of(perp, vv)) <= 0;
            } catch (const Error&) {
            }
            jv["delta_gamma_disjoint"] = disjoint;
            jv["perpendicular_splits_v"] = split;
            disjoint_all = disjoint_all && disjoint;
            split_all = split_all && split;
            per.push_back(jv);
        }
        details["minimal_vertices"] = per;
        checks["delta_gamma_disjoint"] = disjoint_all;
        checks["perpendicular_splits_v"] = split_all;
        pass = pass && disjoint_all && split_all;
    }
    out["details"] = details;
    out["checks"] = checks;
    out["pass"] = pass;
    return out;
}

}  // namespace hcg::cli
