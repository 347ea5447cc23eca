#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

using namespace hcg;
using namespace hcg::cli;

namespace {

constexpr int kUsage = 64;

struct Globals {
    double tol = -1.0;
    int depth = 30;
    bool json = false;

    Tol context() const {
        Tol t;
        if (tol > 0.0) t.eps = t.residual = tol;
        return t;
    }
};

TraceTriple parse_triple(const std::vector<std::string>& v) {
    return {parse_complex(v.at(0)), parse_complex(v.at(1)), parse_complex(v.at(2))};
}

std::string fmt(cd z) {
    char buf[64];
    if (z.imag() == 0.0) std::snprintf(buf, sizeof buf, "%.10g", z.real());
    else std::snprintf(buf, sizeof buf, "%.10g%+.10gi", z.real(), z.imag());
    return buf;
}

cd complex_of(const json& j) { return {j["re"].get<double>(), j["im"].get<double>()}; }

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << data;
}

ExtendedComplex parse_endpoint(const std::string& s) {
    if (s == "inf" || s == "oo") return ExtendedComplex::infinity();
    return parse_complex(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic carrier graphs of two-generator representations"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--tol", g.tol, "numeric tolerance (classification and residual checks)")->check(CLI::PositiveNumber);
    app.add_option("--depth", g.depth, "tree depth cap")->check(CLI::Range(1, 200));
    app.add_flag("--json", g.json, "JSON output");

    std::vector<std::string> triple;
    auto* bq = app.add_subcommand("bq", "Bowditch condition test for a trace triple");
    bq->add_option("traces", triple, "complex traces")->expected(3)->required();

    bool all_critical = false;
    auto* carrier = app.add_subcommand("carrier", "minimal carrier graphs");
    carrier->add_flag("--all-critical", all_critical, "every critical carrier, not just the shortest");
    carrier->add_option("traces", triple, "complex traces")->expected(3)->required();

    ScanSpec spec;
    std::string mode = "diagonal", lo = "2.5", hi = "3.5", xlo = "2.5", xhi = "3.5", ylo = "2.5", yhi = "3.5", mu = "0";
    std::string pgm_path, csv_path;
    auto* scan = app.add_subcommand("scan", "raster of BQ verdicts");
    scan->add_option("--mode", mode, "diagonal or fixed-xy")->check(CLI::IsMember({"diagonal", "fixed-xy"}));
    scan->add_option("--lo", lo, "diagonal: lower corner of t");
    scan->add_option("--hi", hi, "diagonal: upper corner of t");
    scan->add_option("--x-lo", xlo);
    scan->add_option("--x-hi", xhi);
    scan->add_option("--y-lo", ylo);
    scan->add_option("--y-hi", yhi);
    scan->add_option("--mu", mu, "fixed-xy: Markoff invariant");
    scan->add_option("--width", spec.width)->check(CLI::PositiveNumber);
    scan->add_option("--height", spec.height)->check(CLI::PositiveNumber);
    scan->add_option("--threads", spec.threads)->check(CLI::NonNegativeNumber);
    scan->add_option("--pgm", pgm_path, "PGM output file")->required();
    scan->add_option("--csv", csv_path, "CSV output file")->required();

    std::string preset_name, fixtures = default_fixture_path();
    auto* preset = app.add_subcommand("preset", "example families");
    preset->add_option("name", preset_name)
        ->required()
        ->check(CLI::IsMember({"punctured-torus", "three-holed-sphere", "mobius", "klein"}));
    preset->add_option("--fixtures", fixtures, "fixture file");

    std::vector<double> corners;
    auto* fermat = app.add_subcommand("fermat-triangle", "Fermat point of a triangle in upper half-space");
    fermat->add_option("coords", corners, "a b c for each vertex (c > 0)")->expected(9)->required();

    std::vector<std::string> ends;
    bool all_candidates = false;
    auto* steiner = app.add_subcommand("steiner", "Steiner tree of three geodesics");
    steiner->add_option("endpoints", ends, "start end for each geodesic (complex or inf)")->expected(6)->required();
    steiner->add_flag("--candidates", all_candidates, "list every candidate");

    int levels = 4;
    std::string tree_out;
    auto* dump = app.add_subcommand("tree-dump", "CSV of the superbasis tree around the root");
    dump->add_option("traces", triple, "complex traces")->expected(3)->required();
    dump->add_option("--levels", levels, "distance from the root")->check(CLI::Range(0, 16));
    dump->add_option("--out", tree_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    Tol tol = g.context();
    try {
        if (*bq) {
            BqVerdict v = bq_test(parse_triple(triple), g.depth, tol);
            if (g.json) std::cout << to_json(v).dump(2) << "\n";
            else {
                std::cout << to_string(v.status);
                if (v.status == BqStatus::RejectElliptic)
                    std::cout << " witness '" << v.witness << "' slot " << to_string(v.witness_slot);
                if (v.status == BqStatus::Accept && !v.sinks.empty()) std::cout << " sink '" << v.sinks.front() << "'";
                std::cout << "\n";
            }
            return exit_code(v.status);
        }
        if (*carrier) {
            TraceTriple t = parse_triple(triple);
            BqVerdict v = bq_test(t, g.depth, tol);
            if (v.status != BqStatus::Accept) {
                std::cerr << "error: not BQ-accepted (" << to_string(v.status) << ")\n";
                return 1;
            }
            RepresentationPair rep = realize(t, tol);
            std::vector<CarrierGraph> gs = all_critical ? find_critical_carriers(rep, t, g.depth, tol)
                                                        : minimal_carrier(rep, t, g.depth, tol);
            if (g.json) {
                json out = json::array();
                for (const CarrierGraph& c : gs) out.push_back(to_json(c));
                std::cout << out.dump(2) << "\n";
            } else {
                for (const CarrierGraph& c : gs) {
                    std::printf("%-8s total %.10f at '%s' (%s, %s, %s)", to_string(c.combinatorics), c.total_length,
                                c.vertex_address.c_str(), c.marking[0].c_str(), c.marking[1].c_str(),
                                c.marking[2].c_str());
                    std::printf(c.margin_tied ? " tied\n" : "\n");
                }
            }
            return 0;
        }
        if (*scan) {
            spec.mode = mode == "diagonal" ? ScanSpec::Mode::Diagonal : ScanSpec::Mode::FixedXY;
            spec.lo = parse_complex(lo);
            spec.hi = parse_complex(hi);
            spec.x_lo = parse_complex(xlo);
            spec.x_hi = parse_complex(xhi);
            spec.y_lo = parse_complex(ylo);
            spec.y_hi = parse_complex(yhi);
            spec.mu = parse_complex(mu);
            spec.depth_cap = g.depth;
            spec.tol = tol;
            ScanResult r = run_scan(spec);
            write_file(pgm_path, scan_pgm(r));
            write_file(csv_path, scan_csv(r));
            std::size_t acc = std::count(r.verdicts.begin(), r.verdicts.end(), BqStatus::Accept);
            std::size_t ind = std::count(r.verdicts.begin(), r.verdicts.end(), BqStatus::Indeterminate);
            if (g.json)
                std::cout << json{{"width", r.width}, {"height", r.height}, {"accept", acc}, {"indeterminate", ind},
                                  {"reject", r.verdicts.size() - acc - ind}}.dump(2) << "\n";
            else
                std::cout << r.width << "x" << r.height << ": " << acc << " accept, " << ind << " indeterminate, "
                          << r.verdicts.size() - acc - ind << " reject\n";
            return 0;
        }
        if (*preset) {
            json report = run_preset(load_fixtures(fixtures), preset_name, g.depth, tol);
            if (g.json) std::cout << report.dump(2) << "\n";
            else {
                const json& tr = report["traces"];
                std::cout << preset_name << ": traces (" << fmt(complex_of(tr["x"])) << ", " << fmt(complex_of(tr["y"]))
                          << ", " << fmt(complex_of(tr["z"])) << ")\n";
                if (report.contains("minimal"))
                    for (const json& c : report["minimal"])
                        std::printf("  minimal %s total %.10f at '%s'\n", c["combinatorics"].get<std::string>().c_str(),
                                    c["total_length"].get<double>(), c["vertex_address"].get<std::string>().c_str());
                for (auto& [k, v] : report["checks"].items()) std::cout << "  " << k << ": " << v.dump() << "\n";
                if (report.contains("details"))
                    for (auto& [k, v] : report["details"].items()) std::cout << "  " << k << ": " << v.dump() << "\n";
                std::cout << (report["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
            }
            return report["pass"].get<bool>() ? 0 : 1;
        }
        if (*fermat) {
            Triangle t(H3Point(corners[0], corners[1], corners[2]), H3Point(corners[3], corners[4], corners[5]),
                       H3Point(corners[6], corners[7], corners[8]));
            FermatResult f = fermat_point_triangle(t);
            TriangleClass c = classify_triangle(t);
            json out{{"point", json::array({f.point.a, f.point.b, f.point.c})},
                     {"value", f.value},
                     {"vertex", f.planar_index},
                     {"shape", c.shape == TriangleShape::Acute2pi3 ? "Acute2pi3" : "Obtuse2pi3"},
                     {"angles", c.angles}};
            if (g.json) std::cout << out.dump(2) << "\n";
            else
                std::printf("Fermat point (%.10g, %.10g, %.10g) value %.10f %s\n", f.point.a, f.point.b, f.point.c,
                            f.value, out["shape"].get<std::string>().c_str());
            return 0;
        }
        if (*steiner) {
            GeodesicTriple gt;
            for (int k = 0; k < 3; ++k) gt[k] = Geodesic(parse_endpoint(ends[2 * k]), parse_endpoint(ends[2 * k + 1]));
            std::vector<SteinerTree> ts = all_candidates ? steiner_candidates(gt, tol) : steiner_tree(gt, tol);
            if (g.json) {
                json out = json::array();
                for (const SteinerTree& t : ts) out.push_back(to_json(t));
                std::cout << out.dump(2) << "\n";
            } else {
                for (const SteinerTree& t : ts) std::printf("%-12s length %.10f\n", to_string(t.kind), t.steiner_length);
            }
            return 0;
        }
        if (*dump) {
            TraceTriple t = parse_triple(triple);
            std::string out = "address,depth,word_x,word_y,word_z,x_re,x_im,y_re,y_im,z_re,z_im\r\n";
            for (const TreeVertex& v : enumerate_tree(t, levels)) {
                out += csv_field(v.address) + "," + std::to_string(v.depth());
                for (const std::string& w : v.words) out += "," + csv_field(w);
                for (cd c : {v.traces.x, v.traces.y, v.traces.z}) out += "," + csv_number(c.real()) + "," + csv_number(c.imag());
                out += "\r\n";
            }
            if (tree_out.empty()) std::cout << out;
            else write_file(tree_out, out);
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.kind() == ErrorKind::NotBqAccepted) return 1;
        return e.kind() == ErrorKind::InvalidInput ? kUsage : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return kUsage;
}
