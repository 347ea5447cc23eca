#pragma once

#include "hcg/carrier.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hcg::cli {

using nlohmann::json;

/// "3", "-2.5", "0.5+0.1i", "2i", "-i", "1e-3-4e-2i". Throws std::invalid_argument.
cd parse_complex(const std::string& s);

json to_json(cd z);
json to_json(const ExtendedComplex& u);  // "inf" for the point at infinity
json to_json(const Geodesic& g);
json to_json(const TraceTriple& t);
json to_json(const BqVerdict& v);
json to_json(const SteinerTree& t);
json to_json(const CarrierGraph& g);

/// RFC 4180 field: quoted when it holds a comma, quote or line break.
std::string csv_field(const std::string& s);
std::string csv_number(double v);

int exit_code(BqStatus s);  // 0 Accept, 1 Reject, 2 Indeterminate

// ---------------------------------------------------------------------------
// Raster scan of the BQ verdict

struct ScanSpec {
    enum class Mode { Diagonal, FixedXY } mode = Mode::Diagonal;
    // Diagonal: t runs over the rectangle [lo, hi], real part along the width, imaginary along the height.
    cd lo{2.5, 0.0}, hi{3.5, 0.0};
    // FixedXY: x runs from x_lo to x_hi along the width, y from y_lo to y_hi along the height.
    cd x_lo{2.5, 0.0}, x_hi{3.5, 0.0}, y_lo{2.5, 0.0}, y_hi{3.5, 0.0};
    cd mu{0.0, 0.0};
    int width = 64, height = 1;
    int depth_cap = 30;
    int threads = 0;  // 0: hardware concurrency
    Tol tol;
};

/// Larger-modulus root of z^2 - xyz + (x^2 + y^2 - mu) = 0; ties go to the larger real part.
cd fixed_xy_z(cd x, cd y, cd mu);
TraceTriple scan_point(const ScanSpec& spec, int i, int j);

struct ScanResult {
    int width = 0, height = 0;
    std::vector<TraceTriple> points;  // row-major, row j = 0 first
    std::vector<BqStatus> verdicts;
};

ScanResult run_scan(const ScanSpec& spec);
std::string scan_pgm(const ScanResult& r);  // P5, 255 Accept, 0 Reject, 128 Indeterminate
std::string scan_csv(const ScanResult& r);
std::uint8_t pixel_value(BqStatus s);

// ---------------------------------------------------------------------------
// Example families

/// Built-in fixture file location.
std::string default_fixture_path();
json load_fixtures(const std::string& path);

/// Geodesic triple of the named preset (gamma_X, gamma_Y, gamma_Z at the root).
GeodesicTriple preset_axes(const json& fixtures, const std::string& name);
/// rho X = r_Y r_Z, rho Y = r_Z r_X.
RepresentationPair representation_from_axes(const GeodesicTriple& g);

enum class PlanePosition { Orthogonal, Contained, Other };
const char* to_string(PlanePosition p);
PlanePosition plane_position(const Geodesic& g, double tol = 1e-8);

/// Report with a "checks" object and an overall "pass" flag. Throws std::invalid_argument on unknown names.
json run_preset(const json& fixtures, const std::string& name, int depth_cap, const Tol& tol);

}  // namespace hcg::cli
