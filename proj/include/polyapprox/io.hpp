#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "polyapprox/approximator.hpp"
#include "polyapprox/curve.hpp"
#include "polyapprox/metrics.hpp"
#include "polyapprox/optimal.hpp"
#include "polyapprox/transforms.hpp"

namespace polyapprox {

inline constexpr int kSchemaVersion = 1;

enum class CurveFormat { chaincode, csv, pbm };

// Parses a --format value; anything unknown is a usage error.
CurveFormat parse_format(const std::string& name);

// Infers the format from the file extension (.chain/.cc, .csv, .pbm/.pgm).
CurveFormat infer_format(const std::filesystem::path& path);

// Loads and (for closed curves) canonicalizes a curve. invert flips
// raster foreground for white-on-black masks.
DigitalCurve load_curve(const std::filesystem::path& path, CurveFormat format,
                        bool invert = false);

// PBM P1/P4; PGM P2/P5 thresholded at half of maxval (bright = foreground).
Raster load_raster(const std::filesystem::path& path, bool invert = false);

std::string format_chain_code(const DigitalCurve& curve);

// One "x,y" line per point.
std::string format_points_csv(const std::vector<Point>& points);
std::vector<Point> parse_points_csv(const std::string& text);

// Maps polygon vertex coordinates back to curve indices; a vertex that is
// not a curve point violates the closeness property.
Polygon polygon_from_points(const DigitalCurve& curve, const std::vector<Point>& vertices);

struct SvgStyle {
    std::string curve_color = "red";
    std::string polygon_color = "blue";
    std::string vertex_color = "green";
    double scale = 4.0;
};

std::string render_svg(const DigitalCurve& curve, const Polygon* polygon,
                       const SvgStyle& style = {});

// Fixed column order: n,m,cr,e2,einf,fom,we2,we3,weinf,compactness.
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& report);

nlohmann::ordered_json metrics_to_json(const MetricsReport& report);
nlohmann::ordered_json rosin_to_json(const RosinMeasure& rosin);
nlohmann::ordered_json trace_to_json(const ApproximationTrace& trace);
nlohmann::ordered_json robustness_to_json(const RobustnessReport& report);

struct RunRecord {
    std::string curve_id;
    MetricsReport metrics;
    std::optional<RosinMeasure> rosin;
    std::int64_t wall_time_ns = 0;
    std::optional<std::string> trace_path;
    bool stabilized = true;
};

nlohmann::ordered_json run_record_to_json(const RunRecord& record);

// Writes via a temp file in the same directory plus rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// On-disk single-start table cache keyed by the curve content hash. Only
// opt_e2 survives a round trip; backpointers are not stored.
std::optional<OptimalErrorTable> load_cached_table(const std::filesystem::path& dir,
                                                   std::uint64_t key, std::size_t start,
                                                   std::size_t m_max);
void store_cached_table(const std::filesystem::path& dir, std::uint64_t key,
                        const OptimalErrorTable& table);

// TableProvider backed by the cache directory.
TableProvider caching_table_provider(std::filesystem::path dir);

} // namespace polyapprox
