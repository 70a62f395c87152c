#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "polyapprox/approximator.hpp"
#include "polyapprox/curve.hpp"
#include "polyapprox/errors.hpp"
#include "polyapprox/io.hpp"
#include "polyapprox/metrics.hpp"
#include "polyapprox/optimal.hpp"
#include "polyapprox/transforms.hpp"

namespace pa = polyapprox;
namespace fs = std::filesystem;

namespace {

pa::DigitalCurve load_input(const std::string& path, const std::string& format, bool invert) {
    pa::CurveFormat fmt =
        format.empty() ? pa::infer_format(path) : pa::parse_format(format);
    return pa::load_curve(path, fmt, invert);
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        pa::write_file_atomic(out_path, content);
    }
}

std::string polygon_csv(const pa::DigitalCurve& curve, const pa::Polygon& polygon) {
    std::vector<pa::Point> pts;
    pts.reserve(polygon.size());
    for (std::size_t idx : polygon) pts.push_back(curve[idx]);
    return pa::format_points_csv(pts);
}

pa::Polygon load_polygon(const pa::DigitalCurve& curve, const std::string& path) {
    auto pts = pa::parse_points_csv(pa::read_file(path));
    return pa::polygon_from_points(curve, pts);
}

pa::TableProvider make_provider(const std::string& cache_dir) {
    if (cache_dir.empty()) return {};
    return pa::caching_table_provider(cache_dir);
}

std::int64_t clock_ns(std::chrono::steady_clock::time_point t0,
                      std::chrono::steady_clock::time_point t1) {
    auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    return ns > 0 ? ns : 1;
}

struct BenchRow {
    std::string curve_id;
    std::size_t n = 0;
    std::size_t m = 0;
    std::int64_t median_ns = 0;
};

BenchRow bench_one(const fs::path& path, int repeats, bool invert) {
    auto curve = pa::load_curve(path, pa::infer_format(path), invert);
    std::vector<std::int64_t> times;
    times.reserve(static_cast<std::size_t>(repeats));
    std::size_t m = 0;
    for (int r = 0; r < repeats; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        auto result = pa::approximate(curve);
        auto t1 = std::chrono::steady_clock::now();
        times.push_back(clock_ns(t0, t1));
        m = result.polygon.size();
    }
    std::sort(times.begin(), times.end());
    std::size_t k = times.size();
    std::int64_t median =
        (k % 2 == 1) ? times[k / 2] : (times[k / 2 - 1] + times[k / 2]) / 2;
    return {path.stem().string(), curve.size(), m, median};
}

int run(int argc, char** argv) {
    CLI::App app{"polygonal approximation of closed digital curves"};
    app.require_subcommand(1);
    bool seedless = false;
    app.add_flag("--seedless", seedless,
                 "reserved; every run is already deterministic");

    struct {
        std::string input, format, output, svg, trace, cache_dir;
        bool invert = false, rosin = false;
    } ap;
    auto* approx_cmd = app.add_subcommand("approximate", "run the full pipeline on a curve");
    approx_cmd->add_option("input", ap.input, "curve file")->required();
    approx_cmd->add_option("--format", ap.format, "chaincode|csv|pbm (default: by extension)");
    approx_cmd->add_flag("--invert", ap.invert, "flip raster foreground");
    approx_cmd->add_option("--output", ap.output, "write polygon vertices as CSV");
    approx_cmd->add_option("--svg", ap.svg, "write an SVG overlay");
    approx_cmd->add_option("--trace", ap.trace, "write the phase trace as JSON");
    approx_cmd->add_flag("--rosin", ap.rosin, "include the quality triple (costly on large curves)");
    approx_cmd->add_option("--cache-dir", ap.cache_dir, "optimal-table cache directory");

    struct {
        std::string curve, polygon, format, cache_dir;
        bool invert = false, csv = false;
    } ev;
    auto* eval_cmd = app.add_subcommand("evaluate", "score an external polygon against a curve");
    eval_cmd->add_option("curve", ev.curve, "curve file")->required();
    eval_cmd->add_option("polygon", ev.polygon, "polygon vertex CSV")->required();
    eval_cmd->add_option("--format", ev.format, "chaincode|csv|pbm");
    eval_cmd->add_flag("--invert", ev.invert, "flip raster foreground");
    eval_cmd->add_flag("--csv", ev.csv, "metrics as a CSV row instead of JSON");
    eval_cmd->add_option("--cache-dir", ev.cache_dir, "optimal-table cache directory");

    struct {
        std::string curve, polygon, format, cache_dir;
        bool invert = false;
    } ro;
    auto* rosin_cmd = app.add_subcommand("rosin", "fidelity/efficiency/merit of a polygon");
    rosin_cmd->add_option("curve", ro.curve, "curve file")->required();
    rosin_cmd->add_option("polygon", ro.polygon, "polygon vertex CSV")->required();
    rosin_cmd->add_option("--format", ro.format, "chaincode|csv|pbm");
    rosin_cmd->add_flag("--invert", ro.invert, "flip raster foreground");
    rosin_cmd->add_option("--cache-dir", ro.cache_dir, "optimal-table cache directory");

    struct {
        std::string input, format, output;
        bool invert = false;
    } rb;
    auto* robust_cmd = app.add_subcommand("robustness", "approximate rotated and scaled variants");
    robust_cmd->add_option("input", rb.input, "curve file")->required();
    robust_cmd->add_option("--format", rb.format, "chaincode|csv|pbm");
    robust_cmd->add_flag("--invert", rb.invert, "flip raster foreground");
    robust_cmd->add_option("--output", rb.output, "report file (default: stdout)");

    struct {
        std::string dir, output;
        int repeats = 5;
        int jobs = 1;
        bool invert = false;
    } be;
    auto* bench_cmd = app.add_subcommand("bench", "time the pipeline over a directory of curves");
    bench_cmd->add_option("dir", be.dir, "directory of curve files")->required();
    bench_cmd->add_option("--repeats", be.repeats, "runs per curve, median reported (>= 3)");
    bench_cmd->add_option("--jobs", be.jobs, "concurrent curves");
    bench_cmd->add_flag("--invert", be.invert, "flip raster foreground");
    bench_cmd->add_option("--output", be.output, "CSV file (default: stdout)");

    struct {
        std::string input, polygon, format, output;
        bool invert = false;
        pa::SvgStyle style;
    } re;
    auto* render_cmd = app.add_subcommand("render", "draw a curve (and polygon) as SVG");
    render_cmd->add_option("input", re.input, "curve file")->required();
    render_cmd->add_option("--polygon", re.polygon, "polygon vertex CSV to overlay");
    render_cmd->add_option("--format", re.format, "chaincode|csv|pbm");
    render_cmd->add_flag("--invert", re.invert, "flip raster foreground");
    render_cmd->add_option("--output", re.output, "SVG file (default: stdout)");
    render_cmd->add_option("--curve-color", re.style.curve_color, "curve stroke");
    render_cmd->add_option("--polygon-color", re.style.polygon_color, "polygon stroke");
    render_cmd->add_option("--vertex-color", re.style.vertex_color, "vertex fill");
    render_cmd->add_option("--scale", re.style.scale, "pixels per lattice unit");

    struct {
        std::string input, output;
        bool invert = false;
    } tb;
    auto* trace_cmd = app.add_subcommand("trace-boundary", "raster mask to boundary chain code");
    trace_cmd->add_option("input", tb.input, "PBM/PGM mask")->required();
    trace_cmd->add_flag("--invert", tb.invert, "flip raster foreground");
    trace_cmd->add_option("--output", tb.output, "chain code file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*approx_cmd) {
        auto t0 = std::chrono::steady_clock::now();
        auto curve = load_input(ap.input, ap.format, ap.invert);
        auto result = pa::approximate(curve);
        auto t1 = std::chrono::steady_clock::now();

        pa::RunRecord rec;
        rec.curve_id = fs::path(ap.input).stem().string();
        rec.metrics = pa::make_report(result.curve, result.polygon);
        if (ap.rosin)
            rec.rosin = pa::rosin_measure(result.curve, result.polygon,
                                          make_provider(ap.cache_dir));
        rec.wall_time_ns = clock_ns(t0, t1);
        rec.stabilized = result.stabilized;
        if (!ap.output.empty())
            pa::write_file_atomic(ap.output, polygon_csv(result.curve, result.polygon));
        if (!ap.svg.empty())
            pa::write_file_atomic(ap.svg, pa::render_svg(result.curve, &result.polygon));
        if (!ap.trace.empty()) {
            pa::write_file_atomic(ap.trace, pa::trace_to_json(result.trace).dump(2) + "\n");
            rec.trace_path = ap.trace;
        }
        std::cout << pa::run_record_to_json(rec).dump(2) << "\n";
    } else if (*eval_cmd) {
        auto curve = load_input(ev.curve, ev.format, ev.invert);
        auto polygon = load_polygon(curve, ev.polygon);
        auto report = pa::make_report(curve, polygon);
        if (ev.csv) {
            std::cout << pa::metrics_csv_header() << "\n"
                      << pa::metrics_csv_row(report) << "\n";
        } else {
            nlohmann::ordered_json j;
            j["schema_version"] = pa::kSchemaVersion;
            j["metrics"] = pa::metrics_to_json(report);
            j["rosin"] = pa::rosin_to_json(
                pa::rosin_measure(curve, polygon, make_provider(ev.cache_dir)));
            std::cout << j.dump(2) << "\n";
        }
    } else if (*rosin_cmd) {
        auto curve = load_input(ro.curve, ro.format, ro.invert);
        auto polygon = load_polygon(curve, ro.polygon);
        nlohmann::ordered_json j;
        j["schema_version"] = pa::kSchemaVersion;
        j["rosin"] = pa::rosin_to_json(
            pa::rosin_measure(curve, polygon, make_provider(ro.cache_dir)));
        std::cout << j.dump(2) << "\n";
    } else if (*robust_cmd) {
        auto curve = load_input(rb.input, rb.format, rb.invert);
        auto report = pa::robustness_experiment(
            curve, [](const pa::DigitalCurve& c) { return pa::approximate(c).polygon; });
        emit(rb.output, pa::robustness_to_json(report).dump(2) + "\n");
    } else if (*bench_cmd) {
        if (be.repeats < 3) throw pa::UsageError("bench needs at least 3 repeats");
        if (be.jobs < 1) throw pa::UsageError("--jobs must be positive");
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(be.dir)) {
            if (!entry.is_regular_file()) continue;
            try {
                pa::infer_format(entry.path());
            } catch (const pa::UsageError&) {
                continue;
            }
            files.push_back(entry.path());
        }
        if (files.empty())
            throw pa::UsageError("no curve files in '" + be.dir + "'");
        std::sort(files.begin(), files.end());

        std::vector<BenchRow> rows(files.size());
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        auto worker = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= files.size()) return;
                try {
                    rows[i] = bench_one(files[i], be.repeats, be.invert);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        };
        std::size_t pool_size =
            std::min<std::size_t>(static_cast<std::size_t>(be.jobs), files.size());
        if (pool_size <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (std::size_t t = 0; t < pool_size; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        if (first_error) std::rethrow_exception(first_error);

        std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
            return a.curve_id < b.curve_id;
        });
        std::ostringstream os;
        os << "curve_id,n,m,median_ns,time_10log10\n";
        for (const auto& row : rows) {
            os << row.curve_id << "," << row.n << "," << row.m << "," << row.median_ns
               << "," << std::fixed << std::setprecision(6)
               << 10.0 * std::log10(static_cast<double>(row.median_ns)) << "\n";
        }
        emit(be.output, os.str());
    } else if (*render_cmd) {
        auto curve = load_input(re.input, re.format, re.invert);
        std::string svg;
        if (re.polygon.empty()) {
            svg = pa::render_svg(curve, nullptr, re.style);
        } else {
            auto polygon = load_polygon(curve, re.polygon);
            svg = pa::render_svg(curve, &polygon, re.style);
        }
        emit(re.output, svg);
    } else if (*trace_cmd) {
        auto raster = pa::load_raster(tb.input, tb.invert);
        auto curve = pa::trace_boundary(raster);
        emit(tb.output, pa::format_chain_code(curve));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pa::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pa::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pa::DegenerateGeometry& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
