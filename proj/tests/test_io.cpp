#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "fixtures.hpp"
#include "polyapprox/errors.hpp"
#include "polyapprox/io.hpp"

using namespace polyapprox;
namespace fs = std::filesystem;

namespace {

// Unique scratch directory, removed when the test ends.
struct TempDir {
    fs::path path;

    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("polyapprox-io-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++count;
    return count;
}

// Number of "x,y" pairs in a polyline points attribute.
std::size_t polyline_pairs(const std::string& svg, std::size_t which) {
    std::size_t pos = 0;
    for (std::size_t k = 0; k <= which; ++k) {
        pos = svg.find("<polyline", pos);
        REQUIRE(pos != std::string::npos);
        ++pos;
    }
    const std::size_t open = svg.find("points=\"", pos);
    REQUIRE(open != std::string::npos);
    const std::size_t close = svg.find('"', open + 8);
    const std::string attr = svg.substr(open + 8, close - open - 8);
    return count_occurrences(attr, ",");
}

} // namespace

TEST_CASE("parse_format and infer_format") {
    CHECK(parse_format("chaincode") == CurveFormat::chaincode);
    CHECK(parse_format("chain") == CurveFormat::chaincode);
    CHECK(parse_format("csv") == CurveFormat::csv);
    CHECK(parse_format("pbm") == CurveFormat::pbm);
    CHECK_THROWS_WITH_AS(parse_format("tiff"),
                         "unknown format 'tiff' (expected chaincode|csv|pbm)", UsageError);

    CHECK(infer_format("shapes/apple.csv") == CurveFormat::csv);
    CHECK(infer_format("a.CSV") == CurveFormat::csv);
    CHECK(infer_format("a.pbm") == CurveFormat::pbm);
    CHECK(infer_format("a.pgm") == CurveFormat::pbm);
    CHECK(infer_format("a.pnm") == CurveFormat::pbm);
    CHECK(infer_format("a.chain") == CurveFormat::chaincode);
    CHECK(infer_format("a.cc") == CurveFormat::chaincode);
    CHECK(infer_format("a.txt") == CurveFormat::chaincode);
    CHECK_THROWS_AS(infer_format("curve.dat"), UsageError);
    CHECK_THROWS_AS(infer_format("noextension"), UsageError);
}

TEST_CASE("chain code files round trip") {
    const TempDir dir;
    const DigitalCurve sq = fixtures::square(3);
    const std::string text = format_chain_code(sq);
    CHECK(text.substr(0, 4) == "0 0\n");

    const fs::path file = dir.path / "square.chain";
    write_file_atomic(file, text);
    const DigitalCurve loaded = load_curve(file, CurveFormat::chaincode);
    CHECK(loaded.closed());
    CHECK(loaded.points() == sq.points());

    // an arbitrary start index lands on the same canonical form
    std::vector<Point> shifted(sq.points().begin() + 4, sq.points().end());
    shifted.insert(shifted.end(), sq.points().begin(), sq.points().begin() + 4);
    write_file_atomic(file, format_chain_code(DigitalCurve(shifted, true)));
    CHECK(load_curve(file, CurveFormat::chaincode).points() == sq.points());
}

TEST_CASE("chain code parse errors name the offending line") {
    const TempDir dir;
    const fs::path file = dir.path / "bad.chain";

    write_file_atomic(file, "0 0\n0123456749\n");
    CHECK_THROWS_WITH_AS(load_curve(file, CurveFormat::chaincode),
                         "line 2: chain code digit out of range: '9'", InvalidInput);

    write_file_atomic(file, "0 0\n");
    CHECK_THROWS_WITH_AS(load_curve(file, CurveFormat::chaincode),
                         "chain code file needs a start line and a code line", InvalidInput);

    write_file_atomic(file, "0 0 7\n0123\n");
    CHECK_THROWS_WITH_AS(load_curve(file, CurveFormat::chaincode),
                         "line 1: expected 'x y' start coordinates", InvalidInput);

    write_file_atomic(file, "0 zz\n0123\n");
    CHECK_THROWS_WITH_AS(load_curve(file, CurveFormat::chaincode),
                         "line 1: expected an integer, got 'zz'", InvalidInput);
}

TEST_CASE("points CSV round trips and rejects junk") {
    CHECK(format_points_csv({{1, 2}, {3, -4}}) == "1,2\n3,-4\n");
    CHECK(parse_points_csv("1,2\n3,-4\n") == std::vector<Point>{{1, 2}, {3, -4}});
    CHECK(parse_points_csv(" 7 , 8 \n") == std::vector<Point>{{7, 8}});

    const std::vector<Point>& pts = fixtures::square(4).points();
    CHECK(parse_points_csv(format_points_csv(pts)) == pts);

    // blank lines are skipped but still counted for diagnostics
    CHECK_THROWS_WITH_AS(parse_points_csv("1,2\n\nx,4\n"),
                         "line 3: expected an integer, got 'x'", InvalidInput);
    CHECK_THROWS_WITH_AS(parse_points_csv("12\n"), "line 1: expected 'x,y'", InvalidInput);
    CHECK_THROWS_WITH_AS(parse_points_csv("\n \n"), "no points in CSV input", InvalidInput);
}

TEST_CASE("load_curve from CSV closes and canonicalizes") {
    const TempDir dir;
    const fs::path file = dir.path / "loop.csv";
    const DigitalCurve sq = fixtures::square(2);

    // rotated start, same canonical curve after loading
    std::vector<Point> shifted(sq.points().begin() + 3, sq.points().end());
    shifted.insert(shifted.end(), sq.points().begin(), sq.points().begin() + 3);
    write_file_atomic(file, format_points_csv(shifted));
    CHECK(load_curve(file, CurveFormat::csv).points() == sq.points());

    // a gap in the loop violates 8-connectivity
    write_file_atomic(file, "0,0\n5,0\n5,5\n");
    CHECK_THROWS_AS(load_curve(file, CurveFormat::csv), InvalidInput);
}

TEST_CASE("raster formats decode to the same mask") {
    const TempDir dir;

    // 2x2 block with a margin, P1 with a comment
    const fs::path p1 = dir.path / "block.pbm";
    write_file_atomic(p1, "P1\n# block\n4 4\n0 0 0 0\n0 1 1 0\n0 1 1 0\n0 0 0 0\n");
    const Raster r1 = load_raster(p1);
    CHECK(r1.width == 4);
    CHECK(r1.height == 4);
    CHECK(r1.at(1, 1));
    CHECK(r1.at(2, 2));
    CHECK(!r1.at(0, 0));
    CHECK(load_curve(p1, CurveFormat::pbm).size() == 4);

    // P4 packs the same rows into bits
    const fs::path p4 = dir.path / "block-p4.pbm";
    std::string packed = "P4\n4 4\n";
    packed.push_back('\x00');
    packed.push_back('\x60');
    packed.push_back('\x60');
    packed.push_back('\x00');
    write_file_atomic(p4, packed);
    const Raster r4 = load_raster(p4);
    CHECK(r4.cells == r1.cells);

    // P2 thresholds at half of maxval, bright pixels are foreground
    const fs::path p2 = dir.path / "gray.pgm";
    write_file_atomic(p2, "P2\n2 2\n255\n200 10\n128 127\n");
    const Raster r2 = load_raster(p2);
    CHECK(r2.cells == std::vector<std::uint8_t>{1, 0, 1, 0});

    // P5 single and double byte samples
    const fs::path p5 = dir.path / "gray-p5.pgm";
    std::string bin = "P5\n2 1\n255\n";
    bin.push_back('\xff');
    bin.push_back('\x00');
    write_file_atomic(p5, bin);
    CHECK(load_raster(p5).cells == std::vector<std::uint8_t>{1, 0});

    const fs::path p5w = dir.path / "wide.pgm";
    std::string wide = "P5\n2 1\n65535\n";
    wide.push_back('\xff');
    wide.push_back('\xff');
    wide.push_back('\x00');
    wide.push_back('\x01');
    write_file_atomic(p5w, wide);
    CHECK(load_raster(p5w).cells == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("raster parse errors") {
    const TempDir dir;
    const fs::path file = dir.path / "bad.pbm";

    write_file_atomic(file, "P7\n2 2\n");
    CHECK_THROWS_WITH_AS(load_raster(file), "unsupported raster magic 'P7'", InvalidInput);

    write_file_atomic(file, "P1\n0 4\n");
    CHECK_THROWS_WITH_AS(load_raster(file), "raster has zero size", InvalidInput);

    write_file_atomic(file, "P1\n2 2\n1 0 2 0\n");
    CHECK_THROWS_WITH_AS(load_raster(file), "bad P1 pixel '2'", InvalidInput);

    write_file_atomic(file, "P4\n9 2\n\x01");
    CHECK_THROWS_WITH_AS(load_raster(file), "truncated P4 raster", InvalidInput);

    std::string short_p5 = "P5\n2 1\n255\n";
    short_p5.push_back('\x40');
    write_file_atomic(file, short_p5);
    CHECK_THROWS_WITH_AS(load_raster(file), "truncated P5 raster", InvalidInput);

    write_file_atomic(file, "P2\n2 2\n255\n1 2 3");
    CHECK_THROWS_WITH_AS(load_raster(file), "truncated raster header", InvalidInput);

    write_file_atomic(file, "P2\n2 1\n0\n");
    CHECK_THROWS_WITH_AS(load_raster(file), "bad raster maxval", InvalidInput);

    CHECK_THROWS_AS(load_raster(dir.path / "absent.pbm"), InvalidInput);
}

TEST_CASE("invert flips which side is the shape") {
    const TempDir dir;
    // bright frame around a dark 2x2 block: the frame touches the border,
    // so only the inverted reading traces
    const fs::path file = dir.path / "inverted.pgm";
    write_file_atomic(file, "P2\n4 4\n255\n"
                            "255 255 255 255\n"
                            "255 0 0 255\n"
                            "255 0 0 255\n"
                            "255 255 255 255\n");
    CHECK_THROWS_AS(load_curve(file, CurveFormat::pbm, false), InvalidInput);
    const DigitalCurve block = load_curve(file, CurveFormat::pbm, true);
    CHECK(block.closed());
    CHECK(block.size() == 4);
}

TEST_CASE("polygon_from_points maps vertices back to curve indices") {
    const DigitalCurve sq = fixtures::square(2);
    const Polygon corners =
        polygon_from_points(sq, {{2, 2}, {0, 0}, {2, 0}, {0, 2}});
    CHECK(corners == Polygon{0, 2, 4, 6});

    // duplicates collapse
    CHECK(polygon_from_points(sq, {{0, 0}, {2, 0}, {0, 0}, {2, 2}}) == Polygon{0, 2, 4});

    CHECK_THROWS_WITH_AS(polygon_from_points(sq, {{0, 0}, {2, 0}, {5, 5}}),
                         "vertex (5,5) is not a curve point", InvalidInput);

    // a coordinate the curve visits twice resolves to its first index
    const DigitalCurve spur({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {3, 1}, {3, 2}, {3, 3},
                             {2, 3}, {2, 4}, {2, 5}, {2, 4}, {1, 3}, {0, 3}, {0, 2},
                             {0, 1}},
                            true);
    const Polygon mapped = polygon_from_points(spur, {{0, 0}, {3, 0}, {2, 4}, {0, 3}});
    CHECK(mapped == Polygon{0, 3, 8, 12});
}

TEST_CASE("render_svg draws the curve, the polygon and its vertices") {
    const DigitalCurve sq = fixtures::square(2);
    const Polygon poly{0, 2, 4, 6};
    const std::string svg = render_svg(sq, &poly);

    CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_occurrences(svg, "<polyline") == 2);
    CHECK(count_occurrences(svg, "<circle") == poly.size());
    CHECK(svg.find("stroke=\"red\"") != std::string::npos);
    CHECK(svg.find("stroke=\"blue\"") != std::string::npos);
    CHECK(svg.find("fill=\"green\"") != std::string::npos);

    // closed curve polyline repeats the anchor, polygon polyline likewise
    CHECK(polyline_pairs(svg, 0) == sq.size() + 1);
    CHECK(polyline_pairs(svg, 1) == poly.size() + 1);

    SvgStyle style;
    style.curve_color = "black";
    style.polygon_color = "orange";
    style.vertex_color = "purple";
    const std::string styled = render_svg(sq, &poly, style);
    CHECK(styled.find("stroke=\"black\"") != std::string::npos);
    CHECK(styled.find("stroke=\"orange\"") != std::string::npos);
    CHECK(styled.find("fill=\"purple\"") != std::string::npos);

    // without a polygon only the curve is drawn
    const std::string bare = render_svg(sq, nullptr);
    CHECK(count_occurrences(bare, "<polyline") == 1);
    CHECK(count_occurrences(bare, "<circle") == 0);

    // open curves do not close the polyline
    const DigitalCurve open({{0, 0}, {1, 0}, {2, 0}}, false);
    CHECK(polyline_pairs(render_svg(open, nullptr), 0) == open.size());
}

TEST_CASE("metrics CSV emits the fixed column order") {
    CHECK(metrics_csv_header() == "n,m,cr,e2,einf,fom,we2,we3,weinf,compactness");

    // corner polygon of a square: zero error, infinite figure of merit
    const DigitalCurve sq = fixtures::square(2);
    const MetricsReport exact = make_report(sq, {0, 2, 4, 6});
    const std::string row = metrics_csv_row(exact);
    CHECK(row == "8,4,2,0,0,inf,0,0,0,0.0625");

    // a lossy polygon keeps every field finite
    const MetricsReport mids = make_report(sq, {1, 3, 5, 7});
    const std::string lossy = metrics_csv_row(mids);
    CHECK(count_occurrences(lossy, ",") == 9);
    CHECK(lossy.find("inf") == std::string::npos);
    CHECK(lossy.rfind("8,4,2,2,", 0) == 0);
}

TEST_CASE("json reports pin their schema") {
    const DigitalCurve sq = fixtures::square(2);

    const nlohmann::ordered_json exact = metrics_to_json(make_report(sq, {0, 2, 4, 6}));
    CHECK(exact.dump() ==
          "{\"schema_version\":1,\"n\":8,\"m\":4,\"cr\":2.0,\"e2\":0.0,\"einf\":0.0,"
          "\"fom\":null,\"we2\":0.0,\"we3\":0.0,\"weinf\":0.0,\"compactness\":0.0625}");

    const RosinMeasure self = rosin_measure(fixtures::square(3), {0, 3, 6, 9});
    CHECK(rosin_to_json(self).dump() ==
          "{\"schema_version\":1,\"fidelity\":100.0,\"efficiency\":100.0,\"merit\":100.0}");

    RobustnessReport robustness;
    robustness.entries.push_back({"original", 40, 4, 0.0625});
    robustness.entries.push_back({"rot10", 40, 4, 0.0625});
    robustness.cov_percent = 0.0;
    robustness.partial = true;
    robustness.skipped = {"scale020"};
    CHECK(robustness_to_json(robustness).dump() ==
          "{\"schema_version\":1,\"variants\":{\"original\":{\"n\":40,\"m\":4,"
          "\"compactness\":0.0625},\"rot10\":{\"n\":40,\"m\":4,\"compactness\":0.0625}},"
          "\"cov_percent\":0.0,\"partial\":true,\"skipped\":[\"scale020\"]}");

    robustness.cov_percent = std::nan("");
    CHECK(robustness_to_json(robustness)["cov_percent"].is_null());
}

TEST_CASE("run records carry a warning only when not stabilized") {
    RunRecord record;
    record.curve_id = "square2";
    record.metrics = make_report(fixtures::square(2), {0, 2, 4, 6});
    record.wall_time_ns = 12345;

    const nlohmann::ordered_json stable = run_record_to_json(record);
    CHECK(stable["schema_version"] == 1);
    CHECK(stable["curve_id"] == "square2");
    CHECK(stable["metrics"]["n"] == 8);
    CHECK(stable["rosin"].is_null());
    CHECK(stable["trace_path"].is_null());
    CHECK(stable["wall_time_ns"] == 12345);
    CHECK(!stable.contains("warning"));

    record.stabilized = false;
    record.rosin = RosinMeasure{100.0, 100.0, 100.0};
    record.trace_path = "out/trace.json";
    const nlohmann::ordered_json warned = run_record_to_json(record);
    CHECK(warned["warning"] == "approximation did not stabilize");
    CHECK(warned["rosin"]["merit"] == 100.0);
    CHECK(warned["trace_path"] == "out/trace.json");
}

TEST_CASE("trace json mirrors the approximation trace") {
    const ApproximationResult result = approximate(fixtures::square(4));
    const nlohmann::ordered_json j = trace_to_json(result.trace);
    CHECK(j["schema_version"] == 1);
    CHECK(j["initial_vertices"].is_array());
    CHECK(j["after_insertion"].is_array());
    CHECK(j["delta"].is_number());
    CHECK(j["f_history"].size() == result.trace.f_history.size());
    REQUIRE(j["per_iteration"].is_array());
    REQUIRE(!j["per_iteration"].empty());
    CHECK(j["per_iteration"][0].contains("polygon"));
    CHECK(j["per_iteration"][0].contains("we2"));
    CHECK(j["per_iteration"][0].contains("weinf"));
    CHECK(j["final"].get<Polygon>() == result.polygon);
    CHECK(j["stabilized"] == result.stabilized);
}

TEST_CASE("write_file_atomic leaves no temporary behind") {
    const TempDir dir;
    const fs::path file = dir.path / "out.txt";
    write_file_atomic(file, "hello\n");
    CHECK(read_file(file) == "hello\n");
    CHECK(!fs::exists(dir.path / "out.txt.tmp"));

    write_file_atomic(file, "replaced");
    CHECK(read_file(file) == "replaced");

    CHECK_THROWS_AS(read_file(dir.path / "absent.txt"), InvalidInput);
    CHECK_THROWS_AS(write_file_atomic(dir.path / "nodir" / "out.txt", "x"), Error);
}

TEST_CASE("table cache round trips including unreachable entries") {
    const TempDir dir;
    const DigitalCurve sq = fixtures::square(3);
    const std::uint64_t key = curve_content_hash(sq);
    const std::size_t start = heuristic_start(sq);

    OptimalErrorTable table = build_optimal_table(sq, start, sq.size());
    OptimalErrorTable slim = table;
    slim.back.clear();
    store_cached_table(dir.path, key, slim);

    // the stored file spells the infinite prefix as null
    std::ostringstream name;
    name << std::hex << key << ".json";
    CHECK(read_file(dir.path / name.str()).find("null") != std::string::npos);

    const auto loaded = load_cached_table(dir.path, key, start, sq.size());
    REQUIRE(loaded.has_value());
    CHECK(loaded->n == table.n);
    CHECK(loaded->start_index == table.start_index);
    CHECK(loaded->m_max == table.m_max);
    CHECK(!loaded->has_backpointers());
    REQUIRE(loaded->opt_e2.size() == table.opt_e2.size());
    for (std::size_t m = 0; m < table.opt_e2.size(); ++m) {
        CAPTURE(m);
        if (std::isinf(table.opt_e2[m]))
            CHECK(std::isinf(loaded->opt_e2[m]));
        else
            CHECK(loaded->opt_e2[m] == table.opt_e2[m]);
    }

    // lookups that do not match what was stored miss
    CHECK(!load_cached_table(dir.path, key + 1, start, sq.size()).has_value());
    CHECK(!load_cached_table(dir.path, key, start + 1, sq.size()).has_value());
    CHECK(!load_cached_table(dir.path, key, start, sq.size() + 5).has_value());

    // a narrower request is served by the wider table
    CHECK(load_cached_table(dir.path, key, start, 4).has_value());
}

TEST_CASE("table cache rejects stale or foreign files") {
    const TempDir dir;
    const DigitalCurve sq = fixtures::square(2);
    const std::uint64_t key = curve_content_hash(sq);
    std::ostringstream name;
    name << std::hex << key << ".json";

    write_file_atomic(dir.path / name.str(), "not json at all");
    CHECK(!load_cached_table(dir.path, key, 0, 4).has_value());

    write_file_atomic(dir.path / name.str(),
                      "{\"schema_version\":999,\"n\":8,\"start_index\":0,\"m_max\":8,"
                      "\"opt_e2\":[null,null,null,4.0,1.0,0.5,0.25,0.125,0.0]}");
    CHECK(!load_cached_table(dir.path, key, 0, 4).has_value());

    write_file_atomic(dir.path / name.str(), "{\"schema_version\":1,\"n\":8}");
    CHECK(!load_cached_table(dir.path, key, 0, 4).has_value());
}

TEST_CASE("caching_table_provider builds once and serves from disk after") {
    const TempDir dir;
    const DigitalCurve sq = fixtures::square(3);
    const TableProvider provider = caching_table_provider(dir.path / "cache");

    // first call computes; the result still carries backpointers
    const OptimalErrorTable first = provider(sq, heuristic_start(sq), sq.size());
    CHECK(first.has_backpointers());

    // second call is served from the slim cached copy
    const OptimalErrorTable second = provider(sq, heuristic_start(sq), sq.size());
    CHECK(!second.has_backpointers());
    REQUIRE(second.opt_e2.size() == first.opt_e2.size());
    for (std::size_t m = 3; m < first.opt_e2.size(); ++m)
        CHECK(second.opt_e2[m] == first.opt_e2[m]);

    // the measure built on top sees identical tables either way
    const RosinMeasure once =
        rosin_measure(sq, {0, 3, 6, 9}, caching_table_provider(dir.path / "cache"));
    const RosinMeasure again =
        rosin_measure(sq, {0, 3, 6, 9}, caching_table_provider(dir.path / "cache"));
    CHECK(once.fidelity == 100.0);
    CHECK(once.efficiency == 100.0);
    CHECK(again.fidelity == once.fidelity);
    CHECK(again.efficiency == once.efficiency);
    CHECK(again.merit == once.merit);
}
