#include "polyapprox/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace polyapprox {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::int64_t parse_int(const std::string& tok, const std::string& where) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw InvalidInput(where + ": expected an integer, got '" + tok + "'");
    }
}

ordered_json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

DigitalCurve parse_chain_code_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> lines;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (!t.empty()) lines.push_back(t);
        if (lines.size() == 2) break;
    }
    if (lines.size() < 2) throw InvalidInput("chain code file needs a start line and a code line");
    std::istringstream first(lines[0]);
    std::string xs, ys, extra;
    if (!(first >> xs >> ys) || (first >> extra))
        throw InvalidInput("line 1: expected 'x y' start coordinates");
    const Point start{parse_int(xs, "line 1"), parse_int(ys, "line 1")};
    try {
        return decode_chain_code(start, lines[1]);
    } catch (const InvalidInput& e) {
        throw InvalidInput("line 2: " + std::string(e.what()));
    }
}

Raster parse_pnm(const std::string& data, bool invert) {
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string {
        while (pos < data.size()) {
            if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
        std::size_t b = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])) &&
               data[pos] != '#')
            ++pos;
        if (b == pos) throw InvalidInput("truncated raster header");
        return data.substr(b, pos - b);
    };

    const std::string magic = next_token();
    if (magic != "P1" && magic != "P4" && magic != "P2" && magic != "P5")
        throw InvalidInput("unsupported raster magic '" + magic + "'");
    const std::size_t width = static_cast<std::size_t>(parse_int(next_token(), "raster width"));
    const std::size_t height = static_cast<std::size_t>(parse_int(next_token(), "raster height"));
    if (width == 0 || height == 0) throw InvalidInput("raster has zero size");

    std::int64_t maxval = 1;
    if (magic == "P2" || magic == "P5") maxval = parse_int(next_token(), "raster maxval");
    if (maxval <= 0 || maxval > 65535) throw InvalidInput("bad raster maxval");

    Raster r;
    r.width = width;
    r.height = height;
    r.cells.assign(width * height, 0);

    if (magic == "P1") {
        for (std::size_t i = 0; i < width * height; ++i) {
            const std::string tok = next_token();
            if (tok != "0" && tok != "1") throw InvalidInput("bad P1 pixel '" + tok + "'");
            r.cells[i] = tok == "1" ? 1 : 0;
        }
    } else if (magic == "P4") {
        ++pos; // single whitespace after the header
        const std::size_t row_bytes = (width + 7) / 8;
        if (data.size() - pos < row_bytes * height) throw InvalidInput("truncated P4 raster");
        for (std::size_t row = 0; row < height; ++row)
            for (std::size_t col = 0; col < width; ++col) {
                const unsigned char byte =
                    static_cast<unsigned char>(data[pos + row * row_bytes + col / 8]);
                r.cells[row * width + col] = (byte >> (7 - col % 8)) & 1;
            }
    } else {
        const bool binary = magic == "P5";
        const std::size_t bytes = maxval > 255 ? 2 : 1;
        if (binary) ++pos;
        for (std::size_t i = 0; i < width * height; ++i) {
            std::int64_t v;
            if (binary) {
                if (pos + bytes > data.size()) throw InvalidInput("truncated P5 raster");
                v = static_cast<unsigned char>(data[pos]);
                if (bytes == 2)
                    v = v * 256 + static_cast<unsigned char>(data[pos + 1]);
                pos += bytes;
            } else {
                v = parse_int(next_token(), "P2 pixel");
            }
            // Bright pixels are the shape in grayscale masks.
            r.cells[i] = 2 * v >= maxval ? 1 : 0;
        }
    }
    if (invert)
        for (auto& c : r.cells) c = c ? 0 : 1;
    return r;
}

} // namespace

CurveFormat parse_format(const std::string& name) {
    if (name == "chaincode" || name == "chain") return CurveFormat::chaincode;
    if (name == "csv") return CurveFormat::csv;
    if (name == "pbm") return CurveFormat::pbm;
    throw UsageError("unknown format '" + name + "' (expected chaincode|csv|pbm)");
}

CurveFormat infer_format(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".csv") return CurveFormat::csv;
    if (ext == ".pbm" || ext == ".pgm" || ext == ".pnm") return CurveFormat::pbm;
    if (ext == ".chain" || ext == ".cc" || ext == ".txt") return CurveFormat::chaincode;
    throw UsageError("cannot infer format of '" + path.string() + "'; pass --format");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw Error("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

Raster load_raster(const fs::path& path, bool invert) {
    return parse_pnm(read_file(path), invert);
}

DigitalCurve load_curve(const fs::path& path, CurveFormat format, bool invert) {
    switch (format) {
    case CurveFormat::chaincode: {
        DigitalCurve c = parse_chain_code_text(read_file(path));
        return c.closed() ? c.canonicalized() : c;
    }
    case CurveFormat::csv: {
        const std::vector<Point> pts = parse_points_csv(read_file(path));
        return DigitalCurve(pts, true).canonicalized();
    }
    case CurveFormat::pbm:
        return trace_boundary(load_raster(path, invert));
    }
    throw UsageError("unreachable format");
}

std::string format_chain_code(const DigitalCurve& curve) {
    const auto [start, code] = encode_chain_code(curve);
    std::ostringstream out;
    out << start.x << ' ' << start.y << '\n' << code << '\n';
    return out.str();
}

std::string format_points_csv(const std::vector<Point>& points) {
    std::ostringstream out;
    for (const Point& p : points) out << p.x << ',' << p.y << '\n';
    return out.str();
}

std::vector<Point> parse_points_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Point> pts;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::size_t comma = t.find(',');
        if (comma == std::string::npos)
            throw InvalidInput("line " + std::to_string(lineno) + ": expected 'x,y'");
        const std::string where = "line " + std::to_string(lineno);
        pts.push_back({parse_int(trim(t.substr(0, comma)), where),
                       parse_int(trim(t.substr(comma + 1)), where)});
    }
    if (pts.empty()) throw InvalidInput("no points in CSV input");
    return pts;
}

Polygon polygon_from_points(const DigitalCurve& curve, const std::vector<Point>& vertices) {
    std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> first_index;
    for (std::size_t i = curve.size(); i-- > 0;) first_index[{curve[i].x, curve[i].y}] = i;
    Polygon poly;
    poly.reserve(vertices.size());
    for (const Point& v : vertices) {
        auto it = first_index.find({v.x, v.y});
        if (it == first_index.end())
            throw InvalidInput("vertex (" + std::to_string(v.x) + "," + std::to_string(v.y) +
                               ") is not a curve point");
        poly.push_back(it->second);
    }
    std::sort(poly.begin(), poly.end());
    poly.erase(std::unique(poly.begin(), poly.end()), poly.end());
    validate_polygon(curve, poly);
    return poly;
}

std::string render_svg(const DigitalCurve& curve, const Polygon* polygon,
                       const SvgStyle& style) {
    std::int64_t minx = curve[0].x, maxx = curve[0].x, miny = curve[0].y, maxy = curve[0].y;
    for (const Point& p : curve.points()) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    const double s = style.scale;
    const double margin = 2.0 * s;
    const double width = static_cast<double>(maxx - minx) * s + 2 * margin;
    const double height = static_cast<double>(maxy - miny) * s + 2 * margin;
    auto tx = [&](const Point& p) { return margin + static_cast<double>(p.x - minx) * s; };
    auto ty = [&](const Point& p) { return margin + static_cast<double>(maxy - p.y) * s; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' '
        << height << "\" width=\"" << width << "\" height=\"" << height << "\">\n";

    out << "  <polyline fill=\"none\" stroke=\"" << style.curve_color
        << "\" stroke-width=\"" << s * 0.25 << "\" points=\"";
    for (const Point& p : curve.points()) out << tx(p) << ',' << ty(p) << ' ';
    if (curve.closed()) out << tx(curve[0]) << ',' << ty(curve[0]);
    out << "\"/>\n";

    if (polygon) {
        out << "  <polyline fill=\"none\" stroke=\"" << style.polygon_color
            << "\" stroke-width=\"" << s * 0.35 << "\" points=\"";
        for (std::size_t idx : *polygon) out << tx(curve[idx]) << ',' << ty(curve[idx]) << ' ';
        out << tx(curve[polygon->front()]) << ',' << ty(curve[polygon->front()]);
        out << "\"/>\n";
        for (std::size_t idx : *polygon)
            out << "  <circle cx=\"" << tx(curve[idx]) << "\" cy=\"" << ty(curve[idx])
                << "\" r=\"" << s * 0.6 << "\" fill=\"" << style.vertex_color << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string metrics_csv_header() {
    return "n,m,cr,e2,einf,fom,we2,we3,weinf,compactness";
}

std::string metrics_csv_row(const MetricsReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << r.n << ',' << r.m << ',' << r.cr << ',' << r.e2 << ',' << r.einf << ',';
    if (std::isfinite(r.fom))
        out << r.fom;
    else
        out << "inf";
    out << ',' << r.we2 << ',' << r.we3 << ',' << r.weinf << ',' << r.compactness;
    return out.str();
}

ordered_json metrics_to_json(const MetricsReport& r) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = r.n;
    j["m"] = r.m;
    j["cr"] = r.cr;
    j["e2"] = r.e2;
    j["einf"] = r.einf;
    j["fom"] = number_or_null(r.fom);
    j["we2"] = r.we2;
    j["we3"] = r.we3;
    j["weinf"] = r.weinf;
    j["compactness"] = r.compactness;
    return j;
}

ordered_json rosin_to_json(const RosinMeasure& rosin) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["fidelity"] = number_or_null(rosin.fidelity);
    j["efficiency"] = number_or_null(rosin.efficiency);
    j["merit"] = number_or_null(rosin.merit);
    return j;
}

ordered_json trace_to_json(const ApproximationTrace& trace) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["initial_vertices"] = trace.initial_vertices;
    j["after_insertion"] = trace.after_insertion;
    j["delta"] = trace.delta;
    j["f_history"] = trace.f_history;
    j["per_iteration"] = ordered_json::array();
    for (const IterationRecord& rec : trace.per_iteration) {
        ordered_json item;
        item["polygon"] = rec.polygon;
        item["we2"] = rec.we2;
        item["weinf"] = rec.weinf;
        j["per_iteration"].push_back(std::move(item));
    }
    j["final"] = trace.final_polygon;
    j["stabilized"] = trace.stabilized;
    return j;
}

ordered_json robustness_to_json(const RobustnessReport& report) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    ordered_json variants;
    for (const RobustnessEntry& e : report.entries) {
        ordered_json item;
        item["n"] = e.n;
        item["m"] = e.m;
        item["compactness"] = e.compactness;
        variants[e.label] = std::move(item);
    }
    j["variants"] = std::move(variants);
    j["cov_percent"] = number_or_null(report.cov_percent);
    j["partial"] = report.partial;
    j["skipped"] = report.skipped;
    return j;
}

ordered_json run_record_to_json(const RunRecord& record) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["curve_id"] = record.curve_id;
    j["metrics"] = metrics_to_json(record.metrics);
    j["rosin"] = record.rosin ? rosin_to_json(*record.rosin) : ordered_json(nullptr);
    j["wall_time_ns"] = record.wall_time_ns;
    j["trace_path"] = record.trace_path ? ordered_json(*record.trace_path)
                                        : ordered_json(nullptr);
    if (!record.stabilized) j["warning"] = "approximation did not stabilize";
    return j;
}

namespace {

fs::path cache_file(const fs::path& dir, std::uint64_t key) {
    std::ostringstream name;
    name << std::hex << key << ".json";
    return dir / name.str();
}

} // namespace

std::optional<OptimalErrorTable> load_cached_table(const fs::path& dir, std::uint64_t key,
                                                   std::size_t start, std::size_t m_max) {
    const fs::path file = cache_file(dir, key);
    std::error_code ec;
    if (!fs::exists(file, ec)) return std::nullopt;
    try {
        const ordered_json j = ordered_json::parse(read_file(file));
        if (j.value("schema_version", 0) != kSchemaVersion) return std::nullopt;
        OptimalErrorTable t;
        t.n = j.at("n").get<std::size_t>();
        t.start_index = j.at("start_index").get<std::size_t>();
        t.m_max = j.at("m_max").get<std::size_t>();
        // null marks an unreachable entry; JSON has no infinity literal
        for (const ordered_json& v : j.at("opt_e2")) {
            if (v.is_null())
                t.opt_e2.push_back(std::numeric_limits<double>::infinity());
            else
                t.opt_e2.push_back(v.get<double>());
        }
        if (t.start_index != start || t.m_max < m_max ||
            t.opt_e2.size() != t.m_max + 1)
            return std::nullopt;
        return t;
    } catch (const std::exception&) {
        return std::nullopt; // stale or foreign file; rebuild
    }
}

void store_cached_table(const fs::path& dir, std::uint64_t key,
                        const OptimalErrorTable& table) {
    fs::create_directories(dir);
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = table.n;
    j["start_index"] = table.start_index;
    j["m_max"] = table.m_max;
    ordered_json entries = ordered_json::array();
    for (double v : table.opt_e2) entries.push_back(number_or_null(v));
    j["opt_e2"] = std::move(entries);
    write_file_atomic(cache_file(dir, key), j.dump(2) + "\n");
}

TableProvider caching_table_provider(fs::path dir) {
    return [dir](const DigitalCurve& curve, std::size_t start, std::size_t m_max) {
        const std::uint64_t key = curve_content_hash(curve);
        if (auto cached = load_cached_table(dir, key, start, m_max)) return *cached;
        OptimalErrorTable table = build_optimal_table(curve, start, m_max);
        OptimalErrorTable slim = table;
        slim.back.clear();
        store_cached_table(dir, key, slim);
        return table;
    };
}

} // namespace polyapprox
