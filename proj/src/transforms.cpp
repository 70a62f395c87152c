#include "polyapprox/transforms.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "polyapprox/metrics.hpp"

namespace polyapprox {

namespace {

DigitalCurve normalize_closed_loop(std::vector<Point> raw) {
    std::vector<Point> pts;
    pts.reserve(raw.size());
    for (const Point& p : raw)
        if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
    if (pts.size() < 3) throw DegenerateGeometry("curve collapsed below 3 points");

    std::vector<Point> filled;
    filled.reserve(pts.size() * 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % pts.size()];
        filled.push_back(a);
        if (!adjacent8(a, b))
            for (const Point& q : bresenham_fill(a, b)) filled.push_back(q);
    }
    return DigitalCurve(std::move(filled), true).canonicalized();
}

Point round_centroid(const DigitalCurve& curve) {
    std::int64_t sx = 0, sy = 0;
    for (const Point& p : curve.points()) {
        sx += p.x;
        sy += p.y;
    }
    const double n = static_cast<double>(curve.size());
    return {std::llround(static_cast<double>(sx) / n),
            std::llround(static_cast<double>(sy) / n)};
}

} // namespace

std::vector<Point> bresenham_fill(const Point& a, const Point& b) {
    std::vector<Point> out;
    std::int64_t x = a.x, y = a.y;
    const std::int64_t dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
    const std::int64_t dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
    std::int64_t err = dx + dy;
    while (true) {
        const std::int64_t e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
        if (x == b.x && y == b.y) break;
        out.push_back({x, y});
    }
    return out;
}

Point rotate_point(const Point& p, const Point& center, double degrees) {
    const double rad = degrees * std::numbers::pi / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    const double dx = static_cast<double>(p.x - center.x);
    const double dy = static_cast<double>(p.y - center.y);
    return {center.x + std::llround(dx * c - dy * s),
            center.y + std::llround(dx * s + dy * c)};
}

DigitalCurve rotate_curve(const DigitalCurve& curve, double degrees) {
    if (!curve.closed()) throw UsageError("transforms need a closed curve");
    if (!(degrees > 0.0 && degrees < 360.0))
        throw UsageError("rotation angle must be inside (0, 360) degrees");
    const Point center = round_centroid(curve);
    std::vector<Point> pts;
    pts.reserve(curve.size());
    for (const Point& p : curve.points()) pts.push_back(rotate_point(p, center, degrees));
    return normalize_closed_loop(std::move(pts));
}

DigitalCurve scale_curve(const DigitalCurve& curve, double factor) {
    if (!curve.closed()) throw UsageError("transforms need a closed curve");
    if (!(factor > 0.0)) throw UsageError("scale factor must be positive");
    if (factor == 1.0) return curve;
    std::vector<Point> pts;
    pts.reserve(curve.size());
    for (const Point& p : curve.points())
        pts.push_back({std::llround(static_cast<double>(p.x) * factor),
                       std::llround(static_cast<double>(p.y) * factor)});
    return normalize_closed_loop(std::move(pts));
}

VariantSet make_variant_set(const DigitalCurve& curve) {
    VariantSet set;
    set.variants.emplace_back("original", curve.canonicalized());
    for (int deg = 10; deg <= 80; deg += 10) {
        const std::string label = "rot" + std::to_string(deg);
        try {
            set.variants.emplace_back(label, rotate_curve(curve, deg));
        } catch (const DegenerateGeometry&) {
            set.skipped.push_back(label);
        }
    }
    for (int pct = 20; pct <= 200; pct += 20) {
        if (pct == 100) continue;
        char label[16];
        std::snprintf(label, sizeof label, "scale%03d", pct);
        try {
            set.variants.emplace_back(label, scale_curve(curve, pct / 100.0));
        } catch (const DegenerateGeometry&) {
            set.skipped.push_back(label);
        }
    }
    return set;
}

RobustnessReport robustness_experiment(
    const DigitalCurve& curve,
    const std::function<Polygon(const DigitalCurve&)>& approximator) {
    VariantSet set = make_variant_set(curve);
    RobustnessReport report;
    report.skipped = set.skipped;

    std::vector<double> values;
    for (const auto& [label, variant] : set.variants) {
        try {
            const Polygon polygon = approximator(variant);
            const double c = compactness(variant, polygon);
            report.entries.push_back({label, variant.size(), polygon.size(), c});
            values.push_back(c);
        } catch (const DegenerateGeometry&) {
            report.skipped.push_back(label);
        }
    }
    report.partial = !report.skipped.empty();
    report.cov_percent = values.size() >= 2 ? coefficient_of_variation(values)
                                            : std::numeric_limits<double>::quiet_NaN();
    return report;
}

} // namespace polyapprox
