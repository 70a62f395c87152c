#include "polyapprox/metrics.hpp"

#include <cmath>
#include <limits>

namespace polyapprox {

double compression_ratio(std::size_t n, std::size_t m) {
    if (m == 0) throw UsageError("compression ratio with zero vertices");
    return static_cast<double>(n) / static_cast<double>(m);
}

std::pair<double, double> approximation_errors(const DigitalCurve& curve,
                                               const Polygon& polygon) {
    validate_polygon(curve, polygon);
    const std::size_t m = polygon.size();
    const std::size_t sides = curve.closed() ? m : m - 1;
    double e2 = 0.0, einf = 0.0;
    for (std::size_t k = 0; k < sides; ++k) {
        SegmentError err = segment_error(curve, polygon[k], polygon[(k + 1) % m]);
        e2 += err.sse;
        einf = std::max(einf, err.max_err);
    }
    return {e2, einf};
}

WeightedMeasures weighted_measures(double cr, double e2, double einf) {
    WeightedMeasures w{};
    w.fom = e2 == 0.0 ? std::numeric_limits<double>::infinity() : cr / e2;
    w.we2 = e2 / (cr * cr);
    w.we3 = e2 / (cr * cr * cr);
    w.weinf = einf / cr;
    return w;
}

double compactness(std::span<const Point> vertices) {
    if (vertices.size() < 3) throw UsageError("compactness needs at least 3 vertices");
    const std::size_t m = vertices.size();
    __int128 twice_area = 0;
    double perimeter = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const Point& a = vertices[k];
        const Point& b = vertices[(k + 1) % m];
        twice_area += static_cast<__int128>(a.x) * b.y - static_cast<__int128>(b.x) * a.y;
        perimeter += seg_length(a, b);
    }
    if (twice_area < 0) twice_area = -twice_area;
    const double area = static_cast<double>(twice_area) / 2.0;
    return area / (perimeter * perimeter);
}

double compactness(const DigitalCurve& curve, const Polygon& polygon) {
    validate_polygon(curve, polygon);
    std::vector<Point> pts;
    pts.reserve(polygon.size());
    for (std::size_t idx : polygon) pts.push_back(curve[idx]);
    return compactness(pts);
}

double coefficient_of_variation(std::span<const double> values) {
    if (values.size() < 2) throw UsageError("coefficient of variation needs at least 2 values");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (mean == 0.0) throw UsageError("coefficient of variation undefined for zero mean");
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    return 100.0 * std::sqrt(var) / mean;
}

MetricsReport make_report(const DigitalCurve& curve, const Polygon& polygon) {
    MetricsReport r;
    r.n = curve.size();
    r.m = polygon.size();
    r.cr = compression_ratio(r.n, r.m);
    auto [e2, einf] = approximation_errors(curve, polygon);
    r.e2 = e2;
    r.einf = einf;
    WeightedMeasures w = weighted_measures(r.cr, e2, einf);
    r.fom = w.fom;
    r.we2 = w.we2;
    r.we3 = w.we3;
    r.weinf = w.weinf;
    r.compactness = compactness(curve, polygon);
    return r;
}

} // namespace polyapprox
