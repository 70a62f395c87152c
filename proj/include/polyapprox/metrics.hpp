#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "polyapprox/curve.hpp"
#include "polyapprox/geometry.hpp"

namespace polyapprox {

struct MetricsReport {
    std::size_t n = 0;
    std::size_t m = 0;
    double cr = 0.0;
    double e2 = 0.0;
    double einf = 0.0;
    double fom = 0.0; // +infinity when e2 == 0
    double we2 = 0.0;
    double we3 = 0.0;
    double weinf = 0.0;
    double compactness = 0.0;
};

double compression_ratio(std::size_t n, std::size_t m);

// (E2, Einf) of the polygon against the curve.
std::pair<double, double> approximation_errors(const DigitalCurve& curve,
                                               const Polygon& polygon);

struct WeightedMeasures {
    double fom, we2, we3, weinf;
};

WeightedMeasures weighted_measures(double cr, double e2, double einf);

// Area over squared perimeter of the polygon through the given points.
double compactness(std::span<const Point> vertices);
double compactness(const DigitalCurve& curve, const Polygon& polygon);

// Population standard deviation over mean, in percent.
double coefficient_of_variation(std::span<const double> values);

MetricsReport make_report(const DigitalCurve& curve, const Polygon& polygon);

} // namespace polyapprox
