#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "polyapprox/curve.hpp"

namespace polyapprox {

// Integer points strictly between a and b on the Bresenham line, ordered
// from a to b.
std::vector<Point> bresenham_fill(const Point& a, const Point& b);

Point rotate_point(const Point& p, const Point& center, double degrees);

// Rotation about the integer-rounded centroid, then consecutive-duplicate
// removal, gap filling and canonicalization.
DigitalCurve rotate_curve(const DigitalCurve& curve, double degrees);

// Multiplies coordinates by factor and repairs the lattice loop the same
// way. factor == 1 returns the input unchanged.
DigitalCurve scale_curve(const DigitalCurve& curve, double factor);

// original + rotations 10..80 step 10 + scales 0.2..0.8 and 1.2..2.0
// step 0.2. Variants that collapse are listed in skipped.
struct VariantSet {
    std::vector<std::pair<std::string, DigitalCurve>> variants;
    std::vector<std::string> skipped;
};

VariantSet make_variant_set(const DigitalCurve& curve);

struct RobustnessEntry {
    std::string label;
    std::size_t n = 0;
    std::size_t m = 0;
    double compactness = 0.0;
};

struct RobustnessReport {
    std::vector<RobustnessEntry> entries;
    double cov_percent = 0.0;
    bool partial = false;
    std::vector<std::string> skipped;
};

// Runs the approximator over the variant set and reports the coefficient of
// variation of the resulting polygon compactness values.
RobustnessReport robustness_experiment(
    const DigitalCurve& curve,
    const std::function<Polygon(const DigitalCurve&)>& approximator);

} // namespace polyapprox
