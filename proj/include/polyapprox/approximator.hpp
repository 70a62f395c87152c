#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "polyapprox/curve.hpp"
#include "polyapprox/geometry.hpp"

namespace polyapprox {

enum class ScanDirection { forward, reverse };

inline constexpr std::size_t kMaxStabilizationIterations = 50;
inline constexpr double kStationaryTolerance = 1e-9;

struct IterationRecord {
    Polygon polygon;
    double we2 = 0.0;
    double weinf = 0.0;
};

struct ApproximationTrace {
    Polygon initial_vertices;
    Polygon after_insertion;
    double delta = 0.0;                 // max error after insertion, the merge threshold
    std::vector<double> f_history;      // m + E2 before insertion, then after each accepted one
    std::vector<IterationRecord> per_iteration;
    Polygon final_polygon;
    bool stabilized = false;
};

struct InsertionResult {
    Polygon polygon;
    double delta = 0.0;
    std::vector<double> f_history;
};

struct ApproximationResult {
    DigitalCurve curve; // canonicalized; all polygon indices refer to it
    Polygon polygon;
    ApproximationTrace trace;
    bool stabilized = false;
};

// Sharp turnings detected by one scan of the curve. The reverse pass scans
// the reversed sequence and maps the hits back to input indices. Detection
// fires at p_k when |p_i p_{k+1}| < |p_i p_k| for the current anchor p_i;
// the fired point becomes the new anchor. Closed curves scan past the wrap
// until a detection repeats; open curves contribute both endpoints.
std::vector<std::size_t> scan_pass(const DigitalCurve& curve, ScanDirection direction);

// Union of both scan passes. A closed-curve result below 3 vertices is
// augmented with the diameter pair and the point farthest from their chord.
Polygon initial_segmentation(const DigitalCurve& curve);

// Interior index splitting (i, j) with the least combined SSE of the two
// sub-chords; ties go to the smallest offset from i. Empty interior gives
// nothing.
std::optional<std::size_t> split_segment(const DigitalCurve& curve, std::size_t i,
                                         std::size_t j);

// Repeatedly splits the side of largest max error while f = m + E2 strictly
// decreases. delta is the max error of the returned polygon.
InsertionResult insert_vertices(const DigitalCurve& curve, const Polygon& polygon);

// Distance from vertex at polygon position pos to the chord through its
// polygon neighbours.
double vertex_error(const DigitalCurve& curve, const Polygon& polygon, std::size_t pos);

// Deletes weakest vertices whose error is below delta, unless some other
// vertex sits within delta of the bridging chord. Never drops a closed
// polygon below 3 vertices.
Polygon merge_pass(const DigitalCurve& curve, const Polygon& polygon, double delta);

// Sum of the two adjoining side lengths at polygon position pos.
double vertex_strength(const DigitalCurve& curve, const Polygon& polygon, std::size_t pos);

// One sweep from the strongest vertex, hill-climbing each vertex along the
// curve while the SSE of its two sides strictly decreases. Total E2 never
// increases.
Polygon adjust_vertices(const DigitalCurve& curve, const Polygon& polygon);

// Full pipeline: scan, insert, then merge/adjust until WE2 and WEinf are
// stationary between consecutive iterations (or the iteration cap hits,
// which clears the stabilized flag). Requires a closed curve with n >= 8.
ApproximationResult approximate(const DigitalCurve& curve);

} // namespace polyapprox
