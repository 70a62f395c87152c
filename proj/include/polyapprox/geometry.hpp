#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "polyapprox/curve.hpp"

namespace polyapprox {

struct SegmentError {
    double sse = 0.0;
    double max_err = 0.0;
    // Curve index of the farthest interior point; kNoInterior when the
    // segment has no interior points.
    std::size_t argmax_index = kNoInterior;

    static constexpr std::size_t kNoInterior = std::numeric_limits<std::size_t>::max();
};

double seg_length(const Point& p, const Point& q);

// Distance from p to the infinite line through a and b.
double point_line_distance(const Point& p, const Point& a, const Point& b);

// Same, but a == b falls back to the distance from p to that point.
double chord_distance(const Point& p, const Point& a, const Point& b);

// Errors of the interior points strictly between curve indices i and j.
// Ties for the maximum go to the smallest circular offset from i. Endpoints
// sharing one coordinate pair (a spur visited twice) collapse the chord to
// that point and distances are measured to it.
SegmentError segment_error(const DigitalCurve& curve, std::size_t i, std::size_t j);

bool is_sharp_turn(const Point& p_i, const Point& p_k, const Point& p_j);

// Prefix sums over the (doubled, for wrap-around) point sequence giving the
// exact sum of squared chord distances for any arc in O(1). The squared
// cross products are combined in 128-bit integers, so the only rounding is
// the final division.
class ChordErrorSums {
public:
    explicit ChordErrorSums(const DigitalCurve& curve);

    std::size_t size() const { return n_; }

    // SSE of interior points of the arc i -> j (forward, circular when the
    // curve is closed). A collapsed chord measures to its single point, the
    // same fallback chord_distance applies.
    double sse(std::size_t i, std::size_t j) const;

    // Same on doubled positions t1 < t2 <= t1 + n; endpoints p_{t1 % n},
    // p_{t2 % n}, interior t1+1 .. t2-1.
    double sse_span(std::size_t t1, std::size_t t2) const;

private:
    std::size_t n_ = 0;
    bool closed_ = false;
    std::vector<Point> pts_;
    std::vector<std::int64_t> sx_, sy_, sxx_, syy_, sxy_;
};

} // namespace polyapprox
