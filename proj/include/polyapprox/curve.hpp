#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polyapprox/errors.hpp"

namespace polyapprox {

struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

// (y, x) lexicographic order, used for the canonical start point.
inline bool yx_less(const Point& a, const Point& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
}

inline bool adjacent8(const Point& a, const Point& b) {
    auto dx = b.x - a.x, dy = b.y - a.y;
    return (dx != 0 || dy != 0) && dx >= -1 && dx <= 1 && dy >= -1 && dy <= 1;
}

// Freeman directions, counter-clockwise from east, y-up.
// 0=E 1=NE 2=N 3=NW 4=W 5=SW 6=S 7=SE
Point chain_direction(int digit);

// Sequence of integer lattice points, circular when closed.
// Closed curves have >= 3 points, open ones >= 2, and no two consecutive
// points (including last->first when closed) coincide.
class DigitalCurve {
public:
    DigitalCurve(std::vector<Point> points, bool closed);

    const std::vector<Point>& points() const { return points_; }
    bool closed() const { return closed_; }
    std::size_t size() const { return points_.size(); }

    const Point& operator[](std::size_t i) const { return points_[i]; }
    // Circular access for closed curves.
    const Point& at_wrapped(std::size_t i) const { return points_[i % points_.size()]; }

    std::size_t next(std::size_t i) const { return i + 1 == points_.size() ? 0 : i + 1; }
    std::size_t prev(std::size_t i) const { return i == 0 ? points_.size() - 1 : i - 1; }

    // Steps from i forward to j, circular when closed.
    std::size_t arc_steps(std::size_t i, std::size_t j) const;

    // True when every consecutive pair (and the wrap pair) is 8-connected.
    bool connected8() const;

    // Closed: [p0, p_{n-1}, ..., p1] so the anchor point is kept.
    // Open: plain reversal.
    DigitalCurve reversed() const;

    // Closed curves only: rotate so index 0 holds the smallest (y, x) point
    // and orient counter-clockwise (positive shoelace). Open curves are
    // returned unchanged.
    DigitalCurve canonicalized() const;

    // Twice the signed area (shoelace sum); meaningful for closed curves.
    std::int64_t shoelace2() const;

private:
    std::vector<Point> points_;
    bool closed_;
};

// Strictly increasing curve indices; the anchor is the smallest index.
using Polygon = std::vector<std::size_t>;

void validate_polygon(const DigitalCurve& curve, const Polygon& polygon);

DigitalCurve decode_chain_code(Point start, const std::string& code);

// Inverse of decode_chain_code. Open curves whose endpoints are 8-adjacent
// (or equal) cannot be told apart from closed ones in this format and are
// rejected, except for the 2-point case which decode always reads as open.
std::pair<Point, std::string> encode_chain_code(const DigitalCurve& curve);

// Binary raster, row 0 on top (y-down storage as read from PBM).
struct Raster {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> cells; // row-major, nonzero = foreground

    bool at(std::size_t row, std::size_t col) const { return cells[row * width + col] != 0; }
};

// Moore-neighbor boundary trace of the single foreground component.
// Output is y-up, counter-clockwise, canonicalized.
DigitalCurve trace_boundary(const Raster& raster);

} // namespace polyapprox
