#include "polyapprox/geometry.hpp"

#include <cmath>

namespace polyapprox {

namespace {

inline std::int64_t cross_to_chord(const Point& p, std::int64_t u, std::int64_t v,
                                   std::int64_t w) {
    return u * p.y - v * p.x + w;
}

} // namespace

double seg_length(const Point& p, const Point& q) {
    const double dx = static_cast<double>(q.x - p.x);
    const double dy = static_cast<double>(q.y - p.y);
    return std::sqrt(dx * dx + dy * dy);
}

double point_line_distance(const Point& p, const Point& a, const Point& b) {
    if (a == b) throw DegenerateGeometry("degenerate chord");
    const std::int64_t u = b.x - a.x, v = b.y - a.y;
    const std::int64_t cross = u * (p.y - a.y) - v * (p.x - a.x);
    const double len2 = static_cast<double>(u * u + v * v);
    return std::abs(static_cast<double>(cross)) / std::sqrt(len2);
}

double chord_distance(const Point& p, const Point& a, const Point& b) {
    return a == b ? seg_length(p, a) : point_line_distance(p, a, b);
}

bool is_sharp_turn(const Point& p_i, const Point& p_k, const Point& p_j) {
    const std::int64_t dot = (p_k.x - p_i.x) * (p_j.x - p_k.x) +
                             (p_k.y - p_i.y) * (p_j.y - p_k.y);
    return dot < 0;
}

SegmentError segment_error(const DigitalCurve& curve, std::size_t i, std::size_t j) {
    const std::size_t n = curve.size();
    if (i >= n || j >= n) throw UsageError("segment index out of range");
    if (i == j) throw UsageError("segment endpoints coincide");
    const Point a = curve[i], b = curve[j];
    if (a == b) {
        // Thin spurs can put the same coordinates at both ends; the chord
        // collapses to a point and distances are measured to it.
        const std::size_t steps = curve.arc_steps(i, j);
        SegmentError result;
        __int128 total = 0;
        std::int64_t best = -1;
        for (std::size_t off = 1; off < steps; ++off) {
            const Point& p = curve.at_wrapped(i + off);
            const std::int64_t dx = p.x - a.x, dy = p.y - a.y;
            const std::int64_t d2 = dx * dx + dy * dy;
            total += d2;
            if (d2 > best) {
                best = d2;
                result.argmax_index = (i + off) % n;
            }
        }
        if (result.argmax_index != SegmentError::kNoInterior) {
            result.sse = static_cast<double>(total);
            result.max_err = std::sqrt(static_cast<double>(best));
        }
        return result;
    }

    const std::int64_t u = b.x - a.x, v = b.y - a.y;
    const std::int64_t w = v * a.x - u * a.y;
    const std::size_t steps = curve.arc_steps(i, j);

    SegmentError result;
    __int128 total = 0;
    std::int64_t best = -1;
    for (std::size_t off = 1; off < steps; ++off) {
        const Point& p = curve.at_wrapped(i + off);
        const std::int64_t cross = cross_to_chord(p, u, v, w);
        const std::int64_t mag = cross < 0 ? -cross : cross;
        total += static_cast<__int128>(cross) * cross;
        if (mag > best) {
            best = mag;
            result.argmax_index = (i + off) % n;
        }
    }
    if (result.argmax_index != SegmentError::kNoInterior) {
        const double len2 = static_cast<double>(u * u + v * v);
        result.sse = static_cast<double>(total) / len2;
        result.max_err = static_cast<double>(best) / std::sqrt(len2);
    }
    return result;
}

ChordErrorSums::ChordErrorSums(const DigitalCurve& curve)
    : n_(curve.size()), closed_(curve.closed()), pts_(curve.points()) {
    std::int64_t cmax = 1;
    for (const Point& p : pts_) {
        cmax = std::max({cmax, p.x < 0 ? -p.x : p.x, p.y < 0 ? -p.y : p.y});
    }
    // Keep the int64 prefix sums exact.
    if (static_cast<double>(cmax) * static_cast<double>(cmax) *
            static_cast<double>(2 * n_) > 4.0e18)
        throw Error("coordinates too large for exact error sums");

    const std::size_t len = closed_ ? 2 * n_ : n_;
    sx_.assign(len + 1, 0);
    sy_.assign(len + 1, 0);
    sxx_.assign(len + 1, 0);
    syy_.assign(len + 1, 0);
    sxy_.assign(len + 1, 0);
    for (std::size_t t = 0; t < len; ++t) {
        const Point& p = pts_[t % n_];
        sx_[t + 1] = sx_[t] + p.x;
        sy_[t + 1] = sy_[t] + p.y;
        sxx_[t + 1] = sxx_[t] + p.x * p.x;
        syy_[t + 1] = syy_[t] + p.y * p.y;
        sxy_[t + 1] = sxy_[t] + p.x * p.y;
    }
}

double ChordErrorSums::sse_span(std::size_t t1, std::size_t t2) const {
    if (t2 <= t1 || t2 > t1 + n_ || t2 >= sx_.size() || (!closed_ && t2 >= n_))
        throw UsageError("bad span for chord error sums");
    const Point& a = pts_[t1 % n_];
    const Point& b = pts_[t2 % n_];
    if (t2 - t1 <= 1) return 0.0;

    const std::int64_t cnt = static_cast<std::int64_t>(t2 - t1 - 1);
    const std::int64_t dx = sx_[t2] - sx_[t1 + 1];
    const std::int64_t dy = sy_[t2] - sy_[t1 + 1];
    const std::int64_t dxx = sxx_[t2] - sxx_[t1 + 1];
    const std::int64_t dyy = syy_[t2] - syy_[t1 + 1];
    if (a == b) {
        // Collapsed chord; squared distances to the shared point.
        __int128 pt = static_cast<__int128>(dxx) - 2 * static_cast<__int128>(a.x) * dx +
                      static_cast<__int128>(cnt) * a.x * a.x;
        pt += static_cast<__int128>(dyy) - 2 * static_cast<__int128>(a.y) * dy +
              static_cast<__int128>(cnt) * a.y * a.y;
        return static_cast<double>(pt);
    }

    const std::int64_t u = b.x - a.x, v = b.y - a.y;
    const std::int64_t w = v * a.x - u * a.y;
    const std::int64_t dxy = sxy_[t2] - sxy_[t1 + 1];

    __int128 total = static_cast<__int128>(u) * u * dyy;
    total += static_cast<__int128>(v) * v * dxx;
    total += static_cast<__int128>(cnt) * w * w;
    total -= static_cast<__int128>(2) * u * v * dxy;
    total += static_cast<__int128>(2) * u * w * dy;
    total -= static_cast<__int128>(2) * v * w * dx;

    const double len2 = static_cast<double>(u * u + v * v);
    return static_cast<double>(total) / len2;
}

double ChordErrorSums::sse(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw UsageError("segment index out of range");
    if (i == j) throw UsageError("segment endpoints coincide");
    if (closed_) {
        const std::size_t arc = (j + n_ - i) % n_;
        return sse_span(i, i + arc);
    }
    if (j < i) throw UsageError("backward arc on an open curve");
    return sse_span(i, j);
}

} // namespace polyapprox
