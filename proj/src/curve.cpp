#include "polyapprox/curve.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <unordered_map>

namespace polyapprox {

namespace {

constexpr std::array<Point, 8> kDirections{{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};

char digit_for_step(const Point& a, const Point& b) {
    auto dx = b.x - a.x, dy = b.y - a.y;
    for (int d = 0; d < 8; ++d)
        if (kDirections[d].x == dx && kDirections[d].y == dy) return static_cast<char>('0' + d);
    throw InvalidInput("step is not a chain-code move");
}

// Compares the rotations of pts starting at a and at b, (y, x) pointwise.
bool rotation_less(const std::vector<Point>& pts, std::size_t a, std::size_t b) {
    std::size_t n = pts.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Point& pa = pts[(a + k) % n];
        const Point& pb = pts[(b + k) % n];
        if (pa == pb) continue;
        return yx_less(pa, pb);
    }
    return a < b;
}

} // namespace

Point chain_direction(int digit) {
    if (digit < 0 || digit > 7) throw InvalidInput("chain code digit out of range");
    return kDirections[static_cast<std::size_t>(digit)];
}

DigitalCurve::DigitalCurve(std::vector<Point> points, bool closed)
    : points_(std::move(points)), closed_(closed) {
    const std::size_t n = points_.size();
    if (closed_ ? n < 3 : n < 2)
        throw InvalidInput(closed_ ? "closed curve needs at least 3 points"
                                   : "open curve needs at least 2 points");
    const std::size_t pairs = closed_ ? n : n - 1;
    for (std::size_t i = 0; i < pairs; ++i) {
        const Point& a = points_[i];
        const Point& b = points_[(i + 1) % n];
        if (a == b)
            throw InvalidInput("consecutive duplicate point at index " + std::to_string(i));
        if (!adjacent8(a, b))
            throw InvalidInput("points " + std::to_string(i) + " and " +
                               std::to_string((i + 1) % n) + " are not 8-connected");
    }
}

std::size_t DigitalCurve::arc_steps(std::size_t i, std::size_t j) const {
    const std::size_t n = points_.size();
    if (closed_) return (j + n - i) % n;
    if (j < i) throw UsageError("backward arc on an open curve");
    return j - i;
}

bool DigitalCurve::connected8() const {
    const std::size_t n = points_.size();
    const std::size_t pairs = closed_ ? n : n - 1;
    for (std::size_t i = 0; i < pairs; ++i)
        if (!adjacent8(points_[i], points_[(i + 1) % n])) return false;
    return true;
}

DigitalCurve DigitalCurve::reversed() const {
    std::vector<Point> pts;
    pts.reserve(points_.size());
    if (closed_) {
        pts.push_back(points_.front());
        for (std::size_t i = points_.size(); i > 1; --i) pts.push_back(points_[i - 1]);
    } else {
        pts.assign(points_.rbegin(), points_.rend());
    }
    return DigitalCurve(std::move(pts), closed_);
}

std::int64_t DigitalCurve::shoelace2() const {
    __int128 sum = 0;
    const std::size_t n = points_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = points_[i];
        const Point& b = points_[(i + 1) % n];
        sum += static_cast<__int128>(a.x) * b.y - static_cast<__int128>(b.x) * a.y;
    }
    if (sum > INT64_MAX || sum < INT64_MIN) throw Error("shoelace sum overflows");
    return static_cast<std::int64_t>(sum);
}

DigitalCurve DigitalCurve::canonicalized() const {
    if (!closed_) return *this;
    std::vector<Point> pts = points_;
    {
        DigitalCurve tmp(pts, true);
        if (tmp.shoelace2() < 0) std::reverse(pts.begin(), pts.end());
    }
    const std::size_t n = pts.size();
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (yx_less(pts[i], pts[best])) best = i;
    for (std::size_t i = 0; i < n; ++i)
        if (pts[i] == pts[best] && i != best && rotation_less(pts, i, best)) best = i;
    std::rotate(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(best), pts.end());
    return DigitalCurve(std::move(pts), true);
}

void validate_polygon(const DigitalCurve& curve, const Polygon& polygon) {
    const std::size_t minimum = curve.closed() ? 3 : 2;
    if (polygon.size() < minimum)
        throw InvalidInput("polygon needs at least " + std::to_string(minimum) + " vertices");
    for (std::size_t k = 0; k < polygon.size(); ++k) {
        if (polygon[k] >= curve.size())
            throw InvalidInput("vertex index " + std::to_string(polygon[k]) + " out of range");
        if (k > 0 && polygon[k] <= polygon[k - 1])
            throw InvalidInput("vertex indices are not strictly increasing");
    }
}

DigitalCurve decode_chain_code(Point start, const std::string& code) {
    if (code.empty()) throw InvalidInput("empty chain code");
    std::vector<Point> pts{start};
    pts.reserve(code.size() + 1);
    for (char ch : code) {
        if (ch < '0' || ch > '7')
            throw InvalidInput(std::string("chain code digit out of range: '") + ch + "'");
        Point d = kDirections[static_cast<std::size_t>(ch - '0')];
        pts.push_back({pts.back().x + d.x, pts.back().y + d.y});
    }
    bool closed = false;
    if (pts.back() == start) {
        pts.pop_back();
        if (pts.size() < 3) throw InvalidInput("closed chain code with fewer than 3 points");
        closed = true;
    } else if (pts.size() >= 3 && adjacent8(pts.back(), start)) {
        closed = true;
    }
    return DigitalCurve(std::move(pts), closed);
}

std::pair<Point, std::string> encode_chain_code(const DigitalCurve& curve) {
    const auto& pts = curve.points();
    if (!curve.closed() && pts.size() >= 3 &&
        (pts.back() == pts.front() || adjacent8(pts.back(), pts.front())))
        throw InvalidInput("open curve with 8-adjacent endpoints has no chain-code form");
    std::string code;
    const std::size_t steps = curve.closed() ? pts.size() : pts.size() - 1;
    code.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i)
        code += digit_for_step(pts[i], pts[(i + 1) % pts.size()]);
    return {pts.front(), code};
}

namespace {

// Clockwise Moore neighborhood in (row, col), starting west.
constexpr std::array<std::pair<int, int>, 8> kMoore{{
    {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1},
}};

struct Pixel {
    std::size_t row, col;
    friend bool operator==(const Pixel&, const Pixel&) = default;
};

int moore_index(const Pixel& center, const Pixel& nb) {
    int dr = static_cast<int>(nb.row) - static_cast<int>(center.row);
    int dc = static_cast<int>(nb.col) - static_cast<int>(center.col);
    for (int k = 0; k < 8; ++k)
        if (kMoore[k].first == dr && kMoore[k].second == dc) return k;
    throw Error("backtrack is not a Moore neighbor");
}

void check_single_component(const Raster& r) {
    std::size_t seen = 0, total = 0;
    std::vector<std::uint8_t> visited(r.width * r.height, 0);
    std::size_t start_idx = r.width * r.height;
    for (std::size_t i = 0; i < r.cells.size(); ++i)
        if (r.cells[i]) {
            ++total;
            if (start_idx == r.width * r.height) start_idx = i;
        }
    if (total == 0) throw InvalidInput("raster has no foreground component");
    std::queue<std::size_t> q;
    q.push(start_idx);
    visited[start_idx] = 1;
    while (!q.empty()) {
        std::size_t i = q.front();
        q.pop();
        ++seen;
        std::size_t row = i / r.width, col = i % r.width;
        if (row == 0 || col == 0 || row + 1 == r.height || col + 1 == r.width)
            throw InvalidInput("foreground touches the raster edge");
        for (auto [dr, dc] : kMoore) {
            std::size_t nr = row + static_cast<std::size_t>(dr);
            std::size_t nc = col + static_cast<std::size_t>(dc);
            std::size_t ni = nr * r.width + nc;
            if (r.cells[ni] && !visited[ni]) {
                visited[ni] = 1;
                q.push(ni);
            }
        }
    }
    if (seen != total) throw InvalidInput("raster has more than one foreground component");
}

} // namespace

DigitalCurve trace_boundary(const Raster& raster) {
    if (raster.cells.size() != raster.width * raster.height)
        throw InvalidInput("raster cell count does not match its dimensions");
    check_single_component(raster);

    Pixel start{0, 0};
    bool found = false;
    for (std::size_t row = 0; row < raster.height && !found; ++row)
        for (std::size_t col = 0; col < raster.width && !found; ++col)
            if (raster.at(row, col)) {
                start = {row, col};
                found = true;
            }

    // Each step is a pure function of the (pixel, backtrack) state, so the
    // walk is eventually periodic and the first repeated state closes the
    // boundary loop. Pixels collected before that state entered the cycle
    // are a transient lead-in and get dropped. Plain stop-at-start checks
    // miss loops that re-enter the start pixel from a different side, as
    // happens when the start sits on a one-pixel-wide protrusion.
    const auto state_key = [&raster](const Pixel& px, const Pixel& back) {
        return (px.row * raster.width + px.col) * 8 +
               static_cast<std::size_t>(moore_index(px, back));
    };
    std::vector<Pixel> contour{start};
    const Pixel initial_backtrack{start.row, start.col - 1};
    std::unordered_map<std::size_t, std::size_t> seen{{state_key(start, initial_backtrack), 0}};
    Pixel p = start, b = initial_backtrack;
    const std::size_t cap = 8 * raster.width * raster.height + 8;
    for (std::size_t iter = 0;; ++iter) {
        if (iter > cap) throw Error("boundary trace did not close");
        int from = moore_index(p, b);
        Pixel next = p, back = b;
        bool advanced = false;
        for (int k = 1; k <= 8; ++k) {
            int idx = (from + k) % 8;
            Pixel q{p.row + static_cast<std::size_t>(kMoore[idx].first),
                    p.col + static_cast<std::size_t>(kMoore[idx].second)};
            if (raster.at(q.row, q.col)) {
                next = q;
                advanced = true;
                break;
            }
            back = q;
        }
        if (!advanced) break; // isolated pixel
        const auto [it, inserted] = seen.emplace(state_key(next, back), contour.size());
        if (!inserted) {
            contour.erase(contour.begin(),
                          contour.begin() + static_cast<std::ptrdiff_t>(it->second));
            break;
        }
        contour.push_back(next);
        p = next;
        b = back;
    }

    if (contour.size() < 3) throw DegenerateGeometry("boundary has fewer than 3 points");
    std::vector<Point> pts;
    pts.reserve(contour.size());
    for (const Pixel& px : contour)
        pts.push_back({static_cast<std::int64_t>(px.col),
                       static_cast<std::int64_t>(raster.height - 1 - px.row)});
    return DigitalCurve(std::move(pts), true).canonicalized();
}

} // namespace polyapprox
