#include "polyapprox/approximator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "polyapprox/metrics.hpp"

namespace polyapprox {

namespace {

std::int64_t dist2(const Point& a, const Point& b) {
    const std::int64_t dx = b.x - a.x, dy = b.y - a.y;
    return dx * dx + dy * dy;
}

std::vector<std::size_t> scan_sequence(const DigitalCurve& curve) {
    const std::size_t n = curve.size();
    std::vector<std::size_t> detected;
    std::set<std::size_t> seen;

    if (!curve.closed()) {
        seen.insert(0);
        seen.insert(n - 1);
        detected.push_back(0);
        detected.push_back(n - 1);
        if (n >= 3) {
            std::size_t anchor = 0, cursor = 1;
            std::int64_t best2 = dist2(curve[0], curve[1]);
            while (cursor + 1 <= n - 1) {
                const std::size_t next = cursor + 1;
                const std::int64_t d2 = dist2(curve[anchor], curve[next]);
                if (d2 < best2) {
                    if (seen.insert(cursor).second) detected.push_back(cursor);
                    anchor = cursor;
                    best2 = dist2(curve[anchor], curve[next]);
                } else {
                    best2 = d2;
                }
                cursor = next;
            }
        }
        return detected;
    }

    // Closed: absolute cursor keeps growing, indices taken modulo n. The
    // pass ends when a detection repeats; the 3n cap bounds the visits.
    std::size_t anchor = 0, cursor = 1;
    std::int64_t best2 = dist2(curve[0], curve[1]);
    const std::size_t cap = 3 * n;
    for (std::size_t advances = 0; advances < cap; ++advances) {
        const std::size_t next = cursor + 1;
        const std::int64_t d2 = dist2(curve[anchor % n], curve[next % n]);
        if (d2 < best2) {
            const std::size_t hit = cursor % n;
            if (!seen.insert(hit).second) break;
            detected.push_back(hit);
            anchor = cursor;
            cursor = next;
            best2 = dist2(curve[anchor % n], curve[cursor % n]);
        } else {
            best2 = d2;
            cursor = next;
        }
    }
    return detected;
}

// Unique points with the smallest original index carrying each coordinate.
struct HullPoint {
    Point p;
    std::size_t index;
};

std::int64_t cross_orient(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<HullPoint> convex_hull(const DigitalCurve& curve) {
    std::vector<HullPoint> pts;
    pts.reserve(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) pts.push_back({curve[i], i});
    std::sort(pts.begin(), pts.end(), [](const HullPoint& a, const HullPoint& b) {
        if (a.p.x != b.p.x) return a.p.x < b.p.x;
        if (a.p.y != b.p.y) return a.p.y < b.p.y;
        return a.index < b.index;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const HullPoint& a, const HullPoint& b) { return a.p == b.p; }),
              pts.end());
    if (pts.size() <= 2) return pts;

    std::vector<HullPoint> hull(2 * pts.size());
    std::size_t k = 0;
    for (const HullPoint& hp : pts) {
        while (k >= 2 && cross_orient(hull[k - 2].p, hull[k - 1].p, hp.p) <= 0) --k;
        hull[k++] = hp;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross_orient(hull[k - 2].p, hull[k - 1].p, it->p) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

// Diameter endpoints (max pairwise distance, smallest index pair on ties)
// plus the point farthest from their chord.
std::vector<std::size_t> diameter_seed(const DigitalCurve& curve) {
    const std::vector<HullPoint> hull = convex_hull(curve);
    if (hull.size() < 2) return {hull.empty() ? 0 : hull.front().index};

    std::int64_t best_d2 = -1;
    std::size_t bi = 0, bj = 0;
    for (std::size_t a = 0; a < hull.size(); ++a) {
        for (std::size_t b = a + 1; b < hull.size(); ++b) {
            const std::int64_t d2 = dist2(hull[a].p, hull[b].p);
            std::size_t lo = std::min(hull[a].index, hull[b].index);
            std::size_t hi = std::max(hull[a].index, hull[b].index);
            if (d2 > best_d2 ||
                (d2 == best_d2 && (lo < bi || (lo == bi && hi < bj)))) {
                best_d2 = d2;
                bi = lo;
                bj = hi;
            }
        }
    }

    std::vector<std::size_t> seed{bi, bj};
    const Point a = curve[bi], b = curve[bj];
    const std::int64_t u = b.x - a.x, v = b.y - a.y;
    std::int64_t best_mag = 0;
    std::size_t best_idx = curve.size();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const Point& p = curve[i];
        const std::int64_t cr = u * (p.y - a.y) - v * (p.x - a.x);
        const std::int64_t mag = cr < 0 ? -cr : cr;
        if (mag > best_mag) {
            best_mag = mag;
            best_idx = i;
        }
    }
    if (best_idx < curve.size()) seed.push_back(best_idx);
    return seed;
}

std::optional<std::size_t> split_segment_impl(const DigitalCurve& curve,
                                              const ChordErrorSums& sums, std::size_t i,
                                              std::size_t j) {
    const std::size_t n = curve.size();
    const std::size_t steps = curve.arc_steps(i, j);
    if (steps < 2) return std::nullopt;
    const Point a = curve[i], b = curve[j % n];

    double best = 0.0;
    std::size_t best_off = 0;
    for (std::size_t off = 1; off < steps; ++off) {
        const Point& cand = curve.at_wrapped(i + off);
        if (cand == a || cand == b) continue;
        const double cost = sums.sse_span(i, i + off) + sums.sse_span(i + off, i + steps);
        if (best_off == 0 || cost < best) {
            best = cost;
            best_off = off;
        }
    }
    if (best_off == 0) return std::nullopt;
    return (i + best_off) % n;
}

struct SideEntry {
    double emax;
    std::size_t start; // curve index of the side's first vertex

    bool operator<(const SideEntry& other) const {
        if (emax != other.emax) return emax > other.emax;
        return start < other.start;
    }
};

InsertionResult insert_vertices_impl(const DigitalCurve& curve, const ChordErrorSums& sums,
                                     const Polygon& polygon) {
    validate_polygon(curve, polygon);
    std::set<std::size_t> verts(polygon.begin(), polygon.end());

    auto next_vertex = [&](std::size_t v) {
        auto it = verts.upper_bound(v);
        return it == verts.end() ? *verts.begin() : *it;
    };

    std::set<SideEntry> queue;
    double e2 = 0.0;
    auto side_emax = [&](std::size_t a, std::size_t b) {
        return segment_error(curve, a, b).max_err;
    };
    {
        std::vector<std::size_t> vs(verts.begin(), verts.end());
        const std::size_t sides = curve.closed() ? vs.size() : vs.size() - 1;
        for (std::size_t k = 0; k < sides; ++k) {
            const std::size_t a = vs[k], b = vs[(k + 1) % vs.size()];
            SegmentError err = segment_error(curve, a, b);
            e2 += err.sse;
            queue.insert({err.max_err, a});
        }
    }

    InsertionResult result;
    result.f_history.push_back(static_cast<double>(verts.size()) + e2);

    while (!queue.empty()) {
        const SideEntry top = *queue.begin();
        if (top.emax == 0.0) break;
        const std::size_t a = top.start;
        const std::size_t b = next_vertex(a);
        auto k = split_segment_impl(curve, sums, a, b);
        if (!k) break;

        const double old_side = sums.sse(a, b);
        const double left = sums.sse(a, *k);
        const double right = sums.sse(*k, b);
        const double new_e2 = e2 - old_side + left + right;
        const double old_f = static_cast<double>(verts.size()) + e2;
        const double new_f = static_cast<double>(verts.size() + 1) + new_e2;
        if (!(new_f < old_f)) break;

        queue.erase(top);
        verts.insert(*k);
        queue.insert({side_emax(a, *k), a});
        queue.insert({side_emax(*k, b), *k});
        e2 = new_e2;
        result.f_history.push_back(new_f);
    }

    result.polygon.assign(verts.begin(), verts.end());
    double delta = 0.0;
    const std::size_t m = result.polygon.size();
    const std::size_t sides = curve.closed() ? m : m - 1;
    for (std::size_t k = 0; k < sides; ++k)
        delta = std::max(delta,
                         segment_error(curve, result.polygon[k], result.polygon[(k + 1) % m])
                             .max_err);
    result.delta = delta;
    return result;
}

double vertex_error_at(const DigitalCurve& curve, const std::vector<std::size_t>& verts,
                       std::size_t pos) {
    const std::size_t m = verts.size();
    const Point& prev = curve[verts[(pos + m - 1) % m]];
    const Point& here = curve[verts[pos]];
    const Point& next = curve[verts[(pos + 1) % m]];
    return chord_distance(here, prev, next);
}

Polygon canonical_rotation(std::vector<std::size_t> verts) {
    auto smallest = std::min_element(verts.begin(), verts.end());
    std::rotate(verts.begin(), smallest, verts.end());
    return verts;
}

Polygon adjust_vertices_impl(const DigitalCurve& curve, const ChordErrorSums& sums,
                             const Polygon& polygon) {
    validate_polygon(curve, polygon);
    if (!curve.closed()) throw UsageError("vertex adjustment needs a closed curve");
    std::vector<std::size_t> verts = polygon;
    const std::size_t m = verts.size();
    const std::size_t n = curve.size();

    std::size_t start_pos = 0;
    double best_strength = -1.0;
    for (std::size_t pos = 0; pos < m; ++pos) {
        const double s = vertex_strength(curve, polygon, pos);
        if (s > best_strength) {
            best_strength = s;
            start_pos = pos;
        }
    }

    for (std::size_t step = 0; step < m; ++step) {
        const std::size_t pos = (start_pos + step) % m;
        const std::size_t prev = verts[(pos + m - 1) % m];
        const std::size_t next = verts[(pos + 1) % m];
        std::size_t cur = verts[pos];
        double cur_cost = sums.sse(prev, cur) + sums.sse(cur, next);
        while (true) {
            const std::size_t down = (cur + n - 1) % n;
            const std::size_t up = (cur + 1) % n;
            double best_cost = cur_cost;
            std::size_t best_v = cur;
            for (std::size_t cand : {std::min(down, up), std::max(down, up)}) {
                if (cand == prev || cand == next || cand == cur) continue;
                const double cost = sums.sse(prev, cand) + sums.sse(cand, next);
                if (cost < best_cost) {
                    best_cost = cost;
                    best_v = cand;
                }
            }
            if (best_v == cur) break;
            cur = best_v;
            cur_cost = best_cost;
        }
        verts[pos] = cur;
    }
    return canonical_rotation(std::move(verts));
}

bool stationary(double a, double b) {
    if (a == b) return true;
    return std::abs(a - b) <= kStationaryTolerance * std::max(std::abs(a), std::abs(b));
}

} // namespace

std::vector<std::size_t> scan_pass(const DigitalCurve& curve, ScanDirection direction) {
    std::vector<std::size_t> hits;
    if (direction == ScanDirection::forward) {
        hits = scan_sequence(curve);
    } else {
        const std::size_t n = curve.size();
        hits = scan_sequence(curve.reversed());
        for (std::size_t& h : hits) h = curve.closed() ? (n - h) % n : n - 1 - h;
    }
    if (curve.closed() && hits.empty()) {
        // A full wrap without any detection; fall back to the two
        // extremal-diameter points.
        auto seed = diameter_seed(curve);
        if (seed.size() > 2) seed.resize(2);
        hits = std::move(seed);
    }
    std::sort(hits.begin(), hits.end());
    return hits;
}

Polygon initial_segmentation(const DigitalCurve& curve) {
    std::set<std::size_t> verts;
    for (std::size_t i : scan_pass(curve, ScanDirection::forward)) verts.insert(i);
    for (std::size_t i : scan_pass(curve, ScanDirection::reverse)) verts.insert(i);

    if (curve.closed() && verts.size() < 3) {
        for (std::size_t i : diameter_seed(curve)) verts.insert(i);
        for (std::size_t i = 0; verts.size() < 3 && i < curve.size(); ++i) verts.insert(i);
    }
    return Polygon(verts.begin(), verts.end());
}

std::optional<std::size_t> split_segment(const DigitalCurve& curve, std::size_t i,
                                         std::size_t j) {
    ChordErrorSums sums(curve);
    return split_segment_impl(curve, sums, i, j);
}

InsertionResult insert_vertices(const DigitalCurve& curve, const Polygon& polygon) {
    ChordErrorSums sums(curve);
    return insert_vertices_impl(curve, sums, polygon);
}

double vertex_error(const DigitalCurve& curve, const Polygon& polygon, std::size_t pos) {
    validate_polygon(curve, polygon);
    if (pos >= polygon.size()) throw UsageError("vertex position out of range");
    if (!curve.closed() && (pos == 0 || pos + 1 == polygon.size()))
        throw UsageError("endpoint of an open curve has no neighbour chord");
    return vertex_error_at(curve, polygon, pos);
}

Polygon merge_pass(const DigitalCurve& curve, const Polygon& polygon, double delta) {
    validate_polygon(curve, polygon);
    if (delta < 0) throw UsageError("negative merge threshold");
    std::vector<std::size_t> verts = polygon;
    std::vector<char> considered(verts.size(), 0);
    if (!curve.closed() && !considered.empty()) {
        considered.front() = 1;
        considered.back() = 1;
    }

    while (true) {
        std::size_t pick = verts.size();
        double pick_err = 0.0;
        for (std::size_t pos = 0; pos < verts.size(); ++pos) {
            if (considered[pos]) continue;
            const double err = vertex_error_at(curve, verts, pos);
            if (pick == verts.size() || err < pick_err) {
                pick = pos;
                pick_err = err;
            }
        }
        if (pick == verts.size()) break;
        considered[pick] = 1;
        if (verts.size() <= 3) continue;
        if (!(pick_err < delta)) continue;

        const std::size_t m = verts.size();
        const Point& a = curve[verts[(pick + m - 1) % m]];
        const Point& b = curve[verts[(pick + 1) % m]];
        bool safe = true;
        for (std::size_t pos = 0; pos < m && safe; ++pos) {
            if (pos == pick || pos == (pick + m - 1) % m || pos == (pick + 1) % m) continue;
            if (!(chord_distance(curve[verts[pos]], a, b) > delta)) safe = false;
        }
        if (!safe) continue;

        verts.erase(verts.begin() + static_cast<std::ptrdiff_t>(pick));
        considered.erase(considered.begin() + static_cast<std::ptrdiff_t>(pick));
        const std::size_t m2 = verts.size();
        considered[(pick + m2 - 1) % m2] = 0;
        considered[pick % m2] = 0;
        if (!curve.closed() && !considered.empty()) {
            considered.front() = 1;
            considered.back() = 1;
        }
    }
    return verts;
}

double vertex_strength(const DigitalCurve& curve, const Polygon& polygon, std::size_t pos) {
    validate_polygon(curve, polygon);
    if (pos >= polygon.size()) throw UsageError("vertex position out of range");
    const std::size_t m = polygon.size();
    const Point& prev = curve[polygon[(pos + m - 1) % m]];
    const Point& here = curve[polygon[pos]];
    const Point& next = curve[polygon[(pos + 1) % m]];
    return seg_length(prev, here) + seg_length(here, next);
}

Polygon adjust_vertices(const DigitalCurve& curve, const Polygon& polygon) {
    ChordErrorSums sums(curve);
    return adjust_vertices_impl(curve, sums, polygon);
}

ApproximationResult approximate(const DigitalCurve& curve) {
    if (!curve.closed()) throw DegenerateGeometry("approximation needs a closed curve");
    if (curve.size() < 8) throw DegenerateGeometry("approximation needs at least 8 points");

    DigitalCurve canon = curve.canonicalized();
    ChordErrorSums sums(canon);

    ApproximationTrace trace;
    trace.initial_vertices = initial_segmentation(canon);
    InsertionResult ins = insert_vertices_impl(canon, sums, trace.initial_vertices);
    trace.after_insertion = ins.polygon;
    trace.delta = ins.delta;
    trace.f_history = std::move(ins.f_history);

    Polygon current = ins.polygon;
    double prev_we2 = 0.0, prev_weinf = 0.0;
    bool stabilized = false;
    for (std::size_t iter = 1; iter <= kMaxStabilizationIterations; ++iter) {
        current = merge_pass(canon, current, trace.delta);
        current = adjust_vertices_impl(canon, sums, current);

        auto [e2, einf] = approximation_errors(canon, current);
        const double cr = compression_ratio(canon.size(), current.size());
        const double we2 = e2 / (cr * cr);
        const double weinf = einf / cr;
        trace.per_iteration.push_back({current, we2, weinf});

        if (iter >= 2 && stationary(we2, prev_we2) && stationary(weinf, prev_weinf)) {
            stabilized = true;
            break;
        }
        prev_we2 = we2;
        prev_weinf = weinf;
    }

    trace.final_polygon = current;
    trace.stabilized = stabilized;
    return {std::move(canon), std::move(current), std::move(trace), stabilized};
}

} // namespace polyapprox
