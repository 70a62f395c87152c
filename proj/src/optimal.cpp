#include "polyapprox/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyapprox/geometry.hpp"
#include "polyapprox/metrics.hpp"

namespace polyapprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dp_args(const DigitalCurve& curve, std::size_t m, std::size_t start) {
    if (!curve.closed()) throw UsageError("optimal baseline needs a closed curve");
    if (m < 3) throw UsageError("optimal polygon needs at least 3 vertices");
    if (m > curve.size()) throw UsageError("more vertices requested than curve points");
    if (start >= curve.size()) throw UsageError("start index out of range");
}

} // namespace

Polygon OptimalErrorTable::reconstruct(std::size_t m) const {
    if (m < 1 || m > m_max) throw UsageError("m outside the table range");
    if (!has_backpointers()) throw UsageError("table has no backpointers");
    if (!std::isfinite(opt_e2[m]))
        throw DegenerateGeometry("no usable polygon with " + std::to_string(m) +
                                 " vertices from this start");
    std::vector<std::size_t> positions;
    std::size_t q = n;
    for (std::size_t k = m; k >= 1; --k) {
        q = back[k][q];
        positions.push_back(q);
    }
    if (q != 0) throw Error("backpointer chain did not reach the start");
    Polygon poly;
    poly.reserve(positions.size());
    for (std::size_t pos : positions) poly.push_back((start_index + pos) % n);
    std::sort(poly.begin(), poly.end());
    return poly;
}

OptimalErrorTable build_optimal_table(const DigitalCurve& curve, std::size_t start,
                                      std::size_t m_max) {
    check_dp_args(curve, std::max<std::size_t>(m_max, 3), start);
    const std::size_t n = curve.size();
    ChordErrorSums sums(curve);
    // Curves may revisit coordinates on thin spurs; a chord between two such
    // positions has no direction, so the transition is simply unusable.
    auto cost = [&](std::size_t q1, std::size_t q2) {
        if (curve[(start + q1) % n] == curve[(start + q2) % n]) return kInf;
        return sums.sse_span(start + q1, start + q2);
    };

    OptimalErrorTable table;
    table.n = n;
    table.start_index = start;
    table.m_max = m_max;
    table.opt_e2.assign(m_max + 1, kInf);
    table.back.assign(m_max + 1, std::vector<std::uint32_t>(n + 1, 0));

    // q = n is the full wrap, a chord from the start point to itself; a
    // single segment never covers it, so that cell stays infinite.
    std::vector<double> prev(n + 1, kInf), cur(n + 1, kInf);
    for (std::size_t q = 1; q < n; ++q) {
        prev[q] = cost(0, q);
        table.back[1][q] = 0;
    }
    table.opt_e2[1] = kInf;

    for (std::size_t k = 2; k <= m_max; ++k) {
        std::fill(cur.begin(), cur.end(), kInf);
        for (std::size_t q = k; q <= n; ++q) {
            double best = kInf;
            std::uint32_t best_prev = 0;
            for (std::size_t qp = k - 1; qp < q; ++qp) {
                const double c = prev[qp] + cost(qp, q);
                if (c < best) {
                    best = c;
                    best_prev = static_cast<std::uint32_t>(qp);
                }
            }
            cur[q] = best;
            table.back[k][q] = best_prev;
        }
        table.opt_e2[k] = cur[n];
        std::swap(prev, cur);
    }
    return table;
}

std::pair<Polygon, double> dp_min_eps(const DigitalCurve& curve, std::size_t m,
                                      std::size_t start) {
    check_dp_args(curve, m, start);
    OptimalErrorTable table = build_optimal_table(curve, start, m);
    return {table.reconstruct(m), table.opt_e2[m]};
}

std::pair<Polygon, double> full_optimal(const DigitalCurve& curve, std::size_t m,
                                        bool force) {
    check_dp_args(curve, m, 0);
    if (curve.size() > kFullOptimalGuard && !force)
        throw UsageError("curve longer than " + std::to_string(kFullOptimalGuard) +
                         " points; pass force to run the cubic search");
    std::size_t best_start = 0;
    double best_e2 = kInf;
    for (std::size_t s = 0; s < curve.size(); ++s) {
        OptimalErrorTable table = build_optimal_table(curve, s, m);
        if (table.opt_e2[m] < best_e2) {
            best_e2 = table.opt_e2[m];
            best_start = s;
        }
    }
    return dp_min_eps(curve, m, best_start);
}

std::size_t heuristic_start(const DigitalCurve& curve) {
    const std::size_t n = curve.size();
    std::int64_t sx = 0, sy = 0;
    for (const Point& p : curve.points()) {
        sx += p.x;
        sy += p.y;
    }
    std::size_t best = 0;
    __int128 best_d = -1;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t dx = static_cast<std::int64_t>(n) * curve[i].x - sx;
        const std::int64_t dy = static_cast<std::int64_t>(n) * curve[i].y - sy;
        const __int128 d = static_cast<__int128>(dx) * dx + static_cast<__int128>(dy) * dy;
        if (d > best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::pair<Polygon, double> approx_optimal(const DigitalCurve& curve, std::size_t m) {
    return dp_min_eps(curve, m, heuristic_start(curve));
}

RosinMeasure rosin_measure(const DigitalCurve& curve, const Polygon& polygon,
                           const TableProvider& provider) {
    validate_polygon(curve, polygon);
    if (!curve.closed()) throw UsageError("Rosin measure needs a closed curve");
    const TableProvider build =
        provider ? provider
                 : TableProvider([](const DigitalCurve& c, std::size_t s, std::size_t mm) {
                       return build_optimal_table(c, s, mm);
                   });

    const std::size_t n = curve.size();
    const std::size_t m_sub = polygon.size();
    const double e_sub = approximation_errors(curve, polygon).first;
    const std::size_t start = heuristic_start(curve);

    std::size_t m_max = std::min(n, 3 * m_sub);
    OptimalErrorTable table = build(curve, start, m_max);

    RosinMeasure r;
    const double e_opt = table.opt_e2[m_sub];
    if (e_sub > 0.0)
        r.fidelity = 100.0 * e_opt / e_sub;
    else
        r.fidelity = e_opt == 0.0 ? 100.0 : std::numeric_limits<double>::infinity();

    // Absorbs the different summation orders of the DP and the direct
    // per-side evaluation.
    const double threshold = e_sub * (1.0 + 1e-9) + 1e-12;
    std::size_t m_opt = 0;
    while (true) {
        for (std::size_t m = 3; m <= table.m_max; ++m) {
            if (table.opt_e2[m] <= threshold) {
                m_opt = m;
                break;
            }
        }
        if (m_opt != 0 || table.m_max >= n) break;
        m_max = std::min(n, 2 * table.m_max);
        table = build(curve, start, m_max);
    }
    if (m_opt == 0) throw Error("efficiency search failed despite a full table");

    r.efficiency = 100.0 * static_cast<double>(m_opt) / static_cast<double>(m_sub);
    r.merit = std::sqrt(r.fidelity * r.efficiency);
    return r;
}

std::uint64_t curve_content_hash(const DigitalCurve& curve) {
    const DigitalCurve canon = curve.closed() ? curve.canonicalized() : curve;
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(canon.closed() ? 1 : 0);
    mix(canon.size());
    for (const Point& p : canon.points()) {
        mix(static_cast<std::uint64_t>(p.x));
        mix(static_cast<std::uint64_t>(p.y));
    }
    return h;
}

} // namespace polyapprox
