#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "polyapprox/curve.hpp"

namespace polyapprox {

// Costs of the best m-side polygons anchored at one start vertex, for every
// m up to m_max.
struct OptimalErrorTable {
    std::size_t n = 0;
    std::size_t start_index = 0;
    std::size_t m_max = 0;
    std::vector<double> opt_e2;                    // indexed by m, entries 1..m_max
    std::vector<std::vector<std::uint32_t>> back;  // back[k][q]; empty for cached tables

    bool has_backpointers() const { return !back.empty(); }
    Polygon reconstruct(std::size_t m) const;
};

OptimalErrorTable build_optimal_table(const DigitalCurve& curve, std::size_t start,
                                      std::size_t m_max);

// Least-E2 polygon with exactly m vertices, one of them the start vertex.
std::pair<Polygon, double> dp_min_eps(const DigitalCurve& curve, std::size_t m,
                                      std::size_t start);

inline constexpr std::size_t kFullOptimalGuard = 500;

// Best dp_min_eps over every start. Cubic; refuses n > 500 unless forced.
std::pair<Polygon, double> full_optimal(const DigitalCurve& curve, std::size_t m,
                                        bool force = false);

// The start vertex the single-start variant uses: farthest from the
// centroid, smallest index on ties.
std::size_t heuristic_start(const DigitalCurve& curve);

std::pair<Polygon, double> approx_optimal(const DigitalCurve& curve, std::size_t m);

struct RosinMeasure {
    double fidelity = 0.0;
    double efficiency = 0.0;
    double merit = 0.0;
};

// Supplies tables on demand so callers can interpose a cache. Must return a
// table for exactly (curve, start, m_max).
using TableProvider =
    std::function<OptimalErrorTable(const DigitalCurve&, std::size_t, std::size_t)>;

// Fidelity, efficiency and merit of the polygon against the single-start
// optimal table. The table is widened (doubling m_max, capped at n) until
// the efficiency search succeeds.
RosinMeasure rosin_measure(const DigitalCurve& curve, const Polygon& polygon,
                           const TableProvider& provider = {});

// FNV-1a over the canonical point sequence; cache key for tables.
std::uint64_t curve_content_hash(const DigitalCurve& curve);

} // namespace polyapprox
