#pragma once

// Synthetic closed-curve fixtures. Parametric shapes are sampled densely,
// rounded, deduplicated and gap-filled so every generator yields a valid
// 8-connected loop.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "polyapprox/curve.hpp"
#include "polyapprox/transforms.hpp"

namespace fixtures {

using polyapprox::DigitalCurve;
using polyapprox::Point;

inline DigitalCurve square(std::int64_t a, Point o = {0, 0}) {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(4 * a));
    for (std::int64_t i = 0; i < a; ++i) pts.push_back({o.x + i, o.y});
    for (std::int64_t i = 0; i < a; ++i) pts.push_back({o.x + a, o.y + i});
    for (std::int64_t i = 0; i < a; ++i) pts.push_back({o.x + a - i, o.y + a});
    for (std::int64_t i = 0; i < a; ++i) pts.push_back({o.x, o.y + a - i});
    return DigitalCurve(std::move(pts), true);
}

inline DigitalCurve rectangle(std::int64_t w, std::int64_t h, Point o = {0, 0}) {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(2 * (w + h)));
    for (std::int64_t i = 0; i < w; ++i) pts.push_back({o.x + i, o.y});
    for (std::int64_t i = 0; i < h; ++i) pts.push_back({o.x + w, o.y + i});
    for (std::int64_t i = 0; i < w; ++i) pts.push_back({o.x + w - i, o.y + h});
    for (std::int64_t i = 0; i < h; ++i) pts.push_back({o.x, o.y + h - i});
    return DigitalCurve(std::move(pts), true);
}

inline std::vector<Point> close_loop(std::vector<Point> raw) {
    std::vector<Point> pts;
    for (const Point& p : raw)
        if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();

    std::vector<Point> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % pts.size()];
        out.push_back(a);
        if (!polyapprox::adjacent8(a, b) && !(a == b))
            for (const Point& f : polyapprox::bresenham_fill(a, b)) out.push_back(f);
    }
    return out;
}

inline DigitalCurve from_samples(const std::vector<std::pair<double, double>>& samples) {
    std::vector<Point> raw;
    raw.reserve(samples.size());
    for (const auto& [x, y] : samples)
        raw.push_back({std::llround(x), std::llround(y)});
    return DigitalCurve(close_loop(std::move(raw)), true);
}

inline DigitalCurve from_ideal_polygon(const std::vector<Point>& corners) {
    return DigitalCurve(close_loop(corners), true);
}

inline DigitalCurve circle(std::int64_t r) {
    const double tau = 2.0 * std::numbers::pi;
    const std::size_t n = std::max<std::size_t>(64, static_cast<std::size_t>(
                                                        std::ceil(tau * double(r) / 0.4)));
    std::vector<std::pair<double, double>> s;
    s.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = tau * double(k) / double(n);
        s.emplace_back(double(r) * std::cos(t), double(r) * std::sin(t));
    }
    return from_samples(s);
}

inline DigitalCurve ellipse(std::int64_t rx, std::int64_t ry) {
    const double tau = 2.0 * std::numbers::pi;
    const std::size_t n = std::max<std::size_t>(
        64, static_cast<std::size_t>(std::ceil(tau * double(std::max(rx, ry)) / 0.4)));
    std::vector<std::pair<double, double>> s;
    s.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = tau * double(k) / double(n);
        s.emplace_back(double(rx) * std::cos(t), double(ry) * std::sin(t));
    }
    return from_samples(s);
}

inline DigitalCurve diamond(std::int64_t r) {
    return from_ideal_polygon({{r, 0}, {0, r}, {-r, 0}, {0, -r}});
}

inline DigitalCurve star(std::int64_t router, std::int64_t rinner, int spikes) {
    const double tau = 2.0 * std::numbers::pi;
    std::vector<Point> corners;
    corners.reserve(static_cast<std::size_t>(2 * spikes));
    for (int k = 0; k < spikes; ++k) {
        const double to = tau * double(k) / double(spikes);
        const double ti = to + tau / (2.0 * double(spikes));
        corners.push_back({std::llround(double(router) * std::cos(to)),
                           std::llround(double(router) * std::sin(to))});
        corners.push_back({std::llround(double(rinner) * std::cos(ti)),
                           std::llround(double(rinner) * std::sin(ti))});
    }
    return from_ideal_polygon(corners);
}

inline DigitalCurve lshape(std::int64_t a, std::int64_t b, std::int64_t t) {
    return from_ideal_polygon({{0, 0}, {a, 0}, {a, t}, {t, t}, {t, b}, {0, b}});
}

// Star-shaped loop with seeded radii and angle jitter; always simple.
inline DigitalCurve random_blob(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> spikes_dist(8, 12);
    std::uniform_real_distribution<double> radius_dist(10.0, 22.0);
    std::uniform_real_distribution<double> jitter_dist(-0.12, 0.12);

    const int k = spikes_dist(rng);
    const double tau = 2.0 * std::numbers::pi;
    std::vector<Point> corners;
    corners.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double t = tau * double(i) / double(k) + jitter_dist(rng);
        const double r = radius_dist(rng);
        corners.push_back({std::llround(r * std::cos(t)), std::llround(r * std::sin(t))});
    }
    return from_ideal_polygon(corners);
}

struct Named {
    std::string name;
    DigitalCurve curve;
};

// The main corpus: 53 closed fixtures across every shape family.
inline std::vector<Named> acceptance_set() {
    std::vector<Named> out;
    auto add = [&](const std::string& name, DigitalCurve c) {
        out.push_back({name, std::move(c)});
    };
    for (std::int64_t a : {2, 3, 4, 5, 6, 8, 10, 13, 17, 21, 30})
        add("square" + std::to_string(a), square(a));
    for (auto [w, h] : {std::pair<std::int64_t, std::int64_t>{8, 4},
                        {5, 3},
                        {12, 5},
                        {20, 7},
                        {9, 2},
                        {18, 6},
                        {30, 11}})
        add("rect" + std::to_string(w) + "x" + std::to_string(h), rectangle(w, h));
    for (std::int64_t r : {3, 4, 5, 7, 10, 14, 20, 28, 40, 60})
        add("circle" + std::to_string(r), circle(r));
    for (auto [rx, ry] : {std::pair<std::int64_t, std::int64_t>{6, 3},
                          {8, 5},
                          {12, 7},
                          {16, 9},
                          {20, 11},
                          {25, 13}})
        add("ellipse" + std::to_string(rx) + "x" + std::to_string(ry), ellipse(rx, ry));
    add("star10-4-5", star(10, 4, 5));
    add("star12-5-6", star(12, 5, 6));
    add("star15-6-7", star(15, 6, 7));
    add("star20-8-5", star(20, 8, 5));
    add("star18-7-8", star(18, 7, 8));
    add("star25-10-6", star(25, 10, 6));
    add("lshape8-8-3", lshape(8, 8, 3));
    add("lshape12-10-4", lshape(12, 10, 4));
    add("lshape16-12-5", lshape(16, 12, 5));
    add("lshape20-16-6", lshape(20, 16, 6));
    add("lshape10-14-3", lshape(10, 14, 3));
    for (std::int64_t r : {4, 7, 11}) add("diamond" + std::to_string(r), diamond(r));
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u})
        add("blob" + std::to_string(seed), random_blob(seed));
    return out;
}

// Fixtures small enough for exhaustive optimal-polygon enumeration.
inline std::vector<Named> small_set() {
    std::vector<Named> out;
    auto add = [&](const std::string& name, DigitalCurve c) {
        out.push_back({name, std::move(c)});
    };
    for (std::int64_t a : {2, 3, 4, 5, 6}) add("square" + std::to_string(a), square(a));
    for (auto [w, h] : {std::pair<std::int64_t, std::int64_t>{3, 2},
                        {4, 2},
                        {5, 2},
                        {4, 3},
                        {5, 3},
                        {6, 3},
                        {7, 2},
                        {6, 4}})
        add("rect" + std::to_string(w) + "x" + std::to_string(h), rectangle(w, h));
    for (std::int64_t r : {3, 4, 5}) add("circle" + std::to_string(r), circle(r));
    for (auto [rx, ry] : {std::pair<std::int64_t, std::int64_t>{4, 2},
                          {5, 2},
                          {5, 3},
                          {6, 3},
                          {6, 4},
                          {7, 3}})
        add("ellipse" + std::to_string(rx) + "x" + std::to_string(ry), ellipse(rx, ry));
    for (std::int64_t r : {2, 3, 4, 5, 6}) add("diamond" + std::to_string(r), diamond(r));
    add("lshape4-4-2", lshape(4, 4, 2));
    add("lshape5-5-2", lshape(5, 5, 2));
    add("lshape6-4-2", lshape(6, 4, 2));
    add("lshape7-5-3", lshape(7, 5, 3));
    add("lshape6-6-2", lshape(6, 6, 2));
    add("star5-2-4", star(5, 2, 4));
    add("star6-3-4", star(6, 3, 4));
    return out;
}

} // namespace fixtures
