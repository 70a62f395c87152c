#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polyapprox/approximator.hpp"
#include "polyapprox/curve.hpp"
#include "polyapprox/errors.hpp"
#include "polyapprox/metrics.hpp"
#include "polyapprox/optimal.hpp"
#include "polyapprox/transforms.hpp"

namespace py = pybind11;
namespace pa = polyapprox;

namespace {

using PyPoint = std::pair<std::int64_t, std::int64_t>;
using PyPoints = std::vector<PyPoint>;

pa::DigitalCurve to_curve(const PyPoints& pts, bool closed) {
    std::vector<pa::Point> points;
    points.reserve(pts.size());
    for (const auto& [x, y] : pts) points.push_back({x, y});
    return pa::DigitalCurve(std::move(points), closed);
}

PyPoints from_points(const std::vector<pa::Point>& pts) {
    PyPoints out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.emplace_back(p.x, p.y);
    return out;
}

py::dict metrics_dict(const pa::MetricsReport& r) {
    py::dict d;
    d["n"] = r.n;
    d["m"] = r.m;
    d["cr"] = r.cr;
    d["e2"] = r.e2;
    d["einf"] = r.einf;
    d["fom"] = r.fom;
    d["we2"] = r.we2;
    d["we3"] = r.we3;
    d["weinf"] = r.weinf;
    d["compactness"] = r.compactness;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "polygonal approximation of closed digital curves";

    py::register_exception<pa::InvalidInput>(m, "InvalidInput");
    py::register_exception<pa::DegenerateGeometry>(m, "DegenerateGeometry");
    py::register_exception<pa::UsageError>(m, "UsageError");

    m.def(
        "decode_chain_code",
        [](std::int64_t x, std::int64_t y, const std::string& code) {
            auto curve = pa::decode_chain_code({x, y}, code);
            return py::make_tuple(from_points(curve.points()), curve.closed());
        },
        py::arg("x"), py::arg("y"), py::arg("code"),
        "Decode a start point plus digit string into (points, closed).");

    m.def(
        "encode_chain_code",
        [](const PyPoints& pts, bool closed) {
            auto [start, code] = pa::encode_chain_code(to_curve(pts, closed));
            return py::make_tuple(py::make_tuple(start.x, start.y), code);
        },
        py::arg("points"), py::arg("closed") = true,
        "Encode a curve as ((x, y), digit string).");

    m.def(
        "approximate",
        [](const PyPoints& pts) {
            auto result = pa::approximate(to_curve(pts, true));
            std::vector<pa::Point> verts;
            verts.reserve(result.polygon.size());
            for (std::size_t idx : result.polygon) verts.push_back(result.curve[idx]);
            py::dict d;
            d["curve"] = from_points(result.curve.points());
            d["indices"] = result.polygon;
            d["vertices"] = from_points(verts);
            d["stabilized"] = result.stabilized;
            d["metrics"] = metrics_dict(pa::make_report(result.curve, result.polygon));
            return d;
        },
        py::arg("points"),
        "Run the full pipeline on a closed curve. Indices refer to the "
        "canonicalized curve returned under 'curve'.");

    m.def(
        "metrics",
        [](const PyPoints& pts, const std::vector<std::size_t>& indices, bool closed) {
            auto curve = to_curve(pts, closed);
            return metrics_dict(pa::make_report(curve, indices));
        },
        py::arg("points"), py::arg("indices"), py::arg("closed") = true);

    m.def(
        "rosin",
        [](const PyPoints& pts, const std::vector<std::size_t>& indices) {
            auto curve = to_curve(pts, true);
            auto r = pa::rosin_measure(curve, indices);
            py::dict d;
            d["fidelity"] = r.fidelity;
            d["efficiency"] = r.efficiency;
            d["merit"] = r.merit;
            return d;
        },
        py::arg("points"), py::arg("indices"));

    m.def(
        "dp_min_eps",
        [](const PyPoints& pts, std::size_t m_target, std::size_t start) {
            auto [polygon, e2] = pa::dp_min_eps(to_curve(pts, true), m_target, start);
            return py::make_tuple(polygon, e2);
        },
        py::arg("points"), py::arg("m"), py::arg("start"),
        "Least-E2 polygon with m vertices through the start vertex.");

    m.def(
        "approx_optimal",
        [](const PyPoints& pts, std::size_t m_target) {
            auto [polygon, e2] = pa::approx_optimal(to_curve(pts, true), m_target);
            return py::make_tuple(polygon, e2);
        },
        py::arg("points"), py::arg("m"));

    m.def(
        "rotate",
        [](const PyPoints& pts, double degrees) {
            return from_points(pa::rotate_curve(to_curve(pts, true), degrees).points());
        },
        py::arg("points"), py::arg("degrees"));

    m.def(
        "scale",
        [](const PyPoints& pts, double factor) {
            return from_points(pa::scale_curve(to_curve(pts, true), factor).points());
        },
        py::arg("points"), py::arg("factor"));

    m.attr("__version__") = "0.1.0";
}
