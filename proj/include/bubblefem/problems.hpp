#pragma once

// Benchmark boundary-value problems and the error measures used to compare
// schemes on them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bubblefem/config.hpp"
#include "bubblefem/mesh.hpp"
#include "bubblefem/solution.hpp"

namespace bubblefem {

struct BenchmarkProblem {
    std::string name;
    Rect domain = kUnitSquare;
    double k = 1.0;
    Vec2 w;
    ScalarField f;
    ScalarField g;
    ScalarField exact;  // empty when no closed form is known
    double data_lo = 0.0;
    double data_hi = 1.0;

    [[nodiscard]] bool has_exact() const { return static_cast<bool>(exact); }
};

/// E(a, x) = (e^{ax} - 1) / (e^a - 1), the 1D outflow layer profile of
/// -u'' + a u' = 0, u(0) = 0, u(1) = 1. Evaluated without overflow for any a.
inline double boundary_layer_1d(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (a == 0.0) return x;
    if (a > 0.0) {
        // e^{a(x-1)} (1 - e^{-ax}) / (1 - e^{-a})
        return std::exp(a * (x - 1.0)) * (std::expm1(-a * x) / std::expm1(-a));
    }
    return std::expm1(a * x) / std::expm1(a);
}

/// Manufactured layer problem u = (x - E(a, x)) * 4y(1 - y), a = w_x / k,
/// symmetric about y = 1/2 and zero on the boundary. `pe_mesh` fixes w_x
/// through Pe_h = w_x h / (2k) on elements of size h.
inline BenchmarkProblem benchmark_symmetric(double pe_mesh = 125.0, double h = 0.1) {
    BenchmarkProblem bp;
    bp.name = "symmetric";
    bp.k = 1.0;
    const double wx = 2.0 * bp.k * pe_mesh / h;
    bp.w = {wx, 0.0};
    const double a = wx / bp.k;
    const double k = bp.k;
    bp.exact = [a](double x, double y) { return (x - boundary_layer_1d(a, x)) * 4.0 * y * (1.0 - y); };
    bp.g = bp.exact;
    // L(XY) = Y(-k X'' + wx X') - k X Y'' = wx Y + 8 k X
    bp.f = [a, k, wx](double x, double y) {
        return wx * 4.0 * y * (1.0 - y) + 8.0 * k * (x - boundary_layer_1d(a, x));
    };
    bp.data_lo = 0.0;
    bp.data_hi = 1.0;
    return bp;
}

/// u = x - E(a, x), constant in y, with -k u'' + w_x u' = w_x.
inline BenchmarkProblem benchmark_layer_1d(double pe_mesh = 125.0, double h = 0.1) {
    BenchmarkProblem bp;
    bp.name = "layer1d";
    bp.k = 1.0;
    const double wx = 2.0 * bp.k * pe_mesh / h;
    bp.w = {wx, 0.0};
    const double a = wx / bp.k;
    bp.exact = [a](double x, double) { return x - boundary_layer_1d(a, x); };
    bp.g = bp.exact;
    bp.f = [wx](double, double) { return wx; };
    return bp;
}

/// Skew advection at 30 degrees with discontinuous inflow data: g = 1 on the
/// left edge above y = 0.3 and on the left half of the top edge, 0 elsewhere;
/// f = 0. The discrete solution should stay within [0, 1].
inline BenchmarkProblem benchmark_nonsymmetric(double pe_mesh = 1e3, double h = 0.1) {
    BenchmarkProblem bp;
    bp.name = "nonsymmetric";
    bp.k = 1.0;
    const double speed = 2.0 * bp.k * pe_mesh / h;
    const double theta = std::numbers::pi / 6.0;
    bp.w = {speed * std::cos(theta), speed * std::sin(theta)};
    bp.g = [](double x, double y) {
        constexpr double tol = 1e-12;
        if (x <= tol && y >= 0.3 - tol) return 1.0;
        if (y >= 1.0 - tol && x <= 0.5 + tol) return 1.0;
        return 0.0;
    };
    bp.data_lo = 0.0;
    bp.data_hi = 1.0;
    return bp;
}

inline BenchmarkProblem benchmark_by_name(std::string_view name, double pe_mesh, double h) {
    if (name == "symmetric") return benchmark_symmetric(pe_mesh, h);
    if (name == "nonsymmetric") return benchmark_nonsymmetric(pe_mesh, h);
    throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

/// max over mesh nodes of |u_h(node) - exact(node)|.
inline double error_linf_nodes(const FieldSolution& sol, const ScalarField& exact) {
    if (!exact) throw std::invalid_argument("error_linf_nodes: problem has no exact solution");
    double err = 0.0;
    for (int n = 0; n < sol.mesh.num_nodes(); ++n) {
        const Vec2& x = sol.mesh.node(n);
        err = std::max(err, std::abs(sol.nodal[static_cast<std::size_t>(n)] - exact(x.x, x.y)));
    }
    return err;
}

/// Excursion of the nodal (bilinear) part outside [lo, hi], sampled on a 5x5
/// grid per element: max(0, max u - hi) + max(0, lo - min u).
inline double overshoot_metric(const FieldSolution& sol, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("overshoot_metric: need lo < hi");
    double umax = -std::numeric_limits<double>::infinity();
    double umin = std::numeric_limits<double>::infinity();
    for (int e = 0; e < sol.mesh.num_elements(); ++e)
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b) {
                const double u = evaluate_nodal_part(sol, e, {-1.0 + 0.5 * a, -1.0 + 0.5 * b});
                umax = std::max(umax, u);
                umin = std::min(umin, u);
            }
    return std::max(0.0, umax - hi) + std::max(0.0, lo - umin);
}

}  // namespace bubblefem
