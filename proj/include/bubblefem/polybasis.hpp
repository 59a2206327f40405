#pragma once

// Legendre polynomials, Gauss-Legendre rules, the hierarchic bubble basis
// used for element enrichments and the hierarchic (Lobatto) hp shape family
// on the reference square [-1,1]^2.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bubblefem {

struct RefPoint {
    double xi = 0.0;
    double eta = 0.0;
};

struct ValueDeriv {
    double value = 0.0;
    double deriv = 0.0;
};

struct ValueGrad {
    double value = 0.0;
    double d_xi = 0.0;
    double d_eta = 0.0;
};

/// L_n(t) and L_n'(t) by the Bonnet recurrence
///   (m+1) L_{m+1} = (2m+1) t L_m - m L_{m-1}
/// and L'_{m+1} = L'_{m-1} + (2m+1) L_m.
inline ValueDeriv legendre_eval(int n, double t) {
    if (n < 0) throw std::invalid_argument("legendre_eval: negative degree");
    if (n == 0) return {1.0, 0.0};
    double lm1 = 1.0, l = t;     // L_0, L_1
    double dm1 = 0.0, d = 1.0;   // L_0', L_1'
    for (int m = 1; m < n; ++m) {
        const double lp1 = ((2.0 * m + 1.0) * t * l - m * lm1) / (m + 1.0);
        const double dp1 = dm1 + (2.0 * m + 1.0) * l;
        lm1 = l;
        l = lp1;
        dm1 = d;
        d = dp1;
    }
    return {l, d};
}

/// Values L_0..L_n(t) and derivatives in one sweep.
inline void legendre_table(int n, double t, std::vector<double>& val, std::vector<double>& der) {
    val.assign(static_cast<std::size_t>(n) + 1, 0.0);
    der.assign(static_cast<std::size_t>(n) + 1, 0.0);
    val[0] = 1.0;
    if (n == 0) return;
    val[1] = t;
    der[1] = 1.0;
    for (int m = 1; m < n; ++m) {
        val[m + 1] = ((2.0 * m + 1.0) * t * val[m] - m * val[m - 1]) / (m + 1.0);
        der[m + 1] = der[m - 1] + (2.0 * m + 1.0) * val[m];
    }
}

struct GaussRule1D {
    std::vector<double> points;
    std::vector<double> weights;
};

inline constexpr int kMaxGaussOrder = 64;

/// n-point Gauss-Legendre rule on [-1,1]. Nodes are Newton-refined roots of
/// L_n started from Chebyshev guesses.
inline GaussRule1D gauss_rule_1d(int n) {
    if (n < 1 || n > kMaxGaussOrder)
        throw std::out_of_range("gauss rule order " + std::to_string(n) + " outside [1, 64]");
    GaussRule1D rule;
    rule.points.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        ValueDeriv ld{};
        for (int it = 0; it < 100; ++it) {
            ld = legendre_eval(n, t);
            const double dt = ld.value / ld.deriv;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        ld = legendre_eval(n, t);
        const double w = 2.0 / ((1.0 - t * t) * ld.deriv * ld.deriv);
        rule.points[static_cast<std::size_t>(i)] = -t;
        rule.points[static_cast<std::size_t>(n - 1 - i)] = t;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule.points[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

/// Tensor-product Gauss rule on the reference square. Point (a, b) is stored
/// at index a * order + b, with a running along xi.
struct QuadratureRule {
    std::vector<RefPoint> points;
    std::vector<double> weights;
    int order = 0;
};

inline QuadratureRule gauss_rule(int n) {
    const GaussRule1D r = gauss_rule_1d(n);
    QuadratureRule q;
    q.order = n;
    q.points.reserve(static_cast<std::size_t>(n * n));
    q.weights.reserve(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            q.points.push_back({r.points[static_cast<std::size_t>(a)], r.points[static_cast<std::size_t>(b)]});
            q.weights.push_back(r.weights[static_cast<std::size_t>(a)] * r.weights[static_cast<std::size_t>(b)]);
        }
    return q;
}

// ---------------------------------------------------------------------------
// Bubble basis  M^r_{i,j} = (1 - xi^2)(1 - eta^2) L_i(xi) L_j(eta),  i + j = r - 1
// ---------------------------------------------------------------------------

struct BubbleIndex {
    int r = 1;
    int i = 0;
    int j = 0;

    [[nodiscard]] bool valid() const { return r >= 1 && i >= 0 && j >= 0 && i + j == r - 1; }
    friend bool operator==(const BubbleIndex&, const BubbleIndex&) = default;
};

inline constexpr int bubble_space_dim(int p) {
    return p < 1 ? 0 : p * (p + 1) / 2;
}

/// Hierarchic ordering: level r = 1..p, and within a level i descending
/// from r-1 to 0. The first bubble_space_dim(q) entries span the order-q space.
inline std::vector<BubbleIndex> bubble_index_table(int p) {
    if (p < 1) throw std::invalid_argument("bubble order must be >= 1");
    std::vector<BubbleIndex> table;
    table.reserve(static_cast<std::size_t>(bubble_space_dim(p)));
    for (int r = 1; r <= p; ++r)
        for (int i = r - 1; i >= 0; --i) table.push_back({r, i, r - 1 - i});
    return table;
}

namespace detail {

// (1 - t^2) L_n(t) and its derivative.
inline ValueDeriv bubble_factor(int n, double t) {
    const ValueDeriv l = legendre_eval(n, t);
    const double b = 1.0 - t * t;
    return {b * l.value, -2.0 * t * l.value + b * l.deriv};
}

}  // namespace detail

inline ValueGrad bubble_basis_eval(const BubbleIndex& idx, RefPoint pt) {
    if (!idx.valid()) throw std::invalid_argument("bubble index violates i + j = r - 1");
    const ValueDeriv fx = detail::bubble_factor(idx.i, pt.xi);
    const ValueDeriv fy = detail::bubble_factor(idx.j, pt.eta);
    return {fx.value * fy.value, fx.deriv * fy.value, fx.value * fy.deriv};
}

// ---------------------------------------------------------------------------
// Hierarchic hp shape functions on quadrilaterals
// ---------------------------------------------------------------------------

/// Integrated Legendre kernel for n >= 2:
///   l_n(t) = (L_n(t) - L_{n-2}(t)) / sqrt(2(2n-1)),  l_n(+-1) = 0.
inline ValueDeriv lobatto_kernel(int n, double t) {
    if (n < 2) throw std::invalid_argument("lobatto kernel needs n >= 2");
    const ValueDeriv a = legendre_eval(n, t);
    const ValueDeriv b = legendre_eval(n - 2, t);
    const double s = 1.0 / std::sqrt(2.0 * (2.0 * n - 1.0));
    return {(a.value - b.value) * s, (a.deriv - b.deriv) * s};
}

enum class HpModeKind { vertex, edge, interior };

/// Reference vertices, counter-clockwise from (-1,-1).
inline constexpr std::array<RefPoint, 4> kRefVertices{{{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}};

/// Local edges as (start vertex, end vertex). The edge parameter runs from
/// start to end: bottom and top along xi, right and left along eta.
inline constexpr std::array<std::pair<int, int>, 4> kRefEdges{{{0, 1}, {1, 2}, {3, 2}, {0, 3}}};

/// Bilinear vertex function of local vertex v (0..3).
inline ValueGrad bilinear_eval(int v, RefPoint pt) {
    const double sx = kRefVertices[static_cast<std::size_t>(v)].xi;
    const double sy = kRefVertices[static_cast<std::size_t>(v)].eta;
    const double fx = 0.5 * (1.0 + sx * pt.xi);
    const double fy = 0.5 * (1.0 + sy * pt.eta);
    return {fx * fy, 0.5 * sx * fy, 0.5 * sy * fx};
}

/// Number of local modes of the given kind at polynomial order `order`.
inline int hp_mode_count(HpModeKind kind, int order) {
    switch (kind) {
        case HpModeKind::vertex: return 4;
        case HpModeKind::edge: return 4 * (order - 1);
        case HpModeKind::interior: return (order - 1) * (order - 1);
    }
    return 0;
}

/// Evaluate one hierarchic mode.
///   vertex  : index 0..3, the bilinear functions
///   edge    : index = e * (order-1) + (n-2), e = local edge, n = 2..order,
///             l_n(edge parameter) times the linear blend towards that edge
///   interior: index = (m-2) * (order-1) + (n-2), l_m(xi) l_n(eta)
/// Edge modes use the local edge direction of kRefEdges; callers apply the
/// global orientation sign.
inline ValueGrad hp_shape_eval(HpModeKind kind, int index, int order, RefPoint pt) {
    if (order < 1) throw std::invalid_argument("hp order must be >= 1");
    if (index < 0 || index >= hp_mode_count(kind, order))
        throw std::out_of_range("hp mode index " + std::to_string(index) + " invalid for its kind");
    switch (kind) {
        case HpModeKind::vertex: return bilinear_eval(index, pt);
        case HpModeKind::edge: {
            const int e = index / (order - 1);
            const int n = index % (order - 1) + 2;
            switch (e) {
                case 0: {  // eta = -1
                    const ValueDeriv k = lobatto_kernel(n, pt.xi);
                    const double b = 0.5 * (1.0 - pt.eta);
                    return {k.value * b, k.deriv * b, -0.5 * k.value};
                }
                case 1: {  // xi = +1
                    const ValueDeriv k = lobatto_kernel(n, pt.eta);
                    const double b = 0.5 * (1.0 + pt.xi);
                    return {k.value * b, 0.5 * k.value, k.deriv * b};
                }
                case 2: {  // eta = +1
                    const ValueDeriv k = lobatto_kernel(n, pt.xi);
                    const double b = 0.5 * (1.0 + pt.eta);
                    return {k.value * b, k.deriv * b, 0.5 * k.value};
                }
                default: {  // xi = -1
                    const ValueDeriv k = lobatto_kernel(n, pt.eta);
                    const double b = 0.5 * (1.0 - pt.xi);
                    return {k.value * b, -0.5 * k.value, k.deriv * b};
                }
            }
        }
        case HpModeKind::interior: {
            const int m = index / (order - 1) + 2;
            const int n = index % (order - 1) + 2;
            const ValueDeriv kx = lobatto_kernel(m, pt.xi);
            const ValueDeriv ky = lobatto_kernel(n, pt.eta);
            return {kx.value * ky.value, kx.deriv * ky.value, kx.value * ky.deriv};
        }
    }
    return {};
}

}  // namespace bubblefem
