#pragma once

// Element bubble sub-problem solved spectrally in the hierarchic bubble space.
//
// For one rectangular element K with constant k and w, the bubble correction
// u_b of a bilinear function u_1 (or of a source f) solves
//
//     a(u_b, M) = <f, M> - <w . grad u_1, M>   for every bubble M,
//     a(u, v)   = (k grad u, grad v) + (w . grad u, v),
//
// in span{M^r_{i,j}}. Bilinear functions on rectangles are harmonic, so only
// the advective part of L u_1 loads the system. The dense matrix is factored
// once; the four shape loads and the source load are back-substitutions.

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bubblefem/config.hpp"
#include "bubblefem/mesh.hpp"
#include "bubblefem/polybasis.hpp"

namespace bubblefem {

struct LocalOperator {
    double k = 1.0;
    Vec2 w;
    double hx = 2.0;
    double hy = 2.0;
    int p = 1;

    void validate() const {
        if (!(k > 0.0)) throw std::invalid_argument("local operator: k must be positive");
        if (p < 1) throw std::invalid_argument("local operator: p must be >= 1");
        if (!(hx > 0.0) || !(hy > 0.0)) throw std::invalid_argument("local operator: element size must be positive");
    }

    [[nodiscard]] bool same_as(const LocalOperator& o) const {
        return k == o.k && w.x == o.w.x && w.y == o.w.y && hx == o.hx && hy == o.hy && p == o.p;
    }
};

/// Thrown when the local system cannot be factored or solved to tolerance.
class LocalSolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kSourceSlot = 4;

/// Spectral coefficients of F_K(phi_1..phi_4) (slots 0..3) and of the source
/// bubble F_K(f) (slot 4) in the hierarchic bubble basis.
struct BubbleEnrichment {
    LocalOperator op;
    std::vector<BubbleIndex> basis;
    std::array<Eigen::VectorXd, 5> coeffs;
    bool has_source = false;

    [[nodiscard]] int dim() const { return static_cast<int>(basis.size()); }
};

/// Value and reference-coordinate gradient of one enrichment function.
/// `slot` 0..3 selects F_K(phi_{slot+1}); kSourceSlot selects the source bubble.
inline ValueGrad eval_enrichment(const BubbleEnrichment& e, int slot, RefPoint pt) {
    if (slot < 0 || slot > kSourceSlot) throw std::out_of_range("enrichment slot must be 0..4");
    const Eigen::VectorXd& c = e.coeffs[static_cast<std::size_t>(slot)];
    ValueGrad out;
    if (c.size() == 0) return out;
    const int order = e.op.p;
    std::vector<double> lx, dlx, ly, dly;
    legendre_table(order - 1, pt.xi, lx, dlx);
    legendre_table(order - 1, pt.eta, ly, dly);
    const double bx = 1.0 - pt.xi * pt.xi;
    const double by = 1.0 - pt.eta * pt.eta;
    for (int n = 0; n < e.dim(); ++n) {
        const BubbleIndex& b = e.basis[static_cast<std::size_t>(n)];
        const double fx = bx * lx[static_cast<std::size_t>(b.i)];
        const double gx = -2.0 * pt.xi * lx[static_cast<std::size_t>(b.i)] + bx * dlx[static_cast<std::size_t>(b.i)];
        const double fy = by * ly[static_cast<std::size_t>(b.j)];
        const double gy = -2.0 * pt.eta * ly[static_cast<std::size_t>(b.j)] + by * dly[static_cast<std::size_t>(b.j)];
        out.value += c[n] * fx * fy;
        out.d_xi += c[n] * gx * fy;
        out.d_eta += c[n] * fx * gy;
    }
    return out;
}

/// Bubble basis tabulated at the points of a tensor Gauss rule, with
/// gradients already in physical coordinates.
struct BubbleTabulation {
    QuadratureRule rule;
    // [point][basis]
    Eigen::MatrixXd value;
    Eigen::MatrixXd dx;
    Eigen::MatrixXd dy;
};

inline BubbleTabulation tabulate_bubbles(const std::vector<BubbleIndex>& basis, int p, int quad_order,
                                         double hx, double hy) {
    BubbleTabulation t;
    t.rule = gauss_rule(quad_order);
    const auto nq = static_cast<Eigen::Index>(t.rule.points.size());
    const auto nb = static_cast<Eigen::Index>(basis.size());
    t.value.resize(nq, nb);
    t.dx.resize(nq, nb);
    t.dy.resize(nq, nb);
    std::vector<double> lx, dlx, ly, dly;
    for (Eigen::Index q = 0; q < nq; ++q) {
        const RefPoint pt = t.rule.points[static_cast<std::size_t>(q)];
        legendre_table(p - 1, pt.xi, lx, dlx);
        legendre_table(p - 1, pt.eta, ly, dly);
        const double bx = 1.0 - pt.xi * pt.xi;
        const double by = 1.0 - pt.eta * pt.eta;
        for (Eigen::Index n = 0; n < nb; ++n) {
            const BubbleIndex& b = basis[static_cast<std::size_t>(n)];
            const auto i = static_cast<std::size_t>(b.i);
            const auto j = static_cast<std::size_t>(b.j);
            const double fx = bx * lx[i];
            const double gx = -2.0 * pt.xi * lx[i] + bx * dlx[i];
            const double fy = by * ly[j];
            const double gy = -2.0 * pt.eta * ly[j] + by * dly[j];
            t.value(q, n) = fx * fy;
            t.dx(q, n) = gx * fy * (2.0 / hx);
            t.dy(q, n) = fx * gy * (2.0 / hy);
        }
    }
    return t;
}

/// Factored local bubble system for one (k, w, hx, hy, p). Reusable across
/// every element sharing those values; only load columns change.
class LocalBubbleSolver {
public:
    explicit LocalBubbleSolver(const LocalOperator& op, std::optional<int> quad_order = std::nullopt)
        : op_(op) {
        op.validate();
        basis_ = bubble_index_table(op.p);
        quad_order_ = quad_order.value_or(op.p + 4);
        tab_ = tabulate_bubbles(basis_, op.p, quad_order_, op.hx, op.hy);
        assemble();
        lu_.compute(matrix_);
        const Eigen::VectorXd piv = lu_.matrixLU().diagonal().cwiseAbs();
        if (!piv.allFinite() || piv.minCoeff() == 0.0)
            throw LocalSolveError("local bubble matrix is singular (is k > 0?)");
    }

    [[nodiscard]] const LocalOperator& op() const { return op_; }
    [[nodiscard]] const std::vector<BubbleIndex>& basis() const { return basis_; }
    [[nodiscard]] int dim() const { return static_cast<int>(basis_.size()); }
    [[nodiscard]] int quad_order() const { return quad_order_; }
    /// Entry (test, trial) = a(M_trial, M_test).
    [[nodiscard]] const Eigen::MatrixXd& matrix() const { return matrix_; }
    [[nodiscard]] const BubbleTabulation& tabulation() const { return tab_; }

    /// Load of shape function phi_{shape+1}: -(w . grad phi, M).
    [[nodiscard]] Eigen::VectorXd shape_load(int shape) const {
        if (shape < 0 || shape > 3) throw std::out_of_range("shape index must be 0..3");
        Eigen::VectorXd b = Eigen::VectorXd::Zero(dim());
        const double jac = 0.25 * op_.hx * op_.hy;
        for (std::size_t q = 0; q < tab_.rule.points.size(); ++q) {
            const ValueGrad phi = bilinear_eval(shape, tab_.rule.points[q]);
            const double adv = op_.w.x * phi.d_xi * (2.0 / op_.hx) + op_.w.y * phi.d_eta * (2.0 / op_.hy);
            b -= (tab_.rule.weights[q] * jac * adv) * tab_.value.row(static_cast<Eigen::Index>(q)).transpose();
        }
        return b;
    }

    /// Load of a source term: (f, M), f sampled at the quadrature points of
    /// the element centred at `center`.
    [[nodiscard]] Eigen::VectorXd source_load(const ScalarField& f, Vec2 center) const {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(dim());
        if (!f) return b;
        const ElementMap map{0, op_.hx, op_.hy, center};
        const double jac = map.jacobian();
        for (std::size_t q = 0; q < tab_.rule.points.size(); ++q) {
            const Vec2 x = ref_to_phys(map, tab_.rule.points[q]);
            b += (tab_.rule.weights[q] * jac * f(x.x, x.y)) * tab_.value.row(static_cast<Eigen::Index>(q)).transpose();
        }
        return b;
    }

    /// Solve for coefficients of one load with one step of iterative
    /// refinement; throws if the backward error exceeds 1e-10.
    [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& load) const {
        Eigen::VectorXd c = lu_.solve(load);
        Eigen::VectorXd r = load - matrix_ * c;
        c += lu_.solve(r);
        r = load - matrix_ * c;
        const double denom = matrix_norm_inf() * c.cwiseAbs().maxCoeff() + load.cwiseAbs().maxCoeff();
        const double res = r.cwiseAbs().maxCoeff();
        if (!c.allFinite() || (denom > 0.0 && res > 1e-10 * denom)) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3e", denom > 0.0 ? res / denom : res);
            throw LocalSolveError(std::string("local bubble solve residual ") + buf + " exceeds tolerance");
        }
        return c;
    }

    [[nodiscard]] double matrix_norm_inf() const { return matrix_.cwiseAbs().rowwise().sum().maxCoeff(); }

    /// Enrichment of the four bilinear shape functions; source slot empty.
    [[nodiscard]] BubbleEnrichment shape_enrichment() const {
        BubbleEnrichment e;
        e.op = op_;
        e.basis = basis_;
        for (int s = 0; s < 4; ++s) e.coeffs[static_cast<std::size_t>(s)] = solve(shape_load(s));
        e.coeffs[kSourceSlot] = Eigen::VectorXd::Zero(dim());
        return e;
    }

    /// Adds the source bubble for f on the element centred at `center`.
    void add_source(BubbleEnrichment& e, const ScalarField& f, Vec2 center) const {
        if (!f) {
            e.coeffs[kSourceSlot] = Eigen::VectorXd::Zero(dim());
            e.has_source = false;
            return;
        }
        e.coeffs[kSourceSlot] = solve(source_load(f, center));
        e.has_source = true;
    }

private:
    void assemble() {
        const auto n = static_cast<Eigen::Index>(basis_.size());
        const double jac = 0.25 * op_.hx * op_.hy;
        const Eigen::Index nq = tab_.value.rows();
        // weighted copies so the quadrature sum becomes matrix products
        Eigen::VectorXd wq(nq);
        for (Eigen::Index q = 0; q < nq; ++q) wq[q] = tab_.rule.weights[static_cast<std::size_t>(q)] * jac;
        const Eigen::MatrixXd wv = wq.asDiagonal() * tab_.value;
        const Eigen::MatrixXd wdx = wq.asDiagonal() * tab_.dx;
        const Eigen::MatrixXd wdy = wq.asDiagonal() * tab_.dy;
        const Eigen::MatrixXd adv = op_.w.x * tab_.dx + op_.w.y * tab_.dy;  // w . grad M_trial
        matrix_.resize(n, n);
        matrix_.noalias() = op_.k * (wdx.transpose() * tab_.dx + wdy.transpose() * tab_.dy);
        matrix_.noalias() += wv.transpose() * adv;
    }

    LocalOperator op_;
    std::vector<BubbleIndex> basis_;
    int quad_order_ = 0;
    BubbleTabulation tab_;
    Eigen::MatrixXd matrix_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// Local bubble matrix for one operator (row = test, column = trial).
inline Eigen::MatrixXd assemble_local_matrix(const LocalOperator& op) { return LocalBubbleSolver(op).matrix(); }

/// Right-hand side for shape function phi_{shape+1} (shape 0..3).
inline Eigen::VectorXd assemble_local_rhs(const LocalOperator& op, int shape) {
    return LocalBubbleSolver(op).shape_load(shape);
}

/// Right-hand side for a source term on the element centred at `center`.
inline Eigen::VectorXd assemble_local_rhs(const LocalOperator& op, const ScalarField& f, Vec2 center = {}) {
    return LocalBubbleSolver(op).source_load(f, center);
}

/// Factors the local system once and back-solves all five loads.
inline BubbleEnrichment solve_enrichment(const LocalOperator& op, const ScalarField& f = {}, Vec2 center = {}) {
    const LocalBubbleSolver solver(op);
    BubbleEnrichment e = solver.shape_enrichment();
    solver.add_source(e, f, center);
    return e;
}

}  // namespace bubblefem
