#pragma once

// Bilinear Galerkin and bubble-enriched (RFB) Galerkin on structured quads.
//
// The enriched scheme keeps only bilinear test functions: trial functions are
// (I + F_K) phi_i, and the bubble equations are satisfied element by element
// by the local spectral solve, i.e. the bubbles are statically condensed.

#include <chrono>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "bubblefem/config.hpp"
#include "bubblefem/mesh.hpp"
#include "bubblefem/parallel.hpp"
#include "bubblefem/polybasis.hpp"
#include "bubblefem/rfb_local.hpp"
#include "bubblefem/solution.hpp"
#include "bubblefem/sparse.hpp"

namespace bubblefem {

struct ElementContribution {
    Eigen::MatrixXd matrix;  // (test, trial)
    Eigen::VectorXd load;
};

inline constexpr int kGalerkinQuadOrder = 3;

/// a(phi_j, phi_i) and (f, phi_i) over one element.
inline ElementContribution element_matrix_galerkin(double k, Vec2 w, const ElementMap& map, const ScalarField& f = {},
                                                   int quad_order = kGalerkinQuadOrder) {
    const QuadratureRule rule = gauss_rule(quad_order);
    ElementContribution out{Eigen::MatrixXd::Zero(4, 4), Eigen::VectorXd::Zero(4)};
    const double jac = map.jacobian();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const RefPoint pt = rule.points[q];
        const double wq = rule.weights[q] * jac;
        std::array<ValueGrad, 4> phi{};
        for (int v = 0; v < 4; ++v) {
            phi[static_cast<std::size_t>(v)] = bilinear_eval(v, pt);
            phi[static_cast<std::size_t>(v)].d_xi *= map.dxi_dx();
            phi[static_cast<std::size_t>(v)].d_eta *= map.deta_dy();
        }
        const double fq = f ? [&] { const Vec2 x = ref_to_phys(map, pt); return f(x.x, x.y); }() : 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            out.load[static_cast<Eigen::Index>(i)] += wq * fq * phi[i].value;
            for (std::size_t j = 0; j < 4; ++j) {
                const double diff = phi[j].d_xi * phi[i].d_xi + phi[j].d_eta * phi[i].d_eta;
                const double adv = (w.x * phi[j].d_xi + w.y * phi[j].d_eta) * phi[i].value;
                out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += wq * (k * diff + adv);
            }
        }
    }
    return out;
}

namespace detail {

inline ElementContribution rfb_element(double k, Vec2 w, const ElementMap& map, const BubbleEnrichment& e,
                                       const BubbleTabulation& tab, const ScalarField& f) {
    const auto nq = static_cast<Eigen::Index>(tab.rule.points.size());
    Eigen::MatrixXd coeffs(e.dim(), 5);
    for (int s = 0; s < 5; ++s) coeffs.col(s) = e.coeffs[static_cast<std::size_t>(s)];
    // bubble gradients of the five enrichment functions at every point
    const Eigen::MatrixXd bdx = tab.dx * coeffs;
    const Eigen::MatrixXd bdy = tab.dy * coeffs;

    ElementContribution out{Eigen::MatrixXd::Zero(4, 4), Eigen::VectorXd::Zero(4)};
    const double jac = map.jacobian();
    for (Eigen::Index q = 0; q < nq; ++q) {
        const RefPoint pt = tab.rule.points[static_cast<std::size_t>(q)];
        const double wq = tab.rule.weights[static_cast<std::size_t>(q)] * jac;
        std::array<ValueGrad, 4> phi{};
        for (int v = 0; v < 4; ++v) {
            phi[static_cast<std::size_t>(v)] = bilinear_eval(v, pt);
            phi[static_cast<std::size_t>(v)].d_xi *= map.dxi_dx();
            phi[static_cast<std::size_t>(v)].d_eta *= map.deta_dy();
        }
        double fq = 0.0;
        if (f) {
            const Vec2 x = ref_to_phys(map, pt);
            fq = f(x.x, x.y);
        }
        for (std::size_t i = 0; i < 4; ++i) {
            const ValueGrad& test = phi[i];
            // source bubble moves to the right-hand side
            const double sx = bdx(q, kSourceSlot);
            const double sy = bdy(q, kSourceSlot);
            const double a_src = k * (sx * test.d_xi + sy * test.d_eta) + (w.x * sx + w.y * sy) * test.value;
            out.load[static_cast<Eigen::Index>(i)] += wq * (fq * test.value - a_src);
            for (std::size_t j = 0; j < 4; ++j) {
                const double gx = phi[j].d_xi + bdx(q, static_cast<Eigen::Index>(j));
                const double gy = phi[j].d_eta + bdy(q, static_cast<Eigen::Index>(j));
                const double val = k * (gx * test.d_xi + gy * test.d_eta) + (w.x * gx + w.y * gy) * test.value;
                out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += wq * val;
            }
        }
    }
    return out;
}

}  // namespace detail

/// a((I + F_K) phi_j, phi_i) and (f, phi_i) - a(F_K f, phi_i) over one element.
inline ElementContribution element_matrix_rfb(double k, Vec2 w, const ElementMap& map, const BubbleEnrichment& e,
                                              const ScalarField& f = {}, std::optional<int> quad_order = {}) {
    const LocalOperator expected{k, w, map.hx, map.hy, e.op.p};
    if (!e.op.same_as(expected)) throw std::invalid_argument("enrichment was computed for a different local operator");
    const BubbleTabulation tab = tabulate_bubbles(e.basis, e.op.p, quad_order.value_or(e.op.p + 4), map.hx, map.hy);
    return detail::rfb_element(k, w, map, e, tab, f);
}

/// Nodal Dirichlet data: boundary nodes take g(node), everything else free.
inline void nodal_dirichlet(const QuadMesh& mesh, const ScalarField& g, std::vector<bool>& constrained,
                            std::vector<double>& values) {
    for (int n = 0; n < mesh.num_nodes(); ++n) {
        if (!mesh.is_boundary(n)) continue;
        constrained[static_cast<std::size_t>(n)] = true;
        values[static_cast<std::size_t>(n)] = g ? g(mesh.node(n).x, mesh.node(n).y) : 0.0;
    }
}

/// Scatter per-element 4x4 contributions into the nodal system and apply the
/// boundary data.
inline SparseSystem assemble_global(const QuadMesh& mesh, const std::vector<ElementContribution>& elements,
                                    const ScalarField& g) {
    if (static_cast<int>(elements.size()) != mesh.num_elements())
        throw std::invalid_argument("one element contribution per element expected");
    SystemAssembler assembler(mesh.num_nodes());
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& verts = mesh.element(e);
        assembler.add(verts, elements[static_cast<std::size_t>(e)].matrix, elements[static_cast<std::size_t>(e)].load);
    }
    std::vector<bool> constrained(static_cast<std::size_t>(mesh.num_nodes()), false);
    std::vector<double> values(static_cast<std::size_t>(mesh.num_nodes()), 0.0);
    nodal_dirichlet(mesh, g, constrained, values);
    return assembler.finalize(std::move(constrained), std::move(values));
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace detail

/// Standard bilinear Galerkin solve.
inline FieldSolution solve_galerkin(const SolverConfig& config, const QuadMesh& mesh, const ScalarField& f,
                                    const ScalarField& g, const SolveOptions& options = {}) {
    config.validate(mesh);
    FieldSolution sol;
    sol.scheme = Scheme::galerkin;
    sol.mesh = mesh;
    sol.config = config;
    sol.dofs = mesh.num_nodes();

    auto t0 = detail::Clock::now();
    std::vector<ElementContribution> contrib(static_cast<std::size_t>(mesh.num_elements()));
    const int order = config.quad_order.value_or(kGalerkinQuadOrder);
    parallel_for(mesh.num_elements(), config.threads, [&](int e) {
        contrib[static_cast<std::size_t>(e)] =
            element_matrix_galerkin(config.k, config.w.on(e), mesh.element_map(e), f, order);
    });
    const SparseSystem sys = assemble_global(mesh, contrib, g);
    sol.timings.assembly = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    sol.nodal = detail::to_std(solve_system(sys, options));
    sol.timings.solve = detail::seconds_since(t0);
    return sol;
}

/// Bubble-enriched Galerkin solve. With one global (k, w) on a uniform mesh
/// the local bubble system is factored and solved once for all elements;
/// only source loads, when f is given, are back-solved per element.
inline FieldSolution solve_rfb(const SolverConfig& config, const QuadMesh& mesh, const ScalarField& f,
                               const ScalarField& g, const SolveOptions& options = {}) {
    config.validate(mesh);
    const int ne = mesh.num_elements();
    FieldSolution sol;
    sol.scheme = Scheme::rfb;
    sol.mesh = mesh;
    sol.config = config;
    sol.dofs = mesh.num_nodes();
    sol.enrichments.resize(static_cast<std::size_t>(ne));

    auto t0 = detail::Clock::now();
    std::vector<std::shared_ptr<const LocalBubbleSolver>> solvers(static_cast<std::size_t>(ne));
    if (config.w.is_global()) {
        const LocalOperator op{config.k, config.w.on(0), mesh.hx(), mesh.hy(), config.p};
        auto solver = std::make_shared<const LocalBubbleSolver>(op, config.quad_order);
        auto shared = std::make_shared<const BubbleEnrichment>(solver->shape_enrichment());
        sol.unique_enrichments = 1;
        for (int e = 0; e < ne; ++e) {
            solvers[static_cast<std::size_t>(e)] = solver;
            sol.enrichments[static_cast<std::size_t>(e)] = shared;
        }
        if (f) {
            parallel_for(ne, config.threads, [&](int e) {
                auto own = std::make_shared<BubbleEnrichment>(*shared);
                solver->add_source(*own, f, mesh.element_map(e).center);
                sol.enrichments[static_cast<std::size_t>(e)] = std::move(own);
            });
        }
    } else {
        sol.unique_enrichments = ne;
        parallel_for(ne, config.threads, [&](int e) {
            const LocalOperator op{config.k, config.w.on(e), mesh.hx(), mesh.hy(), config.p};
            auto solver = std::make_shared<const LocalBubbleSolver>(op, config.quad_order);
            auto own = std::make_shared<BubbleEnrichment>(solver->shape_enrichment());
            solver->add_source(*own, f, mesh.element_map(e).center);
            solvers[static_cast<std::size_t>(e)] = std::move(solver);
            sol.enrichments[static_cast<std::size_t>(e)] = std::move(own);
        });
    }
    sol.timings.enrichment = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    std::vector<ElementContribution> contrib(static_cast<std::size_t>(ne));
    parallel_for(ne, config.threads, [&](int e) {
        const auto idx = static_cast<std::size_t>(e);
        contrib[idx] = detail::rfb_element(config.k, config.w.on(e), mesh.element_map(e), *sol.enrichments[idx],
                                           solvers[idx]->tabulation(), f);
    });
    const SparseSystem sys = assemble_global(mesh, contrib, g);
    sol.timings.assembly = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    sol.nodal = detail::to_std(solve_system(sys, options));
    sol.timings.solve = detail::seconds_since(t0);
    return sol;
}

}  // namespace bubblefem
