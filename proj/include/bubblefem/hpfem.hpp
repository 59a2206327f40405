#pragma once

// Hierarchic hp-FEM baseline: vertex, edge and interior modes up to order p
// on every element, assembled conformingly through HpDofMap.

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bubblefem/config.hpp"
#include "bubblefem/galerkin.hpp"
#include "bubblefem/hp_dofmap.hpp"
#include "bubblefem/mesh.hpp"
#include "bubblefem/parallel.hpp"
#include "bubblefem/polybasis.hpp"
#include "bubblefem/solution.hpp"
#include "bubblefem/sparse.hpp"

namespace bubblefem {

/// All (p+1)^2 local modes tabulated at a tensor Gauss rule, in local mode
/// order (vertices, edge modes, interior modes). Gradients are reference.
struct HpTabulation {
    int p = 1;
    QuadratureRule rule;
    Eigen::MatrixXd value;  // [point][mode]
    Eigen::MatrixXd dxi;
    Eigen::MatrixXd deta;
};

inline HpTabulation tabulate_hp(int p, int quad_order) {
    HpTabulation t;
    t.p = p;
    t.rule = gauss_rule(quad_order);
    const auto nq = static_cast<Eigen::Index>(t.rule.points.size());
    const Eigen::Index nm = (p + 1) * (p + 1);
    t.value.resize(nq, nm);
    t.dxi.resize(nq, nm);
    t.deta.resize(nq, nm);
    for (Eigen::Index q = 0; q < nq; ++q) {
        const RefPoint pt = t.rule.points[static_cast<std::size_t>(q)];
        Eigen::Index l = 0;
        auto put = [&](const ValueGrad& v) {
            t.value(q, l) = v.value;
            t.dxi(q, l) = v.d_xi;
            t.deta(q, l) = v.d_eta;
            ++l;
        };
        for (int m = 0; m < 4; ++m) put(hp_shape_eval(HpModeKind::vertex, m, p, pt));
        for (int m = 0; m < hp_mode_count(HpModeKind::edge, p); ++m) put(hp_shape_eval(HpModeKind::edge, m, p, pt));
        for (int m = 0; m < hp_mode_count(HpModeKind::interior, p); ++m)
            put(hp_shape_eval(HpModeKind::interior, m, p, pt));
    }
    return t;
}

namespace detail {

inline ElementContribution hp_element(double k, Vec2 w, const ElementMap& map, const HpTabulation& tab,
                                      const ScalarField& f) {
    const auto nq = static_cast<Eigen::Index>(tab.rule.points.size());
    Eigen::VectorXd wq(nq);
    Eigen::VectorXd fq = Eigen::VectorXd::Zero(nq);
    for (Eigen::Index q = 0; q < nq; ++q) {
        wq[q] = tab.rule.weights[static_cast<std::size_t>(q)] * map.jacobian();
        if (f) {
            const Vec2 x = ref_to_phys(map, tab.rule.points[static_cast<std::size_t>(q)]);
            fq[q] = f(x.x, x.y);
        }
    }
    const Eigen::MatrixXd gx = tab.dxi * map.dxi_dx();
    const Eigen::MatrixXd gy = tab.deta * map.deta_dy();
    const Eigen::MatrixXd adv = w.x * gx + w.y * gy;
    ElementContribution out;
    out.matrix = k * (gx.transpose() * wq.asDiagonal() * gx + gy.transpose() * wq.asDiagonal() * gy);
    out.matrix.noalias() += tab.value.transpose() * wq.asDiagonal() * adv;
    out.load = tab.value.transpose() * wq.cwiseProduct(fq);
    return out;
}

}  // namespace detail

/// a(psi_j, psi_i) over all local hierarchic modes, Gauss order p+2 unless
/// overridden. Local (unsigned) mode orientation.
inline ElementContribution element_matrix_hp(double k, Vec2 w, const ElementMap& map, int p, const ScalarField& f = {},
                                             std::optional<int> quad_order = {}) {
    const HpTabulation tab = tabulate_hp(p, quad_order.value_or(p + 2));
    return detail::hp_element(k, w, map, tab, f);
}

/// Edge-mode coefficients (n = 2..p) of the part of g along a boundary edge
/// that its linear interpolant misses, by H1-seminorm projection. The edge
/// runs from `a` (parameter -1) to `b` (+1).
inline std::vector<double> boundary_edge_modes(const ScalarField& g, Vec2 a, Vec2 b, int p) {
    std::vector<double> c(static_cast<std::size_t>(std::max(0, p - 1)), 0.0);
    if (!g || p < 2) return c;
    const GaussRule1D rule = gauss_rule_1d(std::min(kMaxGaussOrder, 2 * p + 8));
    const double ga = g(a.x, a.y);
    const double gb = g(b.x, b.y);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double t = rule.points[q];
        const double x = 0.5 * (1.0 - t) * a.x + 0.5 * (1.0 + t) * b.x;
        const double y = 0.5 * (1.0 - t) * a.y + 0.5 * (1.0 + t) * b.y;
        const double r = g(x, y) - (0.5 * (1.0 - t) * ga + 0.5 * (1.0 + t) * gb);
        if (r == 0.0) continue;
        for (int n = 2; n <= p; ++n) {
            // l_n'' = sqrt((2n-1)/2) L'_{n-1}; Lobatto kernels are H1_0-orthonormal
            const double d2 = std::sqrt((2.0 * n - 1.0) / 2.0) * legendre_eval(n - 1, t).deriv;
            c[static_cast<std::size_t>(n - 2)] -= rule.weights[q] * r * d2;
        }
    }
    for (double& v : c)
        if (std::abs(v) < 1e-14) v = 0.0;
    return c;
}

/// Hierarchic hp-FEM solve of order config.p with Dirichlet data g.
inline FieldSolution solve_hp(const SolverConfig& config, const QuadMesh& mesh, const ScalarField& f,
                              const ScalarField& g, const SolveOptions& options = {}) {
    config.validate(mesh);
    const int p = config.p;
    FieldSolution sol;
    sol.scheme = Scheme::hp;
    sol.mesh = mesh;
    sol.config = config;
    sol.dofmap.emplace(mesh, p);
    const HpDofMap& map = *sol.dofmap;
    sol.dofs = map.total();

    auto t0 = detail::Clock::now();
    const HpTabulation tab = tabulate_hp(p, config.quad_order.value_or(p + 2));
    const int ne = mesh.num_elements();
    std::vector<ElementContribution> contrib(static_cast<std::size_t>(ne));
    parallel_for(ne, config.threads, [&](int e) {
        contrib[static_cast<std::size_t>(e)] = detail::hp_element(config.k, config.w.on(e), mesh.element_map(e), tab, f);
    });

    SystemAssembler assembler(map.total());
    std::vector<int> dofs;
    std::vector<double> signs;
    for (int e = 0; e < ne; ++e) {
        map.element_dofs(mesh, e, dofs, signs);
        const Eigen::Map<const Eigen::VectorXd> s(signs.data(), static_cast<Eigen::Index>(signs.size()));
        ElementContribution& c = contrib[static_cast<std::size_t>(e)];
        c.matrix = s.asDiagonal() * c.matrix * s.asDiagonal();
        c.load = s.cwiseProduct(c.load);
        assembler.add(dofs, c.matrix, c.load);
    }

    std::vector<bool> constrained(static_cast<std::size_t>(map.total()), false);
    std::vector<double> values(static_cast<std::size_t>(map.total()), 0.0);
    nodal_dirichlet(mesh, g, constrained, values);  // vertex dofs are node ids
    for (int e = 0; e < ne; ++e)
        for (int le = 0; le < 4; ++le) {
            const int edge = map.element_edge(e, le);
            if (!map.edge_on_boundary(edge) || p < 2) continue;
            const auto [la, lb] = kRefEdges[static_cast<std::size_t>(le)];
            int na = mesh.element(e)[static_cast<std::size_t>(la)];
            int nb = mesh.element(e)[static_cast<std::size_t>(lb)];
            if (na > nb) std::swap(na, nb);  // global edge direction: low id to high id
            const std::vector<double> modes = boundary_edge_modes(g, mesh.node(na), mesh.node(nb), p);
            for (int n = 2; n <= p; ++n) {
                const auto d = static_cast<std::size_t>(map.edge_dof(edge, n));
                constrained[d] = true;
                values[d] = modes[static_cast<std::size_t>(n - 2)];
            }
        }
    const SparseSystem sys = assembler.finalize(std::move(constrained), std::move(values));
    sol.timings.assembly = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    sol.modal = detail::to_std(solve_system(sys, options));
    sol.nodal.assign(sol.modal.begin(), sol.modal.begin() + map.num_vertices());
    sol.timings.solve = detail::seconds_since(t0);
    return sol;
}

}  // namespace bubblefem
