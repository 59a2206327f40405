#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "bubblefem/config.hpp"
#include "bubblefem/hp_dofmap.hpp"
#include "bubblefem/mesh.hpp"
#include "bubblefem/polybasis.hpp"
#include "bubblefem/rfb_local.hpp"

namespace bubblefem {

/// Wall-clock seconds spent per phase of one solve.
struct PhaseTimings {
    double enrichment = 0.0;
    double assembly = 0.0;
    double solve = 0.0;

    [[nodiscard]] double total() const { return enrichment + assembly + solve; }
};

/// u_h = u_1 + u_b. `nodal` holds the bilinear (vertex) coefficients; hp
/// solutions keep their full coefficient vector in `modal`, rfb solutions
/// keep one enrichment per element (shared when the local operator is).
struct FieldSolution {
    Scheme scheme = Scheme::galerkin;
    QuadMesh mesh{1, 1, kUnitSquare};
    SolverConfig config;
    std::vector<double> nodal;
    std::vector<double> modal;
    std::optional<HpDofMap> dofmap;
    std::vector<std::shared_ptr<const BubbleEnrichment>> enrichments;
    int dofs = 0;
    int unique_enrichments = 0;
    PhaseTimings timings;
};

/// Bilinear interpolation of the nodal coefficients only.
inline double evaluate_nodal_part(const FieldSolution& sol, int element, RefPoint pt) {
    const auto& verts = sol.mesh.element(element);
    double u = 0.0;
    for (int v = 0; v < 4; ++v)
        u += sol.nodal[static_cast<std::size_t>(verts[static_cast<std::size_t>(v)])] * bilinear_eval(v, pt).value;
    return u;
}

/// Full discrete solution at a reference point of an element.
inline double evaluate_solution(const FieldSolution& sol, int element, RefPoint pt) {
    if (element < 0 || element >= sol.mesh.num_elements()) throw std::out_of_range("element id out of range");
    const auto& verts = sol.mesh.element(element);
    switch (sol.scheme) {
        case Scheme::galerkin: return evaluate_nodal_part(sol, element, pt);
        case Scheme::rfb: {
            double u = 0.0;
            const BubbleEnrichment* e =
                sol.enrichments.empty() ? nullptr : sol.enrichments[static_cast<std::size_t>(element)].get();
            for (int v = 0; v < 4; ++v) {
                const double c = sol.nodal[static_cast<std::size_t>(verts[static_cast<std::size_t>(v)])];
                u += c * bilinear_eval(v, pt).value;
                if (e != nullptr) u += c * eval_enrichment(*e, v, pt).value;
            }
            if (e != nullptr && e->has_source) u += eval_enrichment(*e, kSourceSlot, pt).value;
            return u;
        }
        case Scheme::hp: {
            const HpDofMap& map = *sol.dofmap;
            const int p = map.order();
            std::vector<int> dofs;
            std::vector<double> signs;
            map.element_dofs(sol.mesh, element, dofs, signs);
            double u = 0.0;
            std::size_t l = 0;
            for (int v = 0; v < 4; ++v, ++l)
                u += sol.modal[static_cast<std::size_t>(dofs[l])] * hp_shape_eval(HpModeKind::vertex, v, p, pt).value;
            for (int m = 0; m < 4 * (p - 1); ++m, ++l)
                u += signs[l] * sol.modal[static_cast<std::size_t>(dofs[l])] *
                     hp_shape_eval(HpModeKind::edge, m, p, pt).value;
            for (int m = 0; m < (p - 1) * (p - 1); ++m, ++l)
                u += sol.modal[static_cast<std::size_t>(dofs[l])] * hp_shape_eval(HpModeKind::interior, m, p, pt).value;
            return u;
        }
    }
    return 0.0;
}

/// Solution at a physical point.
inline double evaluate_at(const FieldSolution& sol, Vec2 x) {
    const int e = sol.mesh.locate(x);
    return evaluate_solution(sol, e, phys_to_ref(sol.mesh.element_map(e), x));
}

}  // namespace bubblefem
