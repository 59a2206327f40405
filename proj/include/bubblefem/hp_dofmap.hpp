#pragma once

// Global numbering of hierarchic hp modes: vertices first, then edge modes,
// then element-interior modes.

#include <array>
#include <stdexcept>
#include <vector>

#include "bubblefem/mesh.hpp"
#include "bubblefem/polybasis.hpp"

namespace bubblefem {

class HpDofMap {
public:
    HpDofMap(const QuadMesh& mesh, int p) : nx_(mesh.nx()), ny_(mesh.ny()), p_(p) {
        if (p < 1) throw std::invalid_argument("hp order must be >= 1");
        num_vertices_ = mesh.num_nodes();
        num_edges_ = nx_ * (ny_ + 1) + ny_ * (nx_ + 1);
        num_elements_ = mesh.num_elements();
        edge_base_ = num_vertices_;
        interior_base_ = edge_base_ + num_edges_ * (p - 1);
        total_ = interior_base_ + num_elements_ * (p - 1) * (p - 1);

        element_edges_.resize(static_cast<std::size_t>(num_elements_));
        element_signs_.resize(static_cast<std::size_t>(num_elements_));
        edge_boundary_.assign(static_cast<std::size_t>(num_edges_), false);
        for (int e = 0; e < num_elements_; ++e) {
            const int i = e % nx_;
            const int j = e / nx_;
            // bottom, right, top, left, matching kRefEdges
            const std::array<int, 4> edges{horizontal_edge(i, j), vertical_edge(i + 1, j),
                                           horizontal_edge(i, j + 1), vertical_edge(i, j)};
            const auto& verts = mesh.element(e);
            for (int le = 0; le < 4; ++le) {
                const auto [a, b] = kRefEdges[static_cast<std::size_t>(le)];
                const int ga = verts[static_cast<std::size_t>(a)];
                const int gb = verts[static_cast<std::size_t>(b)];
                element_edges_[static_cast<std::size_t>(e)][static_cast<std::size_t>(le)] = edges[static_cast<std::size_t>(le)];
                element_signs_[static_cast<std::size_t>(e)][static_cast<std::size_t>(le)] = ga < gb ? 1 : -1;
            }
            if (j == 0) edge_boundary_[static_cast<std::size_t>(edges[0])] = true;
            if (i == nx_ - 1) edge_boundary_[static_cast<std::size_t>(edges[1])] = true;
            if (j == ny_ - 1) edge_boundary_[static_cast<std::size_t>(edges[2])] = true;
            if (i == 0) edge_boundary_[static_cast<std::size_t>(edges[3])] = true;
        }
    }

    [[nodiscard]] int order() const { return p_; }
    [[nodiscard]] int total() const { return total_; }
    [[nodiscard]] int num_vertices() const { return num_vertices_; }
    [[nodiscard]] int num_edges() const { return num_edges_; }
    [[nodiscard]] int local_count() const { return (p_ + 1) * (p_ + 1); }

    [[nodiscard]] int vertex_dof(int node) const { return node; }
    [[nodiscard]] int edge_dof(int edge, int n) const { return edge_base_ + edge * (p_ - 1) + (n - 2); }
    [[nodiscard]] int interior_dof(int element, int local) const {
        return interior_base_ + element * (p_ - 1) * (p_ - 1) + local;
    }
    [[nodiscard]] bool edge_on_boundary(int edge) const { return edge_boundary_[static_cast<std::size_t>(edge)]; }

    /// Global edge id and orientation sign of local edge `le` of element `e`.
    [[nodiscard]] int element_edge(int e, int le) const {
        return element_edges_[static_cast<std::size_t>(e)][static_cast<std::size_t>(le)];
    }
    [[nodiscard]] int element_edge_sign(int e, int le) const {
        return element_signs_[static_cast<std::size_t>(e)][static_cast<std::size_t>(le)];
    }

    /// Global ids of the local modes of element `e`, ordered vertices, edge
    /// modes (edge-major), interior modes; `signs` receives the factor that
    /// maps each local mode onto the global one.
    void element_dofs(const QuadMesh& mesh, int e, std::vector<int>& dofs, std::vector<double>& signs) const {
        dofs.clear();
        signs.clear();
        for (int v : mesh.element(e)) {
            dofs.push_back(vertex_dof(v));
            signs.push_back(1.0);
        }
        for (int le = 0; le < 4; ++le) {
            const int edge = element_edge(e, le);
            const int sign = element_edge_sign(e, le);
            for (int n = 2; n <= p_; ++n) {
                dofs.push_back(edge_dof(edge, n));
                signs.push_back(n % 2 == 1 ? static_cast<double>(sign) : 1.0);
            }
        }
        for (int l = 0; l < (p_ - 1) * (p_ - 1); ++l) {
            dofs.push_back(interior_dof(e, l));
            signs.push_back(1.0);
        }
    }

private:
    [[nodiscard]] int horizontal_edge(int i, int j) const { return j * nx_ + i; }
    [[nodiscard]] int vertical_edge(int i, int j) const { return nx_ * (ny_ + 1) + j * (nx_ + 1) + i; }

    int nx_;
    int ny_;
    int p_;
    int num_vertices_ = 0;
    int num_edges_ = 0;
    int num_elements_ = 0;
    int edge_base_ = 0;
    int interior_base_ = 0;
    int total_ = 0;
    std::vector<std::array<int, 4>> element_edges_;
    std::vector<std::array<int, 4>> element_signs_;
    std::vector<bool> edge_boundary_;
};

inline HpDofMap build_dof_map(const QuadMesh& mesh, int p) { return HpDofMap(mesh, p); }

/// vertices + (p-1) edges + (p-1)^2 elements
inline long hp_dof_count(int nx, int ny, int p) {
    const long verts = static_cast<long>(nx + 1) * (ny + 1);
    const long edges = static_cast<long>(nx) * (ny + 1) + static_cast<long>(ny) * (nx + 1);
    return verts + edges * (p - 1) + static_cast<long>(nx) * ny * (p - 1) * (p - 1);
}

}  // namespace bubblefem
