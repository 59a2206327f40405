#pragma once

// Structured quadrilateral partitions of an axis-aligned rectangle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "bubblefem/polybasis.hpp"

namespace bubblefem {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] double norm() const { return std::hypot(x, y); }
};

struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 1.0;
    double y1 = 1.0;

    [[nodiscard]] double width() const { return x1 - x0; }
    [[nodiscard]] double height() const { return y1 - y0; }
    [[nodiscard]] double area() const { return width() * height(); }
};

inline constexpr Rect kUnitSquare{0.0, 0.0, 1.0, 1.0};

/// Affine map from the reference square onto one rectangular element.
struct ElementMap {
    int element = 0;
    double hx = 1.0;
    double hy = 1.0;
    Vec2 center;

    [[nodiscard]] double jacobian() const { return 0.25 * hx * hy; }
    [[nodiscard]] double dxi_dx() const { return 2.0 / hx; }
    [[nodiscard]] double deta_dy() const { return 2.0 / hy; }
};

inline Vec2 ref_to_phys(const ElementMap& map, RefPoint pt) {
    return {map.center.x + 0.5 * map.hx * pt.xi, map.center.y + 0.5 * map.hy * pt.eta};
}

inline RefPoint phys_to_ref(const ElementMap& map, Vec2 x) {
    return {2.0 * (x.x - map.center.x) / map.hx, 2.0 * (x.y - map.center.y) / map.hy};
}

/// Uniform nx-by-ny mesh. Nodes are numbered row-major (x fastest), elements
/// likewise; element vertices are listed counter-clockwise from lower-left.
class QuadMesh {
public:
    QuadMesh(int nx, int ny, Rect domain) : nx_(nx), ny_(ny), domain_(domain) {
        if (nx < 1 || ny < 1) throw std::invalid_argument("mesh needs at least one element per direction");
        if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
            throw std::invalid_argument("degenerate mesh domain");
        hx_ = domain.width() / nx;
        hy_ = domain.height() / ny;
        nodes_.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i) {
                // Snap the last row/column onto the domain edge exactly.
                const double x = i == nx ? domain.x1 : domain.x0 + i * hx_;
                const double y = j == ny ? domain.y1 : domain.y0 + j * hy_;
                nodes_.push_back({x, y});
            }
        elements_.reserve(static_cast<std::size_t>(nx * ny));
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int n0 = node_id(i, j);
                elements_.push_back({n0, n0 + 1, n0 + nx + 2, n0 + nx + 1});
            }
        boundary_.assign(nodes_.size(), false);
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i)
                if (i == 0 || j == 0 || i == nx || j == ny) boundary_[static_cast<std::size_t>(node_id(i, j))] = true;
    }

    [[nodiscard]] int nx() const { return nx_; }
    [[nodiscard]] int ny() const { return ny_; }
    [[nodiscard]] const Rect& domain() const { return domain_; }
    [[nodiscard]] double hx() const { return hx_; }
    [[nodiscard]] double hy() const { return hy_; }

    [[nodiscard]] int num_nodes() const { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] int num_elements() const { return static_cast<int>(elements_.size()); }
    [[nodiscard]] int node_id(int i, int j) const { return j * (nx_ + 1) + i; }

    [[nodiscard]] const Vec2& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    [[nodiscard]] const std::vector<Vec2>& nodes() const { return nodes_; }
    [[nodiscard]] const std::array<int, 4>& element(int e) const { return elements_[static_cast<std::size_t>(e)]; }
    [[nodiscard]] const std::vector<std::array<int, 4>>& elements() const { return elements_; }
    [[nodiscard]] bool is_boundary(int node) const { return boundary_[static_cast<std::size_t>(node)]; }

    [[nodiscard]] std::vector<int> boundary_nodes() const {
        std::vector<int> ids;
        for (int n = 0; n < num_nodes(); ++n)
            if (is_boundary(n)) ids.push_back(n);
        return ids;
    }

    [[nodiscard]] ElementMap element_map(int e) const {
        const int i = e % nx_;
        const int j = e / nx_;
        const Vec2& ll = node(node_id(i, j));
        const Vec2& ur = node(node_id(i + 1, j + 1));
        return {e, ur.x - ll.x, ur.y - ll.y, {0.5 * (ll.x + ur.x), 0.5 * (ll.y + ur.y)}};
    }

    /// Element containing a physical point (points on shared edges go to the
    /// element with the larger index).
    [[nodiscard]] int locate(Vec2 x) const {
        const int i = std::clamp(static_cast<int>(std::floor((x.x - domain_.x0) / hx_)), 0, nx_ - 1);
        const int j = std::clamp(static_cast<int>(std::floor((x.y - domain_.y0) / hy_)), 0, ny_ - 1);
        return j * nx_ + i;
    }

    /// Mesh diameter: the largest element diagonal.
    [[nodiscard]] double diameter() const { return std::hypot(hx_, hy_); }
    /// Largest element edge, the length scale of the mesh Peclet number.
    [[nodiscard]] double max_edge() const { return std::max(hx_, hy_); }

private:
    int nx_;
    int ny_;
    Rect domain_;
    double hx_ = 0.0;
    double hy_ = 0.0;
    std::vector<Vec2> nodes_;
    std::vector<std::array<int, 4>> elements_;
    std::vector<bool> boundary_;
};

inline QuadMesh build_mesh(int nx, int ny, Rect domain = kUnitSquare) { return QuadMesh(nx, ny, domain); }

/// Pe_h = |w| h / (2k) with h the largest element edge.
inline double mesh_peclet(double k, const Vec2& w, const QuadMesh& mesh) {
    if (!(k > 0.0)) throw std::invalid_argument("mesh_peclet: diffusion coefficient must be positive");
    return w.norm() * mesh.max_edge() / (2.0 * k);
}

/// Advection magnitude that yields a target mesh Peclet number.
inline double advection_for_peclet(double pe_mesh, double k, const QuadMesh& mesh) {
    return 2.0 * k * pe_mesh / mesh.max_edge();
}

/// Legacy-VTK structured grid with one point-data scalar per grid point.
/// `values` is row-major with (sx+1) points along x.
inline void write_vtk_structured(std::ostream& os, int sx, int sy, const std::vector<Vec2>& points,
                                 const std::vector<double>& values, const char* field_name = "u") {
    const std::size_t count = static_cast<std::size_t>((sx + 1) * (sy + 1));
    if (points.size() != count || values.size() != count)
        throw std::invalid_argument("write_vtk_structured: point/value count mismatch");
    os << "# vtk DataFile Version 3.0\n"
       << "bubblefem field\n"
       << "ASCII\n"
       << "DATASET STRUCTURED_GRID\n"
       << "DIMENSIONS " << sx + 1 << ' ' << sy + 1 << " 1\n"
       << "POINTS " << count << " double\n";
    const auto old_prec = os.precision(17);
    for (const Vec2& p : points) os << p.x << ' ' << p.y << " 0\n";
    os << "POINT_DATA " << count << "\n"
       << "SCALARS " << field_name << " double 1\n"
       << "LOOKUP_TABLE default\n";
    for (double v : values) os << v << '\n';
    os.precision(old_prec);
}

inline void write_vtk(std::ostream& os, const QuadMesh& mesh, const std::vector<double>& nodal,
                      const char* field_name = "u") {
    write_vtk_structured(os, mesh.nx(), mesh.ny(), mesh.nodes(), nodal, field_name);
}

}  // namespace bubblefem
