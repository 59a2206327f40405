#pragma once

// Test-only oracle: the element bubble problem
//     -k lap b + w . grad b = -w . grad phi_s  in K,   b = 0 on dK,
// solved with bilinear finite elements on an n-by-n sub-mesh of K.
// Written independently of the library: its own shape functions, its own
// 2x2 Gauss rule, its own assembly.

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace oracle {

struct SubmeshBubble {
    int n = 0;
    // nodal values, row-major in (xi, eta), (n+1)^2 entries
    std::vector<double> values;

    [[nodiscard]] double at(int i, int j) const { return values[static_cast<std::size_t>(j * (n + 1) + i)]; }
};

/// `shape` 0..3 selects the parent element's bilinear function at vertex
/// (-1,-1), (1,-1), (1,1), (-1,1).
inline SubmeshBubble submesh_bubble(double k, double wx, double wy, double hx, double hy, int shape, int n) {
    static constexpr std::array<double, 4> sx{-1.0, 1.0, 1.0, -1.0};
    static constexpr std::array<double, 4> sy{-1.0, -1.0, 1.0, 1.0};
    const double g = 1.0 / std::sqrt(3.0);
    const std::array<double, 2> gp{-g, g};

    // physical gradient of the parent shape function at parent reference (xi, eta)
    auto parent_grad = [&](double xi, double eta) {
        const double s = sx[static_cast<std::size_t>(shape)];
        const double t = sy[static_cast<std::size_t>(shape)];
        return std::array<double, 2>{0.25 * s * (1.0 + t * eta) * (2.0 / hx), 0.25 * t * (1.0 + s * xi) * (2.0 / hy)};
    };

    const int nn = (n + 1) * (n + 1);
    const double dx = hx / n;
    const double dy = hy / n;
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nn);
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    auto boundary = [n](int i, int j) { return i == 0 || j == 0 || i == n || j == n; };

    for (int ej = 0; ej < n; ++ej)
        for (int ei = 0; ei < n; ++ei) {
            const std::array<int, 4> nodes{id(ei, ej), id(ei + 1, ej), id(ei + 1, ej + 1), id(ei, ej + 1)};
            double a[4][4] = {};
            double f[4] = {};
            for (double gx : gp)
                for (double gy : gp) {
                    const double wq = 0.25 * dx * dy;  // weight 1 per point times jacobian
                    double v[4], dvx[4], dvy[4];
                    for (int l = 0; l < 4; ++l) {
                        const double s = sx[static_cast<std::size_t>(l)];
                        const double t = sy[static_cast<std::size_t>(l)];
                        v[l] = 0.25 * (1.0 + s * gx) * (1.0 + t * gy);
                        dvx[l] = 0.25 * s * (1.0 + t * gy) * (2.0 / dx);
                        dvy[l] = 0.25 * t * (1.0 + s * gx) * (2.0 / dy);
                    }
                    // parent reference coordinates of this Gauss point
                    const double xi = -1.0 + 2.0 * (ei + 0.5 * (1.0 + gx)) / n;
                    const double eta = -1.0 + 2.0 * (ej + 0.5 * (1.0 + gy)) / n;
                    const auto pg = parent_grad(xi, eta);
                    const double load = -(wx * pg[0] + wy * pg[1]);
                    for (int r = 0; r < 4; ++r) {
                        f[r] += wq * load * v[r];
                        for (int c = 0; c < 4; ++c)
                            a[r][c] += wq * (k * (dvx[c] * dvx[r] + dvy[c] * dvy[r]) + (wx * dvx[c] + wy * dvy[c]) * v[r]);
                    }
                }
            for (int r = 0; r < 4; ++r) {
                const int gr = nodes[static_cast<std::size_t>(r)];
                const int ri = gr % (n + 1), rj = gr / (n + 1);
                if (boundary(ri, rj)) continue;
                rhs[gr] += f[r];
                for (int c = 0; c < 4; ++c) {
                    const int gc = nodes[static_cast<std::size_t>(c)];
                    if (boundary(gc % (n + 1), gc / (n + 1))) continue;  // homogeneous data
                    trip.emplace_back(gr, gc, a[r][c]);
                }
            }
        }
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            if (boundary(i, j)) trip.emplace_back(id(i, j), id(i, j), 1.0);

    Eigen::SparseMatrix<double> mat(nn, nn);
    mat.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(mat);
    const Eigen::VectorXd sol = lu.solve(rhs);
    return {n, std::vector<double>(sol.data(), sol.data() + sol.size())};
}

}  // namespace oracle
