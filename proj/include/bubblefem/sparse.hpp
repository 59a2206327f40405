#pragma once

// Global sparse system: scatter-add assembly, Dirichlet row substitution and
// the linear solve.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

namespace bubblefem {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Global matrix and right-hand side after constraint application.
/// Constrained rows are identity rows carrying their prescribed value; the
/// constrained columns have been moved to the right-hand side.
struct SparseSystem {
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
    std::vector<bool> constrained;
    std::vector<double> values;

    [[nodiscard]] int size() const { return static_cast<int>(rhs.size()); }
    [[nodiscard]] int free_dofs() const {
        int n = 0;
        for (bool c : constrained) n += c ? 0 : 1;
        return n;
    }
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
    [[nodiscard]] double residual() const { return residual_; }

private:
    double residual_;
};

/// Accumulates element contributions in call order, so identical call
/// sequences give bitwise-identical systems.
class SystemAssembler {
public:
    explicit SystemAssembler(int ndofs) : n_(ndofs), rhs_(Eigen::VectorXd::Zero(ndofs)) {}

    [[nodiscard]] int size() const { return n_; }

    void add(std::span<const int> dofs, const Eigen::Ref<const Eigen::MatrixXd>& local,
             const Eigen::Ref<const Eigen::VectorXd>& load) {
        const auto m = static_cast<Eigen::Index>(dofs.size());
        if (local.rows() != m || local.cols() != m || load.size() != m)
            throw std::invalid_argument("element contribution size does not match its dof list");
        for (Eigen::Index a = 0; a < m; ++a) {
            const int ra = dofs[static_cast<std::size_t>(a)];
            if (ra < 0 || ra >= n_) throw std::out_of_range("dof id outside the global system");
            rhs_[ra] += load[a];
            for (Eigen::Index b = 0; b < m; ++b)
                triplets_.emplace_back(ra, dofs[static_cast<std::size_t>(b)], local(a, b));
        }
    }

    /// Apply Dirichlet constraints by row substitution, moving known values
    /// to the right-hand side, and build the sparse matrix.
    [[nodiscard]] SparseSystem finalize(std::vector<bool> constrained, std::vector<double> values) const {
        if (static_cast<int>(constrained.size()) != n_ || static_cast<int>(values.size()) != n_)
            throw std::invalid_argument("constraint arrays do not match the dof count");
        SparseSystem sys;
        sys.rhs = rhs_;
        std::vector<Eigen::Triplet<double>> kept;
        kept.reserve(triplets_.size());
        for (const auto& t : triplets_) {
            const auto r = static_cast<std::size_t>(t.row());
            const auto c = static_cast<std::size_t>(t.col());
            if (constrained[r]) continue;
            if (constrained[c]) {
                sys.rhs[t.row()] -= t.value() * values[c];
                continue;
            }
            kept.push_back(t);
        }
        for (int d = 0; d < n_; ++d)
            if (constrained[static_cast<std::size_t>(d)]) {
                kept.emplace_back(d, d, 1.0);
                sys.rhs[d] = values[static_cast<std::size_t>(d)];
            }
        sys.matrix.resize(n_, n_);
        sys.matrix.setFromTriplets(kept.begin(), kept.end());
        sys.matrix.makeCompressed();
        sys.constrained = std::move(constrained);
        sys.values = std::move(values);
        return sys;
    }

private:
    int n_;
    Eigen::VectorXd rhs_;
    std::vector<Eigen::Triplet<double>> triplets_;
};

struct SolveOptions {
    /// Systems up to this size use sparse LU, larger ones preconditioned GMRES.
    int direct_limit = 200000;
    double tolerance = 1e-10;
    int gmres_restart = 50;
    int max_iterations = 5000;
};

inline double relative_residual(const SparseMatrix& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    const double nb = b.norm();
    const double nr = (b - a * x).norm();
    return nb > 0.0 ? nr / nb : nr;
}

/// Solve to relative residual ||Ax - b|| / ||b|| <= options.tolerance.
inline Eigen::VectorXd solve_system(const SparseSystem& sys, const SolveOptions& options = {}) {
    const Eigen::Index n = sys.matrix.rows();
    if (sys.matrix.cols() != n || sys.rhs.size() != n)
        throw std::invalid_argument("solve_system: inconsistent system dimensions");
    if (n == 0) return {};
    if (sys.rhs.norm() == 0.0) return Eigen::VectorXd::Zero(n);

    for (Eigen::Index r = 0; r < n; ++r) {
        bool nonzero = false;
        for (SparseMatrix::InnerIterator it(sys.matrix, r); it; ++it) nonzero = nonzero || it.value() != 0.0;
        if (!nonzero) throw SolverError("singular matrix: row " + std::to_string(r) + " is zero", INFINITY);
    }

    const Eigen::SparseMatrix<double> a = sys.matrix;  // column-major copy for the factorizations
    Eigen::VectorXd x;
    if (n <= options.direct_limit) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success) throw SolverError("sparse LU failed: " + lu.lastErrorMessage(), INFINITY);
        x = lu.solve(sys.rhs);
        if (lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("sparse LU solve failed", INFINITY);
        if (relative_residual(sys.matrix, x, sys.rhs) > options.tolerance) x += lu.solve(sys.rhs - a * x);
    } else {
        Eigen::GMRES<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> gmres;
        gmres.set_restart(options.gmres_restart);
        gmres.setMaxIterations(options.max_iterations);
        gmres.setTolerance(options.tolerance * 0.1);
        gmres.compute(a);
        x = gmres.solve(sys.rhs);
    }
    const double res = relative_residual(sys.matrix, x, sys.rhs);
    if (!x.allFinite() || !(res <= options.tolerance)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", res);
        throw SolverError(std::string("linear solve did not reach tolerance, relative residual ") + buf, res);
    }
    return x;
}

}  // namespace bubblefem
