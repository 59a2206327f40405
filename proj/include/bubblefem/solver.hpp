#pragma once

#include "bubblefem/config.hpp"
#include "bubblefem/galerkin.hpp"
#include "bubblefem/hpfem.hpp"
#include "bubblefem/problems.hpp"
#include "bubblefem/solution.hpp"

namespace bubblefem {

inline FieldSolution solve(const SolverConfig& config, const QuadMesh& mesh, const ScalarField& f,
                           const ScalarField& g, const SolveOptions& options = {}) {
    switch (config.scheme) {
        case Scheme::galerkin: return solve_galerkin(config, mesh, f, g, options);
        case Scheme::rfb: return solve_rfb(config, mesh, f, g, options);
        case Scheme::hp: return solve_hp(config, mesh, f, g, options);
    }
    throw std::invalid_argument("unknown scheme");
}

/// Configuration for a benchmark problem with the given scheme and order.
inline SolverConfig config_for(const BenchmarkProblem& problem, Scheme scheme, int p) {
    SolverConfig c;
    c.k = problem.k;
    c.w = problem.w;
    c.p = p;
    c.scheme = scheme;
    return c;
}

inline FieldSolution solve(const BenchmarkProblem& problem, const SolverConfig& config, const QuadMesh& mesh,
                           const SolveOptions& options = {}) {
    return solve(config, mesh, problem.f, problem.g, options);
}

}  // namespace bubblefem
