#pragma once

// Benchmark drivers behind the command-line tool: single runs, convergence
// sweeps in p, Peclet stability sweeps and timing comparisons, with a fixed
// CSV row format.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bubblefem/hp_dofmap.hpp"
#include "bubblefem/problems.hpp"
#include "bubblefem/solver.hpp"

namespace bubblefem {

inline constexpr const char* kCsvHeader =
    "scheme,p,nx,ny,pe_mesh,dofs,err_linf,overshoot,t_enrich,t_assemble,t_solve";

/// Overshoot at or below this fraction of the unit data range counts as stable.
inline constexpr double kStableOvershoot = 0.05;

struct RunSpec {
    std::string problem = "symmetric";
    Scheme scheme = Scheme::rfb;
    int p = 5;
    int nx = 10;
    int ny = 10;
    double pe = 125.0;  // mesh Peclet number Pe_h = |w| h / (2k)
    int threads = 1;
};

struct RunReport {
    Scheme scheme = Scheme::rfb;
    int p = 1;
    int nx = 0;
    int ny = 0;
    double pe = 0.0;
    double pe_mesh = 0.0;
    long dofs = 0;
    std::optional<double> err_linf;
    double overshoot = 0.0;
    PhaseTimings timings;
    bool ok = true;
    std::string message;
};

/// Analytic dof count of a scheme on an nx-by-ny mesh.
inline long expected_dofs(Scheme scheme, int nx, int ny, int p) {
    if (scheme == Scheme::hp) return hp_dof_count(nx, ny, p);
    return static_cast<long>(nx + 1) * (ny + 1);
}

struct RunResult {
    RunReport report;
    std::optional<FieldSolution> solution;
};

/// One solve of a named benchmark. Solver failures are caught and reported
/// in the row (ok = false); invalid arguments propagate.
inline RunResult run_benchmark(const RunSpec& spec) {
    const QuadMesh mesh = build_mesh(spec.nx, spec.ny);
    const BenchmarkProblem problem = benchmark_by_name(spec.problem, spec.pe, mesh.max_edge());
    SolverConfig config = config_for(problem, spec.scheme, spec.scheme == Scheme::galerkin ? 1 : spec.p);
    config.threads = spec.threads;

    RunResult out;
    RunReport& r = out.report;
    r.scheme = spec.scheme;
    r.p = config.p;
    r.nx = spec.nx;
    r.ny = spec.ny;
    r.pe = spec.pe;
    r.pe_mesh = mesh_peclet(config, mesh);
    r.dofs = expected_dofs(spec.scheme, spec.nx, spec.ny, config.p);
    try {
        FieldSolution sol = solve(problem, config, mesh);
        r.dofs = sol.dofs;
        r.timings = sol.timings;
        r.overshoot = overshoot_metric(sol, problem.data_lo, problem.data_hi);
        if (problem.has_exact()) r.err_linf = error_linf_nodes(sol, problem.exact);
        out.solution = std::move(sol);
    } catch (const SolverError& e) {
        r.ok = false;
        r.overshoot = std::numeric_limits<double>::quiet_NaN();
        r.message = e.what();
    } catch (const LocalSolveError& e) {
        r.ok = false;
        r.overshoot = std::numeric_limits<double>::quiet_NaN();
        r.message = e.what();
    }
    return out;
}

inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

/// One CSV row in kCsvHeader order. err_linf is empty without an exact solution.
inline std::string csv_row(const RunReport& r, bool with_timings = true) {
    std::ostringstream os;
    os << to_string(r.scheme) << ',' << r.p << ',' << r.nx << ',' << r.ny << ',' << format_real(r.pe_mesh) << ','
       << r.dofs << ',' << (r.err_linf ? format_real(*r.err_linf) : std::string()) << ','
       << format_real(r.overshoot) << ',';
    if (with_timings)
        os << format_real(r.timings.enrichment) << ',' << format_real(r.timings.assembly) << ','
           << format_real(r.timings.solve);
    else
        os << "0,0,0";
    return os.str();
}

inline void write_csv(std::ostream& os, const std::vector<RunReport>& rows, bool with_timings = true) {
    os << kCsvHeader << '\n';
    for (const RunReport& r : rows) os << csv_row(r, with_timings) << '\n';
}

/// p = 1..p_max for rfb and hp on a problem with an exact solution.
inline std::vector<RunReport> convergence_sweep(RunSpec base, int p_max) {
    const BenchmarkProblem probe = benchmark_by_name(base.problem, base.pe, 1.0);
    if (!probe.has_exact())
        throw std::invalid_argument("convergence sweep needs a problem with an exact solution");
    if (p_max < 1) throw std::invalid_argument("p_max must be >= 1");
    std::vector<RunReport> rows;
    for (Scheme s : {Scheme::rfb, Scheme::hp})
        for (int p = 1; p <= p_max; ++p) {
            base.scheme = s;
            base.p = p;
            rows.push_back(run_benchmark(base).report);
        }
    return rows;
}

inline const std::vector<double>& default_stability_pe() {
    static const std::vector<double> pe{1e1, 1e3, 1e5, 1e9, 1e12, 1e14, 1e15};
    return pe;
}

/// Peclet sweep for each scheme at order p (galerkin always at p = 1).
inline std::vector<RunReport> stability_sweep(RunSpec base, const std::vector<double>& pe_values,
                                              const std::vector<Scheme>& schemes) {
    std::vector<RunReport> rows;
    for (Scheme s : schemes)
        for (double pe : pe_values) {
            RunSpec spec = base;
            spec.scheme = s;
            spec.pe = pe;
            rows.push_back(run_benchmark(spec).report);
        }
    return rows;
}

/// Median (by total time) of `repeats` runs per (scheme, p), p = 1..p_max.
/// Runs of one repetition round are executed in a shuffled order.
inline std::vector<RunReport> timing_sweep(RunSpec base, int p_max, int repeats, std::uint64_t seed) {
    if (p_max < 1 || repeats < 1) throw std::invalid_argument("timing sweep needs p_max >= 1 and repeats >= 1");
    struct Job {
        Scheme scheme;
        int p;
    };
    std::vector<Job> jobs;
    for (int p = 1; p <= p_max; ++p)
        for (Scheme s : {Scheme::rfb, Scheme::hp}) jobs.push_back({s, p});
    std::vector<std::vector<RunReport>> samples(jobs.size());
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(jobs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (int rep = 0; rep < repeats; ++rep) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t idx : order) {
            RunSpec spec = base;
            spec.scheme = jobs[idx].scheme;
            spec.p = jobs[idx].p;
            samples[idx].push_back(run_benchmark(spec).report);
        }
    }
    std::vector<RunReport> rows;
    for (auto& s : samples) {
        std::sort(s.begin(), s.end(),
                  [](const RunReport& a, const RunReport& b) { return a.timings.total() < b.timings.total(); });
        rows.push_back(s[s.size() / 2]);
    }
    return rows;
}

/// Full solution (bubbles and hp modes included) sampled on a grid with
/// `subdiv` intervals per element edge.
inline void sample_field(const FieldSolution& sol, int subdiv, std::vector<Vec2>& points, std::vector<double>& values) {
    if (subdiv < 1) throw std::invalid_argument("field sampling needs subdiv >= 1");
    const QuadMesh& m = sol.mesh;
    const int sx = m.nx() * subdiv;
    const int sy = m.ny() * subdiv;
    points.clear();
    values.clear();
    for (int j = 0; j <= sy; ++j)
        for (int i = 0; i <= sx; ++i) {
            const Vec2 x{m.domain().x0 + m.domain().width() * i / sx, m.domain().y0 + m.domain().height() * j / sy};
            points.push_back(x);
            values.push_back(evaluate_at(sol, x));
        }
}

inline void write_field_vtk(std::ostream& os, const FieldSolution& sol, int subdiv = 4) {
    std::vector<Vec2> pts;
    std::vector<double> vals;
    sample_field(sol, subdiv, pts, vals);
    write_vtk_structured(os, sol.mesh.nx() * subdiv, sol.mesh.ny() * subdiv, pts, vals);
}

inline void write_field_csv(std::ostream& os, const FieldSolution& sol, int subdiv = 4) {
    std::vector<Vec2> pts;
    std::vector<double> vals;
    sample_field(sol, subdiv, pts, vals);
    os << "x,y,u\n";
    for (std::size_t i = 0; i < pts.size(); ++i)
        os << format_real(pts[i].x) << ',' << format_real(pts[i].y) << ',' << format_real(vals[i]) << '\n';
}

}  // namespace bubblefem
