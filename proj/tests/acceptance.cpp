// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bubblefem/bench.hpp"
#include "oracles/submesh_fem.hpp"

using namespace bubblefem;

namespace {

int g_failed = 0;

void report(bool ok, const char* name, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failed;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

RunReport run(const std::string& problem, Scheme s, int p, double pe) {
    RunSpec spec;
    spec.problem = problem;
    spec.scheme = s;
    spec.p = p;
    spec.pe = pe;
    return run_benchmark(spec).report;
}

SolverConfig config(Scheme s, double k, Vec2 w, int p) {
    SolverConfig c;
    c.scheme = s;
    c.k = k;
    c.w = w;
    c.p = p;
    return c;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0, m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
        m = std::max(m, std::abs(b[i]));
    }
    return m > 0.0 ? d / m : d;
}

void rfb_stability() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (double pe : {1e3, 1e9, 1e14, 1e15}) {
        const RunReport r = run("nonsymmetric", Scheme::rfb, 13, pe);
        ok = ok && r.ok && r.overshoot <= 0.05;
        detail += "Pe=" + fmt(pe) + " overshoot=" + fmt(r.overshoot) + (r.ok ? "" : " (" + r.message + ")") + "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && secs < 30.0;
    report(ok, "rfb-stable-at-extreme-peclet", detail + "limit 0.05, runtime " + fmt(secs) + " s (limit 30 s)");
}

void hp_instability() {
    const RunReport lo = run("nonsymmetric", Scheme::hp, 13, 1e3);
    const RunReport hi = run("nonsymmetric", Scheme::hp, 13, 1e5);
    const double o_lo = lo.ok ? lo.overshoot : NAN;
    const double o_hi = hi.ok ? hi.overshoot : NAN;
    const bool ok = lo.ok && hi.ok && o_lo <= 0.05 && o_hi > 0.05;
    report(ok, "hp-oscillates-at-high-peclet",
           "p=13 overshoot Pe=1e3: " + fmt(o_lo) + " (need <= 0.05), Pe=1e5: " + fmt(o_hi) + " (need > 0.05)");
}

void convergence_dominance() {
    RunSpec spec;
    spec.problem = "symmetric";
    spec.pe = 125.0;
    const auto rows = convergence_sweep(spec, 8);
    std::vector<double> rfb(9, NAN), hp(9, NAN);
    bool ok = true;
    for (const RunReport& r : rows) {
        ok = ok && r.ok && r.err_linf.has_value();
        if (r.err_linf) (r.scheme == Scheme::rfb ? rfb : hp)[static_cast<std::size_t>(r.p)] = *r.err_linf;
    }
    std::string detail = "rfb/hp nodal errors:";
    for (int p = 1; p <= 8; ++p) {
        detail += " p" + std::to_string(p) + "=" + fmt(rfb[static_cast<std::size_t>(p)]) + "/" +
                  fmt(hp[static_cast<std::size_t>(p)]);
        if (p >= 3 && !(rfb[static_cast<std::size_t>(p)] <= hp[static_cast<std::size_t>(p)])) ok = false;
    }
    const double ratio = rfb[1] / rfb[8];
    ok = ok && ratio >= 10.0;
    report(ok, "rfb-converges-faster-than-hp",
           detail + "; rfb p1/p8 ratio " + fmt(ratio) + " (need >= 10, and rfb <= hp for p >= 3)");
}

void local_solver_properties() {
    std::mt19937_64 rng(20240917);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> order(1, 10);
    double worst_res = 0.0, worst_bnd = 0.0, worst_lin = 0.0, worst_zero = 0.0;
    bool dims = true;
    for (int draw = 0; draw < 50; ++draw) {
        const double k = std::pow(10.0, -3.0 + 4.0 * unit(rng));
        const double speed = std::pow(10.0, 4.0 * unit(rng));
        const double ang = 2.0 * std::numbers::pi * unit(rng);
        const double h = std::pow(10.0, -2.0 + 2.0 * unit(rng));
        const int p = order(rng);
        const LocalBubbleSolver solver({k, {speed * std::cos(ang), speed * std::sin(ang)}, h, h, p});
        dims = dims && solver.dim() == p * (p + 1) / 2 && solver.matrix().rows() == p * (p + 1) / 2;

        const BubbleEnrichment e = solver.shape_enrichment();
        for (int s = 0; s < 4; ++s) {
            const Eigen::VectorXd& c = e.coeffs[static_cast<std::size_t>(s)];
            const Eigen::VectorXd b = solver.shape_load(s);
            const double res = (solver.matrix() * c - b).cwiseAbs().maxCoeff();
            const double scale = solver.matrix_norm_inf() * c.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
            worst_res = std::max(worst_res, res / scale);
            for (int q = 0; q < 20; ++q) {
                const double t = -1.0 + 2.0 * q / 20.0;
                for (RefPoint pt : {RefPoint{-1.0, t}, RefPoint{1.0, -t}, RefPoint{t, -1.0}, RefPoint{-t, 1.0}})
                    worst_bnd = std::max(worst_bnd, std::abs(eval_enrichment(e, s, pt).value));
            }
        }
        const double alpha = 2.0 * unit(rng) - 1.0, beta = 2.0 * unit(rng) - 1.0;
        const Eigen::VectorXd lhs = solver.solve(alpha * solver.shape_load(0) + beta * solver.shape_load(1));
        const Eigen::VectorXd rhs = alpha * e.coeffs[0] + beta * e.coeffs[1];
        worst_lin = std::max(worst_lin, (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff()));

        const BubbleEnrichment z = solve_enrichment({k, {0.0, 0.0}, h, h, p});
        for (int s = 0; s < 5; ++s)
            worst_zero = std::max(worst_zero, z.coeffs[static_cast<std::size_t>(s)].cwiseAbs().maxCoeff());
    }
    const bool ok = dims && worst_res <= 1e-9 && worst_bnd < 1e-12 && worst_lin <= 1e-12 && worst_zero == 0.0;
    report(ok, "local-solver-properties",
           "50 draws: residual " + fmt(worst_res) + " (<= 1e-9), boundary " + fmt(worst_bnd) + " (< 1e-12), linearity " +
               fmt(worst_lin) + " (<= 1e-12), w=0 enrichment " + fmt(worst_zero) + ", dimensions " +
               (dims ? "ok" : "wrong"));
}

void submesh_equivalence() {
    // element of the 10x10 benchmark mesh, element Peclet 50
    const double h = 0.1;
    const int shape = 1;
    const BubbleEnrichment e = solve_enrichment({1.0, {1e3, 0.0}, h, h, 8});
    const oracle::SubmeshBubble ref = oracle::submesh_bubble(1.0, 1e3, 0.0, h, h, shape, 64);
    double peak = 0.0, diff = 0.0;
    for (int a = 0; a <= 8; ++a)
        for (int b = 0; b <= 8; ++b) {
            const double s = ref.at(8 * a, 8 * b);
            peak = std::max(peak, std::abs(s));
            diff = std::max(diff, std::abs(eval_enrichment(e, shape, {-1.0 + 0.25 * a, -1.0 + 0.25 * b}).value - s));
        }
    report(diff <= 0.05 * peak, "spectral-matches-submesh-oracle",
           "p=8 vs 64x64, h=0.1, w=(1e3,0): max diff " + fmt(diff) + " = " + fmt(diff / peak) +
               " of peak " + fmt(peak) + " (limit 0.05)");
}

void galerkin_degeneracies() {
    const QuadMesh m = build_mesh(10, 10);
    double worst_const = 0.0;
    for (Scheme s : {Scheme::galerkin, Scheme::rfb, Scheme::hp})
        for (Vec2 w : {Vec2{0.0, 0.0}, Vec2{2500.0, 0.0}, Vec2{-800.0, 1300.0}}) {
            const FieldSolution sol = solve(config(s, 1.0, w, 5), m, {}, [](double, double) { return 0.37; });
            for (double u : sol.nodal) worst_const = std::max(worst_const, std::abs(u - 0.37));
        }

    double worst_limit = 0.0;
    std::string limit_detail;
    for (double pe : {0.1, 0.01}) {
        for (const BenchmarkProblem& bp : {benchmark_nonsymmetric(pe), benchmark_symmetric(pe)}) {
            const double d = max_rel_diff(solve(bp, config(Scheme::rfb, bp.k, bp.w, 8), m).nodal,
                                          solve(bp, config(Scheme::galerkin, bp.k, bp.w, 1), m).nodal);
            worst_limit = std::max(worst_limit, d);
            limit_detail += " " + bp.name + "@" + fmt(pe) + "=" + fmt(d);
        }
    }

    const BenchmarkProblem bp = benchmark_symmetric(125.0);
    const double hp1 = max_rel_diff(solve(bp, config(Scheme::hp, bp.k, bp.w, 1), m).nodal,
                                    solve(bp, config(Scheme::galerkin, bp.k, bp.w, 1), m).nodal);
    const bool ok = worst_const <= 1e-10 && worst_limit <= 1e-6 && hp1 <= 1e-10;
    report(ok, "galerkin-degeneracies",
           "constants " + fmt(worst_const) + " (<= 1e-10); rfb vs galerkin at Pe_h <= 0.1:" + limit_detail +
               " (<= 1e-6); hp(p=1) vs galerkin " + fmt(hp1) + " (<= 1e-10)");
}

void performance_ordering() {
    RunSpec spec;
    spec.problem = "nonsymmetric";
    spec.pe = 1e3;
    const auto rows = timing_sweep(spec, 13, 1, 1);
    double t_rfb = NAN, t_hp = NAN;
    for (const RunReport& r : rows)
        if (r.p == 13) (r.scheme == Scheme::rfb ? t_rfb : t_hp) = r.timings.total();
    const BenchmarkProblem bp = benchmark_nonsymmetric(1e3);
    const FieldSolution s = solve(bp, config(Scheme::rfb, bp.k, bp.w, 13), build_mesh(10, 10));
    const bool ok = t_rfb < t_hp && s.unique_enrichments == 1;
    report(ok, "rfb-faster-than-hp", "p=13 total time rfb " + fmt(t_rfb) + " s, hp " + fmt(t_hp) +
                                         " s; local bubble solves " + std::to_string(s.unique_enrichments));
}

void layer_profile_stability() {
    bool ok = true;
    int sweeps = 0;
    for (double mag = 1e-8; mag <= 1e16 * 1.0000001; mag *= 10.0)
        for (double a : {mag, -mag}) {
            double prev = -1.0;
            for (int i = 0; i < 1000; ++i) {
                const double v = boundary_layer_1d(a, i / 999.0);
                ok = ok && std::isfinite(v) && v >= 0.0 && v <= 1.0 && v >= prev;
                prev = v;
            }
            ++sweeps;
        }
    report(ok, "layer-profile-bounded-monotone",
           std::to_string(sweeps) + " sweeps of 1000 points, |a| from 1e-8 to 1e16");
}

}  // namespace

int main() {
    rfb_stability();
    hp_instability();
    convergence_dominance();
    local_solver_properties();
    submesh_equivalence();
    galerkin_degeneracies();
    performance_ordering();
    layer_profile_stability();
    std::printf("%d criteria failed\n", g_failed);
    return g_failed == 0 ? 0 : 1;
}
