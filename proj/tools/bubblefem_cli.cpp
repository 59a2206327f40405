// bubblefem: command-line driver for single solves and benchmark sweeps.
//
// Exit codes: 0 all runs completed, 1 unexpected failure, 2 invalid usage,
// 3 at least one solve failed to reach its tolerance.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "bubblefem/bench.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRunFailed = 3;

struct CommonFlags {
    std::string problem = "symmetric";
    std::string scheme = "rfb";
    int p = 5;
    int nx = 10;
    int ny = 10;
    double pe = 125.0;
    std::string out;
    std::string format = "csv";
    int threads = 1;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--problem", f.problem, "benchmark problem")->check(CLI::IsMember({"symmetric", "nonsymmetric"}));
    cmd->add_option("--scheme", f.scheme, "discretization")->check(CLI::IsMember({"galerkin", "rfb", "hp"}));
    cmd->add_option("--p", f.p, "bubble / hp order (p_max for sweeps)")->check(CLI::Range(1, 40));
    cmd->add_option("--nx", f.nx, "elements along x")->check(CLI::PositiveNumber);
    cmd->add_option("--ny", f.ny, "elements along y")->check(CLI::PositiveNumber);
    cmd->add_option("--pe", f.pe, "mesh Peclet number |w|h/(2k)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", f.out, "output file (stdout when omitted)");
    cmd->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "vtk"}));
    cmd->add_option("--threads", f.threads, "threads for element assembly")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "seed for the timing run order");
}

bubblefem::RunSpec to_spec(const CommonFlags& f) {
    bubblefem::RunSpec s;
    s.problem = f.problem;
    s.scheme = bubblefem::parse_scheme(f.scheme);
    s.p = f.p;
    s.nx = f.nx;
    s.ny = f.ny;
    s.pe = f.pe;
    s.threads = f.threads;
    return s;
}

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("bubblefem");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("BUBBLEFEM_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to off; only accept "off" literally
        if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
    }
}

int emit_table(const std::vector<bubblefem::RunReport>& rows, const CommonFlags& f) {
    int failed = 0;
    for (const auto& r : rows)
        if (!r.ok) {
            ++failed;
            spdlog::warn("{} p={} pe_mesh={}: {}", bubblefem::to_string(r.scheme), r.p, r.pe_mesh, r.message);
        }
    if (f.out.empty()) {
        bubblefem::write_csv(std::cout, rows);
    } else {
        std::ofstream os(f.out);
        if (!os) throw std::runtime_error("cannot open " + f.out);
        bubblefem::write_csv(os, rows);
    }
    return failed > 0 ? kExitRunFailed : 0;
}

int cmd_solve(const CommonFlags& f) {
    const auto spec = to_spec(f);
    spdlog::info("solve {} scheme={} p={} mesh={}x{} pe={}", spec.problem, f.scheme, spec.p, spec.nx, spec.ny, spec.pe);
    const bubblefem::RunResult res = bubblefem::run_benchmark(spec);
    std::cout << bubblefem::kCsvHeader << '\n' << bubblefem::csv_row(res.report) << '\n';
    if (!res.report.ok) {
        spdlog::error("solve failed: {}", res.report.message);
        return kExitRunFailed;
    }
    if (!f.out.empty()) {
        std::ofstream os(f.out);
        if (!os) throw std::runtime_error("cannot open " + f.out);
        if (f.format == "vtk")
            bubblefem::write_field_vtk(os, *res.solution);
        else
            bubblefem::write_field_csv(os, *res.solution);
        spdlog::info("field written to {}", f.out);
    }
    return 0;
}

int cmd_convergence(const CommonFlags& f) {
    if (f.format != "csv") throw CLI::ValidationError("--format", "sweeps only write csv");
    const auto spec = to_spec(f);
    if (!bubblefem::benchmark_by_name(spec.problem, spec.pe, 1.0).has_exact())
        throw CLI::ValidationError("--problem", "convergence needs a problem with an exact solution");
    return emit_table(bubblefem::convergence_sweep(spec, f.p), f);
}

int cmd_stability(const CommonFlags& f) {
    if (f.format != "csv") throw CLI::ValidationError("--format", "sweeps only write csv");
    const auto rows = bubblefem::stability_sweep(
        to_spec(f), bubblefem::default_stability_pe(),
        {bubblefem::Scheme::rfb, bubblefem::Scheme::hp, bubblefem::Scheme::galerkin});
    return emit_table(rows, f);
}

int cmd_timing(const CommonFlags& f, int repeats) {
    if (f.format != "csv") throw CLI::ValidationError("--format", "sweeps only write csv");
    return emit_table(bubblefem::timing_sweep(to_spec(f), f.p, repeats, f.seed), f);
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"Advection-diffusion solver with spectral residual-free bubbles"};
    app.require_subcommand(1);

    CommonFlags solve_flags;
    auto* solve = app.add_subcommand("solve", "run one solve and write its report row and field");
    add_common(solve, solve_flags);

    CommonFlags conv_flags;
    conv_flags.p = 8;
    auto* conv = app.add_subcommand("convergence", "nodal error against p for rfb and hp");
    add_common(conv, conv_flags);

    CommonFlags stab_flags;
    stab_flags.problem = "nonsymmetric";
    stab_flags.p = 13;
    auto* stab = app.add_subcommand("stability", "overshoot against Peclet number");
    add_common(stab, stab_flags);

    CommonFlags time_flags;
    time_flags.problem = "nonsymmetric";
    time_flags.p = 13;
    time_flags.pe = 1e3;
    int repeats = 3;
    auto* timing = app.add_subcommand("timing", "wall-clock time against p for rfb and hp");
    add_common(timing, time_flags);
    timing->add_option("--repeats", repeats, "runs per point (median reported)")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*solve) return cmd_solve(solve_flags);
        if (*conv) return cmd_convergence(conv_flags);
        if (*stab) return cmd_stability(stab_flags);
        if (*timing) return cmd_timing(time_flags, repeats);
    } catch (const CLI::Error& e) {
        spdlog::error("{}", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        spdlog::error("{}", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
