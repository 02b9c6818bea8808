// Command-line driver: convergence runs, efficiency reports and benchmark checks.
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pdg/errors.hpp"
#include "pdg/harness.hpp"

namespace {

struct SolveArgs {
    std::string example = "example1";
    int order = 1;
    std::string h = "auto";
    std::vector<std::string> meshes;
    double eta = 0.0;
    int patch_target = 0;
    int nsub = 0;
    std::string solver = "direct";
    double solver_tol = 1e-10;
    int jobs = 0;
    bool condition = false;
    bool strict_geometry = false;
    std::string out;
};

void add_run_options(CLI::App* cmd, SolveArgs& a)
{
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--example", a.example, "benchmark name")->capture_default_str();
    cmd->add_option("--h", a.h, "comma-separated mesh sizes (fractions allowed) or 'auto'")->capture_default_str();
    cmd->add_option("--mesh", a.meshes, "polygonal mesh files instead of triangular meshes");
    cmd->add_option("--eta", a.eta, "penalty parameter (default 3 m max beta)");
    cmd->add_option("--patch-target", a.patch_target, "minimum patch cardinality (default 5/9/15)");
    cmd->add_option("--nsub", a.nsub, "interface sub-segments per cut cell (default max(4, m+1))");
    cmd->add_option("--solver", a.solver, "direct or cg")
        ->check(CLI::IsMember({"direct", "cg"}))
        ->capture_default_str();
    cmd->add_option("--solver-tol", a.solver_tol, "relative residual tolerance")->capture_default_str();
    cmd->add_option("--jobs", a.jobs, "concurrent mesh runs (default: hardware threads)");
    cmd->add_flag("--condition", a.condition, "estimate the condition number of every system");
    cmd->add_flag("--strict-geometry", a.strict_geometry,
                  "anchors only from touching cells and no dropped face excursions of the interface");
}

pdg::RunConfig make_config(const SolveArgs& a)
{
    pdg::RunConfig cfg;
    cfg.benchmark = a.example;
    cfg.m = a.order;
    if (a.h != "auto")
        cfg.h_list = pdg::parse_h_list(a.h);
    cfg.mesh_files = a.meshes;
    cfg.eta = a.eta;
    cfg.patch_target = a.patch_target;
    cfg.n_sub = a.nsub;
    cfg.relaxed_geometry = !a.strict_geometry;
    cfg.solver.method = a.solver == "cg" ? pdg::SolverMethod::CG : pdg::SolverMethod::Direct;
    cfg.solver.tol = a.solver_tol;
    cfg.jobs = a.jobs;
    cfg.condition = a.condition;
    cfg.out_dir = a.out;
    return cfg;
}

void print_rows(const pdg::RunResult& result)
{
    std::printf("%-14s %8s %14s %7s %14s %7s\n", "mesh", "n_dof", "l2_error", "order", "dg_error", "order");
    for (const auto& row : result.rows) {
        if (!row.ok) {
            std::printf("%-14s failed in %s: %s\n", row.mesh.c_str(), row.stage.c_str(), row.error.c_str());
            continue;
        }
        const auto& r = row.report;
        std::printf("%-14s %8d %14.6e %7.3f %14.6e %7.3f\n", row.mesh.c_str(), r.n_dof, r.l2_error, r.l2_order,
                    r.dg_error, r.dg_order);
        if (row.condition)
            std::printf("%-14s condition estimate %.3e (lambda_min %.3e, lambda_max %.3e)\n", "",
                        row.condition->condition(), row.condition->lambda_min, row.condition->lambda_max);
    }
    const auto reports = result.reports();
    if (reports.size() > 2) {
        std::vector<double> h, l2, dg;
        for (const auto& r : reports) {
            h.push_back(r.h);
            l2.push_back(r.l2_error);
            dg.push_back(r.dg_error);
        }
        std::printf("%-14s %8s %14s %7.3f %14s %7.3f\n", "fitted", "", "", pdg::fitted_order(h, l2), "",
                    pdg::fitted_order(h, dg));
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Patch-reconstructed unfitted DG solver for elliptic interface problems"};
    app.require_subcommand(1);
    // "-h" would clash with the mesh-size option.
    app.set_help_flag("--help", "print this help message and exit");

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "convergence run of one benchmark");
    add_run_options(solve, solve_args);
    solve->add_option("--order", solve_args.order, "polynomial degree m")->capture_default_str();
    solve->add_option("--out", solve_args.out, "output directory for errors.csv, orders.csv, run.json");

    SolveArgs report_args;
    std::vector<int> report_orders{1, 2, 3};
    bool efficiency = false;
    std::string report_out;
    auto* report = app.add_subcommand("report", "DOF-versus-error efficiency report");
    add_run_options(report, report_args);
    report->add_flag("--efficiency", efficiency, "error against number of DOFs for every order")->required();
    report->add_option("--orders", report_orders, "polynomial degrees")->capture_default_str();
    report->add_option("--out", report_out, "CSV file (default: stdout)");

    std::string check_example;
    int check_samples = 200;
    auto* check = app.add_subcommand("check", "verify the closed-form data of a benchmark");
    check->set_help_flag("--help", "print this help message and exit");
    check->add_option("--example", check_example, "benchmark name")->required();
    check->add_option("--samples", check_samples, "sample count")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) {
            const auto result = pdg::run_benchmark(make_config(solve_args));
            print_rows(result);
            return result.all_ok() ? 0 : 1;
        }
        if (*report) {
            const auto points = pdg::efficiency_report(make_config(report_args), report_orders);
            if (report_out.empty()) {
                pdg::write_efficiency_csv(points, std::cout);
            } else {
                std::ofstream f(report_out);
                if (!f)
                    throw pdg::Error("cannot write " + report_out);
                pdg::write_efficiency_csv(points, f);
            }
            return 0;
        }
        if (*check) {
            const auto spec = pdg::get_benchmark(check_example);
            const auto rep = pdg::verify_benchmark_consistency(spec, check_samples);
            std::printf("%s: consistent\n", spec.name.c_str());
            std::printf("  interface samples %d, interior samples %d\n", rep.interface_samples, rep.interior_samples);
            std::printf("  max |a - (u1 - u0)|        %.3e\n", rep.max_jump_error);
            std::printf("  max |b - [beta grad u.n]|  %.3e\n", rep.max_flux_error);
            std::printf("  max gradient mismatch      %.3e\n", rep.max_gradient_error);
            std::printf("  max |-div(beta grad u) - f| %.3e\n", rep.max_source_error);
            std::printf("  max |u1 - u0| on Gamma     %.3e\n", rep.max_interface_jump);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
