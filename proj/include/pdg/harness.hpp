#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pdg/benchmarks.hpp"
#include "pdg/error_analysis.hpp"
#include "pdg/patch.hpp"
#include "pdg/reconstruction.hpp"
#include "pdg/solver.hpp"

namespace pdg {

struct DiscretizationOptions {
    int patch_target = 0;  // 0: default for m
    int n_sub = 0;         // 0: max(4, m + 1)
    bool strict = true;
    // Search two rings for anchors and drop face excursions of Gamma
    // (ClassifyOptions); every use is listed in CutTopology::relaxations().
    bool relaxed_geometry = true;
};

ClassifyOptions classify_options(int m, const DiscretizationOptions& options);

// Everything the space depends on, kept at stable addresses.
struct Discretization {
    std::unique_ptr<PolygonalMesh> mesh;
    std::unique_ptr<CutTopology> topology;
    std::unique_ptr<PatchTable> patches;
    std::unique_ptr<GlobalSpace> space;
};

Discretization discretize(PolygonalMesh mesh, const LevelSet& phi, int m, const DiscretizationOptions& options = {});

struct RunConfig {
    std::string benchmark = "example1";
    int m = 1;
    std::vector<double> h_list;           // empty: benchmark default
    std::vector<std::string> mesh_files;  // overrides h_list when set
    double eta = 0.0;                     // 0: default penalty
    int patch_target = 0;
    QuadratureOrders orders;
    int error_order = -1;                 // -1: 2m + 4
    int n_sub = 0;
    bool relaxed_geometry = true;         // see DiscretizationOptions
    SolverOptions solver;
    bool condition = false;               // also estimate the condition number
    int jobs = 0;                         // concurrent h-runs; 0: hardware threads
    std::string out_dir;                  // empty: no files written
};

struct RunRow {
    ErrorReport report;
    bool ok = false;
    std::string stage;  // failing stage when !ok
    std::string error;
    std::string mesh;   // "h=..." or the mesh file
    int cut_cells = 0;
    int augmented_patches = 0;
    int relaxations = 0;
    double eta = 0.0;
    SolverStats solver;
    std::optional<ConditionEstimate> condition;
};

struct RunResult {
    RunConfig config;
    std::vector<RunRow> rows;  // in mesh order, coarse to fine

    std::vector<ErrorReport> reports() const;  // successful rows with orders filled in
    bool all_ok() const;
};

// Runs the pipeline mesh -> classify -> patches -> space -> assemble ->
// solve -> errors for every mesh of the configuration. A failing mesh is
// reported with its stage and does not stop the others. Writes errors.csv,
// orders.csv and run.json when out_dir is set.
RunResult run_benchmark(const RunConfig& config);

// Resolves a mesh entry of a configuration (triangular h or file name).
PolygonalMesh benchmark_mesh(const BenchmarkSpec& spec, double h);
PolygonalMesh benchmark_mesh(const std::string& file);

void write_errors_csv(const RunResult& result, std::ostream& out);
void write_orders_csv(const RunResult& result, std::ostream& out);
void write_run_json(const RunResult& result, std::ostream& out);
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

struct EfficiencyPoint {
    int m = 0;
    double h = 0.0;
    int n_dof = 0;
    double l2_error = 0.0;
    double dg_error = 0.0;
};

std::vector<EfficiencyPoint> efficiency_report(const RunConfig& base, const std::vector<int>& degrees);
void write_efficiency_csv(const std::vector<EfficiencyPoint>& points, std::ostream& out);

// Parses "0.1", "1/20" and comma-separated lists of them.
double parse_fraction(const std::string& text);
std::vector<double> parse_h_list(const std::string& text);

} // namespace pdg
