#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pdg/assembly.hpp"
#include "pdg/interface_geometry.hpp"
#include "pdg/mesh.hpp"

namespace pdg {

// A manufactured interface problem with closed-form data on both sides.
struct BenchmarkSpec {
    std::string name;
    std::string description;
    Rectangle domain;
    LevelSet level_set;
    std::array<double, 2> beta{1.0, 1.0};
    ExactSolution exact;
    std::array<ScalarField, 2> f;
    ScalarField jump;          // a = u_1 - u_0
    InterfaceField flux_jump;  // b = (beta_1 grad u_1 - beta_0 grad u_0) . n
    std::vector<double> h_list;           // triangular mesh family
    std::vector<std::string> mesh_files;  // polygonal mesh family (relative to the data directory)
    // True where a side's exact solution is not smooth (finite-difference
    // checks skip points within `radius`).
    std::function<bool(int side, const Point&, double radius)> near_singular;

    ProblemData problem_data() const;
};

const std::vector<std::string>& benchmark_names();
// Throws InvalidParameter listing the registered names.
BenchmarkSpec get_benchmark(const std::string& name);

// Directory holding the polygonal mesh fixtures (PDG_DATA_DIR env override).
std::string data_directory();

struct ConsistencyReport {
    int interface_samples = 0;
    int interior_samples = 0;
    double max_jump_error = 0.0;     // |(u_1 - u_0) - a|
    double max_flux_error = 0.0;     // |[beta grad u . n] - b|
    double max_gradient_error = 0.0; // registered gradient vs finite differences
    double max_source_error = 0.0;   // |-div(beta grad u) - f|
    double max_interface_jump = 0.0; // max |a| on Gamma, recorded
};

// Samples Gamma at interface polyline vertices of a mesh of size 1/10 and
// the interior on a regular grid. Throws SpecError naming the offending
// field when a tolerance is exceeded.
ConsistencyReport verify_benchmark_consistency(const BenchmarkSpec& spec, int samples = 200);

} // namespace pdg
